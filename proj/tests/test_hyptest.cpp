#include <doctest.h>

#include "procdist/hyptest.hpp"

using namespace procdist;

namespace {

Sample alternating(std::size_t n) {
    std::vector<Symbol> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<Symbol>(i % 2);
    }
    return Sample::discrete(2, v);
}

} // namespace

TEST_CASE("distance to a finite hypothesis is the nearest model") {
    const Hypothesis h({ProcessModel::bernoulli(0.1), ProcessModel::bernoulli(0.9)}, "extremes");
    const auto d = dd_sample_hypothesis(alternating(100), h, Truncation::discrete(1));
    CHECK(d.value == doctest::Approx(0.4).epsilon(1e-14));
    const Hypothesis single({ProcessModel::bernoulli(0.3)});
    const Sample x = sample(ProcessModel::bernoulli(0.4), 500, 2);
    CHECK(dd_sample_hypothesis(x, single, Truncation::discrete(3)).value ==
          dd_sample_model(x, ProcessModel::bernoulli(0.3), Truncation::discrete(3)).value);
}

TEST_CASE("hypothesis validation") {
    CHECK_THROWS_AS(Hypothesis({}, "empty"), Error);
    CHECK_THROWS_AS(Hypothesis({ProcessModel::bernoulli(0.5), ProcessModel(IidSpec{{0.2, 0.3, 0.5}})}), Error);
    CHECK_THROWS_AS(Hypothesis({ProcessModel(TranslationSpec{0.3, std::nullopt})}), Error);
}

TEST_CASE("calibration quantiles") {
    const std::vector<std::vector<double>> pool{{0.4, 0.1, 0.3, 0.2}, {0.05, 0.5, 0.15, 0.25}};
    CHECK(gamma_from_pool(pool, 0.0) == 0.0);
    CHECK(gamma_from_pool(pool, 0.5) == 0.2);    // 2nd smallest of each: 0.2 and 0.15
    CHECK(gamma_from_pool(pool, 0.75) == 0.3);   // 3rd: 0.3 and 0.25
    CHECK(gamma_from_pool(pool, 0.99) == 0.5);
    double prev = 0.0;
    for (double theta = 0.0; theta < 1.0; theta += 0.05) {
        const double g = gamma_from_pool(pool, theta);
        CHECK(g >= prev);
        prev = g;
    }
    const Hypothesis h({ProcessModel::bernoulli(0.5)});
    CHECK(calibrate_gamma(h, 200, 0.0, 100, 1).gamma == 0.0);
    CHECK_THROWS_AS(calibrate_gamma(h, 200, 0.9, 50, 1), Error);
    CHECK_THROWS_AS(calibrate_gamma(h, 200, 1.0, 100, 1), Error);
}

TEST_CASE("calibrated coverage holds on the pool") {
    const Hypothesis h({ProcessModel::bernoulli(0.5), ProcessModel::bernoulli(0.6)});
    const auto t = Truncation::discrete(ceil_log2(300));
    const auto pool = calibration_pool(h, 300, 200, 77, t);
    const double g = gamma_from_pool(pool, 0.9);
    for (const auto& row : pool) {
        std::size_t inside = 0;
        for (double d : row) {
            inside += d <= g ? 1 : 0;
        }
        CHECK(double(inside) / double(row.size()) >= 0.9);
    }
    const auto cal = calibrate_gamma(h, 300, 0.9, 200, 77);
    CHECK(cal.gamma == g);
    CHECK(cal.model_quantiles.size() == 2);
}

TEST_CASE("asymmetric test") {
    const Hypothesis h0({ProcessModel::bernoulli(0.5)}, "fair");
    const auto cal = calibrate_gamma(h0, 1000, 0.95, 200, 3);
    const auto accept = asymmetric_test(sample(ProcessModel::bernoulli(0.5), 1000, 1234), h0, 0.05, cal);
    CHECK(accept.statistics.size() == 1);
    CHECK(accept.thresholds[0] == cal.gamma);
    const auto reject = asymmetric_test(sample(ProcessModel::bernoulli(0.8), 1000, 5), h0, 0.05, cal);
    CHECK(reject.decision == 1);

    CHECK_THROWS_AS(asymmetric_test(sample(ProcessModel::bernoulli(0.5), 999, 1), h0, 0.05, cal), Error);
    CHECK_THROWS_AS(asymmetric_test(sample(ProcessModel::bernoulli(0.5), 1000, 1), h0, 0.1, cal), Error);
    try {
        (void)asymmetric_test(sample(ProcessModel::bernoulli(0.5), 1000, 1), Hypothesis({ProcessModel::bernoulli(0.4)}),
                              0.05, cal);
        FAIL("expected mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::calibration_mismatch);
    }
}

TEST_CASE("degenerate constant model accepts its own sample") {
    const auto m = ProcessModel(IidSpec{{0.0, 1.0}});
    const Hypothesis h({m});
    const auto cal = calibrate_gamma(h, 200, 0.95, 100, 1);
    CHECK(cal.gamma == 0.0);
    const Sample ones = Sample::discrete(2, std::vector<Symbol>(200, 1));
    CHECK(goodness_of_fit(ones, m, 0.05, cal).decision == 0);
    auto with_zero = std::vector<Symbol>(200, 1);
    with_zero[17] = 0;
    CHECK(goodness_of_fit(Sample::discrete(2, with_zero), m, 0.05, cal).decision == 1);
}

TEST_CASE("uniform test") {
    const Hypothesis h0({ProcessModel::bernoulli(0.2)}, "low"), h1({ProcessModel::bernoulli(0.8)}, "high");
    const Sample x = sample(ProcessModel::bernoulli(0.2), 5000, 8);
    const auto v = uniform_test(x, h0, h1, Truncation::automatic());
    CHECK(v.decision == 0);
    CHECK(v.statistics.size() == 2);
    CHECK(uniform_test(x, h1, h0, Truncation::automatic()).decision == 1);

    // symmetric sample and hypotheses: tie, which rejects either way
    const Sample alt = alternating(1000);
    CHECK(uniform_test(alt, h0, h1, Truncation::discrete(1)).decision == 1);
    CHECK(uniform_test(alt, h1, h0, Truncation::discrete(1)).decision == 1);

    // duplicating a model in H0 leaves the decision alone
    const Hypothesis doubled({ProcessModel::bernoulli(0.2), ProcessModel::bernoulli(0.2)});
    CHECK(uniform_test(x, doubled, h1, Truncation::automatic()).decision == v.decision);
    CHECK_THROWS_AS(uniform_test(x, h0, Hypothesis({ProcessModel::bernoulli(0.2), ProcessModel::bernoulli(0.9)}),
                                 Truncation::automatic()),
                    Error);
}
