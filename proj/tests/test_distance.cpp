#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "procdist/distance.hpp"

using namespace procdist;

namespace {

std::vector<Symbol> random_symbols(Rng& rng, std::size_t n, std::uint32_t a) {
    std::vector<Symbol> v(n);
    for (auto& s : v) {
        s = static_cast<Symbol>(rng.next() % a);
    }
    return v;
}

std::vector<double> random_reals(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) {
        // coarse grid so ties and shared cells happen
        x = (rng.next() % 3 == 0) ? double(rng.next() % 8) / 4.0 : 2.0 * rng.uniform();
    }
    return v;
}

Sample bits(const char* s) {
    std::vector<Symbol> v;
    for (; *s; ++s) {
        v.push_back(static_cast<Symbol>(*s - '0'));
    }
    return Sample::discrete(2, v);
}

} // namespace

TEST_CASE("hand-computed discrete distances") {
    CHECK(dd(bits("0101"), bits("0011"), Truncation::discrete(2)).value == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(dd(bits("0000"), bits("1111"), Truncation::discrete(1)).value == 1.0);
    CHECK(dd(bits("0101"), bits("0101"), Truncation::discrete(4)).value == 0.0);
    const auto e = dd_sample_model(bits("0101"), ProcessModel::bernoulli(0.3), Truncation::discrete(1));
    CHECK(e.value == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("discrete estimate equals the brute-force sum") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint32_t a = 2 + rng.next() % 3;
        const auto xs = random_symbols(rng, 1 + rng.next() % 120, a);
        const auto ys = random_symbols(rng, 1 + rng.next() % 120, a);
        const std::size_t k = 1 + rng.next() % 8;
        const auto e = dd(Sample::discrete(a, xs), Sample::discrete(a, ys), Truncation::discrete(k));
        REQUIRE(e.value == doctest::Approx(oracle::dd_discrete(xs, ys, k)).epsilon(1e-12));
        REQUIRE(e.per_level.size() == k);
    }
}

TEST_CASE("real estimate equals the brute-force cell sum") {
    Rng rng(37);
    for (int trial = 0; trial < 60; ++trial) {
        const auto xs = random_reals(rng, 1 + rng.next() % 40);
        const auto ys = random_reals(rng, 1 + rng.next() % 40);
        const std::size_t m = 1 + rng.next() % 4;
        const std::size_t l = 1 + rng.next() % 8;
        const auto e = dd(Sample::real(xs), Sample::real(ys), Truncation::real(m, l));
        REQUIRE(e.value == doctest::Approx(oracle::dd_real(xs, ys, m, l)).epsilon(1e-12));
    }
}

TEST_CASE("exact tail equals the deep sum with its analytic remainder") {
    Rng rng(41);
    for (int trial = 0; trial < 40; ++trial) {
        const auto xs = random_reals(rng, 1 + rng.next() % 30);
        const auto ys = random_reals(rng, 1 + rng.next() % 30);
        const std::size_t m = 1 + rng.next() % 3;
        const auto e = dd_real(Sample::real(xs), Sample::real(ys), Truncation::exact_tail(m));
        REQUIRE(std::abs(e.value - oracle::dd_real_all_levels(xs, ys, m)) <= 1e-12);
        CHECK(e.tail_level >= 1);
    }
    // identical samples: distance 0 at every level
    const Sample c = Sample::real({0.3, 0.3, 0.7});
    CHECK(dd_real(c, c, Truncation::exact_tail(2)).value == 0.0);
    const Sample flat = Sample::real({0.3, 0.3});
    const auto e = dd_real(flat, flat, Truncation::exact_tail(2));
    CHECK_FALSE(e.min_gap.has_value());
    CHECK(e.value == 0.0);
}

TEST_CASE("metric properties on random samples") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        const auto t = Truncation::discrete(1 + rng.next() % 6);
        const Sample x = Sample::discrete(2, random_symbols(rng, 5 + rng.next() % 60, 2));
        const Sample y = Sample::discrete(2, random_symbols(rng, 5 + rng.next() % 60, 2));
        const Sample z = Sample::discrete(2, random_symbols(rng, 5 + rng.next() % 60, 2));
        const double xy = dd(x, y, t).value, yx = dd(y, x, t).value;
        CHECK(xy == yx);
        CHECK(dd(x, x, t).value == 0.0);
        CHECK(xy <= dd(x, z, t).value + dd(z, y, t).value + 1e-12);
        CHECK(xy >= 0.0);
        CHECK(xy <= 2.0);
    }
}

TEST_CASE("default truncation") {
    CHECK(ceil_log2(1) == 0);
    CHECK(ceil_log2(2) == 1);
    CHECK(ceil_log2(1000) == 10);
    CHECK(ceil_log2(1024) == 10);
    CHECK(default_truncation(1, 1).k_max == 1);
    CHECK(default_truncation(1000, 20).k_max == 10);
    const auto t = default_truncation(Sample::real({0.0, 0.5, 0.25, 0.75}), Sample::real({0.1, 0.2}));
    CHECK(t.m_max == 2);
    CHECK(t.l_max >= 1);
    CHECK(dd(bits("0101"), bits("0011"), Truncation::automatic()).truncation.k_max == 2);
}

TEST_CASE("argument errors") {
    CHECK_THROWS_AS(dd(bits("01"), Sample::discrete(3, {0, 2}), Truncation::discrete(1)), Error);
    CHECK_THROWS_AS(dd(Sample::real({0.0}), Sample::real({1.0}), Truncation::discrete(2)), Error);
    CHECK_THROWS_AS(dd(bits("01"), bits("10"), Truncation::exact_tail(1)), Error);
    CHECK_THROWS_AS(Truncation::discrete(0), Error);
    CHECK_THROWS_AS(dd_sample_model(bits("0101"), ProcessModel(TranslationSpec{0.3, std::nullopt}), Truncation::discrete(1)),
                    Error);
}

TEST_CASE("model to model distance") {
    const auto p = ProcessModel::bernoulli(0.2), q = ProcessModel::bernoulli(0.7);
    CHECK(dd_model_model(p, q, Truncation::discrete(1)).value == doctest::Approx(0.5));
    CHECK(dd_model_model(p, p, Truncation::discrete(5)).value == 0.0);
    // truncated distance brackets: each level adds at most 2 w_k
    const double d3 = dd_model_model(p, q, Truncation::discrete(3)).value;
    CHECK(d3 > 0.5);
    CHECK(d3 <= 0.5 + 2 * (1.0 / 6 + 1.0 / 12));
}

TEST_CASE("sample to model distance shrinks with n") {
    const auto m = ProcessModel::two_state_markov(0.2, 0.6);
    const auto t = Truncation::discrete(4);
    const double small = dd_sample_model(sample(m, 1000, 1), m, t).value;
    const double large = dd_sample_model(sample(m, 100000, 1), m, t).value;
    CHECK(large < small);
    CHECK(large < 0.02);
}

namespace {

double plug_in_entropy(const std::vector<std::vector<Symbol>>& keys) {
    std::map<std::vector<Symbol>, double> h;
    for (const auto& k : keys) {
        h[k] += 1.0;
    }
    double e = 0.0;
    for (const auto& [k, c] : h) {
        const double p = c / double(keys.size());
        e -= p * std::log(p);
    }
    return e;
}

} // namespace

TEST_CASE("sum-information of a discrete pair matches plug-in entropies") {
    Rng rng(47);
    const auto xs = random_symbols(rng, 200, 2);
    auto ys = xs;
    for (std::size_t i = 0; i < ys.size(); i += 3) {
        ys[i] ^= 1u;
    }
    const Sample x = Sample::discrete(2, xs), y = Sample::discrete(2, ys);
    const Sample pair[] = {x, y};
    const auto si = sum_information(pair, Truncation::discrete(3));
    const double level_weight = M_PI * M_PI / 6.0 - 1.0;
    double expected = 0.0;
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto wx = oracle::windows(xs, m), wy = oracle::windows(ys, m);
        std::vector<std::vector<Symbol>> joint;
        for (std::size_t i = 0; i < wx.size(); ++i) {
            auto j = wx[i];
            j.insert(j.end(), wy[i].begin(), wy[i].end());
            joint.push_back(j);
        }
        expected += oracle::w(m) / double(m) * level_weight *
                    (plug_in_entropy(wx) + plug_in_entropy(wy) - plug_in_entropy(joint));
    }
    CHECK(si.value == doctest::Approx(expected).epsilon(1e-12));
    CHECK(si.value > 0.0);
    CHECK_THROWS_AS(sum_information(std::span<const Sample>(pair, 1), Truncation::discrete(1)), Error);
}
