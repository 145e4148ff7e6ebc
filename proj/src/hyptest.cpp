#include "procdist/hyptest.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "procdist/parallel.hpp"

namespace procdist {

Hypothesis::Hypothesis(std::vector<ProcessModel> m, std::string l) : models(std::move(m)), label(std::move(l)) {
    alphabet_size();
}

std::uint32_t Hypothesis::alphabet_size() const {
    if (models.empty()) {
        fail(Errc::invalid_argument, "hypothesis '" + label + "' has no models");
    }
    const auto size = models.front().alphabet_size();
    for (const auto& m : models) {
        if (m.alphabet_size() != size) {
            fail(Errc::alphabet_mismatch, "models in hypothesis '" + label + "' use different alphabets");
        }
        if (!m.has_marginals()) {
            fail(Errc::unsupported_model, std::string("hypothesis '") + label + "' contains a " +
                                              std::string(m.type_name()) + " model, which has no exact marginals");
        }
    }
    return size;
}

DistanceEstimate dd_sample_hypothesis(const Sample& x, const Hypothesis& h, const Truncation& t) {
    h.alphabet_size();
    DistanceEstimate best;
    bool first = true;
    for (const auto& m : h.models) {
        auto d = dd_sample_model(x, m, t);
        if (first || d.value < best.value) {
            best = std::move(d);
            first = false;
        }
    }
    return best;
}

std::vector<std::vector<double>> calibration_pool(const Hypothesis& h, std::size_t n, std::size_t runs,
                                                  std::uint64_t seed, const Truncation& t) {
    h.alphabet_size();
    require(n >= 1, "calibration sample length must be >= 1");
    const std::size_t models = h.models.size();
    std::vector<std::vector<double>> pool(models, std::vector<double>(runs, 0.0));
    parallel_for(models * runs, [&](std::size_t job) {
        const std::size_t i = job / runs;
        const std::size_t r = job % runs;
        const Sample x = sample(h.models[i], n, derive_seed(seed, job));
        pool[i][r] = dd_sample_hypothesis(x, h, t).value;
    });
    return pool;
}

double gamma_from_pool(const std::vector<std::vector<double>>& pool, double theta) {
    require(theta >= 0.0 && theta < 1.0, "theta must be in [0, 1)");
    double gamma = 0.0;
    for (auto values : pool) {
        if (values.empty() || theta == 0.0) {
            continue;
        }
        std::sort(values.begin(), values.end());
        const auto rank = static_cast<std::size_t>(std::ceil(theta * static_cast<double>(values.size()) - 1e-9));
        gamma = std::max(gamma, values[std::max<std::size_t>(rank, 1) - 1]);
    }
    return gamma;
}

CalibrationTable calibrate_gamma(const Hypothesis& h, std::size_t n, double theta, std::size_t mc_runs,
                                 std::uint64_t seed, const Truncation& t) {
    require(theta >= 0.0 && theta < 1.0, "theta must be in [0, 1)");
    if (mc_runs < kMinMcRuns) {
        fail(Errc::invalid_argument, "calibration needs at least " + std::to_string(kMinMcRuns) + " Monte-Carlo runs");
    }
    CalibrationTable cal;
    cal.hypothesis = h;
    cal.n = n;
    cal.theta = theta;
    cal.mc_runs = mc_runs;
    cal.seed = seed;
    cal.truncation = t.is_automatic() ? Truncation::discrete(std::max<std::size_t>(1, ceil_log2(n))) : t;
    const auto pool = calibration_pool(h, n, mc_runs, seed, cal.truncation);
    for (const auto& row : pool) {
        cal.model_quantiles.push_back(gamma_from_pool({row}, theta));
    }
    cal.gamma = gamma_from_pool(pool, theta);
    return cal;
}

TestVerdict asymmetric_test(const Sample& x, const Hypothesis& h0, double alpha, const CalibrationTable& cal) {
    require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0, 1]");
    if (cal.hypothesis.models != h0.models) {
        fail(Errc::calibration_mismatch, "calibration table was built for a different hypothesis");
    }
    if (cal.n != x.size()) {
        fail(Errc::calibration_mismatch, "calibration table is for n = " + std::to_string(cal.n) + ", sample has n = " +
                                             std::to_string(x.size()));
    }
    if (std::abs(cal.theta - (1.0 - alpha)) > 1e-12) {
        fail(Errc::calibration_mismatch, "calibration table has theta = " + std::to_string(cal.theta) +
                                             ", test needs 1 - alpha = " + std::to_string(1.0 - alpha));
    }
    const auto d = dd_sample_hypothesis(x, h0, cal.truncation);
    TestVerdict v;
    v.decision = d.value <= cal.gamma ? 0 : 1;
    v.statistics = {d.value};
    v.thresholds = {cal.gamma};
    v.truncation = cal.truncation;
    return v;
}

TestVerdict uniform_test(const Sample& x, const Hypothesis& h0, const Hypothesis& h1, const Truncation& t) {
    if (h0.alphabet_size() != h1.alphabet_size()) {
        fail(Errc::alphabet_mismatch, "H0 and H1 use different alphabets");
    }
    for (const auto& m : h0.models) {
        if (std::find(h1.models.begin(), h1.models.end(), m) != h1.models.end()) {
            fail(Errc::invalid_argument, "H0 and H1 share a model; the hypotheses must be disjoint");
        }
    }
    const auto d0 = dd_sample_hypothesis(x, h0, t);
    const auto d1 = dd_sample_hypothesis(x, h1, t);
    TestVerdict v;
    v.decision = d0.value < d1.value ? 0 : 1;
    v.statistics = {d0.value, d1.value};
    v.truncation = d0.truncation;
    return v;
}

TestVerdict goodness_of_fit(const Sample& x, const ProcessModel& model, double alpha, const CalibrationTable& cal) {
    return asymmetric_test(x, Hypothesis({model}, cal.hypothesis.label), alpha, cal);
}

} // namespace procdist
