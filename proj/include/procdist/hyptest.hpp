#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "procdist/distance.hpp"
#include "procdist/processes.hpp"

namespace procdist {

/// A finite, explicit set of process models over one alphabet.
struct Hypothesis {
    std::vector<ProcessModel> models;
    std::string label;

    Hypothesis() = default;
    Hypothesis(std::vector<ProcessModel> models, std::string label = {});

    std::uint32_t alphabet_size() const;
};

/// min over models of dd_sample_model(x, model, t).
DistanceEstimate dd_sample_hypothesis(const Sample& x, const Hypothesis& h, const Truncation& t);

/// gamma_n(H, theta): smallest radius whose neighbourhood of H holds at least a
/// theta fraction of simulated samples under every model of H.
struct CalibrationTable {
    Hypothesis hypothesis;
    std::size_t n = 0;
    double theta = 0.0;
    double gamma = 0.0;
    std::size_t mc_runs = 0;
    std::uint64_t seed = 0;
    Truncation truncation;
    /// Per model, the empirical theta-quantile of d(X, H).
    std::vector<double> model_quantiles;
};

inline constexpr std::size_t kDefaultMcRuns = 2000;
inline constexpr std::size_t kMinMcRuns = 100;

/// d(X, H) for `runs` samples of length n from each model; pool[i][r] is run r under model i.
/// Run r of model i is seeded with derive_seed(seed, i * runs + r).
std::vector<std::vector<double>> calibration_pool(const Hypothesis& h, std::size_t n, std::size_t runs,
                                                  std::uint64_t seed, const Truncation& t);

/// Max over models of the empirical theta-quantile (order statistic ceil(theta runs)); 0 for theta = 0.
double gamma_from_pool(const std::vector<std::vector<double>>& pool, double theta);

CalibrationTable calibrate_gamma(const Hypothesis& h, std::size_t n, double theta, std::size_t mc_runs,
                                 std::uint64_t seed, const Truncation& t = Truncation::automatic());

struct TestVerdict {
    int decision = 0;  // 0 accepts H0
    /// d(x, H0), and d(x, H1) for the uniform test.
    std::vector<double> statistics;
    /// gamma for the asymmetric test; empty for the uniform test.
    std::vector<double> thresholds;
    Truncation truncation;
};

/// psi: 0 iff d(x, H0) <= gamma_n(H0, 1 - alpha). The table must match H0, |x| and theta = 1 - alpha.
TestVerdict asymmetric_test(const Sample& x, const Hypothesis& h0, double alpha, const CalibrationTable& cal);

/// phi: 0 iff d(x, H0) < d(x, H1); ties reject. H0 and H1 must not share a model.
TestVerdict uniform_test(const Sample& x, const Hypothesis& h0, const Hypothesis& h1, const Truncation& t);

/// asymmetric_test with H0 = {model}.
TestVerdict goodness_of_fit(const Sample& x, const ProcessModel& model, double alpha, const CalibrationTable& cal);

} // namespace procdist
