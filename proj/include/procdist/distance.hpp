#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "procdist/core.hpp"
#include "procdist/processes.hpp"

namespace procdist {

/// w_k = 1 / (k (k + 1)); sums to 1 over k >= 1.
struct WeightScheme {
    static double weight(std::size_t k) { return 1.0 / (static_cast<double>(k) * (static_cast<double>(k) + 1.0)); }
    /// Sum of w_j over j >= k, which telescopes to 1 / k.
    static double tail_from(std::size_t k) { return 1.0 / static_cast<double>(k); }
};

/// How the infinite level sums are cut. `automatic` resolves per call from the
/// sample sizes (see default_truncation); `exact_tail` (real samples only) sums
/// every refinement level exactly by collapsing the constant tail.
struct Truncation {
    enum class Mode { automatic, truncated, exact_tail };

    Mode mode = Mode::automatic;
    std::size_t k_max = 0;
    std::size_t m_max = 0;
    std::size_t l_max = 0;

    static Truncation automatic() { return {}; }
    static Truncation discrete(std::size_t k_max);
    static Truncation real(std::size_t m_max, std::size_t l_max);
    static Truncation exact_tail(std::size_t m_max);

    bool is_automatic() const noexcept { return mode == Mode::automatic; }
    friend bool operator==(const Truncation&, const Truncation&) = default;
};

const char* mode_name(Truncation::Mode mode) noexcept;

/// Contribution of one (pattern length, refinement level) pair. `l` is 0 for
/// discrete samples. `term` is the total-variation sum, in [0, 2].
struct LevelTerm {
    std::size_t m = 0;
    std::size_t l = 0;
    double weight = 0.0;
    double term = 0.0;
};

struct DistanceEstimate {
    double value = 0.0;
    Truncation truncation;
    std::vector<LevelTerm> per_level;
    /// exact_tail only: the x/y value gap and the level from which terms are constant.
    std::optional<double> min_gap;
    std::size_t tail_level = 0;
};

/// Schedule for samples of lengths n1, n2 over a discrete alphabet: k_max = max(1, ceil(log2 n)).
Truncation default_truncation(std::size_t n1, std::size_t n2);
/// Schedule from the data; for real samples l_max is the first level at which no
/// 1-d cell of either sample holds more than ceil(log2 n) points (capped at 52).
Truncation default_truncation(const Sample& x, const Sample& y);

/// Resolves `automatic` against the samples; validates explicit settings.
Truncation resolve_truncation(const Truncation& t, const Sample& x, const Sample& y);

/// ceil(log2 n) for n >= 1.
std::size_t ceil_log2(std::size_t n);

DistanceEstimate dd_discrete(const Sample& x, const Sample& y, const Truncation& t);
DistanceEstimate dd_real(const Sample& x, const Sample& y, const Truncation& t);
/// Dispatches on the alphabet.
DistanceEstimate dd(const Sample& x, const Sample& y, const Truncation& t);

/// Empirical distance from a sample to a model with exact marginals.
DistanceEstimate dd_sample_model(const Sample& x, const ProcessModel& model, const Truncation& t);

/// Truncated distance between two models by enumerating A^k for every k <= k_max.
DistanceEstimate dd_model_model(const ProcessModel& a, const ProcessModel& b, const Truncation& t);

struct SumInformation {
    double value = 0.0;
    Truncation truncation;
    /// Per (m, l): sum of marginal entropies minus the joint entropy, in nats.
    std::vector<LevelTerm> per_level;
};

/// Plug-in sum-information of aligned samples (entropies in nats).
SumInformation sum_information(std::span<const Sample> samples, const Truncation& t);

/// Shared level arithmetic: sum_B |a_B/nu - b_B/nv| from the integer numerator
/// sum_B |a_B nv - b_B nu|; windowless sides follow the nu = 0 convention.
double level_term(long long numerator, long long nu, long long nv) noexcept;

} // namespace procdist
