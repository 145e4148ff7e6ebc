#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "procdist/cluster.hpp"
#include "procdist/distance.hpp"

namespace procdist {

/// Shortest window (in symbols) the change-point searches will score.
inline constexpr std::size_t kMinWindow = 20;

/// Change points as split indices: split t separates z[0, t) from z[t, n).
struct ChangePointEstimate {
    std::vector<std::size_t> splits;  // strictly increasing, each in [1, n - 1]
    std::vector<double> thetas;       // splits[i] / n
    std::vector<double> scores;
    std::size_t n = 0;
    Truncation truncation;
    /// single_changepoint only: the scanned splits [ceil(alpha n), floor(beta n)].
    std::optional<std::pair<std::size_t, std::size_t>> scan_range;
};

struct RankedCandidate {
    std::size_t split = 0;
    double theta = 0.0;
    double score = 0.0;
};

struct RankedList {
    std::vector<RankedCandidate> candidates;  // descending score
    std::size_t n = 0;
    Truncation truncation;
};

struct KnownRResult {
    std::size_t count = 0;
    ChangePointEstimate estimate;
};

/// Resolves `automatic` once for a whole sample so every split is scored on the same levels.
Truncation scan_truncation(const Sample& z, const Truncation& t);

/// d(z[0, t), z[t, n)) for every t in [lo, hi], in one incremental sweep.
/// Equal (bit for bit) to evaluating dd on each split separately.
std::vector<double> split_scores(const Sample& z, std::size_t lo, std::size_t hi, const Truncation& t);

/// argmax of d(z[0, t), z[t, n)) over t in [ceil(alpha n), floor(beta n)]; ties to the smallest t.
ChangePointEstimate single_changepoint(const Sample& z, double alpha, double beta, const Truncation& t);

/// Distance between the halves z_a..z_floor((a+b)/2) and z_ceil((a+b)/2)..z_b (1-based, inclusive).
double score_delta(const Sample& z, std::size_t a, std::size_t b, const Truncation& t);

/// The `count` best-scoring candidates, at least floor(n lambda / 2) + 1 apart.
ChangePointEstimate multi_changepoint_known_k(const Sample& z, std::size_t count, double lambda, const Truncation& t);

/// Every candidate, ranked by score, pairwise at least ceil(n lambda) apart.
RankedList list_changepoints(const Sample& z, double lambda, const Truncation& t);

/// Splits at the ranked-list candidates, clusters the pieces into `distributions`
/// groups and keeps the boundaries between pieces in different groups.
KnownRResult multi_changepoint_known_r(const Sample& z, std::size_t distributions, double lambda, const Truncation& t);

} // namespace procdist
