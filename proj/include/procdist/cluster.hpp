#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "procdist/distance.hpp"

namespace procdist {

struct Clustering {
    /// assignment[i] is the 0-based cluster of sample i.
    std::vector<std::size_t> assignment;
    /// centers[c] is the sample index chosen as centre of cluster c.
    std::vector<std::size_t> centers;
    std::size_t distance_evaluations = 0;
};

/// Farthest-point initialisation from sample 0, then nearest-centre assignment.
/// Ties go to the lowest index. The number of clusters must be known (>= 1).
Clustering cluster_offline(std::span<const Sample> samples, std::size_t clusters, const Truncation& t);

/// Fraction of indices misassigned under the best matching of cluster labels to truth labels.
double clustering_error(std::span<const std::size_t> assignment, std::span<const std::size_t> truth);

} // namespace procdist
