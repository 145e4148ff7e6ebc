#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "procdist/distance.hpp"

namespace procdist::bench {

struct Timing {
    std::size_t n = 0;
    double median_seconds = 0.0;
    double value = 0.0;
};

// Median wall time of dd_discrete with default truncation on Bern(0.3) vs Bern(0.7) samples of length n.
inline Timing time_dd_discrete(std::size_t n, int reps, std::uint64_t seed) {
    const Sample x = sample(ProcessModel::bernoulli(0.3), n, derive_seed(seed, 0));
    const Sample y = sample(ProcessModel::bernoulli(0.7), n, derive_seed(seed, 1));
    std::vector<double> secs;
    Timing out;
    out.n = n;
    dd_discrete(x, y, Truncation::automatic());  // warm caches and the allocator
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        out.value = dd_discrete(x, y, Truncation::automatic()).value;
        secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    std::sort(secs.begin(), secs.end());
    out.median_seconds = secs[secs.size() / 2];
    return out;
}

struct Scaling {
    Timing small;
    Timing large;
    double ratio = 0.0;
};

inline Scaling dd_doubling(std::size_t n, int reps, std::uint64_t seed) {
    Scaling s;
    s.small = time_dd_discrete(n, reps, seed);
    s.large = time_dd_discrete(2 * n, reps, seed);
    s.ratio = s.large.median_seconds / s.small.median_seconds;
    return s;
}

} // namespace procdist::bench
