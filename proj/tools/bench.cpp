// Wall-time scaling of the discrete distance estimator.
#include <cstdio>
#include <cstdlib>

#include "bench_timing.hpp"

int main(int argc, char** argv) {
    using namespace procdist;
    const int reps = argc > 1 ? std::atoi(argv[1]) : 7;
    std::printf("%10s %12s %12s\n", "n", "median_s", "d");
    double prev = 0.0;
    for (std::size_t n : {25000u, 50000u, 100000u, 200000u, 400000u}) {
        const auto t = bench::time_dd_discrete(n, reps, 2024);
        std::printf("%10zu %12.6f %12.6f", n, t.median_seconds, t.value);
        if (prev > 0.0) {
            std::printf("   x%.2f", t.median_seconds / prev);
        }
        std::printf("\n");
        prev = t.median_seconds;
    }
    return 0;
}
