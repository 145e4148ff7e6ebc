#include "procdist/cluster.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "procdist/parallel.hpp"

namespace procdist {

Clustering cluster_offline(std::span<const Sample> samples, std::size_t clusters, const Truncation& t) {
    const std::size_t n = samples.size();
    if (clusters < 1) {
        fail(Errc::invalid_argument,
             "the number of clusters must be given: without it, clustering by generating distribution cannot be "
             "solved consistently for stationary ergodic samples");
    }
    if (clusters > n) {
        fail(Errc::invalid_argument,
             "cannot form " + std::to_string(clusters) + " clusters from " + std::to_string(n) + " samples");
    }
    for (const auto& s : samples) {
        require_same_alphabet(samples[0], s);
    }

    Clustering out;
    out.centers.push_back(0);
    // dist[c][i] = d(x_i, x_{centers[c]})
    std::vector<std::vector<double>> dist;
    auto add_center_row = [&](std::size_t center) {
        std::vector<double> row(n, 0.0);
        parallel_for(n, [&](std::size_t i) {
            if (i != center) {
                row[i] = dd(samples[i], samples[center], t).value;
            }
        });
        out.distance_evaluations += n - 1;
        dist.push_back(std::move(row));
    };
    add_center_row(0);

    std::vector<double> nearest = dist[0];
    std::vector<bool> is_center(n, false);
    is_center[0] = true;
    for (std::size_t c = 1; c < clusters; ++c) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_center[i] && (best == n || nearest[i] > nearest[best])) {
                best = i;
            }
        }
        out.centers.push_back(best);
        is_center[best] = true;
        add_center_row(best);
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], dist.back()[i]);
        }
    }

    out.assignment.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t c = 0; c < clusters; ++c) {
            if (out.centers[c] == i) {
                best = c;
                break;
            }
            if (dist[c][i] < dist[best][i]) {
                best = c;
            }
        }
        out.assignment[i] = best;
    }
    return out;
}

namespace {

// Minimum-cost perfect matching on a square cost matrix (Hungarian method, potentials form).
std::vector<std::size_t> min_cost_matching(const std::vector<std::vector<long long>>& cost) {
    const std::size_t n = cost.size();
    constexpr long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1, 0), v(n + 1, 0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<long long> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            long long delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) {
                    continue;
                }
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j) {
        row_to_col[p[j] - 1] = j - 1;
    }
    return row_to_col;
}

} // namespace

double clustering_error(std::span<const std::size_t> assignment, std::span<const std::size_t> truth) {
    if (assignment.size() != truth.size()) {
        fail(Errc::invalid_argument, "clustering and truth cover different index sets");
    }
    if (assignment.empty()) {
        return 0.0;
    }
    const std::size_t k =
        1 + std::max(*std::max_element(assignment.begin(), assignment.end()), *std::max_element(truth.begin(), truth.end()));
    std::vector<std::vector<long long>> cost(k, std::vector<long long>(k, 0));
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        --cost[assignment[i]][truth[i]];
    }
    const auto match = min_cost_matching(cost);
    long long agreed = 0;
    for (std::size_t c = 0; c < k; ++c) {
        agreed -= cost[c][match[c]];
    }
    return 1.0 - static_cast<double>(agreed) / static_cast<double>(assignment.size());
}

} // namespace procdist
