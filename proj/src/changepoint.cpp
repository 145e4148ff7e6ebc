#include "procdist/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levels.hpp"
#include "procdist/kgram_index.hpp"
#include "procdist/parallel.hpp"

namespace procdist {

namespace {

// Sweeps split t over [lo, hi] for one window length k, maintaining
//   N(t) = sum_B |a_B nv - b_B nu|
// where a_B, b_B count occurrences of B left/right of the split, nu = t-k+1, nv = n-t-k+1.
// A word with no window straddling the split has b = c - a, so its summand is
// |a M - c nu| with M = nu + nv fixed; such words sit in a positive or negative
// pool whose sums are kept, and flip to negative at a precomputed nu.
// Words touched by the k-1 straddling windows are evaluated one by one.
class LevelSweep {
public:
    LevelSweep(const std::vector<std::uint32_t>& ids, std::size_t classes, std::size_t n, std::size_t k, std::size_t lo,
               std::size_t hi)
        : ids_(ids), n_(static_cast<long long>(n)), k_(static_cast<long long>(k)), lo_(static_cast<long long>(lo)),
          hi_(static_cast<long long>(hi)), m_(static_cast<long long>(n) - 2 * static_cast<long long>(k) + 2) {
        t_ = lo_;
        if (m_ <= 0) {
            return;  // no split leaves windows on both sides
        }
        a_.assign(classes, 0);
        s_.assign(classes, 0);
        c_.assign(classes, 0);
        status_.assign(classes, kStraddle);
        version_.assign(classes, 0);
        stamp_.assign(classes, -1);
        buckets_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));

        const long long nu = t_ - k_ + 1;
        for (long long i = 0; i + k_ <= n_; ++i) {
            const auto w = ids_[static_cast<std::size_t>(i)];
            ++c_[w];
            if (i <= t_ - k_) {
                ++a_[w];
            } else if (i < t_) {
                ++s_[w];
            }
        }
        for (std::size_t w = 0; w < classes; ++w) {
            if (c_[w] > 0 && s_[w] == 0) {
                insert(w, nu);
            }
        }
    }

    // Level term (total-variation sum) at the current split.
    double term() {
        const long long nu = t_ - k_ + 1;
        const long long nv = n_ - t_ - k_ + 1;
        if (m_ <= 0 || nu <= 0 || nv <= 0) {
            return level_term(0, nu, nv);
        }
        long long num = m_ * (a_pos_ - a_neg_) - nu * (c_pos_ - c_neg_);
        const long long first = std::max(0LL, t_ - k_ + 1);
        const long long last = std::min(t_ - 1, n_ - k_);
        for (long long j = first; j <= last; ++j) {
            const auto w = ids_[static_cast<std::size_t>(j)];
            if (stamp_[w] == t_) {
                continue;
            }
            stamp_[w] = t_;
            const long long b = c_[w] - a_[w] - s_[w];
            num += std::llabs(a_[w] * nv - b * nu);
        }
        return level_term(num, nu, nv);
    }

    void advance() {
        if (m_ <= 0) {
            ++t_;
            return;
        }
        const long long t = t_;
        const long long nu_next = t + 1 - k_ + 1;
        if (k_ == 1) {
            // window t moves straight from the right side to the left side
            const auto w = ids_[static_cast<std::size_t>(t)];
            remove(w);
            ++a_[w];
            insert(w, nu_next);
        } else {
            if (t <= n_ - k_) {
                const auto w = ids_[static_cast<std::size_t>(t)];
                if (status_[w] != kStraddle) {
                    remove(w);
                }
                ++s_[w];
            }
            const long long j = t - k_ + 1;
            if (j >= 0 && j <= n_ - k_) {
                const auto w = ids_[static_cast<std::size_t>(j)];
                --s_[w];
                ++a_[w];
                if (s_[w] == 0) {
                    insert(w, nu_next);
                }
            }
        }
        t_ = t + 1;
        const long long slot = nu_next - (lo_ - k_ + 1);
        if (slot >= 0 && slot < static_cast<long long>(buckets_.size())) {
            for (auto [w, ver] : buckets_[static_cast<std::size_t>(slot)]) {
                if (version_[w] != ver || status_[w] != kPositive) {
                    continue;
                }
                if (a_[w] * m_ - c_[w] * nu_next < 0) {
                    a_pos_ -= a_[w];
                    c_pos_ -= c_[w];
                    a_neg_ += a_[w];
                    c_neg_ += c_[w];
                    status_[w] = kNegative;
                }
            }
            buckets_[static_cast<std::size_t>(slot)].clear();
        }
    }

private:
    static constexpr unsigned char kPositive = 0;
    static constexpr unsigned char kNegative = 1;
    static constexpr unsigned char kStraddle = 2;

    void insert(std::size_t w, long long nu) {
        ++version_[w];
        if (a_[w] * m_ - c_[w] * nu >= 0) {
            status_[w] = kPositive;
            a_pos_ += a_[w];
            c_pos_ += c_[w];
            // first nu with a M - c nu < 0
            const long long flip = (a_[w] * m_) / c_[w] + 1;
            const long long slot = flip - (lo_ - k_ + 1);
            if (slot < static_cast<long long>(buckets_.size())) {
                buckets_[static_cast<std::size_t>(slot)].emplace_back(static_cast<std::uint32_t>(w), version_[w]);
            }
        } else {
            status_[w] = kNegative;
            a_neg_ += a_[w];
            c_neg_ += c_[w];
        }
    }

    void remove(std::size_t w) {
        ++version_[w];
        if (status_[w] == kPositive) {
            a_pos_ -= a_[w];
            c_pos_ -= c_[w];
        } else if (status_[w] == kNegative) {
            a_neg_ -= a_[w];
            c_neg_ -= c_[w];
        }
        status_[w] = kStraddle;
    }

    const std::vector<std::uint32_t>& ids_;
    long long n_, k_, lo_, hi_, m_;
    long long t_ = 0;
    std::vector<long long> a_, s_, c_;
    std::vector<unsigned char> status_;
    std::vector<std::uint32_t> version_;
    std::vector<long long> stamp_;
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets_;
    long long a_pos_ = 0, c_pos_ = 0, a_neg_ = 0, c_neg_ = 0;
};

void sweep_level(const WindowClasses& wc, std::size_t n, std::size_t lo, std::size_t hi, double weight,
                 std::vector<double>& scores) {
    LevelSweep sweep(wc.ids[0], wc.class_count, n, wc.k, lo, hi);
    for (std::size_t t = lo; t <= hi; ++t) {
        scores[t - lo] += weight * sweep.term();
        if (t < hi) {
            sweep.advance();
        }
    }
}

std::size_t ceil_fraction(double f, std::size_t n) {
    return static_cast<std::size_t>(std::max(0.0, std::ceil(f * static_cast<double>(n) - 1e-9)));
}

std::size_t floor_fraction(double f, std::size_t n) {
    return static_cast<std::size_t>(std::max(0.0, std::floor(f * static_cast<double>(n) + 1e-9)));
}

struct Candidate {
    std::size_t split;
    double score;
};

std::size_t window_length(std::size_t n, double lambda) {
    require(lambda > 0.0 && lambda < 1.0, "lambda must be in (0, 1)");
    const std::size_t w = floor_fraction(lambda / 3.0, n);
    if (w < kMinWindow) {
        fail(Errc::invalid_argument, "window floor(n lambda / 3) = " + std::to_string(w) + " is below the minimum of " +
                                         std::to_string(kMinWindow) + " symbols");
    }
    return w;
}

// One single-change scan per half-overlapping window of length floor(n lambda / 3), restricted
// to the middle half of the window; each candidate is scored by Delta on radius floor(n lambda / 3).
std::vector<Candidate> window_candidates(const Sample& z, double lambda, const Truncation& resolved) {
    const std::size_t n = z.size();
    const std::size_t w = window_length(n, lambda);
    const std::size_t stride = std::max<std::size_t>(1, w / 2);
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + w <= n; s += stride) {
        starts.push_back(s);
    }
    if (starts.empty() || starts.back() + w < n) {
        starts.push_back(n - w);
    }

    std::vector<Candidate> found(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        const Sample window = z.slice(starts[i], starts[i] + w);
        const auto local = single_changepoint(window, 0.25, 0.75, resolved);
        const std::size_t split = starts[i] + local.splits.front();
        const std::size_t radius = std::min({w, split, n - split});
        double score = 0.0;
        if (radius >= 2) {
            score = score_delta(z, split - radius + 1, split + radius, resolved);
        }
        found[i] = Candidate{split, score};
    });
    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.split < b.split; });
    found.erase(std::unique(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.split == b.split; }),
                found.end());
    return found;
}

// Greedy by descending score (ties to the smaller split); drops anything within `radius` of a kept one.
std::vector<Candidate> suppress(std::vector<Candidate> cands, std::size_t radius) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        return a.score != b.score ? a.score > b.score : a.split < b.split;
    });
    std::vector<Candidate> kept;
    for (const auto& c : cands) {
        const bool near = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
            const std::size_t gap = c.split > k.split ? c.split - k.split : k.split - c.split;
            return gap <= radius;
        });
        if (!near) {
            kept.push_back(c);
        }
    }
    return kept;
}

} // namespace

Truncation scan_truncation(const Sample& z, const Truncation& t) {
    if (t.mode == Truncation::Mode::exact_tail) {
        fail(Errc::invalid_argument, "change-point scans need a truncated schedule; exact_tail is not supported");
    }
    return resolve_truncation(t, z, z);
}

std::vector<double> split_scores(const Sample& z, std::size_t lo, std::size_t hi, const Truncation& t) {
    const std::size_t n = z.size();
    require(lo >= 1 && lo <= hi && hi + 1 <= n, "split range must satisfy 1 <= lo <= hi <= n - 1");
    const Truncation resolved = scan_truncation(z, t);
    std::vector<double> scores(hi - lo + 1, 0.0);
    if (z.is_discrete()) {
        const KGramIndex index(z);
        for (std::size_t k = 1; k <= resolved.k_max; ++k) {
            if (k > n) {
                // neither side has windows: the level term is 0 everywhere
                continue;
            }
            sweep_level(index.window_classes(k), n, lo, hi, WeightScheme::weight(k), scores);
        }
        return scores;
    }
    const std::span<const double> seqs[] = {z.reals()};
    for (std::size_t l = 1; l <= resolved.l_max; ++l) {
        const auto coded = detail::quantize_codes(seqs, static_cast<int>(l));
        const std::span<const Symbol> texts[] = {coded.texts[0]};
        const SuffixIndex index(texts, std::max<std::uint64_t>(coded.bound, 1));
        for (std::size_t m = 1; m <= resolved.m_max; ++m) {
            if (m > n) {
                continue;
            }
            sweep_level(index.window_classes(m), n, lo, hi, WeightScheme::weight(m) * WeightScheme::weight(l), scores);
        }
    }
    return scores;
}

ChangePointEstimate single_changepoint(const Sample& z, double alpha, double beta, const Truncation& t) {
    require(alpha > 0.0 && alpha <= beta && beta < 1.0, "need 0 < alpha <= beta < 1");
    const std::size_t n = z.size();
    const std::size_t lo = std::max<std::size_t>(1, ceil_fraction(alpha, n));
    const std::size_t hi = std::min(n - 1, floor_fraction(beta, n));
    if (n < 2 || lo > hi) {
        fail(Errc::invalid_argument, "empty candidate range [ceil(alpha n), floor(beta n)] for n = " + std::to_string(n));
    }
    ChangePointEstimate est;
    est.n = n;
    est.truncation = scan_truncation(z, t);
    const auto scores = split_scores(z, lo, hi, est.truncation);
    const auto best = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    est.splits = {lo + best};
    est.thetas = {static_cast<double>(lo + best) / static_cast<double>(n)};
    est.scores = {scores[best]};
    est.scan_range = std::pair{lo, hi};
    return est;
}

double score_delta(const Sample& z, std::size_t a, std::size_t b, const Truncation& t) {
    const std::size_t n = z.size();
    require(a >= 1 && a < b && b <= n && b - a >= 2, "Delta needs 1 <= a < b <= n with b - a >= 2");
    const std::size_t mid_lo = (a + b) / 2;
    const std::size_t mid_hi = (a + b + 1) / 2;
    return dd(z.slice(a - 1, mid_lo), z.slice(mid_hi - 1, b), t).value;
}

ChangePointEstimate multi_changepoint_known_k(const Sample& z, std::size_t count, double lambda, const Truncation& t) {
    require(count >= 1, "number of change points must be >= 1");
    const std::size_t n = z.size();
    ChangePointEstimate est;
    est.n = n;
    est.truncation = scan_truncation(z, t);
    auto kept = suppress(window_candidates(z, lambda, est.truncation), floor_fraction(lambda / 2.0, n));
    if (kept.size() < count) {
        fail(Errc::infeasible, "only " + std::to_string(kept.size()) + " separated candidates available, " +
                                   std::to_string(count) + " requested");
    }
    kept.resize(count);
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.split < b.split; });
    for (const auto& c : kept) {
        est.splits.push_back(c.split);
        est.thetas.push_back(static_cast<double>(c.split) / static_cast<double>(n));
        est.scores.push_back(c.score);
    }
    return est;
}

RankedList list_changepoints(const Sample& z, double lambda, const Truncation& t) {
    const std::size_t n = z.size();
    RankedList out;
    out.n = n;
    out.truncation = scan_truncation(z, t);
    const std::size_t spacing = std::max<std::size_t>(1, ceil_fraction(lambda, n));
    for (const auto& c : suppress(window_candidates(z, lambda, out.truncation), spacing - 1)) {
        out.candidates.push_back(RankedCandidate{c.split, static_cast<double>(c.split) / static_cast<double>(n), c.score});
    }
    return out;
}

KnownRResult multi_changepoint_known_r(const Sample& z, std::size_t distributions, double lambda, const Truncation& t) {
    require(distributions >= 1, "number of distributions must be >= 1");
    const std::size_t n = z.size();
    const RankedList list = list_changepoints(z, lambda, t);
    KnownRResult out;
    out.estimate.n = n;
    out.estimate.truncation = list.truncation;
    if (distributions == 1) {
        return out;
    }
    auto cands = list.candidates;
    std::sort(cands.begin(), cands.end(), [](const RankedCandidate& a, const RankedCandidate& b) { return a.split < b.split; });

    std::vector<Sample> pieces;
    std::size_t begin = 0;
    for (const auto& c : cands) {
        pieces.push_back(z.slice(begin, c.split));
        begin = c.split;
    }
    pieces.push_back(z.slice(begin, n));

    const Clustering groups = cluster_offline(pieces, distributions, t);
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (groups.assignment[i] != groups.assignment[i + 1]) {
            out.estimate.splits.push_back(cands[i].split);
            out.estimate.thetas.push_back(cands[i].theta);
            out.estimate.scores.push_back(cands[i].score);
        }
    }
    out.count = out.estimate.splits.size();
    return out;
}

} // namespace procdist
