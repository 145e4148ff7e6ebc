// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Every Monte-Carlo criterion runs on pinned seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bench_timing.hpp"
#include "oracles.hpp"
#include "procdist/changepoint.hpp"
#include "procdist/classify.hpp"
#include "procdist/cluster.hpp"
#include "procdist/distance.hpp"
#include "procdist/hyptest.hpp"
#include "procdist/kgram_index.hpp"
#include "procdist/processes.hpp"

using namespace procdist;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

Sample concat(const std::vector<Sample>& parts) {
    std::vector<Symbol> v;
    for (const auto& p : parts) {
        v.insert(v.end(), p.symbols().begin(), p.symbols().end());
    }
    return Sample::discrete(parts.front().alphabet().size(), v);
}

Matrix random_stochastic(Rng& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, std::vector<double>(cols));
    for (auto& row : m) {
        double s = 0.0;
        for (auto& v : row) {
            v = 0.05 + rng.uniform();
            s += v;
        }
        for (auto& v : row) {
            v /= s;
        }
    }
    return m;
}

// ---- 1

Outcome worked_example() {
    const auto t0 = Clock::now();
    const Sample x = Sample::real({0.5, 1.5, 1.2, 1.4, 2.1});
    const Frequency f = frequency(x, Cell{0, {1, 1}});
    const double secs = seconds_since(t0);
    const double v = f.value();
    return {v == 0.5 && secs < 1e-3, fmt("nu = %.17g (%zu/%zu), %.3f ms", v, f.count, f.windows, secs * 1e3)};
}

// ---- 2

Outcome kgram_oracle() {
    Rng rng(2002);
    std::size_t mismatches = 0, checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t a = 2 + std::uint32_t(rng.next() % 3);
        const std::size_t n = 1 + rng.next() % 1000;
        std::vector<Symbol> v(n);
        for (auto& s : v) {
            s = Symbol(rng.next() % a);
        }
        const KGramIndex index(Sample::discrete(a, v));
        for (std::size_t k = 1; k <= std::min<std::size_t>(10, n); ++k) {
            std::map<Word, std::size_t> naive;
            for (const auto& w : oracle::windows(v, k)) {
                ++naive[w];
            }
            const auto got = index.kgram_frequencies(k);
            mismatches += got.size() == naive.size() ? 0 : 1;
            for (const auto& [w, c] : naive) {
                const auto it = got.find(w);
                const bool ok = it != got.end() && it->second.count == c && it->second.windows == n - k + 1 &&
                                index.count(w) == oracle::naive_count(v, w);
                mismatches += ok ? 0 : 1;
                ++checked;
            }
        }
    }
    return {mismatches == 0, fmt("%zu words checked, %zu mismatches", checked, mismatches)};
}

// ---- 3

std::vector<double> random_reals(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) {
        // a coarse grid half the time so that x and y share values and cells
        x = rng.uniform() < 0.5 ? std::floor(rng.uniform() * 16.0) / 8.0 - 1.0 : rng.uniform() * 4.0 - 2.0;
    }
    return v;
}

Outcome exact_tail() {
    Rng rng(3003);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto xv = random_reals(rng, 1 + rng.next() % 50);
        const auto yv = random_reals(rng, 1 + rng.next() % 50);
        const std::size_t m = 1 + rng.next() % 3;
        const double got = dd(Sample::real(xv), Sample::real(yv), Truncation::exact_tail(m)).value;
        worst = std::max(worst, std::abs(got - oracle::dd_real_all_levels(xv, yv, m)));
    }
    return {worst <= 1e-12, fmt("max |exact_tail - deep oracle| = %.3g over 100 pairs", worst)};
}

// ---- 4

Outcome distance_consistency() {
    const auto t0 = Clock::now();
    const auto p = ProcessModel::bernoulli(0.3), q = ProcessModel::bernoulli(0.7);
    std::vector<double> medians;
    std::string detail;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const Truncation t = default_truncation(n, n);
        const double truth = dd_model_model(p, q, t).value;
        std::vector<double> err;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const Sample x = sample(p, n, derive_seed(4004, 2 * s));
            const Sample y = sample(q, n, derive_seed(4004, 2 * s + 1));
            err.push_back(std::abs(dd_discrete(x, y, t).value - truth));
        }
        medians.push_back(median(err));
        detail += fmt("n=%zu k=%zu med=%.4g; ", n, t.k_max, medians.back());
    }
    const double secs = seconds_since(t0);
    const bool ok = medians[0] > medians[1] && medians[1] > medians[2] && medians[2] <= 0.02 && secs <= 60.0;
    return {ok, detail + fmt("%.1f s", secs)};
}

// ---- 5

Outcome three_sample_markov() {
    const auto t0 = Clock::now();
    const auto p = ProcessModel::two_state_markov(0.2, 0.6), q = ProcessModel::two_state_markov(0.6, 0.2);
    int correct = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        // alternate which of x, y shares z's law
        const bool z_is_x = s % 2 == 0;
        const Sample x = sample(p, 5000, derive_seed(5005, 3 * s));
        const Sample y = sample(q, 5000, derive_seed(5005, 3 * s + 1));
        const Sample z = sample(z_is_x ? p : q, 5000, derive_seed(5005, 3 * s + 2));
        const auto r = three_sample(x, y, z, Truncation::automatic());
        correct += (r.label == Label::x) == z_is_x ? 1 : 0;
    }
    const double secs = seconds_since(t0);
    return {correct >= 190 && secs <= 30.0, fmt("%d/200 correct, %.1f s", correct, secs)};
}

// ---- 6

Outcome clustering() {
    const auto p = ProcessModel::two_state_markov(0.2, 0.6), q = ProcessModel::two_state_markov(0.6, 0.2);
    auto trial = [&](std::size_t n, std::uint64_t s) {
        std::vector<Sample> xs;
        std::vector<std::size_t> truth;
        Rng rng(derive_seed(6006, s));
        for (std::size_t i = 0; i < 10; ++i) {
            truth.push_back(i < 2 ? i : rng.next() % 2);  // both groups nonempty, shuffled otherwise
            xs.push_back(sample(truth.back() ? q : p, n, derive_seed(rng.next(), i)));
        }
        return clustering_error(cluster_offline(xs, 2, Truncation::automatic()).assignment, truth);
    };
    int exact = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        exact += trial(5000, s) == 0.0 ? 1 : 0;
    }
    std::vector<double> med;
    for (std::size_t n : {500u, 2000u, 8000u}) {
        std::vector<double> err;
        for (std::uint64_t s = 0; s < 100; ++s) {
            err.push_back(trial(n, 1000 + s));
        }
        med.push_back(median(err));
    }
    const bool ok = exact >= 90 && med[0] >= med[1] && med[1] >= med[2];
    return {ok, fmt("%d/100 exact at n=5000; median error %.3g, %.3g, %.3g at n=500, 2000, 8000", exact, med[0],
                    med[1], med[2])};
}

// ---- 7

Outcome single_change() {
    const auto lo = ProcessModel::bernoulli(0.2), hi = ProcessModel::bernoulli(0.8);
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Sample z = concat({sample(lo, 8000, derive_seed(7007, 2 * s)), sample(hi, 12000, derive_seed(7007, 2 * s + 1))});
        const auto est = single_changepoint(z, 0.1, 0.9, Truncation::automatic());
        hits += std::abs(est.thetas.at(0) - 0.4) <= 0.02 ? 1 : 0;
    }
    std::vector<Symbol> block(500, 0);
    block.resize(1000, 1);
    const double theta = single_changepoint(Sample::discrete(2, block), 0.1, 0.9, Truncation::automatic()).thetas.at(0);
    return {hits >= 95 && theta == 0.5, fmt("%d/100 within 0.02; block fixture theta = %.17g", hits, theta)};
}

// ---- 8

Outcome known_k() {
    const auto lo = ProcessModel::bernoulli(0.1), hi = ProcessModel::bernoulli(0.9);
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Sample z = concat({sample(lo, 10000, derive_seed(8008, 3 * s)), sample(hi, 10000, derive_seed(8008, 3 * s + 1)),
                                 sample(lo, 10000, derive_seed(8008, 3 * s + 2))});
        const auto est = multi_changepoint_known_k(z, 2, 0.3, Truncation::automatic());
        hits += est.thetas.size() == 2 && std::abs(est.thetas[0] - 1.0 / 3) <= 0.05 &&
                        std::abs(est.thetas[1] - 2.0 / 3) <= 0.05
                    ? 1
                    : 0;
    }
    return {hits >= 90, fmt("%d/100 with both estimates within 0.05", hits)};
}

// ---- 9

Outcome ranked_list() {
    const auto lo = ProcessModel::bernoulli(0.2), hi = ProcessModel::bernoulli(0.8);
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Sample z = concat({sample(lo, 8000, derive_seed(9009, 2 * s)), sample(hi, 12000, derive_seed(9009, 2 * s + 1))});
        const auto list = list_changepoints(z, 0.2, Truncation::automatic());
        hits += !list.candidates.empty() && std::abs(double(list.candidates[0].split) - 8000.0) <= 0.05 * 20000 ? 1 : 0;
    }
    return {hits >= 90, fmt("%d/100 rank-1 within 0.05n (n=20000, lambda=0.2)", hits)};
}

// ---- 10

Outcome known_r() {
    const auto lo = ProcessModel::bernoulli(0.1), hi = ProcessModel::bernoulli(0.9);
    int hits = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        std::vector<Sample> parts;
        for (std::uint64_t i = 0; i < 4; ++i) {
            parts.push_back(sample(i % 2 ? hi : lo, 10000, derive_seed(10010, 4 * s + i)));
        }
        const auto r = multi_changepoint_known_r(concat(parts), 2, 0.2, Truncation::automatic());
        bool ok = r.count == 3 && r.estimate.thetas.size() == 3;
        for (std::size_t i = 0; ok && i < 3; ++i) {
            ok = std::abs(r.estimate.thetas[i] - 0.25 * double(i + 1)) <= 0.05;
        }
        hits += ok ? 1 : 0;
    }
    return {hits >= 85, fmt("%d/100 with count 3 and all estimates within 0.05", hits)};
}

// ---- 11

Outcome hypothesis_test() {
    constexpr std::size_t n = 1000, trials = 1000;
    constexpr double alpha = 0.05;
    const auto fair = ProcessModel::bernoulli(0.5);
    const Hypothesis h0({fair}, "fair coin");
    const auto cal = calibrate_gamma(h0, n, 1 - alpha, kDefaultMcRuns, 11011);

    int rejections = 0, power = 0;
    for (std::uint64_t s = 0; s < trials; ++s) {
        rejections += asymmetric_test(sample(fair, n, derive_seed(11111, s)), h0, alpha, cal).decision;
        power += asymmetric_test(sample(ProcessModel::bernoulli(0.8), n, derive_seed(11211, s)), h0, alpha, cal).decision;
    }
    const double type1 = rejections / double(trials), pw = power / double(trials);
    const double bound = alpha + 2 * std::sqrt(alpha * (1 - alpha) / double(trials));

    // quantile of d(X, H0) from ten times as many independent draws
    const Truncation t = Truncation::discrete(std::max<std::size_t>(1, ceil_log2(n)));
    std::vector<double> d;
    for (std::uint64_t s = 0; s < 10 * kDefaultMcRuns; ++s) {
        d.push_back(dd_sample_model(sample(fair, n, derive_seed(11311, s)), fair, t).value);
    }
    std::sort(d.begin(), d.end());
    const double ref = d[std::size_t(std::ceil((1 - alpha) * double(d.size()))) - 1];
    const double rel = std::abs(cal.gamma - ref) / ref;
    const bool ok = type1 <= bound && pw >= 0.99 && rel <= 0.10;
    return {ok, fmt("type I %.3f (bound %.4f), power %.3f, gamma %.5g vs oracle %.5g (rel %.3g)", type1, bound, pw,
                    cal.gamma, ref, rel)};
}

// ---- 12

double stationary_residual(const Matrix& p, const std::vector<double>& pi) {
    double r = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += pi[i] * p[i][j];
        }
        r = std::max(r, std::abs(s - pi[j]));
    }
    return r;
}

Outcome generators() {
    Rng rng(12012);
    double worst_residual = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        MarkovSpec spec;
        spec.order = 1 + rng.next() % 2;
        spec.alphabet = 2 + std::uint32_t(rng.next() % 3);
        std::size_t contexts = 1;
        for (std::size_t i = 0; i < spec.order; ++i) {
            contexts *= spec.alphabet;
        }
        spec.transition = random_stochastic(rng, contexts, spec.alphabet);
        worst_residual = std::max(worst_residual, stationary_residual(context_chain(spec), stationary_init(spec)));
    }

    const std::vector<ProcessModel> models{
        ProcessModel(IidSpec{{0.2, 0.3, 0.5}}),
        ProcessModel::two_state_markov(0.3, 0.4),
        ProcessModel(HmmSpec{random_stochastic(rng, 3, 3), random_stochastic(rng, 3, 2), std::nullopt}),
    };
    constexpr std::size_t n = 100000;
    std::size_t words = 0, outside = 0;
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
        const auto& m = models[mi];
        const Sample x = sample(m, n, derive_seed(12112, mi));
        const std::vector<Symbol> v(x.symbols().begin(), x.symbols().end());
        for (std::size_t k = 1; k <= 3; ++k) {
            std::vector<Symbol> w(k, 0);
            while (true) {
                const double p = m.marginal_prob(w);
                const double windows = double(n - k + 1);
                const double freq = double(oracle::naive_count(v, w)) / windows;
                outside += std::abs(freq - p) > 3 * std::sqrt(p * (1 - p) / windows) ? 1 : 0;
                ++words;
                std::size_t i = 0;
                while (i < k && ++w[i] == m.alphabet_size()) {
                    w[i++] = 0;
                }
                if (i == k) {
                    break;
                }
            }
        }
    }

    const DiagonalSpec spec{0.05, {2, 6, 20, 40}, true};
    std::size_t up = 0, seen = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const auto run = diagonal_adversary_sample(spec, 200, derive_seed(12212, s));
        if (run.first_switch_up) {
            ++seen;
            up += *run.first_switch_up ? 1 : 0;
        }
    }
    const double balance = std::abs(double(up) - 0.5 * double(seen)) / std::sqrt(0.25 * double(seen));
    const bool ok = worst_residual <= 1e-10 && outside == 0 && seen > 0 && balance <= 3.0;
    return {ok, fmt("residual %.3g; %zu/%zu k-gram frequencies outside 3 sigma; first switch up %zu/%zu (%.2f sigma)",
                    worst_residual, outside, words, up, seen, balance)};
}

// ---- 13

Outcome doubling() {
    const auto s = bench::dd_doubling(100000, 9, 13013);
    return {s.ratio <= 2.5, fmt("%.4f s at n=1e5, %.4f s at n=2e5, ratio %.2f", s.small.median_seconds,
                                s.large.median_seconds, s.ratio)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"worked example frequency", worked_example},
        {"k-gram index vs naive counts", kgram_oracle},
        {"exact tail vs deep truncation", exact_tail},
        {"distance consistency", distance_consistency},
        {"three-sample classification", three_sample_markov},
        {"offline clustering", clustering},
        {"single change point", single_change},
        {"known number of change points", known_k},
        {"ranked candidate list", ranked_list},
        {"known number of distributions", known_r},
        {"asymmetric goodness-of-fit test", hypothesis_test},
        {"process generators", generators},
        {"quasilinear scaling", doubling},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2zu %-34s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - std::size_t(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
