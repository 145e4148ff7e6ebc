#include "procdist/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

namespace procdist {

std::size_t Rng::categorical(std::span<const double> probs) {
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return i;
        }
    }
    // rounding: fall back to the last symbol with positive mass
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
            return i;
        }
    }
    return probs.size() - 1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

constexpr double kRowTolerance = 1e-12;

void check_distribution(std::span<const double> p, const std::string& what) {
    require(!p.empty(), what + ": empty distribution");
    double total = 0.0;
    for (double v : p) {
        require(std::isfinite(v) && v >= 0.0, what + ": entries must be finite and nonnegative");
        total += v;
    }
    require(std::abs(total - 1.0) <= kRowTolerance, what + ": sums to " + std::to_string(total) + ", expected 1");
}

void check_stochastic(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
    require(m.size() == rows, what + ": expected " + std::to_string(rows) + " rows, got " + std::to_string(m.size()));
    for (std::size_t i = 0; i < rows; ++i) {
        require(m[i].size() == cols, what + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) + " entries");
        check_distribution(m[i], what + "[" + std::to_string(i) + "]");
    }
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        require(r <= (std::size_t{1} << 24) / base, "state space too large");
        r *= base;
    }
    return r;
}

// Tarjan SCC on edges with positive probability.
std::vector<std::size_t> strongly_connected(const Matrix& p, std::size_t& count) {
    const std::size_t n = p.size();
    std::vector<std::size_t> comp(n, SIZE_MAX), index(n, SIZE_MAX), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t next_index = 0;
    count = 0;
    // iterative DFS frames: (node, next successor)
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != SIZE_MAX) {
            continue;
        }
        frames.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            auto& [v, succ] = frames.back();
            if (succ < n) {
                const std::size_t w = succ++;
                if (p[v][w] <= 0.0) {
                    continue;
                }
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            frames.pop_back();
            if (!frames.empty()) {
                low[frames.back().first] = std::min(low[frames.back().first], low[done]);
            }
            if (low[done] == index[done]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != done);
                ++count;
            }
        }
    }
    return comp;
}

} // namespace

std::vector<double> stationary_distribution(const Matrix& transition) {
    const std::size_t n = transition.size();
    check_stochastic(transition, n, n, "transition");

    std::size_t comps = 0;
    const auto comp = strongly_connected(transition, comps);
    std::vector<bool> closed(comps, true);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (transition[i][j] > 0.0 && comp[i] != comp[j]) {
                closed[comp[i]] = false;
            }
        }
    }
    const auto n_closed = std::count(closed.begin(), closed.end(), true);
    if (n_closed != 1) {
        fail(Errc::no_unique_stationary,
             "chain has " + std::to_string(n_closed) + " closed communicating classes; stationary law is not unique");
    }
    const std::size_t cls = static_cast<std::size_t>(std::find(closed.begin(), closed.end(), true) - closed.begin());
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i) {
        if (comp[i] == cls) {
            members.push_back(i);
        }
    }

    // period = gcd of level differences along edges of the closed class
    std::vector<std::int64_t> level(n, -1);
    std::vector<std::size_t> queue{members.front()};
    level[members.front()] = 0;
    std::int64_t period = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        const std::size_t u = queue[qi];
        for (std::size_t v : members) {
            if (transition[u][v] <= 0.0) {
                continue;
            }
            if (level[v] < 0) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            } else {
                period = std::gcd(period, std::abs(level[u] + 1 - level[v]));
            }
        }
    }
    if (period > 1) {
        fail(Errc::no_unique_stationary, "chain is periodic with period " + std::to_string(period));
    }

    const auto m = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
            a(r, c) = transition[members[static_cast<std::size_t>(c)]][members[static_cast<std::size_t>(r)]] - (r == c ? 1.0 : 0.0);
        }
    }
    a.row(m - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs(m - 1) = 1.0;
    const Eigen::VectorXd sol = a.fullPivLu().solve(rhs);

    std::vector<double> pi(n, 0.0);
    double total = 0.0;
    for (Eigen::Index r = 0; r < m; ++r) {
        const double v = std::max(0.0, sol(r));
        pi[members[static_cast<std::size_t>(r)]] = v;
        total += v;
    }
    for (double& v : pi) {
        v /= total;
    }
    return pi;
}

Matrix context_chain(const MarkovSpec& chain) {
    const std::size_t a = chain.alphabet;
    const std::size_t states = ipow(a, chain.order);
    Matrix p(states, std::vector<double>(states, 0.0));
    for (std::size_t c = 0; c < states; ++c) {
        for (std::size_t s = 0; s < a; ++s) {
            p[c][(c * a + s) % states] += chain.transition[c][s];
        }
    }
    return p;
}

std::vector<double> stationary_init(const MarkovSpec& chain) {
    require(chain.order >= 1, "markov order must be >= 1");
    require(chain.alphabet >= 2, "markov alphabet must have >= 2 symbols");
    check_stochastic(chain.transition, ipow(chain.alphabet, chain.order), chain.alphabet, "transition");
    return stationary_distribution(context_chain(chain));
}

ProcessModel::ProcessModel(Spec spec) : spec_(std::move(spec)) {
    std::visit(
        [this](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidSpec>) {
                require(s.probs.size() >= 2, "iid model needs >= 2 symbols");
                check_distribution(s.probs, "probs");
                alphabet_size_ = static_cast<std::uint32_t>(s.probs.size());
            } else if constexpr (std::is_same_v<T, MarkovSpec>) {
                require(s.order >= 1, "markov order must be >= 1");
                require(s.alphabet >= 2, "markov alphabet must have >= 2 symbols");
                const std::size_t contexts = ipow(s.alphabet, s.order);
                check_stochastic(s.transition, contexts, s.alphabet, "transition");
                if (s.init) {
                    require(s.init->size() == contexts, "init: expected one entry per context");
                    check_distribution(*s.init, "init");
                } else {
                    stationary_ = stationary_distribution(context_chain(s));
                }
                alphabet_size_ = s.alphabet;
            } else if constexpr (std::is_same_v<T, HmmSpec>) {
                const std::size_t states = s.transition.size();
                require(states >= 1, "hmm needs >= 1 hidden state");
                check_stochastic(s.transition, states, states, "transition");
                require(!s.emission.empty() && s.emission[0].size() >= 2, "emission needs >= 2 symbols");
                check_stochastic(s.emission, states, s.emission[0].size(), "emission");
                if (s.init) {
                    require(s.init->size() == states, "init: expected one entry per hidden state");
                    check_distribution(*s.init, "init");
                } else {
                    stationary_ = stationary_distribution(s.transition);
                }
                alphabet_size_ = static_cast<std::uint32_t>(s.emission[0].size());
            } else if constexpr (std::is_same_v<T, TranslationSpec>) {
                require(s.alpha > 0.0 && s.alpha < 1.0, "translation alpha must be in (0, 1)");
                if (s.r0) {
                    require(*s.r0 >= 0.0 && *s.r0 < 1.0, "translation r0 must be in [0, 1)");
                }
                alphabet_size_ = 2;
            } else {
                require(s.delta > 0.0 && s.delta < 1.0, "diagonal delta must be in (0, 1)");
                for (std::size_t i = 1; i < s.levels.size(); ++i) {
                    require(s.levels[i] > s.levels[i - 1], "diagonal levels must be strictly increasing");
                }
                alphabet_size_ = 2;
            }
        },
        spec_);
}

ProcessModel ProcessModel::bernoulli(double p_one) { return ProcessModel(IidSpec{{1.0 - p_one, p_one}}); }

ProcessModel ProcessModel::two_state_markov(double p, double q) {
    return ProcessModel(MarkovSpec{1, 2, {{1.0 - p, p}, {q, 1.0 - q}}, std::nullopt});
}

std::string_view ProcessModel::type_name() const noexcept {
    static constexpr std::string_view names[] = {"iid", "markov", "hmm", "translation", "diagonal"};
    return names[spec_.index()];
}

bool ProcessModel::has_marginals() const noexcept {
    if (std::holds_alternative<IidSpec>(spec_)) {
        return true;
    }
    if (const auto* m = std::get_if<MarkovSpec>(&spec_)) {
        return !m->init.has_value();
    }
    if (const auto* h = std::get_if<HmmSpec>(&spec_)) {
        return !h->init.has_value();
    }
    return false;
}

double ProcessModel::marginal_prob(std::span<const Symbol> word) const {
    if (!has_marginals()) {
        fail(Errc::unsupported_model,
             std::string("model type '") + std::string(type_name()) + "' has no exact stationary marginals");
    }
    require(!word.empty(), "word must have length >= 1");
    for (Symbol s : word) {
        if (s >= alphabet_size_) {
            fail(Errc::alphabet_mismatch, "word symbol outside the model alphabet");
        }
    }
    if (const auto* iid = std::get_if<IidSpec>(&spec_)) {
        double p = 1.0;
        for (Symbol s : word) {
            p *= iid->probs[s];
        }
        return p;
    }
    if (const auto* mk = std::get_if<MarkovSpec>(&spec_)) {
        const std::size_t k = mk->order;
        const std::size_t a = mk->alphabet;
        if (word.size() <= k) {
            // sum the context law over all contexts starting with `word`
            std::size_t prefix = 0;
            for (Symbol s : word) {
                prefix = prefix * a + s;
            }
            const std::size_t span = ipow(a, k - word.size());
            double p = 0.0;
            for (std::size_t c = prefix * span; c < (prefix + 1) * span; ++c) {
                p += stationary_[c];
            }
            return p;
        }
        const std::size_t states = stationary_.size();
        std::size_t ctx = 0;
        for (std::size_t i = 0; i < k; ++i) {
            ctx = ctx * a + word[i];
        }
        double p = stationary_[ctx];
        for (std::size_t i = k; i < word.size() && p > 0.0; ++i) {
            p *= mk->transition[ctx][word[i]];
            ctx = (ctx * a + word[i]) % states;
        }
        return p;
    }
    const auto& hmm = std::get<HmmSpec>(spec_);
    const std::size_t s = hmm.transition.size();
    std::vector<double> alpha(s), next(s);
    for (std::size_t i = 0; i < s; ++i) {
        alpha[i] = stationary_[i] * hmm.emission[i][word[0]];
    }
    for (std::size_t t = 1; t < word.size(); ++t) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < s; ++i) {
            if (alpha[i] == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < s; ++j) {
                next[j] += alpha[i] * hmm.transition[i][j];
            }
        }
        for (std::size_t j = 0; j < s; ++j) {
            next[j] *= hmm.emission[j][word[t]];
        }
        alpha.swap(next);
    }
    return std::accumulate(alpha.begin(), alpha.end(), 0.0);
}

TranslationRun translation_sample(const TranslationSpec& spec, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample length must be >= 1");
    require(spec.alpha > 0.0 && spec.alpha < 1.0, "translation alpha must be in (0, 1)");
    Rng rng(seed);
    const std::uint64_t step = static_cast<std::uint64_t>(std::ldexp(static_cast<long double>(spec.alpha), 64));
    std::uint64_t r = spec.r0 ? static_cast<std::uint64_t>(std::ldexp(static_cast<long double>(*spec.r0), 64)) : rng.next();
    constexpr std::uint64_t half = std::uint64_t{1} << 63;
    std::vector<Symbol> xs(n);
    std::vector<std::uint64_t> hidden(n);
    for (std::size_t i = 0; i < n; ++i) {
        r += step;  // wraps mod 2^64, i.e. mod 1
        hidden[i] = r;
        xs[i] = r > half ? 1 : 0;
    }
    return TranslationRun{Sample::discrete(2, std::move(xs)), std::move(hidden), step};
}

DiagonalRun diagonal_adversary_sample(const DiagonalSpec& spec, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample length must be >= 1");
    require(spec.delta > 0.0 && spec.delta < 1.0, "diagonal delta must be in (0, 1)");
    for (std::size_t i = 1; i < spec.levels.size(); ++i) {
        require(spec.levels[i] > spec.levels[i - 1], "diagonal levels must be strictly increasing");
    }
    Rng rng(seed);
    const std::size_t regions = spec.levels.size() / 2;
    // region r covers positions (levels[2r], levels[2r+1]] with a u/d branch
    auto region_of = [&](std::size_t pos) -> std::optional<std::size_t> {
        for (std::size_t r = 0; r < regions; ++r) {
            if (pos > spec.levels[2 * r] && pos <= spec.levels[2 * r + 1]) {
                return r;
            }
        }
        return std::nullopt;
    };

    std::vector<bool> switch_up(regions);
    for (std::size_t r = 0; r < regions; ++r) {
        switch_up[r] = rng.bernoulli(0.5);
    }
    std::size_t pos = 0;
    bool up_branch = false;
    if (!spec.start_at_zero) {
        // M(i) = delta (1 - delta)^i
        const double u = rng.uniform();
        pos = static_cast<std::size_t>(std::floor(std::log1p(-u) / std::log1p(-spec.delta)));
        if (auto r = region_of(pos)) {
            up_branch = rng.bernoulli(0.5);
            switch_up[*r] = up_branch;
        }
    }

    DiagonalRun run{Sample::discrete(2, std::vector<Symbol>(n, 1)), std::nullopt, 0};
    std::vector<Symbol> xs(n);
    for (std::size_t t = 0; t < n; ++t) {
        xs[t] = up_branch ? 0 : 1;
        if (rng.bernoulli(spec.delta)) {
            pos = 0;
            up_branch = false;
            ++run.returns_to_zero;
            continue;
        }
        const auto here = region_of(pos);
        ++pos;
        const auto there = region_of(pos);
        if (here && !there) {
            // through reset R: rerandomize the switch
            switch_up[*here] = rng.bernoulli(0.5);
            up_branch = false;
        } else if (!here && there) {
            // through switch S
            up_branch = switch_up[*there];
            if (!run.first_switch_up) {
                run.first_switch_up = up_branch;
            }
        }
    }
    run.sample = Sample::discrete(2, std::move(xs));
    return run;
}

Sample sample(const ProcessModel& model, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample length must be >= 1");
    const auto& spec = model.spec();
    if (const auto* t = std::get_if<TranslationSpec>(&spec)) {
        return translation_sample(*t, n, seed).sample;
    }
    if (const auto* d = std::get_if<DiagonalSpec>(&spec)) {
        return diagonal_adversary_sample(*d, n, seed).sample;
    }
    Rng rng(seed);
    std::vector<Symbol> xs(n);
    if (const auto* iid = std::get_if<IidSpec>(&spec)) {
        for (auto& x : xs) {
            x = static_cast<Symbol>(rng.categorical(iid->probs));
        }
    } else if (const auto* mk = std::get_if<MarkovSpec>(&spec)) {
        const std::size_t a = mk->alphabet;
        const std::size_t states = mk->transition.size();
        std::size_t ctx = rng.categorical(mk->init ? std::span<const double>(*mk->init) : model.stationary());
        // the first k symbols spell the initial context
        std::size_t c = ctx;
        std::vector<Symbol> head(mk->order);
        for (std::size_t i = mk->order; i-- > 0;) {
            head[i] = static_cast<Symbol>(c % a);
            c /= a;
        }
        for (std::size_t t = 0; t < n; ++t) {
            if (t < mk->order) {
                xs[t] = head[t];
                continue;
            }
            const auto s = static_cast<Symbol>(rng.categorical(mk->transition[ctx]));
            xs[t] = s;
            ctx = (ctx * a + s) % states;
        }
    } else {
        const auto& hmm = std::get<HmmSpec>(spec);
        std::size_t h = rng.categorical(hmm.init ? std::span<const double>(*hmm.init) : model.stationary());
        for (std::size_t t = 0; t < n; ++t) {
            xs[t] = static_cast<Symbol>(rng.categorical(hmm.emission[h]));
            h = rng.categorical(hmm.transition[h]);
        }
    }
    return Sample::discrete(model.alphabet_size(), std::move(xs));
}

} // namespace procdist
