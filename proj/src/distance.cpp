#include "procdist/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "levels.hpp"
#include "procdist/kgram_index.hpp"

namespace procdist {

namespace detail {

CodedTexts quantize_codes(std::span<const std::span<const double>> seqs, int level) {
    std::vector<std::vector<double>> scaled(seqs.size());
    std::vector<double> all;
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        scaled[s].reserve(seqs[s].size());
        for (double v : seqs[s]) {
            const double c = std::floor(std::ldexp(v, level));
            if (!std::isfinite(c)) {
                fail(Errc::invalid_argument, "value " + std::to_string(v) + " overflows at level " + std::to_string(level));
            }
            scaled[s].push_back(c);
        }
        all.insert(all.end(), scaled[s].begin(), scaled[s].end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    CodedTexts out;
    out.bound = all.size();
    out.texts.resize(seqs.size());
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        out.texts[s].reserve(scaled[s].size());
        for (double c : scaled[s]) {
            out.texts[s].push_back(static_cast<Symbol>(std::lower_bound(all.begin(), all.end(), c) - all.begin()));
        }
    }
    return out;
}

std::size_t max_cell_occupancy(std::span<const double> values, int level) {
    std::vector<double> c;
    c.reserve(values.size());
    for (double v : values) {
        c.push_back(std::floor(std::ldexp(v, level)));
    }
    std::sort(c.begin(), c.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.size();) {
        std::size_t j = i;
        while (j < c.size() && c[j] == c[i]) {
            ++j;
        }
        best = std::max(best, j - i);
        i = j;
    }
    return best;
}

long long pair_numerator(const WindowClasses& wc) {
    const auto& xa = wc.ids[0];
    const auto& xb = wc.ids[1];
    const auto nu = static_cast<long long>(xa.size());
    const auto nv = static_cast<long long>(xb.size());
    std::vector<long long> a(wc.class_count, 0), b(wc.class_count, 0);
    for (auto id : xa) {
        ++a[id];
    }
    for (auto id : xb) {
        ++b[id];
    }
    long long num = 0;
    for (std::size_t c = 0; c < wc.class_count; ++c) {
        num += std::llabs(a[c] * nv - b[c] * nu);
    }
    return num;
}

double entropy(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) {
        return 0.0;
    }
    const double n = static_cast<double>(total);
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

} // namespace detail

double level_term(long long numerator, long long nu, long long nv) noexcept {
    if (nu > 0 && nv > 0) {
        return static_cast<double>(numerator) / (static_cast<double>(nu) * static_cast<double>(nv));
    }
    // a sample shorter than the pattern has all-zero frequencies
    return (nu > 0 || nv > 0) ? 1.0 : 0.0;
}

Truncation Truncation::discrete(std::size_t k_max) {
    require(k_max >= 1, "k_max must be >= 1");
    Truncation t;
    t.mode = Mode::truncated;
    t.k_max = k_max;
    return t;
}

Truncation Truncation::real(std::size_t m_max, std::size_t l_max) {
    require(m_max >= 1 && l_max >= 1, "m_max and l_max must be >= 1");
    Truncation t;
    t.mode = Mode::truncated;
    t.m_max = m_max;
    t.l_max = l_max;
    return t;
}

Truncation Truncation::exact_tail(std::size_t m_max) {
    require(m_max >= 1, "m_max must be >= 1");
    Truncation t;
    t.mode = Mode::exact_tail;
    t.m_max = m_max;
    return t;
}

const char* mode_name(Truncation::Mode mode) noexcept {
    switch (mode) {
    case Truncation::Mode::automatic: return "automatic";
    case Truncation::Mode::truncated: return "truncated";
    case Truncation::Mode::exact_tail: return "exact_tail";
    }
    return "unknown";
}

std::size_t ceil_log2(std::size_t n) {
    std::size_t k = 0;
    while ((std::size_t{1} << k) < n) {
        ++k;
    }
    return k;
}

Truncation default_truncation(std::size_t n1, std::size_t n2) {
    return Truncation::discrete(std::max<std::size_t>(1, ceil_log2(std::max(n1, n2))));
}

namespace {

constexpr std::size_t kMaxLevel = 52;

std::size_t occupancy_level(std::span<const std::span<const double>> seqs, std::size_t per_cell) {
    for (std::size_t l = 1; l <= kMaxLevel; ++l) {
        bool ok = true;
        for (const auto& s : seqs) {
            if (detail::max_cell_occupancy(s, static_cast<int>(l)) > per_cell) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return l;
        }
    }
    return kMaxLevel;
}

} // namespace

Truncation default_truncation(const Sample& x, const Sample& y) {
    require_same_alphabet(x, y);
    const std::size_t n = std::max(x.size(), y.size());
    if (x.is_discrete()) {
        return default_truncation(x.size(), y.size());
    }
    const std::size_t per_cell = std::max<std::size_t>(1, ceil_log2(n));
    const std::span<const double> seqs[] = {x.reals(), y.reals()};
    return Truncation::real(std::max<std::size_t>(1, ceil_log2(n)), occupancy_level(seqs, per_cell));
}

Truncation resolve_truncation(const Truncation& t, const Sample& x, const Sample& y) {
    if (t.is_automatic()) {
        return default_truncation(x, y);
    }
    if (x.is_discrete()) {
        require(t.mode == Truncation::Mode::truncated && t.k_max >= 1,
                "discrete samples need a k_max truncation (exact_tail applies to real samples only)");
        return t;
    }
    if (t.mode == Truncation::Mode::exact_tail) {
        require(t.m_max >= 1, "exact_tail needs m_max >= 1");
        return t;
    }
    require(t.m_max >= 1 && t.l_max >= 1, "real samples need m_max and l_max truncation");
    return t;
}

DistanceEstimate dd_discrete(const Sample& x, const Sample& y, const Truncation& t) {
    require_same_alphabet(x, y);
    if (!x.is_discrete()) {
        fail(Errc::alphabet_mismatch, "dd_discrete needs discrete samples");
    }
    DistanceEstimate est;
    est.truncation = resolve_truncation(t, x, y);
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::span<const Symbol> texts[] = {x.symbols(), y.symbols()};
    const SuffixIndex index(texts, x.alphabet().size());
    for (std::size_t k = 1; k <= est.truncation.k_max; ++k) {
        const auto nu = static_cast<long long>(window_count(n1, k));
        const auto nv = static_cast<long long>(window_count(n2, k));
        long long num = 0;
        if (nu > 0 && nv > 0) {
            num = detail::pair_numerator(index.window_classes(k));
        }
        const LevelTerm lt{k, 0, WeightScheme::weight(k), level_term(num, nu, nv)};
        est.value += lt.weight * lt.term;
        est.per_level.push_back(lt);
    }
    return est;
}

DistanceEstimate dd_real(const Sample& x, const Sample& y, const Truncation& t) {
    require_same_alphabet(x, y);
    if (!x.is_real()) {
        fail(Errc::alphabet_mismatch, "dd_real needs real-valued samples");
    }
    DistanceEstimate est;
    est.truncation = resolve_truncation(t, x, y);
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::size_t m_max = est.truncation.m_max;

    std::size_t levels = est.truncation.l_max;
    bool tail = false;
    if (est.truncation.mode == Truncation::Mode::exact_tail) {
        tail = true;
        est.min_gap = min_gap(x, y);
        // first level whose cell width 2^-l is <= the gap; all equal values never split
        std::size_t l = 1;
        if (est.min_gap) {
            while (std::ldexp(1.0, -static_cast<int>(l)) > *est.min_gap) {
                ++l;
            }
        }
        levels = l;
        est.tail_level = l;
    }

    // summed level-major: for each l, every pattern length m
    const std::span<const double> seqs[] = {x.reals(), y.reals()};
    for (std::size_t l = 1; l <= levels; ++l) {
        const auto coded = detail::quantize_codes(seqs, static_cast<int>(l));
        const std::span<const Symbol> texts[] = {coded.texts[0], coded.texts[1]};
        const SuffixIndex index(texts, std::max<std::uint64_t>(coded.bound, 1));
        const double wl = (tail && l == levels) ? WeightScheme::tail_from(l) : WeightScheme::weight(l);
        for (std::size_t m = 1; m <= m_max; ++m) {
            const auto nu = static_cast<long long>(window_count(n1, m));
            const auto nv = static_cast<long long>(window_count(n2, m));
            long long num = 0;
            if (nu > 0 && nv > 0) {
                num = detail::pair_numerator(index.window_classes(m));
            }
            const LevelTerm lt{m, l, WeightScheme::weight(m) * wl, level_term(num, nu, nv)};
            est.value += lt.weight * lt.term;
            est.per_level.push_back(lt);
        }
    }
    return est;
}

DistanceEstimate dd(const Sample& x, const Sample& y, const Truncation& t) {
    require_same_alphabet(x, y);
    return x.is_discrete() ? dd_discrete(x, y, t) : dd_real(x, y, t);
}

namespace {

Truncation resolve_model_truncation(const Truncation& t, std::size_t n) {
    if (t.is_automatic()) {
        return default_truncation(n, n);
    }
    require(t.mode == Truncation::Mode::truncated && t.k_max >= 1, "model distances need a k_max truncation");
    return t;
}

void require_marginals(const ProcessModel& model) {
    if (!model.has_marginals()) {
        fail(Errc::unsupported_model,
             std::string("model type '") + std::string(model.type_name()) + "' has no exact stationary marginals");
    }
}

} // namespace

DistanceEstimate dd_sample_model(const Sample& x, const ProcessModel& model, const Truncation& t) {
    if (!x.is_discrete()) {
        fail(Errc::alphabet_mismatch, "sample-to-model distance needs a discrete sample");
    }
    require_marginals(model);
    if (x.alphabet().size() != model.alphabet_size()) {
        fail(Errc::alphabet_mismatch, "sample alphabet size " + std::to_string(x.alphabet().size()) +
                                          " differs from model alphabet size " + std::to_string(model.alphabet_size()));
    }
    DistanceEstimate est;
    est.truncation = resolve_model_truncation(t, x.size());
    const KGramIndex index(x);
    const auto xs = x.symbols();
    for (std::size_t k = 1; k <= est.truncation.k_max; ++k) {
        const std::size_t windows = window_count(xs.size(), k);
        double term = 1.0;  // no windows: every word has frequency 0, so the term is sum_B rho(B)
        if (windows > 0) {
            const WindowClasses wc = index.window_classes(k);
            std::vector<std::size_t> counts(wc.class_count, 0), first(wc.class_count, 0);
            for (std::size_t i = wc.ids[0].size(); i-- > 0;) {
                ++counts[wc.ids[0][i]];
                first[wc.ids[0][i]] = i;
            }
            term = 0.0;
            double covered = 0.0;
            for (std::size_t c = 0; c < wc.class_count; ++c) {
                const double p = model.marginal_prob(xs.subspan(first[c], k));
                covered += p;
                term += std::abs(static_cast<double>(counts[c]) / static_cast<double>(windows) - p);
            }
            // words absent from x contribute their full model mass
            term += std::max(0.0, 1.0 - covered);
        }
        const LevelTerm lt{k, 0, WeightScheme::weight(k), term};
        est.value += lt.weight * lt.term;
        est.per_level.push_back(lt);
    }
    return est;
}

DistanceEstimate dd_model_model(const ProcessModel& a, const ProcessModel& b, const Truncation& t) {
    require_marginals(a);
    require_marginals(b);
    if (a.alphabet_size() != b.alphabet_size()) {
        fail(Errc::alphabet_mismatch, "models are over different alphabets");
    }
    require(!t.is_automatic(), "model-to-model distance needs an explicit k_max");
    DistanceEstimate est;
    est.truncation = resolve_model_truncation(t, 1);
    const std::size_t size = a.alphabet_size();
    double words = 1.0;
    for (std::size_t k = 1; k <= est.truncation.k_max; ++k) {
        words *= static_cast<double>(size);
        require(words <= static_cast<double>(std::size_t{1} << 24), "alphabet^k_max too large to enumerate");
        Word w(k, 0);
        double term = 0.0;
        // odometer over A^k
        while (true) {
            term += std::abs(a.marginal_prob(w) - b.marginal_prob(w));
            std::size_t pos = k;
            while (pos > 0 && ++w[pos - 1] == size) {
                w[pos - 1] = 0;
                --pos;
            }
            if (pos == 0) {
                break;
            }
        }
        const LevelTerm lt{k, 0, WeightScheme::weight(k), term};
        est.value += lt.weight * lt.term;
        est.per_level.push_back(lt);
    }
    return est;
}

namespace {

// window class ids of every sample combined position-wise into joint ids
std::pair<std::vector<std::size_t>, std::size_t> joint_counts(const std::vector<const std::vector<std::uint32_t>*>& ids) {
    const std::size_t windows = ids.front()->size();
    std::vector<std::uint64_t> joint(windows, 0);
    std::size_t classes = 1;
    for (const auto* per_sample : ids) {
        std::unordered_map<std::uint64_t, std::uint64_t> relabel;
        relabel.reserve(windows * 2);
        for (std::size_t i = 0; i < windows; ++i) {
            const std::uint64_t key = (joint[i] << 32) | (*per_sample)[i];
            auto [it, inserted] = relabel.emplace(key, relabel.size());
            joint[i] = it->second;
        }
        classes = relabel.size();
    }
    std::vector<std::size_t> counts(classes, 0);
    for (auto j : joint) {
        ++counts[j];
    }
    return {counts, windows};
}

std::vector<std::size_t> class_counts(const WindowClasses& wc) {
    std::vector<std::size_t> counts(wc.class_count, 0);
    for (auto id : wc.ids[0]) {
        ++counts[id];
    }
    return counts;
}

} // namespace

SumInformation sum_information(std::span<const Sample> samples, const Truncation& t) {
    require(samples.size() >= 2, "sum-information needs at least 2 samples");
    const std::size_t n = samples[0].size();
    for (const auto& s : samples) {
        require_same_alphabet(samples[0], s);
        if (s.size() != n) {
            fail(Errc::invalid_argument, "sum-information needs samples of equal length");
        }
    }
    SumInformation out;
    const bool discrete = samples[0].is_discrete();
    if (t.is_automatic()) {
        if (discrete) {
            out.truncation = default_truncation(n, n);
        } else {
            std::vector<std::span<const double>> seqs;
            for (const auto& s : samples) {
                seqs.push_back(s.reals());
            }
            const std::size_t per_cell = std::max<std::size_t>(1, ceil_log2(n));
            out.truncation = Truncation::real(std::max<std::size_t>(1, ceil_log2(n)), occupancy_level(seqs, per_cell));
        }
    } else {
        out.truncation = resolve_truncation(t, samples[0], samples[1]);
        require(out.truncation.mode == Truncation::Mode::truncated, "sum-information needs a truncated schedule");
    }

    const std::size_t m_max = discrete ? out.truncation.k_max : out.truncation.m_max;
    const std::size_t l_max = discrete ? 1 : out.truncation.l_max;
    // for discrete data every quantization level is the identity, so the l-sum is its total weight
    constexpr double kDiscreteLevelWeight = std::numbers::pi * std::numbers::pi / 6.0 - 1.0;

    for (std::size_t l = 1; l <= l_max; ++l) {
        std::vector<KGramIndex> indexes;
        if (discrete) {
            for (const auto& s : samples) {
                indexes.emplace_back(s);
            }
        } else {
            std::vector<std::span<const double>> seqs;
            for (const auto& s : samples) {
                seqs.push_back(s.reals());
            }
            const auto coded = detail::quantize_codes(seqs, static_cast<int>(l));
            for (auto& text : coded.texts) {
                indexes.emplace_back(Sample::discrete(static_cast<std::uint32_t>(std::max<std::uint64_t>(coded.bound, 2)), text));
            }
        }
        const double wl = discrete ? kDiscreteLevelWeight : WeightScheme::weight(l) / static_cast<double>(l);
        for (std::size_t m = 1; m <= m_max && m <= n; ++m) {
            std::vector<WindowClasses> wcs;
            double marginal = 0.0;
            for (const auto& idx : indexes) {
                wcs.push_back(idx.window_classes(m));
                const auto counts = class_counts(wcs.back());
                marginal += detail::entropy(counts, wcs.back().ids[0].size());
            }
            std::vector<const std::vector<std::uint32_t>*> ids;
            for (const auto& wc : wcs) {
                ids.push_back(&wc.ids[0]);
            }
            const auto [jc, total] = joint_counts(ids);
            const double bracket = marginal - detail::entropy(jc, total);
            const LevelTerm lt{m, discrete ? 0 : l, WeightScheme::weight(m) / static_cast<double>(m) * wl, bracket};
            out.value += lt.weight * lt.term;
            out.per_level.push_back(lt);
        }
    }
    return out;
}

} // namespace procdist
