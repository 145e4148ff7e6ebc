#include "procdist/kgram_index.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace procdist {

std::vector<std::uint32_t> build_suffix_array(std::span<const std::uint64_t> text, std::uint64_t symbol_bound) {
    const std::size_t n = text.size();
    std::vector<std::uint32_t> sa(n);
    if (n == 0) {
        return sa;
    }
    (void)symbol_bound;

    // dense initial ranks
    std::vector<std::uint64_t> distinct(text.begin(), text.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::uint32_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        rank[i] = static_cast<std::uint32_t>(std::lower_bound(distinct.begin(), distinct.end(), text[i]) - distinct.begin());
    }
    std::size_t classes = distinct.size();

    std::vector<std::uint32_t> cnt(std::max(classes, n) + 1);
    auto counting_sort = [&](const std::vector<std::uint32_t>& order, std::vector<std::uint32_t>& out) {
        std::fill(cnt.begin(), cnt.begin() + static_cast<std::ptrdiff_t>(classes + 1), 0U);
        for (std::uint32_t i : order) {
            ++cnt[rank[i] + 1];
        }
        for (std::size_t c = 1; c <= classes; ++c) {
            cnt[c] += cnt[c - 1];
        }
        for (std::uint32_t i : order) {
            out[cnt[rank[i]]++] = i;
        }
    };

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0U);
    counting_sort(order, sa);

    std::vector<std::uint32_t> next(n);
    for (std::size_t h = 1; classes < n; h <<= 1) {
        // order by second key: suffixes without a second half come first
        std::size_t pos = 0;
        for (std::size_t i = n - std::min(h, n); i < n; ++i) {
            order[pos++] = static_cast<std::uint32_t>(i);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (sa[r] >= h) {
                order[pos++] = static_cast<std::uint32_t>(sa[r] - h);
            }
        }
        counting_sort(order, sa);

        auto second = [&](std::uint32_t i) -> std::int64_t { return i + h < n ? rank[i + h] : -1; };
        next[sa[0]] = 0;
        std::uint32_t c = 0;
        for (std::size_t r = 1; r < n; ++r) {
            if (rank[sa[r]] != rank[sa[r - 1]] || second(sa[r]) != second(sa[r - 1])) {
                ++c;
            }
            next[sa[r]] = c;
        }
        rank.swap(next);
        classes = static_cast<std::size_t>(c) + 1;
        if (h >= n) {
            break;
        }
    }
    return sa;
}

std::vector<std::uint32_t> build_lcp(std::span<const std::uint64_t> text, std::span<const std::uint32_t> sa) {
    const std::size_t n = text.size();
    std::vector<std::uint32_t> lcp(n, 0), inv(n);
    for (std::size_t r = 0; r < n; ++r) {
        inv[sa[r]] = static_cast<std::uint32_t>(r);
    }
    std::size_t h = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (inv[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[inv[i] - 1];
        while (i + h < n && j + h < n && text[i + h] == text[j + h]) {
            ++h;
        }
        lcp[inv[i]] = static_cast<std::uint32_t>(h);
        if (h > 0) {
            --h;
        }
    }
    return lcp;
}

SuffixIndex::SuffixIndex(std::span<const std::span<const Symbol>> texts, std::uint64_t symbol_bound) {
    require(!texts.empty(), "suffix index needs at least one text");
    std::size_t total = 0;
    for (const auto& t : texts) {
        total += t.size() + 1;
    }
    require(total < (std::size_t{1} << 31), "text too long for 32-bit suffix array");
    text_.reserve(total);
    text_of_.reserve(total);
    for (std::size_t t = 0; t < texts.size(); ++t) {
        offsets_.push_back(text_.size());
        lengths_.push_back(texts[t].size());
        for (Symbol s : texts[t]) {
            require(s < symbol_bound, "symbol outside declared bound");
            text_.push_back(s);
            text_of_.push_back(static_cast<std::uint32_t>(t));
        }
        text_.push_back(symbol_bound + t);  // unique separator
        text_of_.push_back(static_cast<std::uint32_t>(t));
    }
    sa_ = build_suffix_array(text_, symbol_bound + texts.size());
    lcp_ = build_lcp(text_, sa_);
}

WindowClasses SuffixIndex::window_classes(std::size_t k) const {
    require(k >= 1, "window length must be >= 1");
    WindowClasses out;
    out.k = k;
    out.ids.resize(lengths_.size());
    for (std::size_t t = 0; t < lengths_.size(); ++t) {
        out.ids[t].assign(window_count(lengths_[t], k), 0);
    }
    bool group_has_id = false;
    std::uint32_t current = 0;
    for (std::size_t r = 0; r < sa_.size(); ++r) {
        if (r == 0 || lcp_[r] < k) {
            group_has_id = false;
        }
        const std::size_t p = sa_[r];
        const std::size_t t = text_of_[p];
        const std::size_t off = p - offsets_[t];
        if (off + k > lengths_[t]) {
            continue;
        }
        if (!group_has_id) {
            current = static_cast<std::uint32_t>(out.class_count++);
            group_has_id = true;
        }
        out.ids[t][off] = current;
    }
    return out;
}

namespace {

std::vector<std::span<const Symbol>> single_text(const Sample& x) { return {x.symbols()}; }

} // namespace

KGramIndex::KGramIndex(const Sample& source)
    : SuffixIndex(single_text(source), source.alphabet().size()), alphabet_(source.alphabet()) {}

KGramIndex build_index(const Sample& x) { return KGramIndex(x); }

std::size_t KGramIndex::count(std::span<const Symbol> word) const {
    require(!word.empty(), "pattern must have length >= 1");
    const std::size_t n = size();
    if (word.size() > n) {
        return 0;
    }
    for (Symbol s : word) {
        if (s >= alphabet_.size()) {
            fail(Errc::alphabet_mismatch, "pattern symbol outside the index alphabet");
        }
    }
    // compare the first |word| symbols of suffix p with word; separator sorts above all symbols
    auto cmp = [&](std::uint32_t p) -> int {
        for (std::size_t j = 0; j < word.size(); ++j) {
            const std::uint64_t a = text_[p + j];
            if (a != word[j]) {
                return a < word[j] ? -1 : 1;
            }
        }
        return 0;
    };
    auto lo = std::partition_point(sa_.begin(), sa_.end(), [&](std::uint32_t p) { return cmp(p) < 0; });
    auto hi = std::partition_point(lo, sa_.end(), [&](std::uint32_t p) { return cmp(p) == 0; });
    return static_cast<std::size_t>(hi - lo);
}

Frequency KGramIndex::frequency(std::span<const Symbol> word) const {
    return Frequency{count(word), window_count(size(), word.size())};
}

std::map<Word, Frequency> KGramIndex::kgram_frequencies(std::size_t k) const {
    require(k >= 1 && k <= size(), "kgram_frequencies needs 1 <= k <= n");
    const WindowClasses wc = window_classes(k);
    std::vector<std::size_t> counts(wc.class_count, 0);
    std::vector<std::size_t> first(wc.class_count, 0);
    const auto& ids = wc.ids[0];
    for (std::size_t i = ids.size(); i-- > 0;) {
        ++counts[ids[i]];
        first[ids[i]] = i;
    }
    const std::size_t windows = window_count(size(), k);
    std::map<Word, Frequency> out;
    for (std::size_t c = 0; c < wc.class_count; ++c) {
        Word w(text_.begin() + static_cast<std::ptrdiff_t>(first[c]),
               text_.begin() + static_cast<std::ptrdiff_t>(first[c] + k));
        out.emplace(std::move(w), Frequency{counts[c], windows});
    }
    return out;
}

} // namespace procdist
