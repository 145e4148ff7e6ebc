#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "oracles.hpp"
#include "procdist/kgram_index.hpp"
#include "procdist/processes.hpp"

using namespace procdist;

namespace {

std::vector<Symbol> random_symbols(Rng& rng, std::size_t n, std::uint32_t a) {
    std::vector<Symbol> v(n);
    for (auto& s : v) {
        s = static_cast<Symbol>(rng.next() % a);
    }
    return v;
}

} // namespace

TEST_CASE("suffix array and LCP agree with direct sorting") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.next() % 200;
        const std::uint64_t bound = 1 + rng.next() % 4;
        std::vector<std::uint64_t> text(n);
        for (auto& c : text) {
            c = rng.next() % bound;
        }
        const auto sa = build_suffix_array(text, bound);
        std::vector<std::uint32_t> ref(n);
        std::iota(ref.begin(), ref.end(), 0u);
        std::sort(ref.begin(), ref.end(), [&](std::uint32_t a, std::uint32_t b) {
            return std::lexicographical_compare(text.begin() + a, text.end(), text.begin() + b, text.end());
        });
        REQUIRE(std::vector<std::uint32_t>(sa.begin(), sa.end()) == ref);
        const auto lcp = build_lcp(text, sa);
        CHECK(lcp[0] == 0);
        for (std::size_t r = 1; r < n; ++r) {
            std::uint32_t l = 0;
            while (sa[r - 1] + l < n && sa[r] + l < n && text[sa[r - 1] + l] == text[sa[r] + l]) {
                ++l;
            }
            REQUIRE(lcp[r] == l);
        }
    }
}

TEST_CASE("counts match a sliding-window scan") {
    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + rng.next() % 300;
        const std::uint32_t a = 2 + rng.next() % 3;
        const auto xs = random_symbols(rng, n, a);
        const Sample x = Sample::discrete(a, xs);
        const KGramIndex index(x);
        for (int q = 0; q < 20; ++q) {
            const auto word = random_symbols(rng, 1 + rng.next() % 6, a);
            REQUIRE(index.count(word) == oracle::naive_count(xs, word));
            CHECK(index.frequency(word).windows == window_count(n, word.size()));
        }
        const std::size_t k = 1 + rng.next() % std::min<std::size_t>(5, n);
        const auto table = index.kgram_frequencies(k);
        std::size_t total = 0;
        for (const auto& [word, f] : table) {
            REQUIRE(f.count == oracle::naive_count(xs, word));
            total += f.count;
        }
        CHECK(total == window_count(n, k));
    }
}

TEST_CASE("window classes identify equal windows across texts") {
    Rng rng(3);
    const auto a = random_symbols(rng, 120, 2);
    const auto b = random_symbols(rng, 90, 2);
    const std::span<const Symbol> texts[] = {a, b};
    const SuffixIndex index(texts, 2);
    for (std::size_t k : {1u, 3u, 6u}) {
        const auto wc = index.window_classes(k);
        REQUIRE(wc.ids[0].size() == window_count(a.size(), k));
        REQUIRE(wc.ids[1].size() == window_count(b.size(), k));
        for (std::size_t i = 0; i < wc.ids[0].size(); i += 7) {
            for (std::size_t j = 0; j < wc.ids[1].size(); j += 5) {
                const bool same = std::equal(a.begin() + i, a.begin() + i + k, b.begin() + j);
                REQUIRE(same == (wc.ids[0][i] == wc.ids[1][j]));
            }
        }
    }
}

TEST_CASE("index edge cases") {
    const Sample x = Sample::discrete(3, {0, 1, 0});
    const KGramIndex index(x);
    const Symbol outside[] = {3};
    CHECK_THROWS_AS(index.count(outside), Error);
    const Symbol too_long[] = {0, 1, 0, 1};
    CHECK(index.count(too_long) == 0);
    const Symbol whole[] = {0, 1, 0};
    CHECK(index.count(whole) == 1);
    CHECK(index.kgram_frequencies(3).size() == 1);
    CHECK_THROWS_AS(index.kgram_frequencies(4), Error);
}
