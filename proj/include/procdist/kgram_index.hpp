#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "procdist/core.hpp"

namespace procdist {

/// Dense class ids of the length-k windows of each indexed text: two windows
/// share an id iff they spell the same word.
struct WindowClasses {
    std::size_t k = 0;
    std::size_t class_count = 0;
    /// ids[t][i] is the class of the window starting at offset i of text t.
    std::vector<std::vector<std::uint32_t>> ids;
};

/// Suffix array + LCP over one or more integer texts joined by unique separators.
class SuffixIndex {
public:
    /// Symbols of every text must be < symbol_bound.
    SuffixIndex(std::span<const std::span<const Symbol>> texts, std::uint64_t symbol_bound);

    std::size_t text_count() const noexcept { return lengths_.size(); }
    std::size_t text_length(std::size_t t) const { return lengths_.at(t); }
    std::span<const std::uint32_t> suffix_array() const noexcept { return sa_; }
    std::span<const std::uint32_t> lcp() const noexcept { return lcp_; }

    WindowClasses window_classes(std::size_t k) const;

protected:
    std::vector<std::uint64_t> text_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> lengths_;
    std::vector<std::uint32_t> text_of_;
    std::vector<std::uint32_t> sa_;
    std::vector<std::uint32_t> lcp_;
};

/// Occurrence counting for all words of a single discrete sample.
class KGramIndex : private SuffixIndex {
public:
    explicit KGramIndex(const Sample& source);

    std::size_t size() const noexcept { return text_length(0); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }

    /// Number of occurrences of word in the source; O(|word| log n).
    std::size_t count(std::span<const Symbol> word) const;
    Frequency frequency(std::span<const Symbol> word) const;

    /// Every word of length k occurring in the source with its frequency.
    std::map<Word, Frequency> kgram_frequencies(std::size_t k) const;

    using SuffixIndex::lcp;
    using SuffixIndex::suffix_array;
    using SuffixIndex::window_classes;

private:
    Alphabet alphabet_;
};

KGramIndex build_index(const Sample& x);

/// Suffix array of an integer text by prefix doubling with radix passes.
std::vector<std::uint32_t> build_suffix_array(std::span<const std::uint64_t> text, std::uint64_t symbol_bound);

/// Kasai et al. LCP; lcp[r] = lcp(sa[r-1], sa[r]), lcp[0] = 0.
std::vector<std::uint32_t> build_lcp(std::span<const std::uint64_t> text, std::span<const std::uint32_t> sa);

} // namespace procdist
