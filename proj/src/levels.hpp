#pragma once

// Internal helpers shared by the distance and change-point code.

#include <cstdint>
#include <span>
#include <vector>

#include "procdist/core.hpp"
#include "procdist/kgram_index.hpp"

namespace procdist::detail {

struct CodedTexts {
    std::vector<std::vector<Symbol>> texts;
    std::uint64_t bound = 0;
};

/// Dense relabelling of the level-l cell coordinates floor(v 2^l), shared across all sequences.
CodedTexts quantize_codes(std::span<const std::span<const double>> seqs, int level);

/// Number of points in the fullest 1-d cell of `values` at `level`.
std::size_t max_cell_occupancy(std::span<const double> values, int level);

/// sum over classes of |a_c nv - b_c nu| for the windows of texts 0 and 1.
long long pair_numerator(const WindowClasses& wc);

/// Shannon entropy in nats of the empirical law given by class counts.
double entropy(std::span<const std::size_t> counts, std::size_t total);

} // namespace procdist::detail
