#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "procdist/error.hpp"

namespace procdist {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

class Alphabet {
public:
    enum class Kind { discrete, real };

    static Alphabet discrete(std::uint32_t size);
    static Alphabet real() { return Alphabet(Kind::real, 0); }

    Kind kind() const noexcept { return kind_; }
    bool is_discrete() const noexcept { return kind_ == Kind::discrete; }
    bool is_real() const noexcept { return kind_ == Kind::real; }
    /// Number of symbols; 0 for the real line.
    std::uint32_t size() const noexcept { return size_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    Alphabet(Kind kind, std::uint32_t size) : kind_(kind), size_(size) {}

    Kind kind_;
    std::uint32_t size_;
};

/// A finite observation sequence, either symbol indices over a finite alphabet
/// or finite reals. Immutable once built.
class Sample {
public:
    static Sample discrete(std::uint32_t alphabet_size, std::vector<Symbol> values);
    static Sample real(std::vector<double> values);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    bool is_discrete() const noexcept { return alphabet_.is_discrete(); }
    bool is_real() const noexcept { return alphabet_.is_real(); }
    std::size_t size() const noexcept { return is_discrete() ? symbols_.size() : reals_.size(); }

    std::span<const Symbol> symbols() const;
    std::span<const double> reals() const;

    /// Half-open subrange [begin, end) as a new sample over the same alphabet.
    Sample slice(std::size_t begin, std::size_t end) const;

    friend bool operator==(const Sample&, const Sample&) = default;

private:
    Sample(Alphabet alphabet, std::vector<Symbol> symbols, std::vector<double> reals)
        : alphabet_(alphabet), symbols_(std::move(symbols)), reals_(std::move(reals)) {}

    Alphabet alphabet_;
    std::vector<Symbol> symbols_;
    std::vector<double> reals_;
};

/// Half-open cube prod_i [coords_i 2^-l, (coords_i + 1) 2^-l) in R^m.
struct Cell {
    int level = 0;
    std::vector<std::int64_t> coords;

    std::size_t dim() const noexcept { return coords.size(); }
    bool contains(std::span<const double> point) const;

    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Exact window frequency: count / windows, with 0/0 meaning "sample shorter than pattern".
struct Frequency {
    std::size_t count = 0;
    std::size_t windows = 0;

    double value() const noexcept {
        return windows == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(windows);
    }
};

/// Number of length-k windows in a sample of length n (0 when n < k).
constexpr std::size_t window_count(std::size_t n, std::size_t k) noexcept { return n >= k ? n - k + 1 : 0; }

Frequency frequency(const Sample& x, std::span<const Symbol> word);
Frequency frequency(const Sample& x, const Cell& cell);

/// floor(v * 2^level), exact for doubles; throws if the scaled value overflows.
std::int64_t cell_coord(double v, int level);

std::vector<Cell> quantize(const Sample& x, std::size_t m, int level);

/// Smallest |x_i - y_j| over unequal pairs; nullopt when every pair is equal.
std::optional<double> min_gap(const Sample& x, const Sample& y);

void require_same_alphabet(const Sample& x, const Sample& y);

} // namespace procdist
