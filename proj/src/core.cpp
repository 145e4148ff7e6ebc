#include "procdist/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace procdist {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::alphabet_mismatch: return "alphabet_mismatch";
    case Errc::unsupported_model: return "unsupported_model";
    case Errc::no_unique_stationary: return "no_unique_stationary";
    case Errc::infeasible: return "infeasible";
    case Errc::calibration_mismatch: return "calibration_mismatch";
    case Errc::parse_error: return "parse_error";
    case Errc::io_error: return "io_error";
    }
    return "unknown";
}

Alphabet Alphabet::discrete(std::uint32_t size) {
    require(size >= 2, "discrete alphabet needs at least 2 symbols, got " + std::to_string(size));
    return Alphabet(Kind::discrete, size);
}

Sample Sample::discrete(std::uint32_t alphabet_size, std::vector<Symbol> values) {
    Alphabet a = Alphabet::discrete(alphabet_size);
    require(!values.empty(), "sample must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= alphabet_size) {
            fail(Errc::invalid_argument, "symbol " + std::to_string(values[i]) + " at index " + std::to_string(i) +
                                             " outside alphabet of size " + std::to_string(alphabet_size));
        }
    }
    return Sample(a, std::move(values), {});
}

Sample Sample::real(std::vector<double> values) {
    require(!values.empty(), "sample must be nonempty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            fail(Errc::invalid_argument, "non-finite value at index " + std::to_string(i));
        }
    }
    return Sample(Alphabet::real(), {}, std::move(values));
}

std::span<const Symbol> Sample::symbols() const {
    if (!is_discrete()) {
        fail(Errc::alphabet_mismatch, "expected a discrete sample");
    }
    return symbols_;
}

std::span<const double> Sample::reals() const {
    if (!is_real()) {
        fail(Errc::alphabet_mismatch, "expected a real-valued sample");
    }
    return reals_;
}

Sample Sample::slice(std::size_t begin, std::size_t end) const {
    require(begin < end && end <= size(), "invalid slice [" + std::to_string(begin) + ", " + std::to_string(end) + ")");
    if (is_discrete()) {
        return Sample(alphabet_, std::vector<Symbol>(symbols_.begin() + begin, symbols_.begin() + end), {});
    }
    return Sample(alphabet_, {}, std::vector<double>(reals_.begin() + begin, reals_.begin() + end));
}

void require_same_alphabet(const Sample& x, const Sample& y) {
    if (x.alphabet() != y.alphabet()) {
        fail(Errc::alphabet_mismatch, "samples are over different alphabets");
    }
}

std::int64_t cell_coord(double v, int level) {
    const double scaled = std::floor(std::ldexp(v, level));
    constexpr double limit = 9.2e18;
    if (!std::isfinite(scaled) || std::abs(scaled) >= limit) {
        fail(Errc::invalid_argument, "value " + std::to_string(v) + " out of range at level " + std::to_string(level));
    }
    return static_cast<std::int64_t>(scaled);
}

bool Cell::contains(std::span<const double> point) const {
    if (point.size() != coords.size()) {
        return false;
    }
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (cell_coord(point[i], level) != coords[i]) {
            return false;
        }
    }
    return true;
}

Frequency frequency(const Sample& x, std::span<const Symbol> word) {
    require(!word.empty(), "pattern must have length >= 1");
    const auto xs = x.symbols();
    for (Symbol s : word) {
        if (s >= x.alphabet().size()) {
            fail(Errc::alphabet_mismatch, "pattern symbol outside the sample alphabet");
        }
    }
    const std::size_t k = word.size();
    Frequency f{0, window_count(xs.size(), k)};
    for (std::size_t i = 0; i < f.windows; ++i) {
        if (std::equal(word.begin(), word.end(), xs.begin() + static_cast<std::ptrdiff_t>(i))) {
            ++f.count;
        }
    }
    return f;
}

Frequency frequency(const Sample& x, const Cell& cell) {
    require(cell.dim() >= 1, "cell must have dimension >= 1");
    const auto xs = x.reals();
    const std::size_t m = cell.dim();
    Frequency f{0, window_count(xs.size(), m)};
    for (std::size_t i = 0; i < f.windows; ++i) {
        if (cell.contains(xs.subspan(i, m))) {
            ++f.count;
        }
    }
    return f;
}

std::vector<Cell> quantize(const Sample& x, std::size_t m, int level) {
    const auto xs = x.reals();
    require(m >= 1 && m <= xs.size(), "quantize needs 1 <= m <= n");
    require(level >= 0, "quantize needs level >= 0");
    std::vector<std::int64_t> coords(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        coords[i] = cell_coord(xs[i], level);
    }
    std::vector<Cell> cells;
    cells.reserve(xs.size() - m + 1);
    for (std::size_t i = 0; i + m <= xs.size(); ++i) {
        cells.push_back(Cell{level, std::vector<std::int64_t>(coords.begin() + i, coords.begin() + i + m)});
    }
    return cells;
}

std::optional<double> min_gap(const Sample& x, const Sample& y) {
    const auto xs = x.reals();
    std::vector<double> ys(y.reals().begin(), y.reals().end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    double best = std::numeric_limits<double>::infinity();
    for (double v : xs) {
        auto it = std::lower_bound(ys.begin(), ys.end(), v);
        // nearest strictly larger and strictly smaller y values
        auto above = it;
        if (above != ys.end() && *above == v) {
            ++above;
        }
        if (above != ys.end()) {
            best = std::min(best, *above - v);
        }
        if (it != ys.begin()) {
            best = std::min(best, v - *std::prev(it));
        }
    }
    if (!std::isfinite(best)) {
        return std::nullopt;
    }
    return best;
}

} // namespace procdist
