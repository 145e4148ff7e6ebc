#include <doctest.h>

#include <cmath>
#include <limits>

#include "procdist/core.hpp"

using namespace procdist;

TEST_CASE("two-dimensional cell frequency of a short real sample") {
    const Sample x = Sample::real({0.5, 1.5, 1.2, 1.4, 2.1});
    const Cell unit_square{0, {1, 1}};
    const Frequency f = frequency(x, unit_square);
    CHECK(f.count == 2);
    CHECK(f.windows == 4);
    CHECK(f.value() == 0.5);
}

TEST_CASE("cells are half-open") {
    const Cell c{1, {2}};  // [1, 1.5)
    const double in[] = {1.0};
    const double out[] = {1.5};
    CHECK(c.contains(in));
    CHECK_FALSE(c.contains(out));
    CHECK(cell_coord(-0.5, 1) == -1);
    CHECK(cell_coord(-0.25, 1) == -1);
    CHECK(cell_coord(0.75, 2) == 3);
    CHECK_THROWS_AS(cell_coord(1e300, 60), Error);
}

TEST_CASE("word frequency counts overlapping windows") {
    const Sample x = Sample::discrete(2, {0, 0, 0, 1});
    const Symbol w00[] = {0, 0};
    const Frequency f = frequency(x, w00);
    CHECK(f.count == 2);
    CHECK(f.windows == 3);
    const Symbol longer[] = {0, 0, 0, 1, 0};
    CHECK(frequency(x, longer).windows == 0);
    CHECK(frequency(x, longer).value() == 0.0);
    CHECK(window_count(3, 5) == 0);
}

TEST_CASE("sample validation") {
    CHECK_THROWS_AS(Sample::discrete(2, {0, 2}), Error);
    CHECK_THROWS_AS(Sample::discrete(1, {0}), Error);
    CHECK_THROWS_AS(Sample::real({0.0, std::numeric_limits<double>::quiet_NaN()}), Error);
    CHECK_THROWS_AS(Sample::real({std::numeric_limits<double>::infinity()}), Error);
    const Sample x = Sample::discrete(3, {0, 1, 2, 1});
    CHECK(x.size() == 4);
    CHECK(x.alphabet().size() == 3);
    try {
        (void)x.reals();
        FAIL("expected an alphabet mismatch");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::alphabet_mismatch);
    }
    const Sample s = x.slice(1, 3);
    CHECK(s == Sample::discrete(3, {1, 2}));
    CHECK_THROWS_AS(x.slice(3, 5), Error);
}

TEST_CASE("alphabet compatibility") {
    const Sample a = Sample::discrete(2, {0, 1});
    const Sample b = Sample::discrete(3, {0, 1});
    const Sample r = Sample::real({0.0, 1.0});
    CHECK_NOTHROW(require_same_alphabet(a, a));
    CHECK_THROWS_AS(require_same_alphabet(a, b), Error);
    CHECK_THROWS_AS(require_same_alphabet(a, r), Error);
}

TEST_CASE("quantize maps windows to cells") {
    const Sample x = Sample::real({0.1, 0.6, 0.9});
    const auto cells = quantize(x, 2, 1);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0] == Cell{1, {0, 1}});
    CHECK(cells[1] == Cell{1, {1, 1}});
    CHECK_THROWS_AS(quantize(x, 4, 1), Error);
}

TEST_CASE("min_gap looks only at unequal cross pairs") {
    const Sample x = Sample::real({0.0, 1.0, 5.0});
    const Sample y = Sample::real({1.0, 1.25, 7.0});
    REQUIRE(min_gap(x, y).has_value());
    CHECK(*min_gap(x, y) == 0.25);
    const Sample c = Sample::real({2.0, 2.0});
    CHECK_FALSE(min_gap(c, c).has_value());
    CHECK(*min_gap(Sample::real({0.0}), Sample::real({-0.5})) == 0.5);
}
