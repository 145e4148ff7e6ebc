#include <doctest.h>

#include "procdist/classify.hpp"

using namespace procdist;

TEST_CASE("three-sample rule picks the nearer sample") {
    const auto p = ProcessModel::two_state_markov(0.2, 0.6);
    const auto q = ProcessModel::two_state_markov(0.6, 0.2);
    const Sample x = sample(p, 5000, 1), y = sample(q, 5000, 2);
    const auto r1 = three_sample(x, y, sample(p, 5000, 3), Truncation::automatic());
    CHECK(r1.label == Label::x);
    CHECK(r1.d_xz.value < r1.d_yz.value);
    const auto r2 = three_sample(x, y, sample(q, 5000, 4), Truncation::automatic());
    CHECK(r2.label == Label::y);
}

TEST_CASE("ties go to x") {
    const Sample a = Sample::discrete(2, {0, 1, 0, 1});
    const auto r = three_sample(a, a, Sample::discrete(2, {1, 1, 1, 1}), Truncation::discrete(2));
    CHECK(r.d_xz.value == r.d_yz.value);
    CHECK(r.label == Label::x);
}

TEST_CASE("mismatched alphabets are rejected") {
    const Sample a = Sample::discrete(2, {0, 1});
    const Sample b = Sample::discrete(3, {0, 2});
    CHECK_THROWS_AS(three_sample(a, a, b, Truncation::discrete(1)), Error);
}
