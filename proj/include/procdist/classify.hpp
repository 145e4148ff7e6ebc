#pragma once

#include "procdist/distance.hpp"

namespace procdist {

enum class Label { x, y };

struct ClassifyResult {
    Label label = Label::x;
    DistanceEstimate d_xz;
    DistanceEstimate d_yz;
};

/// Three-sample test: z is attributed to x when d(x, z) <= d(y, z), else to y.
ClassifyResult three_sample(const Sample& x, const Sample& y, const Sample& z, const Truncation& t);

} // namespace procdist
