#include "procdist/classify.hpp"

namespace procdist {

ClassifyResult three_sample(const Sample& x, const Sample& y, const Sample& z, const Truncation& t) {
    require_same_alphabet(x, z);
    require_same_alphabet(y, z);
    ClassifyResult r;
    r.d_xz = dd(x, z, t);
    r.d_yz = dd(y, z, t);
    r.label = r.d_xz.value <= r.d_yz.value ? Label::x : Label::y;
    return r;
}

} // namespace procdist
