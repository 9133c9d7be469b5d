#include "nlwlab/grid.hpp"

#include "nlwlab/errors.hpp"

namespace nlwlab {

XiGrid::XiGrid(double lo, double hi, int count) : xi_min(lo), xi_max(hi), n(count) {
    if (n < 3) throw InputError("XiGrid needs at least 3 nodes");
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw InputError("XiGrid needs xi_min < xi_max");
}

WState::WState(Field a, Field b, double s_) : w1(std::move(a)), w2(std::move(b)), s(s_) {
    require_same_grid(w1.grid, w2.grid);
}

void require_same_grid(const XiGrid& a, const XiGrid& b) {
    if (!(a == b)) throw InputError("fields live on different grids");
}

namespace {

template <class Op>
Field combine(const Field& a, const Field& b, Op op) {
    require_same_grid(a.grid, b.grid);
    if (a.rep != b.rep) throw InputError("fields carry different representations");
    Field out(a.grid, a.rep);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}

}  // namespace

Field operator+(const Field& a, const Field& b) { return combine(a, b, [](double x, double y) { return x + y; }); }
Field operator-(const Field& a, const Field& b) { return combine(a, b, [](double x, double y) { return x - y; }); }

Field operator*(double c, const Field& a) {
    Field out(a.grid, a.rep);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

WState operator+(const WState& a, const WState& b) { return WState(a.w1 + b.w1, a.w2 + b.w2, a.s); }
WState operator-(const WState& a, const WState& b) { return WState(a.w1 - b.w1, a.w2 - b.w2, a.s); }
WState operator*(double c, const WState& a) { return WState(c * a.w1, c * a.w2, a.s); }

}  // namespace nlwlab
