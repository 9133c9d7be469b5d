#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace nlwlab {

// Uniform grid in xi; the carrier of functions of y = tanh(xi) on (-1,1).
struct XiGrid {
    double xi_min = -12.0;
    double xi_max = 12.0;
    int n = 2049;

    XiGrid() = default;
    XiGrid(double xi_min, double xi_max, int n);
    static XiGrid symmetric(double xi_max, int n) { return XiGrid(-xi_max, xi_max, n); }

    double h() const { return (xi_max - xi_min) / (n - 1); }
    double xi(int i) const { return xi_min + i * h(); }
    double y(int i) const { return std::tanh(xi(i)); }
    // 1 - y^2 without cancellation.
    double sech2(int i) const {
        const double c = std::cosh(xi(i));
        return 1.0 / (c * c);
    }
    bool operator==(const XiGrid& o) const = default;
};

enum class Representation {
    YForm,    // r(y)
    BarForm,  // (1-y^2)^{1/(p-1)} r
    HatForm,  // (1-y^2)^{1/(p-1)+1/2} r
};

struct Field {
    XiGrid grid;
    std::vector<double> values;
    Representation rep = Representation::YForm;

    Field() = default;
    explicit Field(const XiGrid& g, Representation r = Representation::YForm)
        : grid(g), values(static_cast<std::size_t>(g.n), 0.0), rep(r) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// (w, dw/ds) at self-similar time s. Also used for any pair q = (q1, q2).
struct WState {
    Field w1;
    Field w2;
    double s = 0.0;

    WState() = default;
    explicit WState(const XiGrid& g, double s = 0.0) : w1(g), w2(g), s(s) {}
    WState(Field a, Field b, double s = 0.0);

    const XiGrid& grid() const { return w1.grid; }
};

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double c, const Field& a);
WState operator+(const WState& a, const WState& b);
WState operator-(const WState& a, const WState& b);
WState operator*(double c, const WState& a);

void require_same_grid(const XiGrid& a, const XiGrid& b);

}  // namespace nlwlab
