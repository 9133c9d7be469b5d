#pragma once

#include <vector>

namespace nlwlab {

// Uniform x grid; periodic grids identify x_min with x_min + n dx.
struct XLine {
    double x_min = -1.0;
    double dx = 1.0 / 512;
    int n = 1024;
    bool periodic = true;

    double x(int i) const { return x_min + i * dx; }
    double x_max() const { return x_min + (n - 1) * dx; }
    double length() const { return n * dx; }
    // Nearest node index, wrapped when periodic, clamped otherwise.
    int nearest(double x) const;
};

struct USnapshot {
    XLine line;
    double t = 0.0;
    std::vector<double> u;
    std::vector<double> ut;
};

// Cubic Lagrange interpolation at x; optional derivative of the same cubic.
// Throws InputError when x lies outside a non-periodic line.
double interp_cubic(const XLine& line, const std::vector<double>& v, double x, double* dvdx = nullptr);

}  // namespace nlwlab
