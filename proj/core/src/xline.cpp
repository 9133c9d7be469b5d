#include "nlwlab/xline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlwlab/errors.hpp"

namespace nlwlab {

int XLine::nearest(double x) const {
    const long i = std::lround((x - x_min) / dx);
    if (periodic) return static_cast<int>(((i % n) + n) % n);
    return static_cast<int>(std::clamp<long>(i, 0, n - 1));
}

double interp_cubic(const XLine& line, const std::vector<double>& v, double x, double* dvdx) {
    const double s = (x - line.x_min) / line.dx;
    if (!line.periodic && (s < -1e-9 || s > line.n - 1 + 1e-9))
        throw InputError("interpolation point x=" + std::to_string(x) + " outside the x grid");
    long i0 = static_cast<long>(std::floor(s)) - 1;
    if (!line.periodic) i0 = std::clamp<long>(i0, 0, line.n - 4);
    const double u = s - i0;  // position relative to node i0, nodes at 0,1,2,3
    double w[4], dw[4];
    for (int a = 0; a < 4; ++a) {
        double num = 1.0, den = 1.0, dsum = 0.0;
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            num *= u - b;
            den *= a - b;
        }
        for (int c = 0; c < 4; ++c) {
            if (c == a) continue;
            double prod = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a && b != c) prod *= u - b;
            dsum += prod;
        }
        w[a] = num / den;
        dw[a] = dsum / den;
    }
    double val = 0.0, der = 0.0;
    for (int a = 0; a < 4; ++a) {
        long idx = i0 + a;
        if (line.periodic) idx = ((idx % line.n) + line.n) % line.n;
        val += w[a] * v[idx];
        der += dw[a] * v[idx];
    }
    if (dvdx) *dvdx = der / line.dx;
    return val;
}

}  // namespace nlwlab
