#include "nlwlab/linalg.hpp"

#include <cmath>
#include <utility>

#include "nlwlab/errors.hpp"

namespace nlwlab {

std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                      std::vector<double> rhs) {
    const int n = static_cast<int>(b.size());
    // Row i holds columns i..i+2 after pivoting: (b, c, e).
    std::vector<double> e(n, 0.0);
    for (int i = 0; i < n - 1; ++i) {
        if (std::abs(a[i + 1]) > std::abs(b[i])) {
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            if (i + 2 < n) std::swap(e[i], c[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (b[i] == 0.0) throw NumericalError("singular tridiagonal system at row " + std::to_string(i));
        const double m = a[i + 1] / b[i];
        b[i + 1] -= m * c[i];
        if (i + 2 < n) c[i + 1] -= m * e[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (b[n - 1] == 0.0) throw NumericalError("singular tridiagonal system at last row");
    std::vector<double> x(n);
    x[n - 1] = rhs[n - 1] / b[n - 1];
    if (n > 1) x[n - 2] = (rhs[n - 2] - c[n - 2] * x[n - 1]) / b[n - 2];
    for (int i = n - 3; i >= 0; --i) x[i] = (rhs[i] - c[i] * x[i + 1] - e[i] * x[i + 2]) / b[i];
    return x;
}

std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
        if (m[piv * n + col] == 0.0) throw NumericalError("singular dense system");
        if (piv != col) {
            for (int k = 0; k < n; ++k) std::swap(m[col * n + k], m[piv * n + k]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = m[r * n + col] / m[col * n + col];
            for (int k = col; k < n; ++k) m[r * n + k] -= f * m[col * n + k];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = rhs[r];
        for (int k = r + 1; k < n; ++k) acc -= m[r * n + k] * x[k];
        x[r] = acc / m[r * n + r];
    }
    return x;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw FitError("line fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw FitError("degenerate abscissae in line fit");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace nlwlab
