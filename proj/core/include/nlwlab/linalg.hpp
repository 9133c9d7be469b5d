#pragma once

#include <vector>

namespace nlwlab {

// Tridiagonal system with sub-diagonal a (a[0] unused), diagonal b and
// super-diagonal c (c[n-1] unused). Gaussian elimination with partial pivoting.
std::vector<double> solve_tridiagonal(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                                      std::vector<double> rhs);

// Dense row-major n x n solve with partial pivoting; throws NumericalError if singular.
std::vector<double> solve_dense(std::vector<double> m, std::vector<double> rhs, int n);

// Least-squares line y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace nlwlab
