#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace nlwlab {

struct QuadOptions {
    double abs_tol = 1e-15;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7,15); either end may be infinite. Throws RefinementError
// when the tolerance is not met within max_intervals.
QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {});
// Sum over consecutive break points (first/last may be infinite).
QuadResult integrate(const Integrand& f, const std::vector<double>& breaks, const QuadOptions& opt = {});

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order);
double composite_gauss(const Integrand& f, double a, double b, int panels, int order = 8);

// Soliton separators: theta_j = (zeta_j + zeta_{j+1})/2 and y_j = tanh(theta_j).
struct Separators {
    std::vector<double> centers;
    std::vector<double> theta;  // k-1 interior values
    std::vector<double> y;      // y_0 = -1, ..., y_k = 1

    explicit Separators(std::vector<double> centers);
    // Window (theta_{j-1}, theta_j) of soliton j (0-based) in xi; infinite at the ends.
    std::pair<double, double> window(int j) const;
    bool interlaced() const;
};

struct TableEntry {
    double numeric = 0.0;
    double model = 0.0;
    double ratio = 0.0;
};

// kappa0^{alpha+beta} int cosh^{-2alpha/(p-1)}(z) cosh^{-2beta/(p-1)}(z+dzeta) dz
// against |dzeta| e^{-2beta dzeta/(p-1)} (alpha = beta) or e^{-2 min(alpha,beta) dzeta/(p-1)}.
TableEntry I1(double alpha, double beta, double dzeta, double p);
// Window of soliton j, kappa(d_j)^alpha kappa(d_i)^beta, against the neighbor-gap bound.
TableEntry I2(double alpha, double beta, int i, int j, const std::vector<double>& centers, double p);
double A_ijl(int i, int j, int l, const std::vector<double>& centers, double p);
double c1_triple(double p);
double B_ijl(int i, int j, int l, const std::vector<double>& centers, double p);

struct JiResult {
    double value = 0.0;
    double error = 0.0;
    std::vector<double> zeros;  // sign changes of the soliton sum
};
JiResult J_i(int i, const std::vector<double>& centers, const std::vector<int>& signs, double p,
             const QuadOptions& opt = {});
// Same integral on a fixed graded mesh: panels per piece of the singular splitting.
double J_i_graded(int i, const std::vector<double>& centers, const std::vector<int>& signs, double p, int panels);

}  // namespace nlwlab
