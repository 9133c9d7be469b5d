#pragma once

#include <vector>

#include "nlwlab/grid.hpp"
#include "nlwlab/params.hpp"

namespace nlwlab {

// log cosh x, finite for all real x.
double log_cosh(double x);

double zeta_of(double d);  // d = -tanh(zeta)
double d_of(double zeta);

// kappa(d,y) = kappa0 (1-d^2)^{1/(p-1)} / (1+dy)^{2/(p-1)}.
double kappa(double d, double y, const Params& params);
// kappa0 cosh^{-2/(p-1)}(z).
double kappa_bar(double z, const Params& params);
double rho(double y, const Params& params);
// Integral of rho over (-1,1).
double rho_mass(const Params& params);
// E(kappa0, 0).
double soliton_energy(const Params& params);

Field weight_table(const XiGrid& grid, const Params& params);

// Soliton centred at zeta in YForm, evaluated through the xi identity.
Field soliton(double zeta, const XiGrid& grid, const Params& params);
// Derivative of kappa(d, .) in d at d = -tanh(zeta).
Field soliton_dd(double zeta, const XiGrid& grid, const Params& params);
Field soliton_sum(const std::vector<double>& zetas, const std::vector<int>& signs, const XiGrid& grid,
                  const Params& params);

// Discretization of the weighted space on a XiGrid. The node masses carry rho dy,
// the edge weights carry (1-y^2) rho (d/dy)^2 dy = cosh^{-4/(p-1)} (d/dxi)^2 dxi.
struct XiMetric {
    XiGrid grid;
    std::vector<double> xi, y, cosh2, mass, edge;

    XiMetric(const XiGrid& grid, const Params& params);

    double integrate(const std::vector<double>& g) const;  // sum g * mass
    double dirichlet(const std::vector<double>& a, const std::vector<double>& b) const;
    // Stiffness product (K r)_i with natural end conditions.
    std::vector<double> stiffness(const std::vector<double>& r) const;
};

// L r = rho^{-1} (rho (1-y^2) r')', conservative form -K r / mass.
Field apply_L(const Field& r, const Params& params);
// Same operator in non-conservative form cosh^2 (r'' - (4/(p-1)) tanh r').
Field apply_L_pointwise(const Field& r, const Params& params);
Field d_dxi(const Field& r);

double phi_inner(const WState& q, const WState& r, const Params& params);
// Integration-by-parts form with the pointwise operator.
double phi_inner_ibp(const WState& q, const WState& r, const Params& params);
double norm_H(const WState& q, const Params& params);
double norm_H0(const Field& r, const Params& params);
double energy(const WState& state, const Params& params);

// Eigenmodes F_0, F_1 of the linearized operator around kappa(d).
WState F_lambda(int lambda, double d, const XiGrid& grid, const Params& params);
WState F_mode(int lambda, double zeta, const XiGrid& grid, const Params& params);

// Adjoint mode W_lambda with the source G of (-L + 1) W_{lambda,1} = G, scaled by
// the constant that makes pi_lambda(F_lambda) = 1.
struct AdjointMode {
    WState W;
    Field source;
    double c = 0.0;  // c0 for lambda=0, c1(d) for lambda=1
};
AdjointMode W_lambda(int lambda, double d, const XiGrid& grid, const Params& params);
// With solve_first = false only W2, the source and the constant are built; that is all
// a projection needs.
AdjointMode W_mode(int lambda, double zeta, const XiGrid& grid, const Params& params, bool solve_first = true);

Field transform(const Field& r, Representation target, const Params& params);
// Flat H^1 x L^2 norm of (r1 bar, r2 hat) in xi.
double flat_norm(const WState& q, const Params& params);
double lp_rho_norm(const Field& r, double exponent, const Params& params);
double sup_bar(const Field& r, const Params& params);

}  // namespace nlwlab
