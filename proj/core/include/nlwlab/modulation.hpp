#pragma once

#include <functional>
#include <vector>

#include "nlwlab/grid.hpp"
#include "nlwlab/params.hpp"
#include "nlwlab/profiles.hpp"

namespace nlwlab {

struct ProjectorBasis {
    double zeta = 0.0;
    double d = 0.0;
    WState F0, F1;
    AdjointMode W0, W1;
    double c0 = 0.0;
    double c1_of_d = 0.0;
};

ProjectorBasis make_basis(double zeta, const XiGrid& grid, const Params& params);
ProjectorBasis make_basis_d(double d, const XiGrid& grid, const Params& params);

// pi_lambda^d(q) = phi(W_lambda, q), evaluated as int (G q1 + W2 q2) rho.
double project(const WState& q, const ProjectorBasis& basis, int lambda, const Params& params);

// Linearized operator around kappa(d): (q2, L q1 + psi q1 - (p+3)/(p-1) q2 - 2y d_y q2).
WState linearized_apply(const WState& q, double zeta, const Params& params);

struct SolitonDecomposition {
    int k = 0;
    std::vector<int> signs;
    std::vector<double> zeta;
    WState q;
    std::vector<double> alpha1;
    double A_minus = 0.0;
    double q_norm = 0.0;
    std::vector<double> residuals;
    int iterations = 0;
};

struct ModulationControls {
    double tol = 1e-10;
    int max_iter = 50;
    double fd_step = 1e-6;
    double min_gap = 0.5;
};

SolitonDecomposition solve_modulation(const WState& state, int k, const std::vector<double>& zeta_guess,
                                      const std::vector<int>& signs, const Params& params,
                                      const ModulationControls& controls = {});

struct Seed {
    int k = 0;
    std::vector<int> signs;
    std::vector<double> zeta_guess;
};
Seed count_and_seed(const WState& state, const Params& params, double threshold = 0.3);

struct MinusSplit {
    std::vector<double> alpha1;
    WState q_minus;
};
MinusSplit split_minus(const WState& q, const std::vector<ProjectorBasis>& bases, const Params& params);

// int (q1'^2 (1-y^2) - psi q1^2 + q2^2) rho with psi = p|K|^{p-1} - 2(p+1)/(p-1)^2.
double quadratic_A_minus(const WState& q_minus, const std::vector<double>& zeta, const std::vector<int>& signs,
                         const Params& params);
double phi_psi(const WState& q, const WState& r, const Field& psi, const Params& params);

struct InteractionTerms {
    Field K;
    Field psi;
    std::vector<Field> V;
    Field R;
    std::function<Field(const Field&)> f;  // q1 -> f(K+q1) - f(K) - f'(K) q1
};
InteractionTerms interaction_terms(const std::vector<double>& zeta, const std::vector<int>& signs,
                                   const XiGrid& grid, const Params& params);

// Gap function h of the remainder bound.
double h_gap(double gap, double p);
double J_bar(const std::vector<double>& zeta, double p);

// Near-stationary k-soliton state: w = K + q1, dw/ds = q2 = sum e_j d_j' d_d kappa_j, where q1
// and d_j' solve (L + psi) q1 = -R + (p+3)/(p-1) q2 + 2y d_y q2 under pi_0^{d_j}(q) = 0.
struct PlantedState {
    WState state;
    WState q;
    std::vector<double> d_dot;
    std::vector<double> zeta_dot;
};
PlantedState planted_state(const std::vector<double>& zeta, const std::vector<int>& signs, const XiGrid& grid,
                           const Params& params);

}  // namespace nlwlab
