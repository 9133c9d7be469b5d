#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nlwlab/grid.hpp"
#include "nlwlab/ode.hpp"
#include "nlwlab/params.hpp"
#include "nlwlab/xline.hpp"

namespace nlwlab {

// w = (T0-t)^{2/(p-1)} u(x0 + (T0-t) y, t), s = -log(T0-t), sampled at y = tanh(xi).
WState selfsimilar_transform(const USnapshot& snap, double x0, double T0, const XiGrid& grid, const Params& params);

// (dw/ds, d^2w/ds^2) of the self-similar equation on the xi grid.
std::pair<Field, Field> rhs_w(const WState& state, const Params& params);

// Uniform grid on the closed interval [-1, 1] used by the time stepper.
struct ConeGrid {
    int n = 1025;
    double h() const { return 2.0 / (n - 1); }
    double y(int i) const { return -1.0 + i * h(); }
};

// Product quadrature weights for int g(y) (1-y^2)^gamma dy with piecewise quadratic g.
std::vector<double> cone_weights(const ConeGrid& grid, double gamma);

struct ConeState {
    ConeGrid grid;
    std::vector<double> w, v;  // w and dw/ds
    double s = 0.0;
};

ConeState to_cone(const WState& state, const ConeGrid& grid);
WState from_cone(const ConeState& state, const XiGrid& grid);
double cone_energy(const ConeState& state, const Params& params);
// int (dw/ds)^2 rho / (1-y^2) dy.
double cone_dissipation(const ConeState& state, const Params& params);
double cone_norm_H(const ConeState& state, const Params& params);

enum class WStatus { Completed, FrameBlowup };

struct WControls {
    int cone_n = 1025;
    OdeControls ode{1e-9, 1e-11};
    double ceiling_factor = 1e3;  // frame blow-up when sup|w| > ceiling_factor * kappa0
    double energy_tol = 1e-6;     // per-step increase allowed: energy_tol * (1 + |E|)
    double snapshot_ds = 0.5;
};

struct WTrajectory {
    XiGrid grid;
    std::vector<WState> snapshots;
    std::vector<std::size_t> snapshot_step;  // index into the per-step series
    std::vector<double> s;            // per accepted step, including the start
    std::vector<double> energy;
    std::vector<double> dissipation;  // int (dw/ds)^2 rho/(1-y^2)
    std::vector<double> sup_w;
    std::vector<double> norm;
    WStatus status = WStatus::Completed;
    double p = 3.0;
};

WTrajectory evolve_w(const WState& state, double s_end, const Params& params, const WControls& controls = {});

struct EnergyReport {
    int intervals = 0;
    int violations = 0;            // steps with E increase beyond tolerance
    double max_increase = 0.0;     // max over steps of (E_{n+1} - E_n)/(1 + |E_n|)
    double total_drop = 0.0;       // E(start) - E(end)
    double total_dissipated = 0.0; // 4/(p-1) int D ds
    double worst_ratio_error = 0.0;  // max over resolved intervals of |dE/(-diss) - 1|
    double overall_ratio = 1.0;
    // Same ratio restricted to the leading steps with sup|w| <= resolved_sup * kappa0; a frame
    // blow-up ends with a singular burst no grid resolves.
    double resolved_ratio = 1.0;
    double resolved_until = 0.0;  // last s of that segment
};
EnergyReport energy_monitor(const WTrajectory& trajectory, double energy_tol = 1e-6, double resolved_sup = 10.0);

void write_trajectory_csv(const WTrajectory& trajectory, const std::string& path);
void write_snapshot_csv(const WState& state, const Params& params, const std::string& path);

}  // namespace nlwlab
