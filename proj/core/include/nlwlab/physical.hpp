#pragma once

#include <limits>
#include <string>
#include <vector>

#include "nlwlab/grid.hpp"
#include "nlwlab/params.hpp"
#include "nlwlab/xline.hpp"

namespace nlwlab {

struct CauchyData {
    std::string name;
    XLine line;
    std::vector<double> u0, u1;
    double margin = 0.0;  // documented distance from the data support to an open boundary

    void validate() const;
};

struct PhysicalControls {
    double cfl = 0.9;
    double ceiling = 1e8;         // per-point freeze level
    double fallback_level = 1e6;  // threshold-crossing fallback for the T fit
    double history_start = 1.0;   // first amplitude level recorded per point
    int history_per_decade = 20;
    double c_acc = 0.02;          // dt <= c_acc * (kappa0/|u|)^{(p-1)/2}
    // Neighbours stop seeing a point once |u| > kappa0 (coupling_cells dx)^{-2/(p-1)}, the level
    // where its own profile width drops below the grid; 0 keeps full coupling up to the freeze.
    double coupling_cells = 0.25;
    double t_end = std::numeric_limits<double>::infinity();
    double snapshot_dt = 0.0;     // > 0 stores a snapshot at the first step past each multiple
    double window_lo = -std::numeric_limits<double>::infinity();
    double window_hi = std::numeric_limits<double>::infinity();
    bool linear = false;          // f = 0, for the d'Alembert check
    long max_steps = 200'000'000;
};

struct PointHistory {
    std::vector<double> t, u;  // amplitude crossings, then the freeze sample
    double freeze_time = std::numeric_limits<double>::quiet_NaN();
    double detach_time = std::numeric_limits<double>::quiet_NaN();
    bool frozen = false;
};

struct Evolution {
    XLine line;
    std::vector<USnapshot> snapshots;
    std::vector<PointHistory> history;
    std::vector<double> point_min;  // running minimum of u while unfrozen
    USnapshot final_state;
    long steps = 0;
    std::string stop_reason;
    double ceiling = 1e8;
};

// One kick-drift-kick leapfrog step. Frozen points (nonzero entries) are not updated.
void step_u(USnapshot& state, double dt, const Params& params, const std::vector<char>& frozen = {},
            bool linear = false);

Evolution evolve_u(const CauchyData& data, const Params& params, const PhysicalControls& controls = {});

enum class TFitMode {
    Amplitude,  // last amplitude decade below the ceiling
    Resolved,   // last decade of T - t above min_tau_cells dx
};

struct TFitControls {
    TFitMode mode = TFitMode::Amplitude;
    double dx = 1.0 / 512;
    double min_tau_cells = 2.0;  // samples closer than this to T are under-resolved
    double decades = 1.0;        // fit range in T - t above the cutoff
    int min_samples = 4;
    double ceiling = 1e8;
    double fallback_level = 1e6;
    double clean_until = std::numeric_limits<double>::infinity();  // first neighbour detachment
};

struct TEstimate {
    double T = std::numeric_limits<double>::quiet_NaN();
    double quality = std::numeric_limits<double>::infinity();  // relative rms of the rate fit
    bool fallback = false;
    bool ok = false;
};
// Fits |u|^{-(p-1)/2} linear in t over the last resolved decade of T - t and extrapolates
// to zero. Falls back to the first crossing of fallback_level plus the ODE remaining time.
TEstimate estimate_T(const PointHistory& history, const Params& params, const TFitControls& controls);

enum class PointClass { R, S, Unknown };
std::string to_string(PointClass c);

struct ClassifyControls {
    double tau = 0.1;              // slope band for S
    double slope_slack = 0.02;     // estimation slack beyond |slope| = 1
    double margin = 0.05;          // energy test: E < 2 E(kappa0) (1 - margin)
    int resolution_points = 32;    // minimum half-width of a usable cone, in dx
    int edge_cells = 16;           // minimum gap between the cone edges and the blow-up curve, in dx
    int neighbor_radius = 16;      // strict-bound check radius, in dx
    double xi_max = 8.0;
    int xi_n = 801;
    int threads = 1;
};

struct BlowupCurve {
    double dx = 0.0;
    std::vector<double> x, T, quality;
    std::vector<char> envelope, fallback;
    std::vector<double> slope_l, slope_r;
    std::vector<PointClass> cls;
    std::vector<int> k_est;
    std::vector<double> energy_ratio;  // E(w_x0)/E(kappa0) at the probe time, NaN if none
    std::vector<double> probe_tau;     // T(x0) - t of the probe snapshot
    std::vector<double> freeze_time;   // freeze time, NaN for points that never froze
    std::vector<char> slope_test, energy_test, strict_bound;
    std::vector<char> lipschitz_flag;
    int lipschitz_violations = 0;

    int index_of(double x) const;
    int count(PointClass c) const;
};

// T per window point, envelope estimate for isolated unfrozen points, slopes, Lipschitz flags.
// dx, ceiling and clean_until in `fit` are filled from the evolution.
BlowupCurve scan_blowup_curve(const Evolution& evo, double window_lo, double window_hi, const Params& params,
                              TFitControls fit = {});
// Fills classification fields at index i (energy probe uses the evolution snapshots).
void classify_point(BlowupCurve& curve, int i, const Evolution& evo, const Params& params,
                    const ClassifyControls& controls = {});
void classify_all(BlowupCurve& curve, const Evolution& evo, const Params& params, const ClassifyControls& controls = {});

struct EnergyProbe {
    bool ok = false;
    double t = 0.0;
    double tau = 0.0;
    double energy = 0.0;
    int k = 0;
};
// Smallest tau = n dx (n >= resolution_points) whose cone edges stay edge_cells below the
// blow-up curve. Edges leaving the scanned window count as resolved. NaN without T.
double resolvable_tau(const BlowupCurve& curve, int i, const ClassifyControls& controls);
// Self-similar energy of the cone at (x0, T0) from the latest usable snapshot with T0 - t >= tau_lo.
EnergyProbe probe_energy(const Evolution& evo, double x0, double T0, const Params& params,
                         const ClassifyControls& controls, double tau_lo);
// Probes every usable snapshot with tau_lo <= T0 - t <= tau_hi, latest first.
std::vector<EnergyProbe> energy_series(const Evolution& evo, double x0, double T0, const Params& params,
                                       const ClassifyControls& controls, double tau_lo, double tau_hi);

struct ChapeauReport {
    double beta_fit = 0.0;
    double beta_expected = 0.0;
    double constant = 0.0;
    int points = 0;
    bool all_positive = false;
    bool log_corrected = false;  // beta_fit > threshold
};
ChapeauReport chapeau_bound_check(const std::vector<double>& x, const std::vector<double>& T, double x0, double T0,
                                  int k, double p, double r_min, double r_max, double beta_threshold = 0.1);
ChapeauReport chapeau_bound_check(const BlowupCurve& curve, int i0, int k, double p, double r_max = 0.25);

struct TrackPoint {
    double t = 0.0;
    double z = 0.0;
    double zeta = 0.0;
    double u = 0.0;
    double predicted = 0.0;  // e_j kappa0 cosh^{2/(p-1)}(zeta) (T0-t)^{-2/(p-1)}
    int sign = 0;
};
struct SignedLines {
    std::vector<std::vector<TrackPoint>> tracks;
    std::vector<double> t_lost;  // snapshot times where the decomposition failed
    bool truncated = false;
    int k_last = 0;
};
SignedLines signed_lines(const Evolution& evo, double x0, double T0, const Params& params, double tau_min,
                         double tau_max, const ClassifyControls& controls = {});

struct LowerBoundReport {
    double R = 0.0;
    double R0 = 0.0;
    double M = 0.0;
    double min_u = 0.0;
    int violations = 0;
};
LowerBoundReport lower_bound_monitor(const Evolution& evo, const CauchyData& data, double R, double T_max,
                                     const Params& params, double tol = 1e-6);

void write_curve_csv(const BlowupCurve& curve, const std::string& path);
void write_tracks_csv(const SignedLines& lines, const std::string& path);

}  // namespace nlwlab
