#pragma once

#include <functional>
#include <vector>

#include "nlwlab/ode.hpp"

namespace nlwlab {

// Perturbation R_i(s, zeta) added to the i-th center equation (before the c1 factor).
using TodaPerturbation = std::function<double(int i, double s, const std::vector<double>& zeta)>;

struct TodaState {
    double s = 0.0;
    std::vector<double> zeta;
    std::vector<int> signs;
    double c1 = 1.0;
    double p = 3.0;
    TodaPerturbation perturbation;  // empty means R = 0

    void validate() const;
    int k() const { return static_cast<int>(zeta.size()); }
};

struct GapVector {
    std::vector<double> L;  // L_i = zeta_{i+1} - zeta_i
    std::vector<double> S;  // S_j, j = 1..r
    int r = 0;
    double sigma = 0.0;
    double L_bar = 0.0;     // max L - min L
    double J = 0.0;         // sum exp(-2 L_i/(p-1))
};

GapVector gaps(const std::vector<double>& zeta, double p, double eps0 = 1.0 / 1000.0);

std::vector<double> toda_rhs(const TodaState& state);

// J-scaled stress perturbation R_i = e_i amplitude J^{1+delta0}.
TodaPerturbation toda_stress(std::vector<int> signs, double amplitude, double delta0, double p);

struct TodaSample {
    double s = 0.0;
    std::vector<double> zeta;
    GapVector gap;
    double zeta_mean = 0.0;
};

struct TodaControls {
    OdeControls ode{1e-12, 1e-14};
    int samples_per_decade = 40;  // log-spaced in s - s_origin
};

struct TodaTrajectory {
    std::vector<TodaSample> samples;
    TodaState final_state;
};

TodaTrajectory integrate_toda(const TodaState& state, double s_end, const TodaControls& controls = {});

// e^{2L/(p-1)} = e^{2L0/(p-1)} + 4 c1 (s - s0)/(p-1).
double closed_form_k2(double s, double L0, double s0, double c1, double p);
// Same-sign pair: the gap reaches zero at s0 + collapse_time.
double collapse_time_k2(double L0, double c1, double p);

struct EquidFit {
    std::vector<double> slope;      // fitted a_i
    std::vector<double> offset;     // fitted b_i
    std::vector<double> expected;   // (i - (k+1)/2) (p-1)/2
    std::vector<double> max_residual;
};
EquidFit fit_equid(const TodaTrajectory& trajectory, double p, double s_lo = 1e3, double s_hi = 1e4);

struct GapBalance {
    double max_gap_spread = 0.0;   // max over late samples of max_i |L_i - L_1|
    double min_sigma_ratio = 0.0;  // min of sigma'/(c1 sum exp(-2L/(p-1)))
    double max_sigma_ratio = 0.0;
    double lower_bound = 0.0;      // eps0^{r-1}/2
    double upper_bound = 3.0;
    bool sandwich_holds = false;
};
GapBalance gap_balance(const TodaTrajectory& trajectory, const TodaState& prototype, double s_late);

}  // namespace nlwlab
