#include "nlwlab/toda.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"

namespace nlwlab {

void TodaState::validate() const {
    if (zeta.empty()) throw InputError("Toda state needs k >= 1 centers");
    if (signs.size() != zeta.size()) throw InputError("Toda state: signs and centers differ in length");
    for (int e : signs)
        if (e != 1 && e != -1) throw InputError("Toda signs must be +1 or -1");
    if (!(c1 > 0.0)) throw InputError("Toda coupling c1 must be positive");
    if (!(p > 1.0)) throw InputError("Toda exponent p must exceed 1");
    for (std::size_t i = 0; i + 1 < zeta.size(); ++i)
        if (!(zeta[i + 1] > zeta[i])) throw InputError("Toda centers must be strictly ascending");
}

GapVector gaps(const std::vector<double>& zeta, double p, double eps0) {
    GapVector g;
    const int k = static_cast<int>(zeta.size());
    for (int i = 0; i + 1 < k; ++i) g.L.push_back(zeta[i + 1] - zeta[i]);
    g.r = k / 2;
    for (int j = 1; j <= g.r; ++j) {
        double s = 0.0;
        for (int i = j; i <= k - j; ++i) s += g.L[i - 1];
        g.S.push_back(s);
        g.sigma += std::pow(eps0, j - 1) * s;
    }
    if (!g.L.empty()) {
        const auto [lo, hi] = std::minmax_element(g.L.begin(), g.L.end());
        g.L_bar = *hi - *lo;
    }
    for (double L : g.L) g.J += std::exp(-2.0 * L / (p - 1.0));
    return g;
}

std::vector<double> toda_rhs(const TodaState& st) {
    const int k = st.k();
    const double a = 2.0 / (st.p - 1.0);
    std::vector<double> out(k, 0.0);
    for (int i = 0; i < k; ++i) {
        double v = 0.0;
        if (i > 0) v -= st.signs[i - 1] * st.signs[i] * std::exp(-a * (st.zeta[i] - st.zeta[i - 1]));
        if (i + 1 < k) v += st.signs[i] * st.signs[i + 1] * std::exp(-a * (st.zeta[i + 1] - st.zeta[i]));
        if (st.perturbation) v += st.perturbation(i, st.s, st.zeta);
        out[i] = st.c1 * v;
    }
    return out;
}

TodaPerturbation toda_stress(std::vector<int> signs, double amplitude, double delta0, double p) {
    return [signs = std::move(signs), amplitude, delta0, p](int i, double, const std::vector<double>& zeta) {
        const double J = gaps(zeta, p).J;
        return signs[i] * amplitude * std::pow(J, 1.0 + delta0);
    };
}

TodaTrajectory integrate_toda(const TodaState& state, double s_end, const TodaControls& controls) {
    state.validate();
    if (!(s_end > state.s)) throw InputError("integrate_toda needs s_end > s");
    const int k = state.k();
    TodaState work = state;

    Dopri5 ode(
        [&work](double s, const std::vector<double>& z, std::vector<double>& dz) {
            work.s = s;
            work.zeta = z;
            dz = toda_rhs(work);
        },
        controls.ode);
    ode.reset(state.s, state.zeta);

    TodaTrajectory traj;
    auto record = [&](double s, const std::vector<double>& z) {
        TodaSample smp;
        smp.s = s;
        smp.zeta = z;
        smp.gap = gaps(z, state.p);
        double m = 0.0;
        for (double v : z) m += v;
        smp.zeta_mean = m / k;
        traj.samples.push_back(std::move(smp));
    };
    record(state.s, state.zeta);

    // Output times log-spaced in s measured from an origin shifted so that s0 > 0 maps to a finite log.
    const double origin = std::min(0.0, state.s - 1.0);
    const double lo = std::log10(state.s - origin), hi = std::log10(s_end - origin);
    const int count = std::max(2, static_cast<int>(std::ceil((hi - lo) * controls.samples_per_decade)));
    for (int m = 1; m <= count; ++m) {
        const double target = m == count ? s_end : origin + std::pow(10.0, lo + (hi - lo) * m / count);
        while (ode.t() < target) {
            ode.step(target);
            const auto& z = ode.y();
            for (int i = 0; i + 1 < k; ++i)
                if (!(z[i + 1] > z[i]))
                    throw CollisionError("centers " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                                             " collided at s=" + std::to_string(ode.t()),
                                         ode.t(), i);
        }
        record(ode.t(), ode.y());
    }
    traj.final_state = state;
    traj.final_state.s = ode.t();
    traj.final_state.zeta = ode.y();
    return traj;
}

double closed_form_k2(double s, double L0, double s0, double c1, double p) {
    if (!(L0 > 0.0)) throw InputError("closed_form_k2 needs L0 > 0");
    const double a = 2.0 / (p - 1.0);
    // log(e^{aL0} + 2 a c1 (s - s0)) / a, written to avoid overflow for large L0.
    const double x = 2.0 * a * c1 * (s - s0) * std::exp(-a * L0);
    return L0 + std::log1p(x) / a;
}

double collapse_time_k2(double L0, double c1, double p) {
    return (p - 1.0) / (4.0 * c1) * std::expm1(2.0 * L0 / (p - 1.0));
}

EquidFit fit_equid(const TodaTrajectory& traj, double p, double s_lo, double s_hi) {
    if (traj.samples.empty() || traj.samples.back().s < s_hi * (1.0 - 1e-9))
        throw FitError("trajectory does not reach s=" + std::to_string(s_hi));
    const int k = static_cast<int>(traj.samples.front().zeta.size());
    std::vector<double> x;
    std::vector<std::vector<double>> ys(k);
    for (const auto& smp : traj.samples) {
        if (smp.s < s_lo * (1.0 - 1e-9) || smp.s > s_hi * (1.0 + 1e-9)) continue;
        x.push_back(std::log(smp.s));
        for (int i = 0; i < k; ++i) ys[i].push_back(smp.zeta[i]);
    }
    if (x.size() < 3) throw FitError("fewer than three samples in the fit window");
    EquidFit fit;
    for (int i = 0; i < k; ++i) {
        const LineFit lf = fit_line(x, ys[i]);
        fit.slope.push_back(lf.slope);
        fit.offset.push_back(lf.intercept);
        fit.expected.push_back((i + 1 - (k + 1) / 2.0) * (p - 1.0) / 2.0);
        double worst = 0.0;
        for (std::size_t m = 0; m < x.size(); ++m)
            worst = std::max(worst, std::abs(ys[i][m] - lf.slope * x[m] - lf.intercept));
        fit.max_residual.push_back(worst);
    }
    return fit;
}

GapBalance gap_balance(const TodaTrajectory& traj, const TodaState& proto, double s_late) {
    GapBalance gb;
    const int k = proto.k();
    if (k < 2) throw InputError("gap_balance needs k >= 2");
    const int r = k / 2;
    const double eps0 = 1.0 / 1000.0;
    gb.lower_bound = std::pow(eps0, r - 1) / 2.0;
    gb.min_sigma_ratio = std::numeric_limits<double>::infinity();
    gb.max_sigma_ratio = 0.0;
    bool any = false;
    for (const auto& smp : traj.samples) {
        if (smp.s < s_late) continue;
        any = true;
        for (double L : smp.gap.L) gb.max_gap_spread = std::max(gb.max_gap_spread, std::abs(L - smp.gap.L[0]));
        TodaState st = proto;
        st.s = smp.s;
        st.zeta = smp.zeta;
        const auto dz = toda_rhs(st);
        double dsigma = 0.0;
        for (int j = 1; j <= r; ++j) {
            double dS = 0.0;
            for (int i = j; i <= k - j; ++i) dS += dz[i] - dz[i - 1];
            dsigma += std::pow(eps0, j - 1) * dS;
        }
        const double ratio = dsigma / (proto.c1 * smp.gap.J);
        gb.min_sigma_ratio = std::min(gb.min_sigma_ratio, ratio);
        gb.max_sigma_ratio = std::max(gb.max_sigma_ratio, ratio);
    }
    if (!any) throw FitError("no samples beyond s_late for gap balance");
    gb.sandwich_holds = gb.min_sigma_ratio >= gb.lower_bound && gb.max_sigma_ratio <= gb.upper_bound;
    return gb;
}

}  // namespace nlwlab
