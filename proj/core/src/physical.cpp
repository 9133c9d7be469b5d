#include "nlwlab/physical.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/parallel.hpp"
#include "nlwlab/profiles.hpp"
#include "nlwlab/selfsimilar.hpp"

namespace nlwlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double amplitude(double u, const Params& params) {
    return params.variant == Variant::Unsigned ? u : std::abs(u);
}

// A detached neighbour is replaced by the zero-curvature ghost 2 u_i - u_other (or u_i when both
// sides are detached), so unresolved growth cannot spread faster than the local dynamics.
void acceleration(const USnapshot& st, const Params& params, const std::vector<char>& frozen,
                  const std::vector<char>& detached, bool linear, std::vector<double>& a) {
    const XLine& L = st.line;
    const int n = L.n;
    const double inv = 1.0 / (L.dx * L.dx);
    const auto& u = st.u;
    const bool any_frozen = !frozen.empty();
    a.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        if (any_frozen && frozen[i]) continue;
        int im = i - 1, ip = i + 1;
        if (L.periodic) {
            if (im < 0) im = n - 1;
            if (ip == n) ip = 0;
        } else if (i == 0 || i == n - 1) {
            continue;  // endpoints are held at their initial values
        }
        double um = u[im], up = u[ip];
        if (!detached.empty() && (detached[im] || detached[ip])) {
            if (detached[im] && detached[ip]) {
                um = up = u[i];
            } else if (detached[im]) {
                um = 2.0 * u[i] - up;
            } else {
                up = 2.0 * u[i] - um;
            }
        }
        const double lap = ((up + um) - 2.0 * u[i]) * inv;
        a[i] = linear ? lap : lap + params.f(u[i]);
    }
}

void kick_drift_kick(USnapshot& st, double dt, const Params& params, const std::vector<char>& frozen,
                     const std::vector<char>& detached, bool linear, std::vector<double>& a) {
    const int n = st.line.n;
    auto active = [&](int i) {
        if (!frozen.empty() && frozen[i]) return false;
        return st.line.periodic || (i > 0 && i < n - 1);
    };
    for (int i = 0; i < n; ++i)
        if (active(i)) st.ut[i] += 0.5 * dt * a[i];
    for (int i = 0; i < n; ++i)
        if (active(i)) st.u[i] += dt * st.ut[i];
    acceleration(st, params, frozen, detached, linear, a);
    for (int i = 0; i < n; ++i)
        if (active(i)) st.ut[i] += 0.5 * dt * a[i];
    st.t += dt;
}

}  // namespace

void CauchyData::validate() const {
    if (line.n < 8) throw InputError("Cauchy data needs at least 8 grid points");
    if (!(line.dx > 0.0)) throw InputError("Cauchy data needs dx > 0");
    if (u0.size() != static_cast<std::size_t>(line.n) || u1.size() != static_cast<std::size_t>(line.n))
        throw InputError("Cauchy data arrays do not match the grid size");
    for (int i = 0; i < line.n; ++i)
        if (!std::isfinite(u0[i]) || !std::isfinite(u1[i])) throw InputError("Cauchy data contains non-finite values");
}

void step_u(USnapshot& state, double dt, const Params& params, const std::vector<char>& frozen, bool linear) {
    if (!(dt > 0.0)) throw InputError("step_u needs dt > 0");
    std::vector<double> a;
    acceleration(state, params, frozen, frozen, linear, a);
    kick_drift_kick(state, dt, params, frozen, frozen, linear, a);
}

Evolution evolve_u(const CauchyData& data, const Params& params, const PhysicalControls& c) {
    data.validate();
    if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw InputError("cfl must lie in (0, 1]");
    if (!(c.ceiling > c.fallback_level && c.fallback_level > c.history_start && c.history_start > 0.0))
        throw InputError("need 0 < history_start < fallback_level < ceiling");
    const XLine& L = data.line;
    const int n = L.n;

    Evolution evo;
    evo.line = L;
    evo.ceiling = c.ceiling;
    evo.history.resize(static_cast<std::size_t>(n));
    evo.point_min = data.u0;

    USnapshot st{L, 0.0, data.u0, data.u1};
    std::vector<char> frozen(static_cast<std::size_t>(n), 0);
    std::vector<char> detached(static_cast<std::size_t>(n), 0);
    const double detach_level = c.coupling_cells > 0.0
                                    ? params.kappa0 * std::pow(c.coupling_cells * L.dx, -params.beta())
                                    : std::numeric_limits<double>::infinity();
    std::vector<double> next_level(static_cast<std::size_t>(n), c.history_start);
    const double level_factor = std::pow(10.0, 1.0 / c.history_per_decade);
    std::vector<int> window;
    for (int i = 0; i < n; ++i)
        if (L.x(i) >= c.window_lo && L.x(i) <= c.window_hi) window.push_back(i);
    if (window.empty()) throw InputError("blow-up window contains no grid points");

    double next_snapshot = kNaN;
    if (c.snapshot_dt > 0.0) {
        evo.snapshots.push_back(st);
        next_snapshot = c.snapshot_dt;
    }

    auto window_done = [&] {
        for (int i : window) {
            if (frozen[i]) continue;
            const int im = L.periodic ? (i + n - 1) % n : i - 1;
            const int ip = L.periodic ? (i + 1) % n : i + 1;
            const bool left = im >= 0 && frozen[im];
            const bool right = ip < n && frozen[ip];
            if (!(left && right)) return false;
        }
        return true;
    };

    const double rate_exp = 0.5 * (params.p - 1.0);
    std::vector<double> a;
    acceleration(st, params, frozen, detached, c.linear, a);
    for (;;) {
        if (st.t >= c.t_end) {
            evo.stop_reason = "t_end";
            break;
        }
        if (evo.steps >= c.max_steps) {
            evo.stop_reason = "step budget";
            break;
        }
        double umax = 0.0;
        for (int i = 0; i < n; ++i)
            if (!frozen[i]) umax = std::max(umax, std::abs(st.u[i]));
        double dt = c.cfl * L.dx;
        if (!c.linear && umax > 0.0) dt = std::min(dt, c.c_acc * std::pow(params.kappa0 / umax, rate_exp));
        if (st.t + dt > c.t_end) dt = c.t_end - st.t;

        kick_drift_kick(st, dt, params, frozen, detached, c.linear, a);
        ++evo.steps;

        bool froze = false;
        for (int i = 0; i < n; ++i) {
            if (frozen[i]) continue;
            const double u = st.u[i];
            evo.point_min[i] = std::min(evo.point_min[i], u);
            const double amp = amplitude(u, params);
            auto& h = evo.history[i];
            if (amp >= next_level[i]) {
                h.t.push_back(st.t);
                h.u.push_back(u);
                while (next_level[i] <= amp) next_level[i] *= level_factor;
            }
            if (!detached[i] && (amp > detach_level || !std::isfinite(u) || amp > c.ceiling)) {
                detached[i] = 1;
                h.detach_time = st.t;
            }
            if (!std::isfinite(u) || amp > c.ceiling) {
                frozen[i] = 1;
                h.frozen = true;
                h.freeze_time = st.t;
                st.ut[i] = 0.0;
                a[i] = 0.0;
                froze = true;
            }
        }
        if (c.snapshot_dt > 0.0 && st.t >= next_snapshot) {
            evo.snapshots.push_back(st);
            while (next_snapshot <= st.t) next_snapshot += c.snapshot_dt;
        }
        if (froze && window_done()) {
            evo.stop_reason = "window blown up";
            break;
        }
    }
    evo.final_state = std::move(st);
    return evo;
}

TEstimate estimate_T(const PointHistory& h, const Params& params, const TFitControls& c) {
    TEstimate out;
    const std::size_t m = h.t.size();
    if (m == 0) return out;
    const double inv_beta = 0.5 * (params.p - 1.0);
    std::vector<double> Y(m);
    for (std::size_t k = 0; k < m; ++k) Y[k] = std::pow(std::abs(h.u[k]), -inv_beta);

    bool fitted = false;
    double T = h.frozen ? h.freeze_time : h.t.back();
    auto fit_samples = [&](const std::vector<double>& ts, const std::vector<double>& ys) {
        if (static_cast<int>(ts.size()) < c.min_samples) return false;
        LineFit fit;
        try {
            fit = fit_line(ts, ys);
        } catch (const FitError&) {
            return false;
        }
        if (!(fit.slope < 0.0)) return false;
        const double T_new = -fit.intercept / fit.slope;
        if (!std::isfinite(T_new)) return false;
        out.quality = fit.rms / (std::abs(fit.slope) * (ts.back() - ts.front()) + 1e-300);
        T = T_new;
        return true;
    };
    if (c.mode == TFitMode::Amplitude) {
        double top = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            if (std::abs(h.u[k]) < c.ceiling) top = std::max(top, std::abs(h.u[k]));
        std::vector<double> ts, ys;
        for (std::size_t k = 0; k < m; ++k) {
            const double a = std::abs(h.u[k]);
            if (a < c.ceiling && a >= top * std::pow(10.0, -c.decades)) {
                ts.push_back(h.t[k]);
                ys.push_back(Y[k]);
            }
        }
        bool monotone = true;
        for (std::size_t k = 1; k < ts.size(); ++k) monotone = monotone && ys[k] < ys[k - 1];
        fitted = h.frozen && monotone && fit_samples(ts, ys);
    } else {
        const double tau_lo = c.min_tau_cells * c.dx;
        const double tau_hi = tau_lo * std::pow(10.0, c.decades);
        for (int iter = 0; iter < 6; ++iter) {
            std::vector<double> ts, ys;
            for (std::size_t k = 0; k < m; ++k) {
                const double tau = T - h.t[k];
                if (h.t[k] < c.clean_until && tau >= tau_lo && tau <= tau_hi && std::abs(h.u[k]) < c.ceiling) {
                    ts.push_back(h.t[k]);
                    ys.push_back(Y[k]);
                }
            }
            const double T_old = T;
            fitted = fit_samples(ts, ys);
            if (!fitted || std::abs(T - T_old) < 1e-13 * (1.0 + std::abs(T))) break;
        }
    }
    if (fitted && out.quality < 1e-2) {
        out.T = T;
        out.ok = true;
        return out;
    }
    // Threshold-crossing fallback.
    std::size_t k = 0;
    while (k + 1 < m && std::abs(h.u[k]) < c.fallback_level) ++k;
    const double a = std::abs(h.u[k]);
    if (!(a > 0.0)) return out;
    out.T = h.t[k] + std::pow(params.kappa0 / a, inv_beta);
    out.fallback = true;
    out.ok = true;
    return out;
}

std::string to_string(PointClass c) {
    switch (c) {
        case PointClass::R: return "R";
        case PointClass::S: return "S";
        default: return "unknown";
    }
}

int BlowupCurve::index_of(double xv) const {
    if (x.empty()) return -1;
    int best = 0;
    for (int i = 1; i < static_cast<int>(x.size()); ++i)
        if (std::abs(x[i] - xv) < std::abs(x[best] - xv)) best = i;
    return best;
}

int BlowupCurve::count(PointClass c) const {
    return static_cast<int>(std::count(cls.begin(), cls.end(), c));
}

BlowupCurve scan_blowup_curve(const Evolution& evo, double lo, double hi, const Params& params, TFitControls fit) {
    const XLine& L = evo.line;
    fit.dx = L.dx;
    fit.ceiling = evo.ceiling;
    BlowupCurve cv;
    cv.dx = L.dx;
    std::vector<int> idx;
    for (int i = 0; i < L.n; ++i)
        if (L.x(i) >= lo - 1e-12 && L.x(i) <= hi + 1e-12) idx.push_back(i);
    if (idx.size() < 3) throw InputError("blow-up window needs at least 3 grid points");
    const int m = static_cast<int>(idx.size());
    cv.x.resize(m);
    cv.T.assign(m, kNaN);
    cv.quality.assign(m, kNaN);
    cv.envelope.assign(m, 0);
    cv.fallback.assign(m, 0);
    cv.freeze_time.assign(m, kNaN);

    auto detach_at = [&](int i) {
        if (L.periodic) i = ((i % L.n) + L.n) % L.n;
        if (i < 0 || i >= L.n) return std::numeric_limits<double>::infinity();
        const double t = evo.history[i].detach_time;
        return std::isnan(t) ? std::numeric_limits<double>::infinity() : t;
    };
    for (int j = 0; j < m; ++j) {
        const int i = idx[j];
        cv.x[j] = L.x(i);
        const auto& h = evo.history[i];
        if (!h.frozen) continue;
        cv.freeze_time[j] = h.freeze_time;
        TFitControls fj = fit;
        fj.clean_until = std::min(detach_at(i - 1), detach_at(i + 1));
        const TEstimate e = estimate_T(h, params, fj);
        if (!e.ok) continue;
        cv.T[j] = e.T;
        cv.quality[j] = e.quality;
        cv.fallback[j] = e.fallback;
    }
    // Unfrozen points: extrapolate T(x) + |x - x0| from each side.
    for (int j = 0; j < m; ++j) {
        if (std::isfinite(cv.T[j])) continue;
        double sum = 0.0;
        int sides = 0;
        for (int dir : {-1, 1}) {
            const int a = j + dir, b = j + 2 * dir;
            if (b < 0 || b >= m || !std::isfinite(cv.T[a]) || !std::isfinite(cv.T[b])) continue;
            const double ga = cv.T[a] + L.dx, gb = cv.T[b] + 2.0 * L.dx;
            sum += 2.0 * ga - gb;
            ++sides;
        }
        if (sides > 0) {
            cv.T[j] = sum / sides;
            cv.envelope[j] = 1;
        }
    }
    // Richardson-extrapolated one-sided slopes over offsets 2, 4, 8.
    cv.slope_l.assign(m, kNaN);
    cv.slope_r.assign(m, kNaN);
    for (int j = 0; j < m; ++j) {
        if (!std::isfinite(cv.T[j])) continue;
        auto slope = [&](int dir) {
            double s[3];
            const int offs[3] = {2, 4, 8};
            for (int q = 0; q < 3; ++q) {
                const int k = j + dir * offs[q];
                if (k < 0 || k >= m || !std::isfinite(cv.T[k])) return kNaN;
                s[q] = dir * (cv.T[k] - cv.T[j]) / (offs[q] * L.dx);
            }
            return (8.0 * s[0] - 6.0 * s[1] + s[2]) / 3.0;
        };
        cv.slope_r[j] = slope(1);
        const double sl = slope(-1);
        cv.slope_l[j] = std::isfinite(sl) ? sl : kNaN;
    }
    cv.lipschitz_flag.assign(m, 0);
    for (int j = 0; j + 1 < m; ++j) {
        if (!std::isfinite(cv.T[j]) || !std::isfinite(cv.T[j + 1])) continue;
        if (std::abs(cv.T[j + 1] - cv.T[j]) > 1.05 * L.dx) {
            cv.lipschitz_flag[j] = 1;
            ++cv.lipschitz_violations;
        }
    }
    cv.cls.assign(m, PointClass::Unknown);
    cv.k_est.assign(m, 0);
    cv.energy_ratio.assign(m, kNaN);
    cv.probe_tau.assign(m, kNaN);
    cv.slope_test.assign(m, 0);
    cv.energy_test.assign(m, 0);
    cv.strict_bound.assign(m, 0);
    return cv;
}

namespace {

// Usable when the whole backward cone is resolved and free of frozen points.
bool cone_usable(const USnapshot& snap, double x0, double tau, double ceiling) {
    const XLine& L = snap.line;
    if (!L.periodic && (x0 - tau < L.x_min || x0 + tau > L.x_max())) return false;
    if (L.periodic && 2.0 * tau >= L.length()) return false;
    const int i0 = static_cast<int>(std::floor((x0 - tau - L.x_min) / L.dx)) - 2;
    const int i1 = static_cast<int>(std::ceil((x0 + tau - L.x_min) / L.dx)) + 2;
    for (int i = i0; i <= i1; ++i) {
        const int k = L.periodic ? ((i % L.n) + L.n) % L.n : std::clamp(i, 0, L.n - 1);
        if (!std::isfinite(snap.u[k]) || std::abs(snap.u[k]) >= 0.5 * ceiling) return false;
    }
    return true;
}

EnergyProbe probe_snapshot(const USnapshot& snap, double x0, double T0, const Params& params,
                           const ClassifyControls& c) {
    EnergyProbe pr;
    pr.t = snap.t;
    pr.tau = T0 - snap.t;
    const XiGrid grid = XiGrid::symmetric(c.xi_max, c.xi_n);
    const WState w = selfsimilar_transform(snap, x0, T0, grid, params);
    pr.energy = energy(w, params);
    pr.k = count_and_seed(w, params).k;
    pr.ok = std::isfinite(pr.energy);
    return pr;
}

}  // namespace

std::vector<EnergyProbe> energy_series(const Evolution& evo, double x0, double T0, const Params& params,
                                       const ClassifyControls& c, double tau_lo, double tau_hi) {
    std::vector<EnergyProbe> out;
    for (auto it = evo.snapshots.rbegin(); it != evo.snapshots.rend(); ++it) {
        const double tau = T0 - it->t;
        if (tau < tau_lo) continue;
        if (tau > tau_hi) break;
        if (!cone_usable(*it, x0, tau, evo.ceiling)) continue;
        const EnergyProbe pr = probe_snapshot(*it, x0, T0, params, c);
        if (pr.ok) out.push_back(pr);
    }
    return out;
}

double resolvable_tau(const BlowupCurve& cv, int j, const ClassifyControls& c) {
    const int m = static_cast<int>(cv.x.size());
    if (j < 0 || j >= m || !std::isfinite(cv.T[j])) return kNaN;
    for (int n = std::max(1, c.resolution_points);; ++n) {
        const double tau = n * cv.dx;
        bool ok = true;
        for (int k : {j - n, j + n}) {
            if (k < 0 || k >= m) continue;
            if (!std::isfinite(cv.T[k]) || cv.T[k] - (cv.T[j] - tau) < c.edge_cells * cv.dx) ok = false;
        }
        if (ok) return tau;
        if (j - n < 0 && j + n >= m) return kNaN;
    }
}

EnergyProbe probe_energy(const Evolution& evo, double x0, double T0, const Params& params,
                         const ClassifyControls& c, double tau_lo) {
    if (!std::isfinite(tau_lo)) return {};
    for (auto it = evo.snapshots.rbegin(); it != evo.snapshots.rend(); ++it) {
        const double tau = T0 - it->t;
        if (tau < tau_lo || !cone_usable(*it, x0, tau, evo.ceiling)) continue;
        const EnergyProbe pr = probe_snapshot(*it, x0, T0, params, c);
        if (pr.ok) return pr;
    }
    return {};
}

void classify_point(BlowupCurve& cv, int j, const Evolution& evo, const Params& params, const ClassifyControls& c) {
    const int m = static_cast<int>(cv.x.size());
    if (j < 0 || j >= m) throw InputError("classify_point index out of range");
    if (!std::isfinite(cv.T[j])) return;
    const double sl = cv.slope_l[j], sr = cv.slope_r[j];
    cv.slope_test[j] = std::isfinite(sl) && std::isfinite(sr) && sl >= 1.0 - c.tau && sl <= 1.0 + c.slope_slack &&
                       sr <= -1.0 + c.tau && sr >= -1.0 - c.slope_slack;
    bool strict = true;
    int seen = 0;
    for (int q = 1; q <= c.neighbor_radius; ++q) {
        for (int k : {j - q, j + q}) {
            if (k < 0 || k >= m || !std::isfinite(cv.T[k])) continue;
            ++seen;
            if (!(cv.T[k] - cv.T[j] + q * cv.dx > 0.0)) strict = false;
        }
    }
    cv.strict_bound[j] = strict && seen > 0;

    const EnergyProbe pr = probe_energy(evo, cv.x[j], cv.T[j], params, c, resolvable_tau(cv, j, c));
    if (pr.ok) {
        const double e0 = soliton_energy(params);
        cv.energy_ratio[j] = pr.energy / e0;
        cv.probe_tau[j] = pr.tau;
        cv.k_est[j] = pr.k;
        cv.energy_test[j] = pr.energy < 2.0 * e0 * (1.0 - c.margin);
    }
    const bool s_candidate = cv.slope_test[j] && cv.strict_bound[j];
    if (s_candidate && !cv.energy_test[j])
        cv.cls[j] = PointClass::S;
    else if (cv.energy_test[j] && !s_candidate)
        cv.cls[j] = PointClass::R;
    else
        cv.cls[j] = PointClass::Unknown;
}

void classify_all(BlowupCurve& cv, const Evolution& evo, const Params& params, const ClassifyControls& c) {
    parallel_for(static_cast<int>(cv.x.size()), c.threads,
                 [&](int j) { classify_point(cv, j, evo, params, c); });
}

ChapeauReport chapeau_bound_check(const std::vector<double>& x, const std::vector<double>& T, double x0, double T0,
                                  int k, double p, double r_min, double r_max, double beta_threshold) {
    if (x.size() != T.size()) throw InputError("chapeau check needs matching x and T arrays");
    ChapeauReport rep;
    rep.beta_expected = (k - 1) * (p - 1) / 2.0;
    std::vector<double> lx, ly;
    rep.all_positive = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::abs(x[i] - x0);
        if (r < r_min || r > r_max || r >= 1.0 || !std::isfinite(T[i])) continue;
        const double delta = T[i] - T0 + r;
        ++rep.points;
        if (!(delta > 0.0)) {
            rep.all_positive = false;
            continue;
        }
        lx.push_back(std::log(std::abs(std::log(r))));
        ly.push_back(std::log(delta / r));
    }
    if (lx.size() >= 3) {
        const LineFit fit = fit_line(lx, ly);
        rep.beta_fit = -fit.slope;
        rep.constant = std::exp(fit.intercept);
    }
    rep.log_corrected = rep.all_positive && rep.beta_fit > beta_threshold;
    return rep;
}

ChapeauReport chapeau_bound_check(const BlowupCurve& cv, int i0, int k, double p, double r_max) {
    return chapeau_bound_check(cv.x, cv.T, cv.x[i0], cv.T[i0], k, p, 2.0 * cv.dx, r_max);
}

SignedLines signed_lines(const Evolution& evo, double x0, double T0, const Params& params, double tau_min,
                         double tau_max, const ClassifyControls& c) {
    struct Frame {
        double t;
        double tau;
        SolitonDecomposition dec;
        const USnapshot* snap;
    };
    std::vector<Frame> frames;
    SignedLines out;
    const XiGrid grid = XiGrid::symmetric(c.xi_max, c.xi_n);
    for (const auto& snap : evo.snapshots) {
        const double tau = T0 - snap.t;
        if (tau < tau_min || tau > tau_max || !cone_usable(snap, x0, tau, evo.ceiling)) continue;
        const WState w = selfsimilar_transform(snap, x0, T0, grid, params);
        const Seed seed = count_and_seed(w, params);
        if (seed.k == 0) {
            out.t_lost.push_back(snap.t);
            continue;
        }
        try {
            frames.push_back({snap.t, tau, solve_modulation(w, seed.k, seed.zeta_guess, seed.signs, params), &snap});
        } catch (const NumericalError&) {
            out.t_lost.push_back(snap.t);
        }
    }
    if (frames.empty()) return out;
    out.k_last = frames.back().dec.k;
    out.tracks.resize(static_cast<std::size_t>(out.k_last));
    const double beta = params.beta();
    for (const auto& f : frames) {
        if (f.dec.k != out.k_last) {
            out.truncated = true;
            continue;
        }
        for (int j = 0; j < f.dec.k; ++j) {
            TrackPoint tp;
            tp.t = f.t;
            tp.zeta = f.dec.zeta[j];
            tp.z = x0 + f.tau * std::tanh(tp.zeta);
            tp.u = interp_cubic(f.snap->line, f.snap->u, tp.z);
            tp.sign = f.dec.signs[j];
            tp.predicted = tp.sign * params.kappa0 * std::pow(std::cosh(tp.zeta), beta) * std::pow(f.tau, -beta);
            out.tracks[j].push_back(tp);
        }
    }
    if (!out.t_lost.empty()) out.truncated = true;
    return out;
}

LowerBoundReport lower_bound_monitor(const Evolution& evo, const CauchyData& data, double R, double T_max,
                                     const Params& params, double tol) {
    (void)params;
    if (!(R > 0.0)) throw InputError("lower_bound_monitor needs R > 0");
    LowerBoundReport rep;
    rep.R = R;
    rep.R0 = R + std::max(T_max, 0.0);
    const XLine& L = data.line;
    double sup0 = 0.0, l2 = 0.0;
    for (int i = 0; i < L.n; ++i) {
        if (std::abs(L.x(i)) >= rep.R0) continue;
        sup0 = std::max(sup0, std::abs(data.u0[i]));
        l2 += data.u1[i] * data.u1[i] * L.dx;
    }
    rep.M = sup0 + std::sqrt(rep.R0) * std::sqrt(l2);
    rep.min_u = std::numeric_limits<double>::infinity();
    for (int i = 0; i < L.n; ++i) {
        if (std::abs(L.x(i)) > R) continue;
        rep.min_u = std::min(rep.min_u, evo.point_min[i]);
        if (evo.point_min[i] < -rep.M * (1.0 + tol) - tol) ++rep.violations;
    }
    return rep;
}

void write_curve_csv(const BlowupCurve& cv, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot open " + path);
    os << std::setprecision(15);
    os << "x,T,fit_quality,slope_l,slope_r,class,k_est,envelope,fallback,energy_ratio,probe_tau,lipschitz_flag\n";
    for (std::size_t j = 0; j < cv.x.size(); ++j) {
        os << cv.x[j] << ',' << cv.T[j] << ',' << cv.quality[j] << ',' << cv.slope_l[j] << ',' << cv.slope_r[j]
           << ',' << to_string(cv.cls[j]) << ',' << cv.k_est[j] << ',' << int(cv.envelope[j]) << ','
           << int(cv.fallback[j]) << ',' << cv.energy_ratio[j] << ',' << cv.probe_tau[j] << ','
           << int(cv.lipschitz_flag[j]) << '\n';
    }
}

void write_tracks_csv(const SignedLines& lines, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw InputError("cannot open " + path);
    os << std::setprecision(15);
    os << "t,j,z_j,u,zeta,predicted,sign\n";
    for (std::size_t j = 0; j < lines.tracks.size(); ++j)
        for (const auto& tp : lines.tracks[j])
            os << tp.t << ',' << j << ',' << tp.z << ',' << tp.u << ',' << tp.zeta << ',' << tp.predicted << ','
               << tp.sign << '\n';
}

}  // namespace nlwlab
