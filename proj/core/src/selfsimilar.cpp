#include "nlwlab/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <fstream>
#include <iomanip>

#include "nlwlab/errors.hpp"
#include "nlwlab/profiles.hpp"
#include "nlwlab/quadrature.hpp"

namespace nlwlab {

WState selfsimilar_transform(const USnapshot& snap, double x0, double T0, const XiGrid& grid, const Params& params) {
    const double tau = T0 - snap.t;
    if (!(tau > 0.0)) throw InputError("selfsimilar_transform needs t < T0");
    const XLine& line = snap.line;
    if (!line.periodic && (x0 - tau < line.x_min - 1e-12 || x0 + tau > line.x_max() + 1e-12))
        throw InputError("backward cone of x0=" + std::to_string(x0) + " leaves the snapshot domain");
    const double scale = std::pow(tau, params.beta());
    WState w(grid, -std::log(tau));
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.y(i);
        const double x = x0 + tau * y;
        double ux = 0.0;
        const double u = interp_cubic(line, snap.u, x, &ux);
        const double ut = interp_cubic(line, snap.ut, x);
        w.w1[i] = scale * u;
        w.w2[i] = scale * (-params.beta() * u + tau * (ut - y * ux));
    }
    return w;
}

std::pair<Field, Field> rhs_w(const WState& state, const Params& params) {
    const XiGrid& g = state.grid();
    const Field lw = apply_L_pointwise(state.w1, params);
    const Field dv = d_dxi(state.w2);
    Field a = state.w2;
    Field b(g);
    for (int i = 0; i < g.n; ++i) {
        const double w = state.w1[i];
        const double fw = params.f(w);
        if (!std::isfinite(fw)) throw NumericalError("frame blow-up: nonlinearity overflow in rhs_w");
        b[i] = lw[i] - params.linear_coeff() * w + fw - params.damping() * state.w2[i] -
               std::sinh(2.0 * g.xi(i)) * dv[i];
    }
    return {a, b};
}

std::vector<double> cone_weights(const ConeGrid& grid, double gamma) {
    if (!(gamma > -1.0)) throw InputError("cone weight exponent must exceed -1");
    if ((grid.n - 1) % 2 != 0) throw InputError("cone grid needs an even number of cells");
    const double h = grid.h();
    std::vector<double> w(grid.n, 0.0);
    const auto [gx, gw] = gauss_legendre(12);
    const int last = grid.n - 1;
    for (int m = 0; m + 2 < grid.n; m += 2) {
        // Local coordinate u in [0, 2] on nodes m, m+1, m+2; 1 + y = (m + u) h and 1 - y = (last - m - u) h
        // stay exact in u, so the graded end panels never round onto y = +-1.
        const auto add = [&](double u, double wt) {
            const double l0 = 0.5 * (u - 1.0) * (u - 2.0), l1 = -u * (u - 2.0), l2 = 0.5 * u * (u - 1.0);
            const double one_m_y2 = (m + u) * h * (last - m - u) * h;
            const double f = wt * (gamma == 0.0 ? 1.0 : std::pow(one_m_y2, gamma));
            w[m] += l0 * f;
            w[m + 1] += l1 * f;
            w[m + 2] += l2 * f;
        };
        const auto panel = [&](double a, double b) {
            for (std::size_t q = 0; q < gx.size(); ++q)
                add(0.5 * (a + b) + 0.5 * (b - a) * gx[q], 0.5 * (b - a) * gw[q] * h);
        };
        const bool left = m == 0, right = m + 2 == last;
        if (!left && !right) {
            panel(0.0, 2.0);
            continue;
        }
        // Geometric grading toward the light-cone end absorbs (1-y^2)^gamma.
        double a = 0.0, b = 2.0;
        for (int level = 0; level < 60; ++level) {
            const double mid = 0.5 * (a + b);
            if (left) {
                panel(mid, b);
                b = mid;
            } else {
                panel(a, mid);
                a = mid;
            }
        }
        panel(a, b);
    }
    return w;
}

ConeState to_cone(const WState& state, const ConeGrid& grid) {
    const XiGrid& g = state.grid();
    ConeState c;
    c.grid = grid;
    c.s = state.s;
    c.w.resize(grid.n);
    c.v.resize(grid.n);
    const double h = g.h();
    for (int i = 0; i < grid.n; ++i) {
        const double y = grid.y(i);
        double xi;
        if (y <= -1.0)
            xi = g.xi_min;
        else if (y >= 1.0)
            xi = g.xi_max;
        else
            xi = std::clamp(std::atanh(y), g.xi_min, g.xi_max);
        const double s = (xi - g.xi_min) / h;
        const int i0 = std::clamp(static_cast<int>(std::floor(s)) - 1, 0, g.n - 4);
        const double u = s - i0;
        double l[4];
        for (int a = 0; a < 4; ++a) {
            double num = 1.0, den = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) {
                    num *= u - b;
                    den *= a - b;
                }
            l[a] = num / den;
        }
        double w = 0.0, v = 0.0;
        for (int a = 0; a < 4; ++a) {
            w += l[a] * state.w1[i0 + a];
            v += l[a] * state.w2[i0 + a];
        }
        c.w[i] = w;
        c.v[i] = v;
    }
    return c;
}

WState from_cone(const ConeState& c, const XiGrid& g) {
    WState out(g, c.s);
    const double h = c.grid.h();
    const int n = c.grid.n;
    for (int j = 0; j < g.n; ++j) {
        const double s = (g.y(j) + 1.0) / h;
        const int i0 = std::clamp(static_cast<int>(std::floor(s)) - 1, 0, n - 4);
        const double u = s - i0;
        double w = 0.0, v = 0.0;
        for (int a = 0; a < 4; ++a) {
            double num = 1.0, den = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) {
                    num *= u - b;
                    den *= a - b;
                }
            w += num / den * c.w[i0 + a];
            v += num / den * c.v[i0 + a];
        }
        out.w1[j] = w;
        out.w2[j] = v;
    }
    return out;
}

namespace {

// Fourth-order first derivative with one-sided closures.
void diff1(const std::vector<double>& w, double h, std::vector<double>& out) {
    const int n = static_cast<int>(w.size());
    const double c = 1.0 / (12.0 * h);
    out[0] = c * (-25 * w[0] + 48 * w[1] - 36 * w[2] + 16 * w[3] - 3 * w[4]);
    out[1] = c * (-3 * w[0] - 10 * w[1] + 18 * w[2] - 6 * w[3] + w[4]);
    for (int i = 2; i + 2 < n; ++i) out[i] = c * (w[i - 2] - 8 * w[i - 1] + 8 * w[i + 1] - w[i + 2]);
    out[n - 2] = -c * (-3 * w[n - 1] - 10 * w[n - 2] + 18 * w[n - 3] - 6 * w[n - 4] + w[n - 5]);
    out[n - 1] = -c * (-25 * w[n - 1] + 48 * w[n - 2] - 36 * w[n - 3] + 16 * w[n - 4] - 3 * w[n - 5]);
}

void diff2(const std::vector<double>& w, double h, std::vector<double>& out) {
    const int n = static_cast<int>(w.size());
    const double c = 1.0 / (12.0 * h * h);
    out[0] = c * (45 * w[0] - 154 * w[1] + 214 * w[2] - 156 * w[3] + 61 * w[4] - 10 * w[5]);
    out[1] = c * (10 * w[0] - 15 * w[1] - 4 * w[2] + 14 * w[3] - 6 * w[4] + w[5]);
    for (int i = 2; i + 2 < n; ++i)
        out[i] = c * (-w[i - 2] + 16 * w[i - 1] - 30 * w[i] + 16 * w[i + 1] - w[i + 2]);
    out[n - 2] = c * (10 * w[n - 1] - 15 * w[n - 2] - 4 * w[n - 3] + 14 * w[n - 4] - 6 * w[n - 5] + w[n - 6]);
    out[n - 1] =
        c * (45 * w[n - 1] - 154 * w[n - 2] + 214 * w[n - 3] - 156 * w[n - 4] + 61 * w[n - 5] - 10 * w[n - 6]);
}

struct ConeQuadrature {
    std::vector<double> rho, grad, diss;
    ConeQuadrature(const ConeGrid& g, const Params& params)
        : rho(cone_weights(g, params.beta())),
          grad(cone_weights(g, params.beta() + 1.0)),
          diss(cone_weights(g, params.beta() - 1.0)) {}
};

double energy_with(const ConeState& c, const Params& params, const ConeQuadrature& q) {
    std::vector<double> wy(c.w.size());
    diff1(c.w, c.grid.h(), wy);
    const double lc = 0.5 * params.linear_coeff();
    double acc = 0.0;
    for (std::size_t i = 0; i < c.w.size(); ++i) {
        acc += q.rho[i] * (0.5 * c.v[i] * c.v[i] + lc * c.w[i] * c.w[i] - params.F(c.w[i]));
        acc += q.grad[i] * 0.5 * wy[i] * wy[i];
    }
    return acc;
}

double dissipation_with(const ConeState& c, const ConeQuadrature& q) {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.v.size(); ++i) acc += q.diss[i] * c.v[i] * c.v[i];
    return acc;
}

double norm_with(const ConeState& c, const ConeQuadrature& q) {
    std::vector<double> wy(c.w.size());
    diff1(c.w, c.grid.h(), wy);
    double acc = 0.0;
    for (std::size_t i = 0; i < c.w.size(); ++i)
        acc += q.rho[i] * (c.w[i] * c.w[i] + c.v[i] * c.v[i]) + q.grad[i] * wy[i] * wy[i];
    return std::sqrt(acc);
}

}  // namespace

double cone_energy(const ConeState& c, const Params& params) {
    return energy_with(c, params, ConeQuadrature(c.grid, params));
}

double cone_dissipation(const ConeState& c, const Params& params) {
    return dissipation_with(c, ConeQuadrature(c.grid, params));
}

double cone_norm_H(const ConeState& c, const Params& params) { return norm_with(c, ConeQuadrature(c.grid, params)); }

WTrajectory evolve_w(const WState& state, double s_end, const Params& params, const WControls& ctl) {
    if (!(s_end > state.s)) throw InputError("evolve_w needs s_end > s");
    const ConeGrid cg{ctl.cone_n};
    const int n = cg.n;
    const double h = cg.h();
    const ConeQuadrature quad(cg, params);
    ConeState cs = to_cone(state, cg);

    std::vector<double> y(n), wy(n), wyy(n), vy(n);
    for (int i = 0; i < n; ++i) y[i] = cg.y(i);
    y[0] = -1.0;
    y[n - 1] = 1.0;
    const double c2 = params.linear_coeff();
    const double damp = params.damping();
    const double adv = 2.0 * (params.p + 1.0) / (params.p - 1.0);

    Dopri5 ode(
        [&](double, const std::vector<double>& u, std::vector<double>& du) {
            std::vector<double> w(u.begin(), u.begin() + n), v(u.begin() + n, u.end());
            diff1(w, h, wy);
            diff2(w, h, wyy);
            diff1(v, h, vy);
            for (int i = 0; i < n; ++i) {
                du[i] = v[i];
                const double one_m_y2 = (1.0 - y[i]) * (1.0 + y[i]);
                du[n + i] = one_m_y2 * wyy[i] - adv * y[i] * wy[i] - c2 * w[i] + params.f(w[i]) - damp * v[i] -
                            2.0 * y[i] * vy[i];
            }
        },
        ctl.ode);
    std::vector<double> u0(2 * n);
    std::copy(cs.w.begin(), cs.w.end(), u0.begin());
    std::copy(cs.v.begin(), cs.v.end(), u0.begin() + n);
    ode.reset(state.s, u0);

    WTrajectory tr;
    tr.grid = state.grid();
    tr.p = params.p;
    const double ceiling = ctl.ceiling_factor * params.kappa0;
    auto record = [&](const ConeState& c) {
        tr.s.push_back(c.s);
        tr.energy.push_back(energy_with(c, params, quad));
        tr.dissipation.push_back(dissipation_with(c, quad));
        double sup = 0.0;
        for (double v : c.w) sup = std::max(sup, std::abs(v));
        tr.sup_w.push_back(sup);
        tr.norm.push_back(norm_with(c, quad));
    };
    auto snapshot = [&](const ConeState& c) {
        tr.snapshots.push_back(from_cone(c, state.grid()));
        tr.snapshot_step.push_back(tr.s.size() - 1);
    };
    record(cs);
    snapshot(cs);
    double next_snap = state.s + ctl.snapshot_ds;

    while (ode.t() < s_end) {
        const double target = std::min(s_end, next_snap);
        try {
            ode.step(target);
        } catch (const StiffnessError&) {
            // Step collapse with a growing solution is the frame blow-up signature.
            if (tr.sup_w.back() > 10.0 * params.kappa0) {
                tr.status = WStatus::FrameBlowup;
                break;
            }
            throw;
        }
        const auto& u = ode.y();
        cs.s = ode.t();
        std::copy(u.begin(), u.begin() + n, cs.w.begin());
        std::copy(u.begin() + n, u.end(), cs.v.begin());
        bool finite = true;
        for (double v : u) finite = finite && std::isfinite(v);
        if (!finite) {
            tr.status = WStatus::FrameBlowup;
            break;
        }
        const double e_prev = tr.energy.back();
        record(cs);
        if (tr.sup_w.back() > ceiling) {
            tr.status = WStatus::FrameBlowup;
            snapshot(cs);
            break;
        }
        const double rise = tr.energy.back() - e_prev;
        if (rise > ctl.energy_tol * (1.0 + std::abs(e_prev)))
            throw IntegratorFault("Lyapunov functional increased by " + std::to_string(rise) + " at s=" +
                                  std::to_string(cs.s));
        if (ode.t() >= next_snap || ode.t() >= s_end) {
            snapshot(cs);
            next_snap += ctl.snapshot_ds;
        }
    }
    return tr;
}

EnergyReport energy_monitor(const WTrajectory& tr, double energy_tol, double resolved_sup) {
    EnergyReport rep;
    const std::size_t m = tr.s.size();
    if (m < 2) return rep;
    const double rate = 4.0 / (tr.p - 1.0);
    std::vector<double> cum(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
        cum[i] = cum[i - 1] + 0.5 * rate * (tr.dissipation[i] + tr.dissipation[i - 1]) * (tr.s[i] - tr.s[i - 1]);
        const double inc = (tr.energy[i] - tr.energy[i - 1]) / (1.0 + std::abs(tr.energy[i - 1]));
        rep.max_increase = std::max(rep.max_increase, inc);
        if (inc > energy_tol) ++rep.violations;
    }
    rep.total_drop = tr.energy.front() - tr.energy.back();
    rep.total_dissipated = cum.back();
    if (!std::isfinite(rep.total_dissipated) || !std::isfinite(rep.total_drop))
        rep.overall_ratio = std::numeric_limits<double>::quiet_NaN();
    else if (rep.total_dissipated > 0.0)
        rep.overall_ratio = rep.total_drop / rep.total_dissipated;
    else
        rep.overall_ratio = std::abs(rep.total_drop) <= energy_tol * (1.0 + std::abs(tr.energy.front())) ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    const double sup_cap = resolved_sup * Params(tr.p).kappa0;
    std::size_t last = 0;
    while (last + 1 < m && tr.sup_w[last + 1] <= sup_cap && std::isfinite(cum[last + 1])) ++last;
    rep.resolved_until = tr.s[last];
    const double rdrop = tr.energy.front() - tr.energy[last];
    if (cum[last] > 0.0)
        rep.resolved_ratio = rdrop / cum[last];
    else
        rep.resolved_ratio = std::abs(rdrop) <= energy_tol * (1.0 + std::abs(tr.energy.front()))
                                 ? 1.0
                                 : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k + 1 < tr.snapshot_step.size(); ++k) {
        const std::size_t a = tr.snapshot_step[k], b = tr.snapshot_step[k + 1];
        const double drop = tr.energy[a] - tr.energy[b];
        const double diss = cum[b] - cum[a];
        ++rep.intervals;
        if (!std::isfinite(drop) || !std::isfinite(diss)) {
            rep.worst_ratio_error = std::numeric_limits<double>::infinity();
            continue;
        }
        if (diss < 1e-6 * (1.0 + std::abs(tr.energy[a]))) continue;
        rep.worst_ratio_error = std::max(rep.worst_ratio_error, std::abs(drop / diss - 1.0));
    }
    return rep;
}

void write_trajectory_csv(const WTrajectory& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << std::setprecision(17) << "s,E,dissipation,sup_w,norm_H\n";
    for (std::size_t i = 0; i < tr.s.size(); ++i)
        out << tr.s[i] << ',' << tr.energy[i] << ',' << tr.dissipation[i] << ',' << tr.sup_w[i] << ',' << tr.norm[i]
            << '\n';
}

void write_snapshot_csv(const WState& st, const Params& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    const XiGrid& g = st.grid();
    out << std::setprecision(17) << "# p=" << params.p << " variant=" << to_string(params.variant)
        << " xi_max=" << g.xi_max << " n=" << g.n << " s=" << st.s << "\n";
    out << "xi,y,w,w_s\n";
    for (int i = 0; i < g.n; ++i) out << g.xi(i) << ',' << g.y(i) << ',' << st.w1[i] << ',' << st.w2[i] << '\n';
}

}  // namespace nlwlab
