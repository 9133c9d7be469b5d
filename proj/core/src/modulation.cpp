#include "nlwlab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"

namespace nlwlab {

ProjectorBasis make_basis(double zeta, const XiGrid& grid, const Params& params) {
    ProjectorBasis b;
    b.zeta = zeta;
    b.d = d_of(zeta);
    b.F0 = F_mode(0, zeta, grid, params);
    b.F1 = F_mode(1, zeta, grid, params);
    b.W0 = W_mode(0, zeta, grid, params);
    b.W1 = W_mode(1, zeta, grid, params);
    b.c0 = b.W0.c;
    b.c1_of_d = b.W1.c;
    return b;
}

ProjectorBasis make_basis_d(double d, const XiGrid& grid, const Params& params) {
    return make_basis(zeta_of(d), grid, params);
}

namespace {

double project_mode(const WState& q, const AdjointMode& mode, const XiMetric& m) {
    double acc = 0.0;
    for (int i = 0; i < m.grid.n; ++i) acc += m.mass[i] * (mode.source[i] * q.w1[i] + mode.W.w2[i] * q.w2[i]);
    return acc;
}

// sinh(2 xi) d/dxi of d_d kappa, analytic.
Field two_y_dy_soliton_dd(double zeta, const XiGrid& grid, const Params& params) {
    const double b = params.beta();
    const double cz2 = std::cosh(zeta) * std::cosh(zeta);
    const Field k = soliton(zeta, grid, params);
    Field out(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.xi(i);
        const double t = std::tanh(x), tz = std::tanh(x - zeta);
        const double sz = 1.0 / std::cosh(x - zeta);
        const double dk = b * k[i] * (t - tz);
        const double d = -b * cz2 * (dk * tz + k[i] * sz * sz);
        out[i] = 2.0 * t * std::exp(2.0 * log_cosh(x)) * d;
    }
    return out;
}

}  // namespace

double project(const WState& q, const ProjectorBasis& basis, int lambda, const Params& params) {
    require_same_grid(q.grid(), basis.F0.grid());
    const XiMetric m(q.grid(), params);
    if (lambda == 0) return project_mode(q, basis.W0, m);
    if (lambda == 1) return project_mode(q, basis.W1, m);
    throw InputError("projection index must be 0 or 1");
}

WState linearized_apply(const WState& q, double zeta, const Params& params) {
    const XiGrid& g = q.grid();
    const Field lq = apply_L(q.w1, params);
    const Field dq2 = d_dxi(q.w2);
    const Field k = soliton(zeta, g, params);
    WState out(g, q.s);
    out.w1 = q.w2;
    for (int i = 0; i < g.n; ++i) {
        const double x = g.xi(i);
        const double psi = params.df(k[i]) - params.linear_coeff();
        const double two_y_dy = std::sinh(2.0 * x) * dq2[i];
        out.w2[i] = lq[i] + psi * q.w1[i] - params.damping() * q.w2[i] - two_y_dy;
    }
    return out;
}

namespace {

struct ResidualEval {
    const WState& state;
    const std::vector<int>& signs;
    const Params& params;
    XiMetric metric;

    WState remainder(const std::vector<double>& z) const {
        WState q = state;
        const Field K = soliton_sum(z, signs, state.grid(), params);
        for (int i = 0; i < state.grid().n; ++i) q.w1[i] -= K[i];
        return q;
    }

    std::vector<double> operator()(const std::vector<double>& z) const {
        const WState q = remainder(z);
        std::vector<double> r(z.size());
        for (std::size_t j = 0; j < z.size(); ++j)
            r[j] = project_mode(q, W_mode(0, z[j], state.grid(), params, false), metric);
        return r;
    }
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double min_gap(const std::vector<double>& z) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < z.size(); ++i) g = std::min(g, z[i + 1] - z[i]);
    return g;
}

void check_separation(const std::vector<double>& z, double limit) {
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
        if (z[i + 1] - z[i] < limit)
            throw IllSeparated("centers " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                                   " are closer than " + std::to_string(limit) + " (gap " +
                                   std::to_string(z[i + 1] - z[i]) + ")",
                               static_cast<int>(i), z[i + 1] - z[i]);
}

}  // namespace

SolitonDecomposition solve_modulation(const WState& state, int k, const std::vector<double>& zeta_guess,
                                      const std::vector<int>& signs_in, const Params& params,
                                      const ModulationControls& ctl) {
    SolitonDecomposition dec;
    dec.k = k;
    if (k == 0) {
        dec.q = state;
        dec.q_norm = norm_H(state, params);
        return dec;
    }
    if (k < 0 || static_cast<int>(zeta_guess.size()) != k) throw InputError("solve_modulation: need k guesses");
    std::vector<double> z = zeta_guess;
    std::sort(z.begin(), z.end());
    check_separation(z, ctl.min_gap);

    std::vector<int> signs = signs_in;
    if (signs.empty()) {
        const Field bar = transform(state.w1, Representation::BarForm, params);
        const XiGrid& g = state.grid();
        for (double zj : z) {
            const int idx = std::clamp(static_cast<int>(std::lround((zj - g.xi_min) / g.h())), 0, g.n - 1);
            signs.push_back(bar[idx] >= 0.0 ? 1 : -1);
        }
    }
    if (static_cast<int>(signs.size()) != k) throw InputError("solve_modulation: need k signs");

    const ResidualEval F{state, signs, params, XiMetric(state.grid(), params)};
    std::vector<double> r = F(z);
    int it = 0;
    for (; it < ctl.max_iter && max_abs(r) > ctl.tol; ++it) {
        std::vector<double> jac(k * k);
        for (int c = 0; c < k; ++c) {
            std::vector<double> zp = z, zm = z;
            zp[c] += ctl.fd_step;
            zm[c] -= ctl.fd_step;
            const auto rp = F(zp), rm = F(zm);
            for (int row = 0; row < k; ++row) jac[row * k + c] = (rp[row] - rm[row]) / (2.0 * ctl.fd_step);
        }
        std::vector<double> neg(k);
        for (int i = 0; i < k; ++i) neg[i] = -r[i];
        std::vector<double> delta;
        try {
            delta = solve_dense(jac, neg, k);
        } catch (const NumericalError&) {
            throw ModulationFailure("singular modulation Jacobian", r);
        }
        double lam = min_gap(z) < 1.0 ? 0.5 : 1.0;
        const double r0 = max_abs(r);
        for (;;) {
            std::vector<double> zn = z;
            for (int i = 0; i < k; ++i) zn[i] += lam * delta[i];
            const bool ordered = min_gap(zn) >= ctl.min_gap;
            if (ordered) {
                const auto rn = F(zn);
                if (max_abs(rn) < r0 || lam < 1.0 / 64) {
                    z = zn;
                    r = rn;
                    break;
                }
            } else if (lam < 1.0 / 64) {
                check_separation(zn, ctl.min_gap);
            }
            lam *= 0.5;
        }
    }
    if (max_abs(r) > ctl.tol) throw ModulationFailure("modulation Newton did not converge", r);

    dec.zeta = z;
    dec.signs = signs;
    dec.iterations = it;
    dec.q = F.remainder(z);
    for (double v : r) dec.residuals.push_back(std::abs(v));
    std::vector<ProjectorBasis> bases;
    for (double zj : z) bases.push_back(make_basis(zj, state.grid(), params));
    const MinusSplit split = split_minus(dec.q, bases, params);
    dec.alpha1 = split.alpha1;
    dec.A_minus = quadratic_A_minus(split.q_minus, z, signs, params);
    dec.q_norm = norm_H(dec.q, params);
    return dec;
}

Seed count_and_seed(const WState& state, const Params& params, double threshold) {
    const Field bar = transform(state.w1, Representation::BarForm, params);
    const XiGrid& g = state.grid();
    const double cut = threshold * params.kappa0;
    Seed seed;
    for (int i = 1; i + 1 < g.n; ++i) {
        const double a = std::abs(bar[i - 1]), b = std::abs(bar[i]), c = std::abs(bar[i + 1]);
        if (b < cut || b < a || b <= c) continue;
        // Parabolic refinement of the peak position.
        const double den = a - 2.0 * b + c;
        const double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
        seed.zeta_guess.push_back(g.xi(i) + std::clamp(off, -0.5, 0.5) * g.h());
        seed.signs.push_back(bar[i] >= 0.0 ? 1 : -1);
    }
    seed.k = static_cast<int>(seed.zeta_guess.size());
    return seed;
}

MinusSplit split_minus(const WState& q, const std::vector<ProjectorBasis>& bases, const Params& params) {
    MinusSplit out;
    out.q_minus = q;
    for (const auto& b : bases) {
        const double a = project(q, b, 1, params);
        out.alpha1.push_back(a);
        for (int i = 0; i < q.grid().n; ++i) {
            out.q_minus.w1[i] -= a * b.F1.w1[i];
            out.q_minus.w2[i] -= a * b.F1.w2[i];
        }
    }
    return out;
}

double phi_psi(const WState& q, const WState& r, const Field& psi, const Params& params) {
    const XiMetric m(q.grid(), params);
    double acc = m.dirichlet(q.w1.values, r.w1.values);
    for (int i = 0; i < q.grid().n; ++i) acc += m.mass[i] * (-psi[i] * q.w1[i] * r.w1[i] + q.w2[i] * r.w2[i]);
    return acc;
}

double quadratic_A_minus(const WState& q_minus, const std::vector<double>& zeta, const std::vector<int>& signs,
                         const Params& params) {
    const InteractionTerms it = interaction_terms(zeta, signs, q_minus.grid(), params);
    return phi_psi(q_minus, q_minus, it.psi, params);
}

InteractionTerms interaction_terms(const std::vector<double>& zeta, const std::vector<int>& signs,
                                   const XiGrid& grid, const Params& params) {
    InteractionTerms t;
    const int n = grid.n;
    std::vector<Field> kap;
    for (double z : zeta) kap.push_back(soliton(z, grid, params));
    t.K = Field(grid);
    for (std::size_t j = 0; j < zeta.size(); ++j)
        for (int i = 0; i < n; ++i) t.K[i] += signs[j] * kap[j][i];
    const double p = params.p;
    t.psi = Field(grid);
    t.R = Field(grid);
    for (int i = 0; i < n; ++i) {
        const double K = t.K[i];
        t.psi[i] = p * std::pow(std::abs(K), p - 1.0) - params.linear_coeff();
        double sum = 0.0;
        for (std::size_t j = 0; j < zeta.size(); ++j) sum += signs[j] * std::pow(kap[j][i], p);
        t.R[i] = std::pow(std::abs(K), p - 1.0) * K - sum;
    }
    for (std::size_t j = 0; j < zeta.size(); ++j) {
        Field V(grid);
        for (int i = 0; i < n; ++i)
            V[i] = p * std::pow(std::abs(t.K[i]), p - 1.0) - p * std::pow(kap[j][i], p - 1.0);
        t.V.push_back(std::move(V));
    }
    const Field K = t.K;
    t.f = [K, p](const Field& q1) {
        Field out(q1.grid);
        for (std::size_t i = 0; i < q1.size(); ++i) {
            const double a = K[i] + q1[i];
            out[i] = std::pow(std::abs(a), p - 1.0) * a - std::pow(std::abs(K[i]), p - 1.0) * K[i] -
                     p * std::pow(std::abs(K[i]), p - 1.0) * q1[i];
        }
        return out;
    };
    return t;
}

double h_gap(double gap, double p) {
    if (p < 2.0) return std::exp(-p * gap / (p - 1.0));
    if (p == 2.0) return std::exp(-2.0 * gap) * std::sqrt(gap);
    return std::exp(-2.0 * gap / (p - 1.0));
}

double J_bar(const std::vector<double>& zeta, double p) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < zeta.size(); ++i) {
        const double g = zeta[i + 1] - zeta[i];
        acc += g * std::exp(-2.0 * g / (p - 1.0));
    }
    return acc;
}

PlantedState planted_state(const std::vector<double>& zeta, const std::vector<int>& signs, const XiGrid& grid,
                           const Params& params) {
    const int k = static_cast<int>(zeta.size());
    const int n = grid.n;
    if (k < 1 || static_cast<int>(signs.size()) != k) throw InputError("planted_state: need matching centers/signs");
    const XiMetric m(grid, params);
    const InteractionTerms it = interaction_terms(zeta, signs, grid, params);

    // (-K_h + M psi) q1 = M (-R + sum_j d_j' b_j),  b_j = e_j ((p+3)/(p-1) + 2y d_y) d_d kappa_j.
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0);
    for (int i = 0; i < n; ++i) di[i] = m.mass[i] * it.psi[i];
    for (int e = 0; e + 1 < n; ++e) {
        di[e] -= m.edge[e];
        di[e + 1] -= m.edge[e];
        up[e] = m.edge[e];
        lo[e + 1] = m.edge[e];
    }
    std::vector<double> rhs0(n);
    for (int i = 0; i < n; ++i) rhs0[i] = -m.mass[i] * it.R[i];
    const std::vector<double> X0 = solve_tridiagonal(lo, di, up, rhs0);

    std::vector<Field> dk;
    std::vector<std::vector<double>> X;
    for (int j = 0; j < k; ++j) {
        dk.push_back(signs[j] * soliton_dd(zeta[j], grid, params));
        const Field mix = two_y_dy_soliton_dd(zeta[j], grid, params);
        std::vector<double> b(n);
        for (int i = 0; i < n; ++i) b[i] = m.mass[i] * (params.damping() * dk[j][i] + signs[j] * mix[i]);
        X.push_back(solve_tridiagonal(lo, di, up, b));
    }

    std::vector<AdjointMode> W;
    for (int l = 0; l < k; ++l) W.push_back(W_mode(0, zeta[l], grid, params, false));
    std::vector<double> S(k * k), rhs(k);
    for (int l = 0; l < k; ++l) {
        double r = 0.0;
        for (int i = 0; i < n; ++i) r -= m.mass[i] * W[l].source[i] * X0[i];
        rhs[l] = r;
        for (int j = 0; j < k; ++j) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += m.mass[i] * (W[l].source[i] * X[j][i] + W[l].W.w2[i] * dk[j][i]);
            S[l * k + j] = s;
        }
    }
    PlantedState out;
    out.d_dot = solve_dense(S, rhs, k);
    out.q = WState(grid);
    for (int i = 0; i < n; ++i) {
        double q1 = X0[i], q2 = 0.0;
        for (int j = 0; j < k; ++j) {
            q1 += out.d_dot[j] * X[j][i];
            q2 += out.d_dot[j] * dk[j][i];
        }
        out.q.w1[i] = q1;
        out.q.w2[i] = q2;
    }
    out.state = out.q;
    for (int i = 0; i < n; ++i) out.state.w1[i] += it.K[i];
    for (int j = 0; j < k; ++j) {
        const double c = std::cosh(zeta[j]);
        out.zeta_dot.push_back(-out.d_dot[j] * c * c);
    }
    return out;
}

}  // namespace nlwlab
