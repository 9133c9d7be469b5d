#include "nlwlab/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"

namespace nlwlab {

double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double zeta_of(double d) {
    if (!(std::abs(d) < 1.0)) throw InputError("soliton parameter d must satisfy |d| < 1");
    return -std::atanh(d);
}

double d_of(double zeta) { return -std::tanh(zeta); }

double kappa(double d, double y, const Params& params) {
    if (!(std::abs(d) < 1.0) || !(std::abs(y) < 1.0)) throw InputError("kappa needs |d| < 1 and |y| < 1");
    return params.kappa0 * std::pow(1.0 - d * d, 1.0 / (params.p - 1.0)) / std::pow(1.0 + d * y, params.beta());
}

double kappa_bar(double z, const Params& params) { return params.kappa0 * std::exp(-params.beta() * log_cosh(z)); }

double rho(double y, const Params& params) { return std::pow(1.0 - y * y, params.beta()); }

double rho_mass(const Params& params) {
    const double b = params.beta();
    return std::sqrt(std::numbers::pi) * std::tgamma(b + 1.0) / std::tgamma(b + 1.5);
}

double soliton_energy(const Params& params) {
    return params.kappa0 * params.kappa0 / (params.p - 1.0) * rho_mass(params);
}

Field weight_table(const XiGrid& grid, const Params& params) {
    Field out(grid);
    for (int i = 0; i < grid.n; ++i) out[i] = std::exp(-2.0 * params.beta() * log_cosh(grid.xi(i)));
    return out;
}

Field soliton(double zeta, const XiGrid& grid, const Params& params) {
    const double b = params.beta();
    Field out(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.xi(i);
        out[i] = params.kappa0 * std::exp(b * (log_cosh(x) - log_cosh(x - zeta)));
    }
    return out;
}

Field soliton_dd(double zeta, const XiGrid& grid, const Params& params) {
    // d kappa / dd = -(2/(p-1)) kappa (y+d) / ((1-d^2)(1+dy)).
    const double b = params.beta();
    const double c = std::cosh(zeta);
    Field k = soliton(zeta, grid, params);
    for (int i = 0; i < grid.n; ++i) k[i] *= -b * std::tanh(grid.xi(i) - zeta) * c * c;
    return k;
}

Field soliton_sum(const std::vector<double>& zetas, const std::vector<int>& signs, const XiGrid& grid,
                  const Params& params) {
    if (zetas.size() != signs.size()) throw InputError("soliton_sum: centers and signs differ in length");
    Field out(grid);
    for (std::size_t j = 0; j < zetas.size(); ++j) {
        const Field k = soliton(zetas[j], grid, params);
        for (int i = 0; i < grid.n; ++i) out[i] += signs[j] * k[i];
    }
    return out;
}

XiMetric::XiMetric(const XiGrid& g, const Params& params)
    : grid(g), xi(g.n), y(g.n), cosh2(g.n), mass(g.n), edge(g.n - 1) {
    const double h = g.h();
    const double b = params.beta();
    for (int i = 0; i < g.n; ++i) {
        xi[i] = g.xi(i);
        y[i] = std::tanh(xi[i]);
        const double lc = log_cosh(xi[i]);
        cosh2[i] = std::exp(2.0 * lc);
        const double tau = (i == 0 || i == g.n - 1) ? 0.5 * h : h;
        mass[i] = std::exp(-(2.0 * b + 2.0) * lc) * tau;
    }
    for (int i = 0; i + 1 < g.n; ++i) edge[i] = std::exp(-2.0 * b * log_cosh(xi[i] + 0.5 * h)) / h;
}

double XiMetric::integrate(const std::vector<double>& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * mass[i];
    return acc;
}

double XiMetric::dirichlet(const std::vector<double>& a, const std::vector<double>& b) const {
    double acc = 0.0;
    for (std::size_t e = 0; e < edge.size(); ++e) acc += edge[e] * (a[e + 1] - a[e]) * (b[e + 1] - b[e]);
    return acc;
}

std::vector<double> XiMetric::stiffness(const std::vector<double>& r) const {
    std::vector<double> out(r.size(), 0.0);
    for (std::size_t e = 0; e < edge.size(); ++e) {
        const double flux = edge[e] * (r[e + 1] - r[e]);
        out[e] -= flux;
        out[e + 1] += flux;
    }
    return out;
}

Field apply_L(const Field& r, const Params& params) {
    const XiMetric m(r.grid, params);
    const auto k = m.stiffness(r.values);
    Field out(r.grid);
    for (int i = 0; i < r.grid.n; ++i) out[i] = -k[i] / m.mass[i];
    return out;
}

Field d_dxi(const Field& r) {
    const int n = r.grid.n;
    const double h = r.grid.h();
    Field out(r.grid, r.rep);
    for (int i = 1; i + 1 < n; ++i) out[i] = (r[i + 1] - r[i - 1]) / (2.0 * h);
    out[0] = (-3.0 * r[0] + 4.0 * r[1] - r[2]) / (2.0 * h);
    out[n - 1] = (3.0 * r[n - 1] - 4.0 * r[n - 2] + r[n - 3]) / (2.0 * h);
    return out;
}

Field apply_L_pointwise(const Field& r, const Params& params) {
    const int n = r.grid.n;
    const double h = r.grid.h();
    const double b2 = 2.0 * params.beta();
    const Field d1 = d_dxi(r);
    Field out(r.grid);
    for (int i = 0; i < n; ++i) {
        double d2;
        if (i == 0)
            d2 = (2.0 * r[0] - 5.0 * r[1] + 4.0 * r[2] - r[3]) / (h * h);
        else if (i == n - 1)
            d2 = (2.0 * r[n - 1] - 5.0 * r[n - 2] + 4.0 * r[n - 3] - r[n - 4]) / (h * h);
        else
            d2 = (r[i + 1] - 2.0 * r[i] + r[i - 1]) / (h * h);
        const double x = r.grid.xi(i);
        out[i] = std::exp(2.0 * log_cosh(x)) * (d2 - b2 * std::tanh(x) * d1[i]);
    }
    return out;
}

double phi_inner(const WState& q, const WState& r, const Params& params) {
    require_same_grid(q.grid(), r.grid());
    const XiMetric m(q.grid(), params);
    double acc = m.dirichlet(q.w1.values, r.w1.values);
    for (int i = 0; i < q.grid().n; ++i) acc += m.mass[i] * (q.w1[i] * r.w1[i] + q.w2[i] * r.w2[i]);
    return acc;
}

double phi_inner_ibp(const WState& q, const WState& r, const Params& params) {
    require_same_grid(q.grid(), r.grid());
    const XiMetric m(q.grid(), params);
    const Field lr = apply_L_pointwise(r.w1, params);
    double acc = 0.0;
    for (int i = 0; i < q.grid().n; ++i)
        acc += m.mass[i] * (q.w1[i] * (r.w1[i] - lr[i]) + q.w2[i] * r.w2[i]);
    return acc;
}

double norm_H(const WState& q, const Params& params) { return std::sqrt(std::max(0.0, phi_inner(q, q, params))); }

double norm_H0(const Field& r, const Params& params) {
    const XiMetric m(r.grid, params);
    double acc = m.dirichlet(r.values, r.values);
    for (int i = 0; i < r.grid.n; ++i) acc += m.mass[i] * r[i] * r[i];
    return std::sqrt(acc);
}

double energy(const WState& state, const Params& params) {
    const XiMetric m(state.grid(), params);
    const double c = 0.5 * params.linear_coeff();
    double acc = 0.5 * m.dirichlet(state.w1.values, state.w1.values);
    for (int i = 0; i < state.grid().n; ++i) {
        const double w = state.w1[i];
        acc += m.mass[i] * (0.5 * state.w2[i] * state.w2[i] + c * w * w - params.F(w));
    }
    return acc;
}

WState F_mode(int lambda, double zeta, const XiGrid& grid, const Params& params) {
    if (lambda != 0 && lambda != 1) throw InputError("eigenmode index must be 0 or 1");
    const double b = params.beta();
    const double lcz = log_cosh(zeta);
    WState out(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.xi(i);
        const double ratio = std::exp(b * (log_cosh(x) - log_cosh(x - zeta)));  // kappa / kappa0
        if (lambda == 0) {
            out.w1[i] = ratio * std::tanh(x - zeta);
        } else {
            const double v = ratio * std::exp(log_cosh(x) - lcz - log_cosh(x - zeta));
            out.w1[i] = v;
            out.w2[i] = v;
        }
    }
    return out;
}

WState F_lambda(int lambda, double d, const XiGrid& grid, const Params& params) {
    return F_mode(lambda, zeta_of(d), grid, params);
}

namespace {

// (K + M) W1 = M G, the weak form of (-L + 1) W1 = G with natural end conditions.
void solve_first_component(AdjointMode& mode, const XiMetric& m) {
    const int n = m.grid.n;
    std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n);
    for (int i = 0; i < n; ++i) {
        di[i] = m.mass[i];
        rhs[i] = m.mass[i] * mode.source[i];
    }
    for (int e = 0; e + 1 < n; ++e) {
        di[e] += m.edge[e];
        di[e + 1] += m.edge[e];
        up[e] = -m.edge[e];
        lo[e + 1] = -m.edge[e];
    }
    mode.W.w1.values = solve_tridiagonal(lo, di, up, rhs);
    for (double v : mode.W.w1.values)
        if (!std::isfinite(v)) throw NumericalError("adjoint mode solve produced non-finite values");
}

}  // namespace

AdjointMode W_mode(int lambda, double zeta, const XiGrid& grid, const Params& params, bool solve_first) {
    if (lambda != 0 && lambda != 1) throw InputError("adjoint mode index must be 0 or 1");
    const double b = params.beta();
    const double lcz = log_cosh(zeta);
    const XiMetric m(grid, params);
    const int n = grid.n;

    // Second component and the source (lambda - (p+3)/(p-1)) W2 - 2y dW2/dy + (8/(p-1)) W2/(1-y^2),
    // with 2y d/dy = 2 tanh(xi) cosh^2(xi) d/dxi.
    AdjointMode mode;
    mode.W = WState(grid);
    mode.source = Field(grid);
    for (int i = 0; i < n; ++i) {
        const double x = m.xi[i];
        const double t = std::tanh(x);
        const double tz = std::tanh(x - zeta);
        double w2;
        if (lambda == 1) {
            const double g = (b + 1.0) * (lcz - log_cosh(x - zeta));
            w2 = std::exp(g + (b - 1.0) * log_cosh(x));
            const double w2c2 = std::exp(g + (b + 1.0) * log_cosh(x));
            const double dlog = (b - 1.0) * t - (b + 1.0) * tz;
            mode.source[i] = (1.0 - params.damping()) * w2 + w2c2 * (4.0 * b - 2.0 * t * dlog);
        } else {
            const double e = params.kappa0 * std::exp(b * (log_cosh(x) - log_cosh(x - zeta)));
            const double sz = 1.0 / std::cosh(x - zeta);
            w2 = e * tz;
            const double dw = e * (sz * sz + tz * b * (t - tz));
            const double c2 = m.cosh2[i];
            mode.source[i] = -params.damping() * w2 + c2 * (4.0 * b * w2 - 2.0 * t * dw);
        }
        mode.W.w2[i] = w2;
    }

    if (solve_first) solve_first_component(mode, m);

    const WState F = F_mode(lambda, zeta, grid, params);
    double pi = 0.0;
    for (int i = 0; i < n; ++i) pi += m.mass[i] * (mode.source[i] * F.w1[i] + mode.W.w2[i] * F.w2[i]);
    if (!(std::abs(pi) > 0.0) || !std::isfinite(pi))
        throw NumericalError("adjoint mode normalization degenerate (pi = " + std::to_string(pi) + ")");
    mode.c = 1.0 / pi;
    mode.W = mode.c * mode.W;
    mode.source = mode.c * mode.source;
    return mode;
}

AdjointMode W_lambda(int lambda, double d, const XiGrid& grid, const Params& params) {
    return W_mode(lambda, zeta_of(d), grid, params);
}

namespace {

double rep_exponent(Representation r, const Params& params) {
    switch (r) {
        case Representation::YForm: return 0.0;
        case Representation::BarForm: return params.beta();
        case Representation::HatForm: return params.beta() + 1.0;
    }
    return 0.0;
}

}  // namespace

Field transform(const Field& r, Representation target, const Params& params) {
    // BarForm multiplies by (1-y^2)^{1/(p-1)} = cosh^{-2/(p-1)}.
    const double shift = rep_exponent(r.rep, params) - rep_exponent(target, params);
    Field out(r.grid, target);
    for (int i = 0; i < r.grid.n; ++i) out[i] = r[i] * std::exp(shift * log_cosh(r.grid.xi(i)));
    return out;
}

double flat_norm(const WState& q, const Params& params) {
    const Field a = transform(q.w1, Representation::BarForm, params);
    const Field b = transform(q.w2, Representation::HatForm, params);
    const int n = q.grid().n;
    const double h = q.grid().h();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double tau = (i == 0 || i == n - 1) ? 0.5 * h : h;
        acc += tau * (a[i] * a[i] + b[i] * b[i]);
    }
    for (int i = 0; i + 1 < n; ++i) acc += (a[i + 1] - a[i]) * (a[i + 1] - a[i]) / h;
    return std::sqrt(acc);
}

double lp_rho_norm(const Field& r, double exponent, const Params& params) {
    const XiMetric m(r.grid, params);
    double acc = 0.0;
    for (int i = 0; i < r.grid.n; ++i) acc += m.mass[i] * std::pow(std::abs(r[i]), exponent);
    return std::pow(acc, 1.0 / exponent);
}

double sup_bar(const Field& r, const Params& params) {
    const Field a = transform(r, Representation::BarForm, params);
    double s = 0.0;
    for (double v : a.values) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace nlwlab
