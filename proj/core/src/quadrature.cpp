#include "nlwlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "nlwlab/errors.hpp"
#include "nlwlab/params.hpp"
#include "nlwlab/profiles.hpp"

namespace nlwlab {

namespace {

constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7], g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double fs = f(c - dx) + f(c + dx);
        k += wgk[j] * fs;
        if (j % 2 == 1) g += wg[j / 2] * fs;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

// Map an interval with infinite ends onto a finite parameter interval.
QuadResult integrate_finite(const Integrand& f, double a, double b, const QuadOptions& opt) {
    std::priority_queue<Segment> heap;
    Segment first = gk15(f, a, b);
    heap.push(first);
    double value = first.value, error = first.error;
    int count = 1;
    while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
        if (count >= opt.max_intervals)
            throw RefinementError("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                                  "] did not converge: estimate " + std::to_string(value) + ", error " +
                                  std::to_string(error));
        const Segment s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        const Segment l = gk15(f, s.a, m), r = gk15(f, m, s.b);
        value += l.value + r.value - s.value;
        error += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Re-sum to remove drift from incremental updates.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {v, e, count};
}

}  // namespace

QuadResult integrate(const Integrand& f, double a, double b, const QuadOptions& opt) {
    if (a == b) return {};
    if (a > b) {
        QuadResult r = integrate(f, b, a, opt);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
    if (lo_inf && hi_inf) {
        QuadResult l = integrate(f, a, 0.0, opt), r = integrate(f, 0.0, b, opt);
        return {l.value + r.value, l.error + r.error, l.intervals + r.intervals};
    }
    if (hi_inf) {
        const auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(a + t / u) / (u * u);
        };
        return integrate_finite(g, 0.0, 1.0, opt);
    }
    if (lo_inf) {
        const auto g = [&](double t) {
            const double u = 1.0 - t;
            return f(b - t / u) / (u * u);
        };
        return integrate_finite(g, 0.0, 1.0, opt);
    }
    return integrate_finite(f, a, b, opt);
}

QuadResult integrate(const Integrand& f, const std::vector<double>& breaks, const QuadOptions& opt) {
    QuadResult total;
    for (std::size_t m = 0; m + 1 < breaks.size(); ++m) {
        const QuadResult r = integrate(f, breaks[m], breaks[m + 1], opt);
        total.value += r.value;
        total.error += r.error;
        total.intervals += r.intervals;
    }
    return total;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int order) {
    if (order < 1) throw InputError("Gauss-Legendre order must be positive");
    std::vector<double> x(order), w(order);
    for (int i = 0; i < order; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= order; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = order * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

double composite_gauss(const Integrand& f, double a, double b, int panels, int order) {
    const auto [x, w] = gauss_legendre(order);
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int m = 0; m < panels; ++m) {
        const double c = a + (m + 0.5) * h;
        for (int q = 0; q < order; ++q) acc += 0.5 * h * w[q] * f(c + 0.5 * h * x[q]);
    }
    return acc;
}

Separators::Separators(std::vector<double> c) : centers(std::move(c)) {
    y.push_back(-1.0);
    for (std::size_t j = 0; j + 1 < centers.size(); ++j) {
        theta.push_back(0.5 * (centers[j] + centers[j + 1]));
        y.push_back(std::tanh(theta.back()));
    }
    y.push_back(1.0);
}

std::pair<double, double> Separators::window(int j) const {
    const double inf = std::numeric_limits<double>::infinity();
    const int k = static_cast<int>(centers.size());
    return {j == 0 ? -inf : theta[j - 1], j == k - 1 ? inf : theta[j]};
}

bool Separators::interlaced() const {
    // -1 = y_0 < -d_1 < y_1 < ... < y_k = 1 with -d_j = tanh(zeta_j).
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const double m = std::tanh(centers[j]);
        if (!(y[j] < m && m < y[j + 1])) return false;
    }
    return true;
}

namespace {

// log of cosh^{-2a/(p-1)}(x).
double log_kb(double a, double x, double p) { return -2.0 * a / (p - 1.0) * log_cosh(x); }

void check_index(int idx, int k, const char* what) {
    if (idx < 0 || idx >= k) throw InputError(std::string("soliton index out of range: ") + what);
}

}  // namespace

TableEntry I1(double alpha, double beta, double dz, double p) {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw InputError("I1 needs positive exponents");
    const double k0 = Params(p).kappa0;
    const auto f = [&](double z) { return std::exp(log_kb(alpha, z, p) + log_kb(beta, z + dz, p)); };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> br{-inf, std::min(0.0, -dz), std::max(0.0, -dz), inf};
    if (br[1] == br[2]) br.erase(br.begin() + 2);
    // Purely relative tolerance: the value decays like e^{-2 dzeta/(p-1)}.
    QuadOptions opt;
    opt.abs_tol = std::numeric_limits<double>::min();
    TableEntry e;
    e.numeric = std::pow(k0, alpha + beta) * integrate(f, br, opt).value;
    const double g = std::abs(dz);
    e.model = alpha == beta ? g * std::exp(-2.0 * beta * g / (p - 1.0))
                            : std::exp(-2.0 * std::min(alpha, beta) * g / (p - 1.0));
    e.ratio = e.numeric / e.model;
    return e;
}

TableEntry I2(double alpha, double beta, int i, int j, const std::vector<double>& centers, double p) {
    const int k = static_cast<int>(centers.size());
    check_index(i, k, "i");
    check_index(j, k, "j");
    if (i == j) throw InputError("I2 needs i != j");
    const Separators sep(centers);
    const auto [lo, hi] = sep.window(j);
    const double k0 = Params(p).kappa0;
    const auto f = [&](double x) {
        return std::exp(log_kb(alpha, x - centers[j], p) + log_kb(beta, x - centers[i], p));
    };
    std::vector<double> br{lo, centers[j], hi};
    TableEntry e;
    e.numeric = std::pow(k0, alpha + beta) * integrate(f, br).value;
    const auto term = [&](double g) {
        if (alpha == beta) return g * std::exp(-2.0 * beta * g / (p - 1.0));
        if (alpha > beta) return std::exp(-2.0 * beta * g / (p - 1.0));
        return std::exp(-(alpha + beta) * g / (p - 1.0));
    };
    e.model = 0.0;
    if (j + 1 < k) e.model += term(centers[j + 1] - centers[j]);
    if (j > 0) e.model += term(centers[j] - centers[j - 1]);
    e.ratio = e.numeric / e.model;
    return e;
}

double A_ijl(int i, int j, int l, const std::vector<double>& centers, double p) {
    const int k = static_cast<int>(centers.size());
    check_index(i, k, "i");
    check_index(j, k, "j");
    check_index(l, k, "l");
    if (l == j) throw InputError("A_ijl needs l != j");
    const Separators sep(centers);
    const auto [lo, hi] = sep.window(j);
    const double k0 = Params(p).kappa0;
    const auto f = [&](double x) {
        return std::tanh(x - centers[i]) *
               std::exp(log_kb(1.0, x - centers[i], p) + log_kb(p - 1.0, x - centers[j], p) +
                        log_kb(1.0, x - centers[l], p));
    };
    return std::pow(k0, p + 1.0) * integrate(f, std::vector<double>{lo, centers[j], hi}).value;
}

double c1_triple(double p) {
    const double k0 = Params(p).kappa0;
    const double a = 2.0 / (p - 1.0);
    // Positive rearrangement of the integral over the real line.
    const auto f = [&](double z) {
        return std::exp(a * z - p * a * log_cosh(z)) * std::tanh(z) * -std::expm1(-2.0 * a * z);
    };
    const double inf = std::numeric_limits<double>::infinity();
    return std::pow(2.0, a) * std::pow(k0, p + 1.0) * integrate(f, 0.0, inf).value;
}

double B_ijl(int i, int j, int l, const std::vector<double>& centers, double p) {
    const int k = static_cast<int>(centers.size());
    check_index(i, k, "i");
    check_index(j, k, "j");
    check_index(l, k, "l");
    if (l == j) throw InputError("B_ijl needs l != j");
    const double pb = std::min(p, 2.0);
    const Separators sep(centers);
    const auto [lo, hi] = sep.window(j);
    const double k0 = Params(p).kappa0;
    const auto f = [&](double x) {
        return std::exp(log_kb(1.0, x - centers[i], p) + log_kb(p - pb, x - centers[j], p) +
                        log_kb(pb, x - centers[l], p));
    };
    return std::pow(k0, p + 1.0) * integrate(f, std::vector<double>{lo, centers[j], hi}).value;
}

namespace {

double Kbar(double x, const std::vector<double>& c, const std::vector<int>& e, double p) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) acc += e[j] * std::exp(log_kb(1.0, x - c[j], p));
    return acc;
}

std::vector<double> kbar_zeros(const std::vector<double>& c, const std::vector<int>& e, double p) {
    std::vector<double> zeros;
    for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        double a = c[j], b = c[j + 1];
        double fa = Kbar(a, c, e, p), fb = Kbar(b, c, e, p);
        if (fa * fb > 0.0) continue;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            const double m = 0.5 * (a + b);
            const double fm = Kbar(m, c, e, p);
            if (fm == 0.0) {
                a = b = m;
                break;
            }
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        zeros.push_back(0.5 * (a + b));
    }
    return zeros;
}

// Pieces between singular points, each given as (start, end, singular_at_start, singular_at_end).
struct Piece {
    double a, b;
    bool sa, sb;
};

std::vector<Piece> singular_pieces(const std::vector<double>& zeros, double center) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<Piece> out;
    if (zeros.empty()) {
        out.push_back({-inf, center, false, false});
        out.push_back({center, inf, false, false});
        return out;
    }
    out.push_back({-inf, zeros.front() - 1.0, false, false});
    out.push_back({zeros.front() - 1.0, zeros.front(), false, true});
    for (std::size_t m = 0; m + 1 < zeros.size(); ++m) {
        const double mid = 0.5 * (zeros[m] + zeros[m + 1]);
        out.push_back({zeros[m], mid, true, false});
        out.push_back({mid, zeros[m + 1], false, true});
    }
    out.push_back({zeros.back(), zeros.back() + 1.0, true, false});
    out.push_back({zeros.back() + 1.0, inf, false, false});
    return out;
}

// Integrand of J_i on one piece after the substitution xi - z = +-u^{1/(p-1)} near a zero z.
Integrand piece_integrand(const Piece& pc, int i, const std::vector<double>& c, const std::vector<int>& e,
                          double p) {
    const double mu = p - 1.0;
    // Evaluated in log form so that the far tails underflow to zero instead of 0 * inf.
    const auto base = [&c, &e, p, i](double x) {
        double lmax = -std::numeric_limits<double>::infinity();
        for (double cj : c) lmax = std::max(lmax, log_kb(1.0, x - cj, p));
        double sum = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) sum += e[j] * std::exp(log_kb(1.0, x - c[j], p) - lmax);
        if (sum == 0.0) return 0.0;
        return std::exp(log_kb(1.0, x - c[i], p) + (p - 2.0) * (lmax + std::log(std::abs(sum))));
    };
    if (pc.sa)
        return [=](double u) { return base(pc.a + std::pow(u, 1.0 / mu)) * std::pow(u, 1.0 / mu - 1.0) / mu; };
    if (pc.sb)
        return [=](double u) { return base(pc.b - std::pow(u, 1.0 / mu)) * std::pow(u, 1.0 / mu - 1.0) / mu; };
    return base;
}

std::pair<double, double> piece_range(const Piece& pc, double p) {
    const double mu = p - 1.0;
    if (pc.sa || pc.sb) return {0.0, std::pow(pc.b - pc.a, mu)};
    return {pc.a, pc.b};
}

}  // namespace

JiResult J_i(int i, const std::vector<double>& centers, const std::vector<int>& signs, double p,
             const QuadOptions& opt) {
    const int k = static_cast<int>(centers.size());
    check_index(i, k, "i");
    if (signs.size() != centers.size()) throw InputError("J_i: signs and centers differ in length");
    const double k0 = Params(p).kappa0;
    JiResult res;
    // |K|^{p-2} is singular (p < 2) or has a cusp (p > 2, p != 4, 6, ...) at every sign change.
    res.zeros = kbar_zeros(centers, signs, p);
    for (const Piece& pc : singular_pieces(res.zeros, centers[i])) {
        const auto f = piece_integrand(pc, i, centers, signs, p);
        const auto [a, b] = piece_range(pc, p);
        try {
            const QuadResult q = integrate(f, a, b, opt);
            res.value += q.value;
            res.error += q.error;
        } catch (const RefinementError& err) {
            throw RefinementError(std::string("J_i near sign change: ") + err.what());
        }
    }
    res.value *= std::pow(k0, p - 1.0);
    res.error *= std::pow(k0, p - 1.0);
    return res;
}

double J_i_graded(int i, const std::vector<double>& centers, const std::vector<int>& signs, double p, int panels) {
    const int k = static_cast<int>(centers.size());
    check_index(i, k, "i");
    const double k0 = Params(p).kappa0;
    const std::vector<double> zeros = kbar_zeros(centers, signs, p);
    double acc = 0.0;
    for (Piece pc : singular_pieces(zeros, centers[i])) {
        // Truncate the tails where the kernel is below round-off.
        const double span = 40.0 * (p - 1.0);
        if (std::isinf(pc.a)) pc.a = pc.b - span;
        if (std::isinf(pc.b)) pc.b = pc.a + span;
        const auto f = piece_integrand(pc, i, centers, signs, p);
        const auto [a, b] = piece_range(pc, p);
        acc += composite_gauss(f, a, b, panels);
    }
    return std::pow(k0, p - 1.0) * acc;
}

}  // namespace nlwlab
