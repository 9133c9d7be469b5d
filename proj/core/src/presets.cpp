#include "nlwlab/presets.hpp"

#include <cmath>
#include <numbers>

#include "nlwlab/errors.hpp"

namespace nlwlab {

namespace {

XLine make_line(double x_min, double x_max, double dx, bool periodic) {
    const double cells = (x_max - x_min) / dx;
    const long n = std::lround(cells);
    if (n < 8 || std::abs(cells - n) > 1e-9 * cells) throw InputError("dx must divide the preset domain length");
    if (std::abs(std::remainder(-x_min, dx)) > 1e-12) throw InputError("dx must put a node at x = 0");
    return XLine{x_min, dx, static_cast<int>(periodic ? n : n + 1), periodic};
}

double plateau(double x) {
    constexpr double half_width = 1.0, edge = 0.1;
    return 0.5 * (std::tanh((x + half_width) / edge) - std::tanh((x - half_width) / edge));
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"odd-sine", "plateaus-opposite", "gaussian-positive", "constant-exact"};
}

PresetInfo preset_info(const std::string& name) {
    if (name == "odd-sine") return {name, "A sin(pi x), periodic [-1,1)", -0.25, 0.25, 4.0, 4.0};
    if (name == "plateaus-opposite")
        return {name, "plateaus of opposite signs at -1.5 and 1.5, periodic [-4,4)", -1.5, 1.5, 6.0, 2.0};
    if (name == "gaussian-positive") return {name, "A exp(-x^2/0.25) on [-4,4], fixed ends", -0.5, 0.5, 3.0, 3.0};
    if (name == "constant-exact") return {name, "exact ODE blow-up data, periodic [-1,1)", -1.0, 1.0, 2.0, 0.0};
    throw UsageError("unknown preset '" + name + "'");
}

CauchyData make_preset(const std::string& name, const Params& params, const PresetOptions& opt) {
    const PresetInfo info = preset_info(name);
    const double A = std::isnan(opt.amplitude) ? info.default_amplitude : opt.amplitude;
    if (!(opt.dx > 0.0)) throw InputError("preset dx must be positive");
    CauchyData d;
    d.name = name;
    if (name == "odd-sine") {
        d.line = make_line(-1.0, 1.0, opt.dx, true);
    } else if (name == "plateaus-opposite") {
        d.line = make_line(-4.0, 4.0, opt.dx, true);
    } else if (name == "gaussian-positive") {
        d.line = make_line(-4.0, 4.0, opt.dx, false);
        d.margin = 3.0;
    } else {
        d.line = make_line(-1.0, 1.0, opt.dx, true);
    }
    const int n = d.line.n;
    d.u0.assign(n, 0.0);
    d.u1.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double x = d.line.x(i);
        if (name == "odd-sine") {
            d.u0[i] = A * std::sin(std::numbers::pi * x);
        } else if (name == "plateaus-opposite") {
            d.u0[i] = A * (plateau(x + 1.5) - plateau(x - 1.5));
        } else if (name == "gaussian-positive") {
            d.u0[i] = A * std::exp(-x * x / 0.25);
        } else {
            if (!(opt.T > 0.0)) throw InputError("constant-exact needs T > 0");
            const double b = params.beta();
            d.u0[i] = params.kappa0 * std::pow(opt.T, -b);
            d.u1[i] = b * params.kappa0 * std::pow(opt.T, -b - 1.0);
        }
    }
    if (name == "odd-sine") {
        // Exact oddness on the grid: u0(-x) = -u0(x) bit for bit.
        for (int i = 1; i < n / 2; ++i) d.u0[n - i] = -d.u0[i];
        d.u0[0] = 0.0;
        d.u0[n / 2] = 0.0;
    }
    return d;
}

double levine_energy(const CauchyData& d, const Params& params) {
    d.validate();
    const XLine& L = d.line;
    double e = 0.0;
    for (int i = 0; i < L.n; ++i) {
        int ip = i + 1;
        if (ip == L.n) {
            if (!L.periodic) break;
            ip = 0;
        }
        const double ux = (d.u0[ip] - d.u0[i]) / L.dx;
        e += 0.5 * ux * ux * L.dx;
    }
    for (int i = 0; i < L.n; ++i) {
        const double w = (!L.periodic && (i == 0 || i == L.n - 1)) ? 0.5 : 1.0;
        e += w * L.dx * (0.5 * d.u1[i] * d.u1[i] - params.F(d.u0[i]));
    }
    return e;
}

}  // namespace nlwlab
