#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/physical.hpp"
#include "nlwlab/presets.hpp"
#include "oracles.hpp"

using namespace nlwlab;

namespace {

CauchyData periodic_data(double dx, const std::function<double(double)>& u0, const std::function<double(double)>& u1) {
    CauchyData d;
    d.name = "test";
    const int n = static_cast<int>(std::lround(2.0 / dx));
    d.line = XLine{-1.0, dx, n, true};
    for (int i = 0; i < n; ++i) {
        d.u0.push_back(u0(d.line.x(i)));
        d.u1.push_back(u1(d.line.x(i)));
    }
    return d;
}

// Max error against the travelling wave sin(pi (x - t)) after linear evolution to t = 0.5.
double dalembert_error(double dx) {
    CauchyData d = periodic_data(dx, [](double x) { return std::sin(M_PI * x); },
                                 [](double x) { return -M_PI * std::cos(M_PI * x); });
    PhysicalControls c;
    c.linear = true;
    c.t_end = 0.5;
    Evolution e = evolve_u(d, Params(3.0), c);
    const USnapshot& f = e.final_state;
    double err = 0.0;
    for (int i = 0; i < f.line.n; ++i) err = std::max(err, std::abs(f.u[i] - std::sin(M_PI * (f.line.x(i) - f.t))));
    return err;
}

}  // namespace

TEST_CASE("linear leapfrog reproduces d'Alembert at second order") {
    const double e1 = dalembert_error(1.0 / 64), e2 = dalembert_error(1.0 / 128);
    CHECK(e2 < 1e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

namespace {

// Max relative deviation from the ODE solution at t = 0.9 for constant data blowing up at 1.
double ode_error(double c_acc) {
    const Params P(3.0);
    CauchyData d = periodic_data(1.0 / 64, [&](double) { return oracle::ode_blowup(0.0, 1.0, 3.0); },
                                 [&](double) { return P.beta() * P.kappa0; });
    PhysicalControls c;
    c.t_end = 0.9;
    c.c_acc = c_acc;
    Evolution e = evolve_u(d, P, c);
    const USnapshot& f = e.final_state;
    const double ref = oracle::ode_blowup(f.t, 1.0, 3.0);
    double err = 0.0;
    for (double u : f.u) err = std::max(err, std::abs(u / ref - 1.0));
    return err;
}

}  // namespace

TEST_CASE("spatially constant data follows the blow-up ODE") {
    const double e1 = ode_error(0.02), e2 = ode_error(0.01);
    CHECK(e1 < 2e-3);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("constant-exact preset blows up at T everywhere") {
    const Params P(3.0);
    PresetOptions po;
    po.dx = 1.0 / 64;
    po.T = 0.5;
    CauchyData d = make_preset("constant-exact", P, po);
    PresetInfo info = preset_info("constant-exact");
    PhysicalControls c;
    c.window_lo = info.window_lo;
    c.window_hi = info.window_hi;
    c.t_end = info.t_end;
    Evolution e = evolve_u(d, P, c);
    BlowupCurve cv = scan_blowup_curve(e, info.window_lo, info.window_hi, P);
    REQUIRE(!cv.T.empty());
    for (double T : cv.T) CHECK(T == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("T estimate from an exact ODE history") {
    const Params P(3.0);
    const double T = 0.734;
    PointHistory h;
    for (double lvl = 1.0; lvl <= 1e8; lvl *= std::pow(10.0, 0.05)) {
        h.t.push_back(T - P.kappa0 / lvl);
        h.u.push_back(lvl);
    }
    h.frozen = true;
    h.freeze_time = h.t.back();
    TFitControls c;
    c.dx = 1.0 / 1024;
    TEstimate est = estimate_T(h, P, c);
    REQUIRE(est.ok);
    CHECK_FALSE(est.fallback);
    CHECK(est.T == doctest::Approx(T).epsilon(1e-10));
}

TEST_CASE("cubic interpolation is exact on cubics") {
    XLine L{-1.0, 0.125, 17, false};
    std::vector<double> v;
    for (int i = 0; i < L.n; ++i) {
        const double x = L.x(i);
        v.push_back(x * x * x - 2 * x + 1);
    }
    for (double x : {-0.93, 0.0, 0.3141, 0.99}) {
        double dv = 0.0;
        CHECK(interp_cubic(L, v, x, &dv) == doctest::Approx(x * x * x - 2 * x + 1).epsilon(1e-13));
        CHECK(dv == doctest::Approx(3 * x * x - 2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(interp_cubic(L, v, 1.5), InputError);
    XLine P{-1.0, 0.125, 16, true};
    CHECK(P.nearest(1.01) == 0);
    CHECK(P.nearest(-1.2) == P.n - 2);
}

TEST_CASE("chapeau fit recovers a planted log correction") {
    const double x0 = 0.1, T0 = 0.8, beta = 1.0, C = 0.7;
    std::vector<double> x, T;
    for (int i = -200; i <= 200; ++i) {
        const double xi = x0 + i * 1e-3, r = std::abs(xi - x0);
        x.push_back(xi);
        T.push_back(r > 0 ? T0 - r + C * r * std::pow(std::abs(std::log(r)), -beta) : T0);
    }
    ChapeauReport rep = chapeau_bound_check(x, T, x0, T0, 2, 3.0, 2e-3, 0.2);
    CHECK(rep.all_positive);
    CHECK(rep.log_corrected);
    CHECK(rep.beta_fit == doctest::Approx(beta).epsilon(1e-10));
    CHECK(rep.constant == doctest::Approx(C).epsilon(1e-10));
    CHECK(rep.beta_expected == doctest::Approx(1.0));
}

TEST_CASE("lower bound monitor on decaying data") {
    const Params P(3.0, Variant::Unsigned);
    CauchyData d = periodic_data(1.0 / 64, [](double x) { return 0.1 * std::cos(M_PI * x); }, [](double) { return 0.0; });
    PhysicalControls c;
    c.t_end = 0.5;
    Evolution e = evolve_u(d, P, c);
    LowerBoundReport r = lower_bound_monitor(e, d, 0.5, 0.5, P);
    CHECK(r.M == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.min_u >= -0.1 - 1e-9);
    CHECK(r.violations == 0);
    CHECK_THROWS_AS(lower_bound_monitor(e, d, 0.0, 0.5, P), InputError);
}

TEST_CASE("presets") {
    const Params P(3.0);
    for (const auto& name : preset_names()) {
        PresetOptions po;
        po.dx = 1.0 / 64;
        CauchyData d = make_preset(name, P, po);
        CHECK_NOTHROW(d.validate());
        CHECK(d.line.x(d.line.nearest(0.0)) == doctest::Approx(0.0).scale(1.0));
    }
    PresetOptions po;
    po.dx = 1.0 / 64;
    CauchyData odd = make_preset("odd-sine", P, po);
    const int z = odd.line.nearest(0.0);
    for (int j = 1; j < 20; ++j) CHECK(odd.u0[z + j] == doctest::Approx(-odd.u0[z - j]).epsilon(1e-12));
    CHECK_THROWS_AS(make_preset("nope", P, po), UsageError);
    po.dx = 0.3;
    CHECK_THROWS_AS(make_preset("odd-sine", P, po), InputError);
}

TEST_CASE("Cauchy data validation") {
    CauchyData d;
    d.line = XLine{-1.0, 0.1, 20, true};
    d.u0.assign(20, 0.0);
    d.u1.assign(19, 0.0);
    CHECK_THROWS_AS(d.validate(), InputError);
    d.u1.assign(20, 0.0);
    d.u0[3] = std::nan("");
    CHECK_THROWS_AS(d.validate(), InputError);
}

TEST_CASE("curve csv carries a header and one row per point") {
    BlowupCurve cv;
    cv.dx = 0.5;
    cv.x = {0.0, 0.5};
    cv.T = {1.0, 1.1};
    cv.quality = {0.0, 0.0};
    cv.envelope = {0, 0};
    cv.fallback = {0, 0};
    cv.slope_l = cv.slope_r = {0.0, 0.0};
    cv.cls = {PointClass::R, PointClass::S};
    cv.k_est = {1, 2};
    cv.energy_ratio = cv.probe_tau = cv.freeze_time = {0.0, 0.0};
    cv.slope_test = cv.energy_test = cv.strict_bound = cv.lipschitz_flag = {0, 0};
    const auto path = std::filesystem::temp_directory_path() / "nlwlab_curve_test.csv";
    write_curve_csv(cv, path.string());
    std::ifstream is(path);
    std::string line;
    int rows = 0;
    std::getline(is, line);
    CHECK(line.rfind("x,", 0) == 0);
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove(path);
    CHECK(cv.count(PointClass::S) == 1);
    CHECK(cv.index_of(0.5) == 1);
}
