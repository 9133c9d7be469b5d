#include <cmath>
#include <random>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/profiles.hpp"
#include "oracles.hpp"

using namespace nlwlab;

TEST_CASE("params reject p <= 1 and unknown variants") {
    CHECK_THROWS_AS(Params(1.0), InputError);
    CHECK_THROWS_AS(Params(0.5), InputError);
    CHECK_THROWS_AS(variant_from_string("both"), InputError);
    CHECK(variant_from_string("unsigned") == Variant::Unsigned);
}

TEST_CASE("kappa0 matches its closed form") {
    for (double p : {1.5, 2.0, 3.0, 5.0, 7.0}) {
        Params P(p);
        CHECK(P.kappa0 == doctest::Approx(oracle::kappa0(p)).epsilon(1e-14));
    }
    CHECK(Params(3.0).kappa0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("nonlinearity primitives are consistent") {
    for (Variant v : {Variant::Signed, Variant::Unsigned}) {
        Params P(2.5, v);
        for (double u : {-1.3, -0.2, 0.4, 2.0}) {
            const double h = 1e-5;
            CHECK(P.f(u) == doctest::Approx((P.F(u + h) - P.F(u - h)) / (2 * h)).epsilon(1e-8));
            CHECK(P.df(u) == doctest::Approx((P.f(u + h) - P.f(u - h)) / (2 * h)).epsilon(1e-8));
        }
        CHECK(P.F(0.0) == 0.0);
    }
    CHECK(Params(3.0).f(-2.0) == doctest::Approx(-8.0));
    CHECK(Params(3.0, Variant::Unsigned).f(-2.0) == doctest::Approx(8.0));
}

TEST_CASE("kappa in y and kappa_bar in xi agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (double p : {2.0, 3.0, 5.0}) {
        Params P(p);
        const double b = 1.0 / (p - 1.0);
        double worst = 0.0;
        for (int n = 0; n < 100; ++n) {
            const double xi = U(rng), z = U(rng);
            const double y = std::tanh(xi), d = -std::tanh(z);
            const double lhs = kappa(d, y, P) * std::pow(std::cosh(xi), -2.0 * b);
            worst = std::max(worst, std::abs(lhs - kappa_bar(xi - z, P)) / P.kappa0);
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("d and zeta are inverse") {
    for (double z : {-3.0, -0.5, 0.0, 1.25, 4.0}) CHECK(zeta_of(d_of(z)) == doctest::Approx(z).epsilon(1e-12));
    CHECK(d_of(1.0) == doctest::Approx(-std::tanh(1.0)));
    CHECK(log_cosh(800.0) == doctest::Approx(800.0 - std::log(2.0)));
}

TEST_CASE("rho mass and the soliton energy") {
    for (double p : {2.0, 3.0, 5.0}) {
        Params P(p);
        CHECK(rho_mass(P) == doctest::Approx(oracle::rho_mass(p)).epsilon(1e-9));
        CHECK(soliton_energy(P) == doctest::Approx(oracle::soliton_energy(p)).epsilon(1e-9));
    }
    CHECK(soliton_energy(Params(3.0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("discrete energy of a soliton converges to E(kappa0)") {
    Params P(3.0);
    for (double z : {0.0, 1.5}) {
        XiGrid g = XiGrid::symmetric(14.0, 4097);
        WState st(soliton(z, g, P), Field(g));
        CHECK(energy(st, P) == doctest::Approx(soliton_energy(P)).epsilon(1e-5));
    }
}

namespace {

// Max stationary residual L k - lc k + f(k) over |xi| <= 4.
double stationary_residual(int n, const Params& P) {
    XiGrid g = XiGrid::symmetric(10.0, n);
    Field k = soliton(0.7, g, P);
    Field Lk = apply_L_pointwise(k, P);
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i)
        if (std::abs(g.xi(i)) <= 4.0) worst = std::max(worst, std::abs(Lk[i] - P.linear_coeff() * k[i] + P.f(k[i])));
    return worst;
}

}  // namespace

TEST_CASE("solitons are stationary for the pointwise operator") {
    Params P(3.0);
    const double coarse = stationary_residual(1025, P), fine = stationary_residual(2049, P);
    CHECK(fine < 1e-3);
    CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("conservative L is symmetric in the weighted product") {
    Params P(2.0);
    XiGrid g = XiGrid::symmetric(10.0, 1025);
    Field a(g), b(g);
    for (int i = 0; i < g.n; ++i) {
        a[i] = std::sin(g.y(i)) + 0.3;
        b[i] = g.y(i) * g.y(i);
    }
    XiMetric m(g, P);
    Field La = apply_L(a, P), Lb = apply_L(b, P);
    std::vector<double> ab(g.n), ba(g.n);
    for (int i = 0; i < g.n; ++i) {
        ab[i] = La[i] * b[i];
        ba[i] = a[i] * Lb[i];
    }
    CHECK(m.integrate(ab) == doctest::Approx(m.integrate(ba)).epsilon(1e-10));
    CHECK(m.integrate(ab) == doctest::Approx(-m.dirichlet(a.values, b.values)).epsilon(1e-10));
}

TEST_CASE("representation transforms round trip") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(8.0, 257);
    Field r = soliton(0.3, g, P);
    Field back = transform(transform(r, Representation::HatForm, P), Representation::YForm, P);
    for (int i = 0; i < g.n; ++i) CHECK(back[i] == doctest::Approx(r[i]).epsilon(1e-12));
    Field bar = transform(r, Representation::BarForm, P);
    for (int i = 0; i < g.n; i += 16) CHECK(bar[i] == doctest::Approx(kappa_bar(g.xi(i) - 0.3, P)).epsilon(1e-12));
}

TEST_CASE("soliton_dd matches a finite difference in d") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(6.0, 129);
    const double z = 0.4, d = d_of(z), h = 1e-6;
    Field dd = soliton_dd(z, g, P);
    for (int i = 0; i < g.n; i += 8) {
        const double y = g.y(i);
        const double fd = (kappa(d + h, y, P) - kappa(d - h, y, P)) / (2 * h);
        CHECK(dd[i] == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("fields on different grids are rejected") {
    Field a(XiGrid::symmetric(8.0, 65)), b(XiGrid::symmetric(8.0, 129));
    CHECK_THROWS_AS(a + b, InputError);
    CHECK_THROWS_AS(XiGrid(1.0, 0.0, 10), InputError);
}
