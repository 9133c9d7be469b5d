#include <cmath>
#include <random>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/linalg.hpp"
#include "nlwlab/ode.hpp"
#include "nlwlab/parallel.hpp"
#include "oracles.hpp"

using namespace nlwlab;

TEST_CASE("tridiagonal solve agrees with a dense solve") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int n = 12;
    std::vector<double> a(n), b(n), c(n), r(n);
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        a[i] = U(rng);
        c[i] = U(rng);
        b[i] = U(rng);  // not diagonally dominant, so pivoting matters
        r[i] = U(rng);
        m[i][i] = b[i];
        if (i > 0) m[i][i - 1] = a[i];
        if (i + 1 < n) m[i][i + 1] = c[i];
    }
    const auto x = solve_tridiagonal(a, b, c, r);
    const auto ref = oracle::dense_solve(m, r);
    for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-10));

    std::vector<double> flat;
    for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
    const auto y = solve_dense(flat, r, n);
    for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(ref[i]).epsilon(1e-10));
    CHECK_THROWS_AS(solve_dense({1.0, 2.0, 2.0, 4.0}, {1.0, 1.0}, 2), NumericalError);
}

TEST_CASE("line fit") {
    const LineFit f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.rms == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Dormand-Prince on linear and oscillatory problems") {
    Dopri5 decay([](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = -y[0]; }, {1e-12, 1e-14});
    decay.reset(0.0, {1.0});
    decay.advance_to(5.0);
    CHECK(decay.t() == 5.0);
    CHECK(decay.y()[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-10));

    Dopri5 osc([](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -y[0];
    }, {1e-11, 1e-13});
    osc.reset(0.0, {0.0, 1.0});
    osc.advance_to(10.0);
    CHECK(osc.y()[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-8));
    CHECK(osc.steps() > 0);
}

TEST_CASE("Dormand-Prince reports a step underflow near a singularity") {
    OdeControls c{1e-10, 1e-12};
    c.h_min = 1e-10;
    Dopri5 blow([](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0] * y[0]; }, c);
    blow.reset(0.0, {1.0});
    CHECK_THROWS_AS(blow.advance_to(2.0), StiffnessError);
    CHECK(blow.t() < 1.0);
    CHECK(blow.t() > 0.99);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<int> hits(100, 0);
    parallel_for(100, 3, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 2, [](int i) {
        if (i == 7) throw InputError("boom");
    }), InputError);
}
