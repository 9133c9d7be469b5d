#include <cmath>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/modulation.hpp"
#include "nlwlab/profiles.hpp"

using namespace nlwlab;

namespace {

// Max of |A F - lambda F| over |xi| <= 5, relative to max |F|.
double eigen_residual(int lambda, double zeta, int n, const Params& P) {
    XiGrid g = XiGrid::symmetric(12.0, n);
    WState F = F_mode(lambda, zeta, g, P);
    WState AF = linearized_apply(F, zeta, P);
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < g.n; ++i) {
        if (std::abs(g.xi(i)) > 5.0) continue;
        scale = std::max({scale, std::abs(F.w1[i]), std::abs(F.w2[i])});
        res = std::max(res, std::abs(AF.w1[i] - lambda * F.w1[i]));
        res = std::max(res, std::abs(AF.w2[i] - lambda * F.w2[i]));
    }
    return res / scale;
}

}  // namespace

TEST_CASE("F_0 and F_1 are eigenmodes with second-order discretization error") {
    for (double p : {2.0, 3.0}) {
        Params P(p);
        for (int lambda : {0, 1}) {
            const double coarse = eigen_residual(lambda, 0.5, 1025, P);
            const double fine = eigen_residual(lambda, 0.5, 2049, P);
            CHECK(fine < 1e-2);
            CHECK(coarse / fine > 3.0);
        }
    }
}

TEST_CASE("projections are dual to the eigenmodes") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(12.0, 2049);
    for (double zeta : {-1.0, 0.0, 2.0}) {
        ProjectorBasis b = make_basis(zeta, g, P);
        for (int lambda : {0, 1})
            for (int mu : {0, 1}) {
                const double v = project(F_mode(mu, zeta, g, P), b, lambda, P);
                CHECK(v == doctest::Approx(lambda == mu ? 1.0 : 0.0).epsilon(1e-4).scale(1.0));
            }
    }
}

TEST_CASE("count_and_seed finds the solitons of a sum") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(16.0, 2049);
    const std::vector<double> z{-5.0, 0.5, 6.0};
    const std::vector<int> e{1, -1, 1};
    WState st(soliton_sum(z, e, g, P), Field(g));
    Seed s = count_and_seed(st, P);
    REQUIRE(s.k == 3);
    CHECK(s.signs == e);
    for (int j = 0; j < 3; ++j) CHECK(std::abs(s.zeta_guess[j] - z[j]) < 0.05);
}

TEST_CASE("modulation recovers exact soliton sums") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(20.0, 4097);
    const std::vector<double> z{-4.0, 5.0};
    const std::vector<int> e{-1, 1};
    WState st(soliton_sum(z, e, g, P), Field(g));
    auto dec = solve_modulation(st, 2, {-4.3, 5.25}, e, P);
    CHECK(dec.k == 2);
    CHECK(dec.zeta[0] == doctest::Approx(-4.0).epsilon(1e-8));
    CHECK(dec.zeta[1] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(dec.q_norm < 1e-8);
}

TEST_CASE("planted states satisfy the orthogonality conditions") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(20.0, 4097);
    const std::vector<double> z{-5.0, 5.0};
    const std::vector<int> e{1, -1};
    PlantedState ps = planted_state(z, e, g, P);
    const double scale = h_gap(10.0, P.p);
    CHECK(norm_H(ps.q, P) < 100.0 * scale);
    for (double zj : z) CHECK(std::abs(project(ps.q, make_basis(zj, g, P), 0, P)) < 1e-8);
    // Alternating signs repel, as in the Toda flow.
    CHECK(ps.zeta_dot[1] - ps.zeta_dot[0] > 0.0);
}

TEST_CASE("gap functions") {
    CHECK(h_gap(3.0, 3.0) == doctest::Approx(std::exp(-3.0)));
    CHECK(h_gap(3.0, 2.0) == doctest::Approx(std::exp(-6.0) * std::sqrt(3.0)));
    CHECK(h_gap(3.0, 1.5) == doctest::Approx(std::exp(-9.0)));
    CHECK(J_bar({0.0, 2.0, 5.0}, 3.0) == doctest::Approx(2 * std::exp(-2.0) + 3 * std::exp(-3.0)));
}

TEST_CASE("modulation rejects bad input") {
    Params P(3.0);
    XiGrid g = XiGrid::symmetric(12.0, 513);
    WState st(soliton(0.0, g, P), Field(g));
    CHECK_THROWS(solve_modulation(st, 2, {0.0}, {1, 1}, P));
}
