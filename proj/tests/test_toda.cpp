#include <cmath>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/toda.hpp"
#include "oracles.hpp"

using namespace nlwlab;

TEST_CASE("closed form of the alternating pair") {
    for (double p : {2.0, 3.0, 5.0})
        for (double s : {1.0, 2.0, 50.0, 1e4})
            CHECK(closed_form_k2(s, 1.5, 1.0, 0.7, p) == doctest::Approx(oracle::k2_gap(s, 1.5, 1.0, 0.7, p)).epsilon(1e-13));
    CHECK_THROWS_AS(closed_form_k2(2.0, -1.0, 1.0, 1.0, 3.0), InputError);
}

TEST_CASE("toda_rhs against the pair equations") {
    TodaState st;
    st.zeta = {-0.8, 0.6};
    st.signs = {1, -1};
    st.c1 = 1.3;
    st.p = 3.0;
    auto r = toda_rhs(st);
    const double L = 1.4;
    CHECK(r[1] - r[0] == doctest::Approx(2 * st.c1 * std::exp(-L)).epsilon(1e-13));
    CHECK(r[0] + r[1] == doctest::Approx(0.0).scale(1.0));
    st.signs = {1, 1};
    r = toda_rhs(st);
    CHECK(r[1] - r[0] == doctest::Approx(-2 * st.c1 * std::exp(-L)).epsilon(1e-13));
}

TEST_CASE("integrated alternating pair follows the closed form") {
    TodaState st;
    st.s = 1.0;
    st.zeta = {-0.5, 0.5};
    st.signs = {-1, 1};
    st.p = 2.0;
    auto tr = integrate_toda(st, 1e4);
    REQUIRE(!tr.samples.empty());
    double worst = 0.0;
    for (const auto& smp : tr.samples) {
        const double L = smp.zeta[1] - smp.zeta[0];
        worst = std::max(worst, std::abs(L - oracle::k2_gap(smp.s, 1.0, 1.0, 1.0, 2.0)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("k=3 matches an independent RK4 integration") {
    TodaState st;
    st.s = 0.0;
    st.zeta = {-2.0, 0.3, 2.5};
    st.signs = {1, -1, 1};
    st.c1 = 0.8;
    st.p = 3.0;
    auto f = [&](double, const std::vector<double>& z) {
        std::vector<double> d(3, 0.0);
        for (int i = 0; i < 3; ++i) {
            double acc = 0.0;
            if (i > 0) acc -= st.signs[i] * st.signs[i - 1] * std::exp(-(z[i] - z[i - 1]));
            if (i < 2) acc += st.signs[i] * st.signs[i + 1] * std::exp(-(z[i + 1] - z[i]));
            d[i] = st.c1 * acc;
        }
        return d;
    };
    const auto ref = oracle::rk4(f, st.zeta, 0.0, 5.0, 20000);
    auto tr = integrate_toda(st, 5.0);
    for (int i = 0; i < 3; ++i) CHECK(tr.final_state.zeta[i] == doctest::Approx(ref[i]).epsilon(1e-9));
}

TEST_CASE("same-sign pair collides at the predicted time") {
    TodaState st;
    st.s = 1.0;
    st.zeta = {-2.0, 2.0};
    st.signs = {1, 1};
    st.p = 3.0;
    const double tc = collapse_time_k2(4.0, 1.0, 3.0);
    // e^{L} = e^{L0} - 2 c1 t reaches e^0 at the collision.
    CHECK(tc == doctest::Approx((std::exp(4.0) - 1.0) / 2.0).epsilon(1e-13));
    try {
        integrate_toda(st, 1.0 + 2 * tc + 10);
        FAIL("expected a collision");
    } catch (const CollisionError& e) {
        // Detected after the first accepted step past the collision.
        CHECK(e.s >= 1.0 + tc - 1e-9);
        CHECK(e.s <= 1.0 + tc + 0.05);
    }
}

TEST_CASE("gap vector bookkeeping") {
    GapVector g = gaps({0.0, 1.0, 3.0, 6.0}, 3.0);
    CHECK(g.L == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(g.r == 2);
    CHECK(g.L_bar == doctest::Approx(2.0));
    CHECK(g.J == doctest::Approx(std::exp(-1.0) + std::exp(-2.0) + std::exp(-3.0)));
}

TEST_CASE("state validation") {
    TodaState st;
    st.zeta = {1.0, 0.0};
    st.signs = {1, -1};
    CHECK_THROWS_AS(st.validate(), InputError);
    st.zeta = {0.0, 1.0};
    st.signs = {1, 2};
    CHECK_THROWS_AS(st.validate(), InputError);
    st.signs = {1, -1};
    st.c1 = 0.0;
    CHECK_THROWS_AS(st.validate(), InputError);
}
