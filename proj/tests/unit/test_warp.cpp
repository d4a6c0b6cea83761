#include <doctest.h>

#include "helpers.hpp"
#include "schro/warp.hpp"

using namespace schro;

TEST_CASE("initial extension carries the warp profile") {
    PGrid pg{-2.0, 2.0, 16, 10.0, -1.0};
    Grid g{-1.0, 1.0, 4, 1};
    CVec u0(4);
    u0 << 1.0, 2.0, -1.0, 0.5;
    WarpedState w = extend_initial(u0, pg, g);
    auto W = w.as_matrix();
    for (int j = 0; j < 16; ++j) {
        double p = pg.p(j);
        double e = std::exp(-(p >= 0 ? 1.0 : 10.0) * std::abs(p));
        CHECK(std::abs(W(j, 1) - 2.0 * e) < 1e-15);
    }
}

TEST_CASE("point recovery inverts the warp at t = 0") {
    PGrid pg{-5.0, 5.0, 512, 10.0, -1.0};
    CVec u0 = CVec::Random(8);
    WarpedState w = extend_initial(u0, pg);
    CHECK((recover(w, Recovery::point()) - u0).norm() < 1e-14);
    double ps = default_p_star(pg);
    CHECK(ps == doctest::Approx(3 * pg.dp()));
    CHECK_THROWS(recover(w, Recovery::point(0.01)));  // off-grid
    CHECK_THROWS(recover(w, Recovery::point(-pg.dp())));
}

TEST_CASE("integral recovery is the right Riemann sum over p > 0") {
    PGrid pg{-5.0, 5.0, 512, 10.0, -1.0};
    CVec u0 = CVec::Ones(1);
    WarpedState w = extend_initial(u0, pg);
    double dp = pg.dp();
    // dp * sum_{k>=1} e^{-k dp} up to p = R
    double ref = 0.0;
    for (int k = 1; k < 256; ++k) ref += std::exp(-k * dp);
    ref *= dp;
    CHECK(std::abs(recover(w, Recovery::integrate())[0] - ref) < 1e-14);
}

TEST_CASE("domain estimate reproduces T*") {
    // L = L0 - T s1, s1 = pi^2; L = -5, L0 = -1 gives T* = 4/pi^2
    double Tstar = 0.4052847345693511;
    CHECK(estimate_domain(Tstar, kPi * kPi, -1.0) == doctest::Approx(-5.0).epsilon(1e-15));
}

TEST_CASE("analytic mode solution and dominant speed") {
    CHECK(std::abs(analytic_mode_solution(2.0, 1.0, 0.5, 1.0, 10.0) - 2.0 * std::exp(-1.5)) < 1e-15);
    CHECK(std::abs(analytic_mode_solution(1.0, 1.0, 0.5, -1.0, 10.0) - std::exp(-5.0)) < 1e-15);
    RVec amps(4), speeds(4);
    amps << 1.0, 1e-3, 1e-12, 0.0;
    speeds << 1.0, 4.0, 9.0, 16.0;
    CHECK(dominant_speed(amps, speeds) == 4.0);
}

TEST_CASE("containment fraction") {
    CVec prof = CVec::Zero(10);
    CHECK(containment_fraction(prof) == 0.0);
    prof[0] = 1.0;
    prof[5] = 3.0;
    CHECK(containment_fraction(prof) == doctest::Approx(0.25));
}
