#include <doctest.h>

#include "schro/common.hpp"
#include "schro/resources.hpp"

using namespace schro;

TEST_CASE("worked examples") {
    CostQuery q;
    q.method = CostMethod::SchrHeat;
    q.d = 1;
    q.m = 4;
    q.m_p = 9;
    q.T = 1.0;
    q.dt = 0.01;
    CHECK(estimate(q).count == doctest::Approx(3652.9325012980808).epsilon(1e-13));
    CHECK(estimate(q).polylog == 1.0);
    CostQuery c;
    c.method = CostMethod::SchrConvection;
    c.d = 2;
    c.m = 5;
    CHECK(estimate(c).count == doctest::Approx(34.828921423310433).epsilon(1e-14));
    RatioEstimate r = heat_cost_ratio(0.01, 2.0, 1, 1e-3);
    CHECK(r.value == doctest::Approx(0.038631913574765357).epsilon(1e-13));
}

TEST_CASE("ratio equals the quotient of the two special-case estimates") {
    double dx = 0.01, eps = 1e-3;
    RatioEstimate r = heat_cost_ratio(dx, 2.0, 1, eps);
    CostQuery s;
    s.method = CostMethod::SchrSpecial;
    s.d = 1;
    s.m = r.m;
    s.m_p = r.m_p;
    s.T = 1.0;
    s.dt = dx;
    CostQuery u = s;
    u.method = CostMethod::UnitarisationSpecial;
    u.dt = dx * dx;
    CHECK(estimate(s).count / estimate(u).count == doctest::Approx(r.value).epsilon(1e-13));
}

TEST_CASE("special case equals the heat formula") {
    CostQuery q;
    q.d = 3;
    q.m = 6;
    q.m_p = 10;
    q.T = 2.0;
    q.dt = 0.05;
    q.method = CostMethod::SchrHeat;
    double a = estimate(q).count;
    q.method = CostMethod::SchrSpecial;
    CHECK(estimate(q).count == a);
}

TEST_CASE("missing field is named") {
    CostQuery q;
    q.method = CostMethod::SchrGeneral;
    q.d = 1;
    q.m = 4;
    q.m_p = 8;
    q.T = 1;
    q.dp = 0.1;
    q.s = 3;
    q.epsilon = 1e-3;
    CHECK_THROWS_WITH_AS(estimate(q), doctest::Contains("a_max"), SchemaError);
    q.a_max = 2.0;
    CostEstimate e = estimate(q);
    CHECK(e.tau == doctest::Approx(60.0));
    CHECK(e.count == doctest::Approx(12 * 60.0 + 8 * 3));
}

TEST_CASE("polylog factor") {
    CHECK(polylog_factor(1e4, 1e-6) == doctest::Approx(41805.646777149843).epsilon(1e-13));
    CHECK(polylog_factor(0.5, 1.0) == 1.0);
    CHECK_THROWS(parse_cost_method("Quantum"));
}
