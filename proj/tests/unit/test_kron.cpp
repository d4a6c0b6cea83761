#include <doctest.h>

#include "helpers.hpp"
#include "schro/kron.hpp"

using namespace schro;

TEST_CASE("Kronecker apply agrees with the dense product") {
    Grid g{-1.0, 1.0, 4, 1};
    CMat D = CMat::Random(3, 3);
    KronOperator op;
    op.factors = {KronFactor::momentum(g), KronFactor::matrix(D), KronFactor::diagonal(RVec(RVec::LinSpaced(2, 1.0, 2.0)))};
    op.scale = cplx(0.5, -1.0);
    CMat dense = op.scale * testing::kron(testing::kron(op.factors[0].to_dense(), D), op.factors[2].to_dense());
    CVec v = CVec::Random(24);
    CHECK((op.apply(v) - dense * v).norm() < 1e-12);
    CHECK(max_abs_diff(op.to_dense(), dense) < 1e-12);
    CVec w = v;
    op.apply_inplace(w);
    CHECK((w - dense * v).norm() < 1e-12);
}

TEST_CASE("momentum squared is the square of momentum") {
    KronFactor P = KronFactor::momentum(-2.0, 2.0, 8), P2 = KronFactor::momentum_squared(-2.0, 2.0, 8);
    CHECK(max_abs_diff(P.to_dense() * P.to_dense(), P2.to_dense()) < 1e-11);
}

TEST_CASE("axis factors place the operator on the requested axis") {
    Grid g{-1.0, 1.0, 4, 3};
    auto fs = axis_factors(g, 1, KronFactor::Kind::Momentum);
    REQUIRE(fs.size() == 3);
    CHECK(fs[0].kind == KronFactor::Kind::Identity);
    CHECK(fs[1].kind == KronFactor::Kind::Momentum);
    CHECK(fs[2].kind == KronFactor::Kind::Identity);
}

TEST_CASE("sampling rejects non-finite values and names the node") {
    Grid g{-1.0, 1.0, 4, 1};
    ScalarField bad = [](const std::vector<double>& x) { return x[0] > 0.2 ? std::nan("") : 0.0; };
    CHECK_THROWS_WITH_AS(sample_function(bad, g), doctest::Contains("node"), SchroError);
}
