#include <cmath>

#include "abesov/fractional.hpp"
#include "abesov/operator.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;
using testutil::rel;
using testutil::vec;

TEST_CASE("apply on the basic kinds") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(d.apply(vec({1, 1})), vec({1, 4})) < 1e-15);

    Operator t = Operator::torus_laplacian(8);
    Block ones = Block::Ones(8, 1);
    CHECK(t.apply(ones).norm() < 1e-12);

    Operator m = build_operator("dense [[2,1],[0,3]]");
    CHECK(rel(m.apply(vec({1, 1})), vec({3, 3})) < 1e-15);
    CHECK_THROWS_AS(d.apply(vec({1, 2, 3})), DimensionError);
}

TEST_CASE("resolvents") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(d.resolve(1.0, vec({1, 1})), vec({0.5, 0.2})) < 1e-15);

    for (const char* spec : {"diagonal [0,1,4]", "dense [[2,1],[0,3]]", "torus_laplacian n=16",
                             "shifted(diagonal [1,4], eps=1)", "inverse(diagonal [1,2,4])",
                             "frac_power(diagonal [1,2,9], 0.5)"}) {
        Operator a = build_operator(spec);
        Block x = testutil::random_vector(a.dim(), 7);
        Block r = a.resolve(1.0, x);
        CAPTURE(spec);
        CHECK(rel(r + a.apply(r), x) <= 1e-12);
        // resolvent equation
        double l = 0.3, m = 5.0;
        Block lhs = a.resolve(l, x) - a.resolve(m, x);
        Block rhs = (m - l) * a.resolve(l, a.resolve(m, x));
        CHECK(rel(lhs, rhs) <= 1e-10);
    }
}

TEST_CASE("dense SPD resolvent against its eigendecomposition") {
    Operator a = testutil::random_spd(16, 100.0, 3);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
    Block x = testutil::random_vector(16, 4);
    Eigen::VectorXcd d = (es.eigenvalues().array() + 0.37).inverse().cast<Complex>();
    Block want = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint() * x;
    CHECK(rel(a.resolve(0.37, x), want) <= 1e-10);
}

TEST_CASE("non-negativity constants") {
    NonNegConstants c = build_operator("diagonal [1,4]").constants();
    CHECK(c.M == 1.0);
    CHECK(c.L == 1.0);
    CHECK(c.exact);
    NonNegConstants s = build_operator("shifted(diagonal [1,4], eps=1)").constants();
    CHECK(s.M == 1.0);
    CHECK(s.L == 1.0);

    // sup over lambda of ||lambda (lambda + J)^{-1}|| for the 2x2 Jordan-type block: 2.6
    // (scipy dense-grid maximisation at lambda = 1.0833)
    Operator j = build_operator("dense [[1,10],[0,1]]");
    ConstantsEstimate e = estimate_nonnegativity_constants(j, default_lambda_grid(j));
    CHECK(e.M == doctest::Approx(2.6).epsilon(1e-6));
    CHECK(std::isfinite(e.L));
    CHECK(j.constants().M > 1.0);

    // the inverse swaps the two constants
    ConstantsEstimate ei = estimate_nonnegativity_constants(Operator::inverse(j), default_lambda_grid(j));
    CHECK(ei.M == doctest::Approx(e.L).epsilon(1e-3));
    CHECK(ei.L == doctest::Approx(e.M).epsilon(1e-3));
}

TEST_CASE("non-negativity bounds hold on random vectors") {
    Operator a = build_operator("dense [[1,3,0],[0,2,1],[0,0,5]]");
    NonNegConstants c = a.constants();
    for (int i = 0; i < 20; ++i) {
        Block x = testutil::random_vector(3, 100 + i);
        for (double l : log_grid(1e-4, 1e4, 17)) {
            Block r = a.resolve(l, x);
            CHECK((l * r).norm() <= c.M * x.norm() * (1 + 1e-9));
            CHECK(a.apply(r).norm() <= c.L * x.norm() * (1 + 1e-9));
        }
    }
}

TEST_CASE("build_operator grammar") {
    Operator a = build_operator("diagonal [1,2,4]");
    CHECK(a.dim() == 3);
    CHECK(a.spectral()->eigenvalues.isApprox(RealVec((RealVec(3) << 1, 2, 4).finished())));

    Operator t = build_operator("torus_laplacian n=16");
    RealVec ev = t.spectral()->eigenvalues;
    for (int k = 0; k < 16; ++k) {
        double want = 4.0 * 256.0 * std::pow(std::sin(kPi * k / 16.0), 2);
        CHECK(ev[k] == doctest::Approx(want).epsilon(1e-12));
    }
    // plane wave is an eigenvector of apply
    Block w(16, 1);
    for (int i = 0; i < 16; ++i) w(i, 0) = std::exp(Complex(0, 2 * kPi * 3 * i / 16.0));
    CHECK(rel(t.apply(w), ev[3] * w) < 1e-12);

    Operator inv = build_operator("inverse(diagonal [1,2,4])");
    CHECK(inv.spectral()->eigenvalues.isApprox(RealVec((RealVec(3) << 1, 0.5, 0.25).finished())));
    CHECK_THROWS_AS(build_operator("inverse(diagonal [0,1])"), InjectivityError);
    CHECK_THROWS_AS(build_operator("hexagonal [1]"), ParseError);
    CHECK_THROWS_AS(build_operator("diagonal [1,-2]"), NonNegativityError);
}

TEST_CASE("inverse of the inverse") {
    Operator a = build_operator("dense [[2,1,0],[0,3,1],[0,0,4]]");
    Operator back = Operator::inverse(Operator::inverse(a));
    for (int i = 0; i < 5; ++i) {
        Block x = testutil::random_vector(3, 200 + i);
        CHECK(rel(back.apply(x), a.apply(x)) <= 1e-10);
    }
}

TEST_CASE("inverse resolvent is accurate far from the spectrum") {
    Operator a = build_operator("dense [[0.5,2,0],[0,3,1],[0,0,8]]");
    Operator inv = Operator::inverse(a);
    Block x = testutil::random_vector(3, 11);
    for (double l : {1e-12, 1e-6, 1.0, 1e6}) {
        Block r = inv.resolve(l, x);
        // (l + A^{-1}) r = x
        CHECK(rel(l * r + a.solve(r), x) <= 1e-12);
    }
}

TEST_CASE("injectivity and the induced norm") {
    CHECK_FALSE(build_operator("diagonal [0,1]").injective());
    CHECK(build_operator("diagonal [1e-3,1]").injective());
    Eigen::MatrixXcd m(2, 2);
    m << 3, 0, 4, 0;
    CHECK(induced_norm(m) == doctest::Approx(5.0));
    CHECK(induced_norm(m, Norm::lp(1)) == doctest::Approx(7.0));
}
