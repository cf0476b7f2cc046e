#include <cmath>

#include "abesov/besov.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;
using testutil::vec;

namespace {

BesovIndex index(double s, double q, int k, Complex alpha, Complex beta) {
    BesovIndex i;
    i.s = s;
    i.q = q;
    i.k = k;
    i.alpha = alpha;
    i.beta = beta;
    return i;
}

NormOptions tight() {
    NormOptions o;
    o.tail_tolerance = 1e-13;
    return o;
}

}  // namespace

// Reference values: tests/oracles/make_oracles.py (mpmath nsum/quad, 40 digits).
TEST_CASE("inhomogeneous norm of the scalar operator 1") {
    Operator one = build_operator("diagonal [1]");
    NormResult r = inhom_quasi_norm(one, index(0.5, 2.0, 0, 0.0, 1.0), vec({1}), tight());
    CHECK(r.value == doctest::Approx(1.9199714780794675901).epsilon(1e-11));
    CHECK(r.lead == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.certified);
    // the default tolerance is relative to the whole value
    NormResult d = inhom_quasi_norm(one, index(0.5, 2.0, 0, 0.0, 1.0), vec({1}));
    CHECK(d.tail_bound <= 1e-8 * d.value);
    CHECK(std::abs(d.value - r.value) <= 1e-8 * r.value);
}

TEST_CASE("inhomogeneous norm on diag(1,4)") {
    Operator d = build_operator("diagonal [1,4]");
    NormResult r = inhom_quasi_norm(d, index(0.5, 2.0, 0, 1.0, 2.0), vec({1, 1}), tight());
    CHECK(r.value == doctest::Approx(1.0070960842631190598).epsilon(1e-11));
}

TEST_CASE("continuous norms of the scalar operator 1") {
    Operator one = build_operator("diagonal [1]");
    CHECK(continuous_quasi_norm(one, index(0.5, 2.0, 0, 0.0, 1.0), vec({1})).value ==
          doctest::Approx(1.7071067811865475244).epsilon(1e-8));
    CHECK(continuous_quasi_norm(one, index(0.5, kInf, 0, 0.0, 1.0), vec({1})).value ==
          doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("homogeneous norm of the scalar operator 1") {
    Operator one = build_operator("diagonal [1]");
    // both tails decay like 2^{-|j|/2}: sum a fixed wide range instead of certifying
    NormOptions wide;
    wide.fixed_range = std::make_pair(-120, 120);
    NormResult r = homog_quasi_norm(one, index(0.5, 1.0, 0, 0.5, 1.0), vec({1}), wide);
    CHECK(r.value == doctest::Approx(2.8853900817968599087).epsilon(1e-11));
    CHECK(r.lead == 0.0);
    CHECK(homog_quasi_norm(one, index(0.5, 1.0, 0, 0.5, 1.0), vec({1})).value ==
          doctest::Approx(2.8853900817968599087).epsilon(1e-8));
}

TEST_CASE("semigroup norms") {
    Operator one = build_operator("diagonal [1]");
    CHECK(semigroup_quasi_norm(one, 0.5, kInf, 0, 1.0, vec({1})).value ==
          doctest::Approx(1.4288819424803533982).epsilon(1e-12));
    Operator d = build_operator("diagonal [1,4]");
    CHECK(semigroup_quasi_norm(d, 0.5, 2.0, 0, 1.0, vec({1, 1}), tight()).value ==
          doctest::Approx(3.3033358154279971411).epsilon(1e-11));
}

TEST_CASE("brute-force summation agrees with the certified tails") {
    Operator a = testutil::random_spd(6, 100.0, 71);
    Block x = testutil::random_vector(6, 72);
    BesovIndex idx = index(0.3, 1.5, 1, Complex(0.4, 0.2), 1.5);
    NormOptions brute;
    brute.fixed_range = std::make_pair(1, 120);
    double tail = inhom_quasi_norm(a, idx, x).value;
    double full = inhom_quasi_norm(a, idx, x, brute).value;
    CHECK(std::abs(tail - full) <= 1e-8 * full);

    NormOptions hb;
    hb.fixed_range = std::make_pair(-120, 120);
    double h = homog_quasi_norm(a, idx, x).value;
    CHECK(std::abs(h - homog_quasi_norm(a, idx, x, hb).value) <= 1e-8 * h);
}

TEST_CASE("trace and block agree") {
    Operator d = build_operator("diagonal [1,4]");
    NormOptions opt;
    opt.keep_trace = true;
    BesovIndex idx = index(0.5, 2.0, 0, 1.0, 2.0);
    NormResult r = inhom_quasi_norm(d, idx, vec({1, 1}), opt);
    REQUIRE(static_cast<int>(r.term_trace.size()) == r.j_hi - r.j_lo + 1);
    for (int j = r.j_lo; j <= r.j_hi; ++j)
        CHECK(r.term_trace[j - r.j_lo] == doctest::Approx(dyadic_block(d, j, idx, vec({1, 1}))).epsilon(1e-14));
}

TEST_CASE("norms are absolutely homogeneous") {
    Operator a = testutil::random_spd(5, 30.0, 81);
    Block x = testutil::random_vector(5, 82);
    Complex c(-1.5, 2.0);
    for (double q : {0.5, 1.0, 2.0, kInf}) {
        BesovIndex idx = index(0.25, q, 0, 0.5, 2.0);
        CHECK(inhom_quasi_norm(a, idx, c * x).value ==
              doctest::Approx(std::abs(c) * inhom_quasi_norm(a, idx, x).value).epsilon(1e-12));
        if (q < 1.0) continue;  // slow homogeneous tails at q = 1/2
        CHECK(homog_quasi_norm(a, idx, c * x).value ==
              doctest::Approx(std::abs(c) * homog_quasi_norm(a, idx, x).value).epsilon(1e-12));
    }
}

TEST_CASE("quasi-triangle inequality") {
    Operator a = testutil::random_spd(5, 30.0, 91);
    for (double q : {0.5, 1.0, 3.0}) {
        BesovIndex idx = index(0.25, q, 0, 0.5, 2.0);
        double K = quasi_triangle_constant(q);
        for (int i = 0; i < 5; ++i) {
            Block x = testutil::random_vector(5, 300 + i), y = testutil::random_vector(5, 400 + i);
            double lhs = inhom_quasi_norm(a, idx, x + y).value;
            double rhs = K * (inhom_quasi_norm(a, idx, x).value + inhom_quasi_norm(a, idx, y).value);
            CHECK(lhs <= rhs * (1 + 1e-9));
        }
    }
}

TEST_CASE("quasi-triangle constant and Aoki-Rolewicz exponent") {
    CHECK(quasi_triangle_constant(2.0) == 1.0);
    CHECK(quasi_triangle_constant(kInf) == 1.0);
    CHECK(quasi_triangle_constant(0.5) == doctest::Approx(2.0));
    CHECK(aoki_rolewicz_p(1.0) == doctest::Approx(1.0));
    CHECK(aoki_rolewicz_p(0.5) == doctest::Approx(0.5));
    CHECK(aoki_rolewicz_p(1.0 / 3.0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("breve norm vanishes on the kernel") {
    Operator a = build_operator("diagonal [1,2,8]");
    BesovIndex idx = index(-0.25, 2.0, 0, 0.5, 1.0);
    NormResult r = breve_quasi_norm(a, idx, vec({1, 1, 1}));
    CHECK(r.value > 0.0);
    CHECK(std::isfinite(r.value));
    CHECK_THROWS_AS(breve_quasi_norm(build_operator("diagonal [0,1]"), idx, vec({1, 1})), InjectivityError);
}

TEST_CASE("index admissibility") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK_THROWS_AS(inhom_quasi_norm(d, index(2.0, 2.0, 0, 0.0, 1.0), vec({1, 1})), AdmissibilityError);
    CHECK_THROWS_AS(inhom_quasi_norm(d, index(-1.0, 2.0, 0, 0.5, 1.0), vec({1, 1})), AdmissibilityError);
    CHECK_THROWS_AS(inhom_quasi_norm(d, index(0.5, 0.0, 0, 0.0, 1.0), vec({1, 1})), AdmissibilityError);
    CHECK_THROWS_AS(semigroup_quasi_norm(d, 1.5, 2.0, 0, 1.0, vec({1, 1})), AdmissibilityError);
}
