#include <cmath>

#include "abesov/fractional.hpp"
#include "abesov/gamma.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;
using testutil::rel;
using testutil::vec;

TEST_CASE("frac_power on scalars and diagonals") {
    Operator two = build_operator("diagonal [2]");
    CHECK(frac_power(two, 0.5, vec({1})).value(0, 0).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
    Operator d = build_operator("diagonal [1,4]");
    QuadResult r = frac_power(d, 0.5, vec({1, 1}));
    CHECK(rel(r.value, vec({1, 2})) <= 1e-8);
    CHECK(r.diagnostics.tail_certified);
    // integer exponents fall through to repeated application
    CHECK(rel(frac_power(d, 2.0, vec({1, 1})).value, vec({1, 16})) <= 1e-15);
    CHECK_THROWS_AS(frac_power(d, Complex(1.0, 0.5), vec({1, 1})), QuadratureError);
    CHECK_THROWS_AS(frac_power(d, -0.5, vec({1, 1})), AdmissibilityError);
}

TEST_CASE("frac_power agrees with the spectral route on dense SPD") {
    Operator a = testutil::random_spd(16, 100.0, 21);
    Block x = testutil::random_vector(16, 22);
    Complex al(0.7, 0.3);
    CHECK(rel(frac_power(a, al, x).value, spectral_frac_power(a, al, x)) <= 1e-6);
}

TEST_CASE("serial and parallel quadrature agree bitwise") {
    Operator a = testutil::random_spd(8, 50.0, 5);
    Block x = testutil::random_vector(8, 6);
    Block s = frac_power(a, 0.6, x, {}, Execution::serial).value;
    Block p = frac_power(a, 0.6, x, {}, Execution::parallel).value;
    CHECK((s - p).norm() == 0.0);
}

TEST_CASE("unified representation") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(frac_power_unified(d, 0.0, 1.0, 1.0, vec({1, 1})).value, vec({1, 1})) <= 1e-8);
    CHECK(rel(frac_power_unified(d, -0.5, 1.0, 0.5, vec({1, 1})).value, vec({1, 0.5})) <= 1e-8);
    Operator a = testutil::random_spd(8, 30.0, 8);
    Block x = testutil::random_vector(8, 9);
    Complex z(0.5, 0.2);
    CHECK(rel(frac_power_unified(a, z, 1.2, 1.7, x).value, spectral_frac_power(a, z, x)) <= 1e-6);
    CHECK_THROWS_AS(frac_power_unified(d, 2.0, 1.0, 1.0, vec({1, 1})), AdmissibilityError);
    CHECK_THROWS_AS(frac_power_unified(build_operator("diagonal [0,1]"), -0.2, 1.0, 1.0, vec({1, 1})),
                    InjectivityError);
}

TEST_CASE("spectral powers") {
    Operator d = build_operator("diagonal [1,2,4]");
    Block x = vec({1, 1, 1});
    Block y = spectral_frac_power(d, Complex(0, 1), x);
    CHECK(y.norm() == doctest::Approx(x.norm()).epsilon(1e-14));
    Operator t = Operator::torus_laplacian(16);
    Block w = testutil::random_vector(16, 3);
    CHECK(rel(spectral_frac_power(t, 1.0, w), t.apply(w)) <= 1e-12);
    Operator d2 = build_operator("diagonal [1,4]");
    Complex z(0.5, 0.5);
    Block e2 = spectral_frac_power(d2, z, vec({0, 1}));
    CHECK(std::abs(e2(1, 0) - 2.0 * std::exp(Complex(0, 0.5 * std::log(4.0)))) < 1e-14);
    CHECK_THROWS_AS(spectral_frac_power(build_operator("diagonal [0,1]"), -0.5, vec({1, 1})), InjectivityError);
}

TEST_CASE("additivity and multiplicativity") {
    Operator a = testutil::random_spd(8, 20.0, 31);
    Block x = testutil::random_vector(8, 32);
    Block ab = frac_power(a, 0.3, frac_power(a, 0.5, x).value).value;
    CHECK(rel(ab, frac_power(a, 0.8, x).value) <= 1e-6);
    Operator p = Operator::frac_power(a, 0.5);
    CHECK(rel(spectral_frac_power(p, 1.5, x), spectral_frac_power(a, 0.75, x)) <= 1e-13);
}

TEST_CASE("fractional resolvents") {
    Operator one = build_operator("diagonal [1]");
    CHECK(frac_resolvent(one, 0.5, 1.0, vec({1})).value(0, 0).real() == doctest::Approx(0.5).epsilon(1e-8));
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(frac_resolvent(d, 0.5, 2.0, vec({1, 1})).value, vec({1.0 / 3, 0.25})) <= 1e-8);
    Block l = frac_resolvent(d, 0.5, 2.0, vec({1, 1}), {}, true).value;
    CHECK(rel(l, vec({1.0 / 3, 0.5})) <= 1e-8);
    CHECK_THROWS_AS(frac_resolvent(d, 1.5, 1.0, vec({1, 1})), AdmissibilityError);
}

TEST_CASE("semigroups") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(semigroup_apply(d, 0.0, vec({1, 1})), vec({1, 1})) == 0.0);
    CHECK(rel(semigroup_apply(d, std::log(2.0), vec({1, 1})), vec({0.5, 1.0 / 16})) <= 1e-14);
    Operator a = testutil::random_spd(8, 20.0, 41);
    Block x = testutil::random_vector(8, 42);
    CHECK(rel(semigroup_apply(a, 0.3, semigroup_apply(a, 0.9, x)), semigroup_apply(a, 1.2, x)) <= 1e-12);
    Operator nn = build_operator("dense [[1,2],[0,3]]");
    CHECK_THROWS_AS(semigroup_apply(nn, 1.0, vec({1, 1})), UnsupportedError);
    CHECK(semigroup_apply(nn, 1.0, vec({1, 1}), true).allFinite());
}

TEST_CASE("fractional powers through the semigroup") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(rel(frac_power_via_semigroup(d, 0.5, 1.0, vec({1, 1})).value, vec({1, 2})) <= 1e-7);
    Operator one = build_operator("diagonal [1]");
    CHECK(frac_power_via_semigroup(one, 0.3, 2.0, vec({1})).value(0, 0).real() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(frac_power_via_semigroup(d, 0.0, 1.0, vec({1, 1})).value == vec({1, 1}));
}

TEST_CASE("subordinated semigroups") {
    Operator d = build_operator("diagonal [1,4]");
    Block s = subordinated_semigroup(d, 0.5, 1.0, vec({1, 1})).value;
    CHECK(rel(s, vec({std::exp(-1.0), std::exp(-2.0)})) <= 1e-14);

    Operator one = build_operator("diagonal [1]");
    SubordinatedResult k = subordinated_semigroup(one, 0.5, 1.0, vec({1}), SubordinationRoute::kernel);
    CHECK(std::abs(k.value(0, 0) - std::exp(-1.0)) <= 1e-4);
    CHECK(k.mass_residual < 1e-6);

    Block near0 = subordinated_semigroup(d, 0.5, 1e-6, vec({1, 1}), SubordinationRoute::kernel).value;
    CHECK(rel(near0, vec({1, 1})) <= 1e-5);
    // closed form of the stable density at alpha = 1/2
    double t = 1.0, u = 0.7;
    double want = t / (2.0 * std::sqrt(kPi)) * std::pow(u, -1.5) * std::exp(-t * t / (4.0 * u));
    CHECK(subordination_kernel(0.5, t, u) == doctest::Approx(want).epsilon(1e-8));
}

TEST_CASE("ergodic limits") {
    Operator k = build_operator("diagonal [0,1]");
    ErgodicLimits e = ergodic_limits(k, 1.0, vec({1, 1}));
    CHECK(rel(e.at_zero, vec({1, 0})) <= 1e-10);
    CHECK(rel(e.range_at_zero, vec({0, 1})) <= 1e-10);
    CHECK(e.split_residual <= 1e-10);

    Operator d = build_operator("diagonal [1,4]");
    ErgodicLimits f = ergodic_limits(d, 0.5, vec({1, 1}));
    CHECK(f.at_zero.norm() <= 1e-6);
    Block x = vec({1, 1});
    Block at_big = spectral_frac_power(d, 0.0, x);
    // t^a (t+A)^{-a} x at t = 1e8
    Block v = std::pow(1e8, 0.5) * shifted_negative_power(d, 1e8, 0.5, x);
    CHECK(rel(v, at_big) <= 1e-6);
    CHECK(rel(f.at_infinity, x) <= 1e-6);
}

TEST_CASE("kernel of powers") {
    Operator k = build_operator("diagonal [0,2,5]");
    for (Complex a : {Complex(0.5), Complex(1.3, 0.4)}) {
        Block y = spectral_frac_power(k, a, vec({1, 0, 0}));
        CHECK(y.norm() == 0.0);
        CHECK(spectral_frac_power(k, a, vec({0, 1, 1})).norm() > 0.0);
    }
}

TEST_CASE("reproducing formulas") {
    Operator d = build_operator("diagonal [1,4]");
    CHECK(reproducing_residual(d, 1.0, 1, 1.0, vec({1, 1})) <= 1e-8);
    Operator a = testutil::random_spd(8, 20.0, 51);
    Block x = testutil::random_vector(8, 52);
    CHECK(reproducing_residual(a, 2.0, 3, 1.0, x) <= 1e-6);
    CHECK(reproducing_residual(a, 0.5, 1, 0.0, x) <= 1e-6);
}
