#include <cmath>

#include "abesov/interpolation.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;
using testutil::vec;

namespace {

CoupleSpec couple(const std::string& spec, Complex alpha, double theta = 0.5, double q = 2.0) {
    return CoupleSpec{build_operator(spec), alpha, theta, q};
}

}  // namespace

TEST_CASE("K-functional of the scalar operator 1 is min(1, t)|x|") {
    CoupleSpec c = couple("diagonal [1]", 1.0);
    for (double t : {1e-3, 0.5, 0.99, 1.0, 1.01, 2.0, 1e3})
        CHECK(k_functional(c, t, vec({3})).value == doctest::Approx(3.0 * std::min(1.0, t)).epsilon(1e-12));
}

TEST_CASE("K-functional endpoints") {
    CoupleSpec c = couple("diagonal [1,4]", 1.0);
    Block x = vec({1, 1});
    KFunctional k(c, x);
    CHECK(k.norm_x() == doctest::Approx(std::sqrt(2.0)));
    CHECK(k.graph_norm_x() == doctest::Approx(std::sqrt(17.0)));
    CHECK(k.t_lower() <= k.t_upper());
    double lo = 0.5 * k.t_lower(), hi = 2.0 * k.t_upper();
    CHECK(k(lo).value == doctest::Approx(lo * std::sqrt(17.0)).epsilon(1e-12));
    CHECK(k(hi).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(k(hi).endpoint);

    // kernel directions keep K below ||x|| for every t
    KFunctional z(couple("diagonal [0,1]", 1.0), x);
    CHECK(std::isinf(z.t_upper()));
    CHECK(z(1e6).value == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("K-functional is concave and nondecreasing in t") {
    CoupleSpec c{testutil::random_spd(6, 50.0, 61), 0.7, 0.5, 2.0};
    Block x = testutil::random_vector(6, 62);
    KFunctional k(c, x);
    std::vector<double> ts = log_grid(1e-3, 1e3, 25);
    for (size_t i = 1; i + 1 < ts.size(); ++i) {
        double a = k(ts[i - 1]).value, b = k(ts[i]).value, d = k(ts[i + 1]).value;
        CHECK(a <= b * (1 + 1e-12));
        // K(t)/t nonincreasing
        CHECK(b / ts[i] <= a / ts[i - 1] * (1 + 1e-12));
        (void)d;
    }
}

TEST_CASE("minimiser survives random perturbations") {
    CoupleSpec c{testutil::random_spd(5, 20.0, 63), 1.0, 0.5, 2.0};
    Block x = testutil::random_vector(5, 64);
    for (double t : {0.05, 0.3, 2.0}) {
        MinimiserCheck m = verify_k_minimizer(c, t, x, 64, 9);
        CAPTURE(t);
        CHECK(m.ok);
    }
}

TEST_CASE("interpolation norm on diag(1,4)") {
    // scipy brute-force minimisation of K on a 1001-point log grid (make_oracles.py)
    NormResult r = interpolation_norm(couple("diagonal [1,4]", 1.0), vec({1, 1}));
    CHECK(r.value == doctest::Approx(3.32956934359).epsilon(1e-4));
}

TEST_CASE("interpolation norm of the scalar operator 1") {
    // K = min(1, t): (int_0^1 t^{q(1-theta)} dt/t + int_1^inf t^{-q theta} dt/t)^{1/q}
    double theta = 0.3, q = 2.0;
    double want = std::pow(1.0 / (q * (1 - theta)) + 1.0 / (q * theta), 1.0 / q);
    CHECK(interpolation_norm(couple("diagonal [1]", 1.0, theta, q), vec({1})).value ==
          doctest::Approx(want).epsilon(1e-8));
    CHECK(interpolation_norm(couple("diagonal [1]", 1.0, theta, kInf), vec({1})).value ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("couple validation") {
    CHECK_THROWS_AS(couple("diagonal [1]", 1.0, 1.5).validate(), AdmissibilityError);
    CHECK_THROWS_AS(couple("diagonal [1]", -1.0).validate(), AdmissibilityError);
    CHECK_THROWS(interpolation_norm(couple("diagonal [0,1]", 1.0), vec({1, 1})));
}
