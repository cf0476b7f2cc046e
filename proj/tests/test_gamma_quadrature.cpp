#include <cmath>

#include "abesov/gamma.hpp"
#include "abesov/quadrature.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abesov;

namespace {

// mpmath, 40 digits (tests/oracles/make_oracles.py)
struct GammaRow {
    double re, im, gre, gim;
};
const GammaRow kGamma[] = {
    {0.1, 0.0, 9.51350769866873129, 0.0},
    {0.5, 0.0, 1.77245385090551603, 0.0},
    {1.0, 0.0, 1.0, 0.0},
    {2.5, 0.0, 1.32934038817913702, 0.0},
    {7.3, 0.0, 1271.42363366390884, 0.0},
    {10.0, 0.0, 362880.0, 0.0},
    {0.1, 10.0, 1.48158754936854272e-7, -2.58404473223471085e-8},
    {0.3, -7.5, 6.73621544856935531e-6, -0.0000109017934043642706},
    {1.5, 2.0, 0.165915108938990955, 0.149463473266419487},
    {2.0, -1.0, 0.652965496420166728, -0.343065839816545358},
    {3.7, 4.4, 0.356276726641508762, -0.0757487761832072689},
    {5.0, 10.0, 0.0132769651673769887, 0.00363901174623281313},
    {9.9, -10.0, 873.302433718215731, 2769.94666832149195},
    {0.25, 0.5, 0.515524490135069097, -1.30732592663182539},
    {6.1, -3.3, 51.774037231545345, 23.1810980694213764},
    {-0.5, 0.0, -3.54490770181103205, 0.0},
    {-2.7, 1.3, -0.0197703539255769086, -0.0261069348076122755},
    {0.75, 0.75, 0.596654302682245623, -0.376760907202403441},
};

}  // namespace

TEST_CASE("gamma matches the high-precision table") {
    for (const auto& r : kGamma) {
        Complex want(r.gre, r.gim);
        Complex got = gamma(Complex(r.re, r.im));
        CAPTURE(r.re);
        CAPTURE(r.im);
        CHECK(std::abs(got / want - 1.0) <= 1e-12);
    }
}

TEST_CASE("gamma poles and reciprocal") {
    CHECK_THROWS_AS(gamma(Complex(0.0)), Error);
    CHECK_THROWS(gamma(Complex(-3.0)));
    CHECK(std::abs(rgamma(Complex(-2.0))) == 0.0);
    CHECK(std::abs(rgamma(Complex(3.0)) - 0.5) < 1e-15);
}

TEST_CASE("Euler integral normalisation") {
    for (double a : {0.25, 0.5, 0.75, 1.5})
        for (int n : {2, 3}) {
            if (!(a < n)) continue;
            QuadratureScheme sc;
            sc.u_min = -30.0;
            sc.u_max = 30.0;
            double I = integrate_line_scalar(
                [&](double u) { return std::exp(a * u) * std::pow(1.0 + std::exp(u), -n); }, sc, {a, n - a});
            double v = abesov::gamma(double(n)) / (abesov::gamma(a) * abesov::gamma(n - a)) * I;
            CAPTURE(a);
            CAPTURE(n);
            CHECK(std::abs(v - 1.0) <= 1e-8);
        }
}

TEST_CASE("scalar resolvent kernel of fractional powers integrates to one") {
    for (double a : {0.25, 0.5, 0.75})
        for (double lam : {0.1, 1.0, 10.0}) {
            const double c = std::cos(kPi * a);
            QuadratureScheme sc;
            sc.u_min = -40.0;
            sc.u_max = 40.0;
            double I = integrate_line_scalar(
                [&](double u) {
                    double ma = std::exp(a * u);
                    return lam * ma / (lam * lam + 2.0 * lam * ma * c + ma * ma);
                },
                sc, {a, a});
            CHECK(std::abs(I / (abesov::gamma(a) * abesov::gamma(1.0 - a)) - 1.0) <= 1e-6);
        }
}

TEST_CASE("node sums are bit-identical serial and parallel") {
    std::vector<double> nodes, weights;
    for (int i = 0; i < 5000; ++i) {
        nodes.push_back(-10.0 + 20.0 * i / 4999.0);
        weights.push_back(1.0 / (1.0 + i % 7));
    }
    Integrand g = [](double u) {
        Block b(3, 1);
        b << std::exp(-u * u), Complex(std::sin(u), std::cos(3 * u)), 1.0 / (1.0 + u * u);
        return b;
    };
    Block s = node_sum(g, nodes, weights, Execution::serial);
    Block p = node_sum(g, nodes, weights, Execution::parallel);
    CHECK((s - p).norm() == 0.0);
}

TEST_CASE("Gauss-Legendre panels integrate polynomials exactly") {
    double v = integrate_panels_scalar([](double u) { return 3 * u * u - 2 * u + 1; }, -1.0, 2.0, 0.7);
    CHECK(v == doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("quadrature scheme validation") {
    QuadratureScheme s;
    s.u_min = 1.0;
    s.u_max = 0.0;
    CHECK_THROWS(s.validate());
    s.u_min = -1.0;
    s.nodes = 8;
    CHECK_THROWS(s.validate());
    CHECK(rule_from_string(to_string(Rule::gauss_legendre_panels)) == Rule::gauss_legendre_panels);
}
