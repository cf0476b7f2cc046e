#pragma once

#include <vector>

#include "abesov/operator.hpp"
#include "abesov/quadrature.hpp"

namespace abesov {

struct QuadResult {
    Block value;
    QuadDiagnostics diagnostics;
};

// Scheme with limits filled from the operator's spectral scale:
// u in [ln(1e-8 lo), ln(1e8 hi)] unless the caller already set them.
QuadratureScheme scheme_for(const Operator& a, const QuadratureScheme& base = {});

// A^alpha x by the Balakrishnan integral with n the smallest integer above Re alpha.
// Positive integers fall through to repeated application; integer Re alpha with
// nonzero imaginary part is refused (spectral route only).
QuadResult frac_power(const Operator& a, Complex alpha, const Block& x, const QuadratureScheme& scheme = {},
                      Execution exec = Execution::parallel);

// Eigenbasis multipliers mu^z (principal branch, 0^z = 0 for Re z > 0).
Block spectral_frac_power(const Operator& a, Complex z, const Block& x);

// A^z x through  Gamma(a+b)/(Gamma(a+z)Gamma(b-z)) int lambda^{z+a} A^b (lambda+A)^{-a-b} x dlambda/lambda,
// valid for -Re a < Re z < Re b (injective A when Re z <= 0).
QuadResult frac_power_unified(const Operator& a, Complex z, Complex alpha, Complex beta, const Block& x,
                              const QuadratureScheme& scheme = {}, Execution exec = Execution::parallel);

// (lambda + A^alpha)^{-1} x for 0 < alpha < 1 from resolvents of A;
// with l_variant the companion A^alpha (lambda + A^alpha)^{-1} x.
QuadResult frac_resolvent(const Operator& a, double alpha, double lambda, const Block& x,
                          const QuadratureScheme& scheme = {}, bool l_variant = false,
                          Execution exec = Execution::parallel);

// e^{-tA} x. Spectral multipliers; dense non-self-adjoint handles need the
// explicit matrix-exponential fallback.
Block semigroup_apply(const Operator& a, double t, const Block& x, bool allow_matrix_exponential = false);

// A^alpha x = Gamma(beta-alpha)^{-1} int t^{-alpha} (tA)^beta T(t) x dt/t, Re beta > Re alpha.
QuadResult frac_power_via_semigroup(const Operator& a, Complex alpha, Complex beta, const Block& x,
                                    const QuadratureScheme& scheme = {}, bool allow_matrix_exponential = false,
                                    Execution exec = Execution::parallel);

// Density of the alpha-stable subordinator: T_alpha(t) = int k(t, s) T(s) ds.
double subordination_kernel(double alpha, double t, double s);

enum class SubordinationRoute { spectral, kernel };

struct SubordinatedResult {
    Block value;
    // |int k(t,s) ds - 1| including the analytic heavy-tail estimate (kernel route)
    double mass_residual = 0.0;
    int outer_nodes = 0;
};

SubordinatedResult subordinated_semigroup(const Operator& a, double alpha, double t, const Block& x,
                                          SubordinationRoute route = SubordinationRoute::spectral,
                                          Execution exec = Execution::parallel);

// (t + A)^{-gamma} x for Re gamma >= 0.
Block shifted_negative_power(const Operator& a, double t, Complex gamma, const Block& x,
                             const QuadratureScheme& scheme = {});

// A^beta (t + A)^{-gamma} x: spectral multipliers when available, otherwise
// resolvent powers composed with quadrature for the fractional remainders.
Block resolvent_power(const Operator& a, Complex beta, double t, Complex gamma, const Block& x,
                      const QuadratureScheme& scheme = {});

struct ErgodicLimits {
    Block at_infinity;     // lim t->inf  t^a (t+A)^{-a} x
    Block at_zero;         // lim t->0    t^a (t+A)^{-a} x   (kernel component)
    Block range_at_zero;   // lim t->0    A^a (t+A)^{-a} x   (range component)
    double split_residual = 0.0;  // |x - at_zero - range_at_zero| / |x|
    double change_infinity = 0.0; // extrapolation correction at the ends
    double change_zero = 0.0;
    bool converged = true;
};

ErgodicLimits ergodic_limits(const Operator& a, Complex alpha, const Block& x, std::vector<double> t_grid = {});

// Relative residual of the inhomogeneous reproducing formula with cut lambda_cut;
// lambda_cut = 0 selects the homogeneous formula (injective A).
double reproducing_residual(const Operator& a, Complex alpha, int m, double lambda_cut, const Block& x,
                            const QuadratureScheme& scheme = {});

}  // namespace abesov
