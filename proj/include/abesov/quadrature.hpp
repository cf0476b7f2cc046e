#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "abesov/types.hpp"

namespace abesov {

enum class Rule { trapezoid_log, gauss_legendre_panels };

// Improper integrals over (0, inf) are taken after lambda = e^u. Limits left
// as NaN are filled in by the caller from the operator's spectral scale.
struct QuadratureScheme {
    Rule rule = Rule::trapezoid_log;
    double u_min = std::numeric_limits<double>::quiet_NaN();
    double u_max = std::numeric_limits<double>::quiet_NaN();
    int nodes = 2048;
    double tail_tolerance = 1e-10;
    int max_widenings = 12;

    bool has_limits() const { return std::isfinite(u_min) && std::isfinite(u_max); }
    void validate() const;
};

enum class Execution { parallel, serial };

struct QuadDiagnostics {
    double u_min = 0.0;
    double u_max = 0.0;
    int nodes = 0;
    double step = 0.0;
    double tail_estimate = 0.0;
    double value_norm = 0.0;
    int widenings = 0;
    bool tail_certified = false;
};

// Exponential decay rates of the integrand in u: |g(u)| ~ e^{lower u} as
// u -> -inf and ~ e^{-upper u} as u -> +inf.
struct TailRates {
    double lower = 1.0;
    double upper = 1.0;
};

using Integrand = std::function<Block(double)>;

// Integral of g over the whole line. The initial window and node spacing come
// from the scheme; each side is widened while its tail estimate
// |g(end)| / rate exceeds half the tolerance budget.
Block integrate_line(const Integrand& g, const QuadratureScheme& scheme, TailRates rates,
                     Execution exec = Execution::parallel, QuadDiagnostics* diag = nullptr);

// Integral of g over [u0, inf) with Gauss-Legendre panels (finite left end).
Block integrate_right(const Integrand& g, double u0, const QuadratureScheme& scheme, double upper_rate,
                      Execution exec = Execution::parallel, QuadDiagnostics* diag = nullptr);

// Integral of g over [a, b] with Gauss-Legendre panels of width at most `width`.
Block integrate_panels(const Integrand& g, double a, double b, double width, Execution exec = Execution::parallel);

// Scalar convenience wrappers.
double integrate_line_scalar(const std::function<double(double)>& g, const QuadratureScheme& scheme, TailRates rates,
                             QuadDiagnostics* diag = nullptr);
double integrate_panels_scalar(const std::function<double(double)>& g, double a, double b, double width);

// Weighted node sum  sum_i w_i g(u_i)  with a fixed chunked reduction order,
// so the parallel and serial paths give bit-identical results.
Block node_sum(const Integrand& g, const std::vector<double>& nodes, const std::vector<double>& weights,
               Execution exec);

std::string to_string(Rule r);
Rule rule_from_string(const std::string& s);

}  // namespace abesov
