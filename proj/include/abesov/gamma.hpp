#pragma once

#include "abesov/types.hpp"

namespace abesov {

// Complex Gamma function: Lanczos approximation (g = 7, nine coefficients),
// reflection formula for Re z < 1/2. Throws at the poles 0, -1, -2, ...
Complex gamma(Complex z);

inline double gamma(double x) { return gamma(Complex(x)).real(); }

// 1 / Gamma(z); zero at the poles instead of throwing.
Complex rgamma(Complex z);

}  // namespace abesov
