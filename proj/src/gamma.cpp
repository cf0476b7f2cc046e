#include "abesov/gamma.hpp"

#include <array>
#include <cmath>

namespace abesov {

namespace {

constexpr double kG = 7.0;
constexpr std::array<double, 9> kCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool at_pole(Complex z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); }

Complex lanczos(Complex z) {
    // Gamma(z + 1) for Re z >= -1/2
    Complex x = kCoef[0];
    for (int i = 1; i < 9; ++i) x += kCoef[i] / (z + static_cast<double>(i));
    Complex t = z + kG + 0.5;
    return std::sqrt(2.0 * kPi) * std::exp((z + 0.5) * std::log(t) - t) * x;
}

}  // namespace

Complex gamma(Complex z) {
    if (at_pole(z)) throw Error("Gamma has a pole at a non-positive integer");
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * lanczos(-z));
    return lanczos(z - 1.0);
}

Complex rgamma(Complex z) {
    if (at_pole(z)) return 0.0;
    return 1.0 / gamma(z);
}

}  // namespace abesov
