#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace abesov {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
// A set of column vectors; most kernels act on blocks so that a whole
// matrix function can be materialised with the same code path.
using Block = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
    using Error::Error;
};

// (lambda + A) is singular for some lambda > 0, or the resolvent family blows up.
struct NonNegativityError : Error {
    using Error::Error;
};

struct InjectivityError : Error {
    using Error::Error;
};

struct AdmissibilityError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

struct TailError : Error {
    using Error::Error;
};

struct UnsupportedError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

// Smallest integer strictly greater than Re z.
inline int witness_n(Complex z) {
    return static_cast<int>(std::floor(z.real())) + 1;
}

inline bool is_real_integer(Complex z, double tol = 0.0) {
    return std::abs(z.imag()) <= tol && std::abs(z.real() - std::round(z.real())) <= tol;
}

}  // namespace abesov
