#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "abesov/fractional.hpp"
#include "abesov/norm.hpp"
#include "abesov/operator.hpp"

namespace abesov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// (s, q, k, alpha, beta); q = kInf selects the supremum.
struct BesovIndex {
    double s = 0.0;
    double q = 2.0;
    int k = 0;
    Complex alpha = 0.0;
    Complex beta = 1.0;

    // -Re alpha < s < Re beta, q in (0, inf]; homogeneous also needs Re beta > 0.
    void validate(bool homogeneous = false) const;
};

struct NormOptions {
    double tail_tolerance = 1e-8;
    int max_level = 64;
    Norm norm = Norm::euclidean();
    QuadratureScheme scheme = {};
    bool keep_trace = false;
    // Brute-force mode: sum exactly the levels in [first, second], no tail certificate.
    std::optional<std::pair<int, int>> fixed_range;
    // Non-spectral semigroup norms may fall back to the dense matrix exponential.
    bool allow_matrix_exponential = false;
};

struct NormResult {
    double value = 0.0;
    double lead = 0.0;       // the ||...|| term in front of the aggregate (0 for seminorms)
    double aggregate = 0.0;  // the l_q (or L_q) part
    int j_lo = 0;
    int j_hi = 0;
    double tail_bound = 0.0;
    // true when the tail ratios are rigorous (spectral handle, euclidean norm);
    // otherwise they come from the asymptotic decay with a safety margin
    bool certified = false;
    std::vector<double> term_trace;  // per-level magnitudes, ascending j
};

// ||2^{j(s + Re alpha)} A^beta (2^j + A)^{-alpha-beta} x||
double dyadic_block(const Operator& a, int j, const BesovIndex& idx, const Block& x, const NormOptions& opt = {});

// ||(2^k + A)^{-alpha} x|| + (sum_{j >= k} block_j^q)^{1/q}
NormResult inhom_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt = {});

// ||(2^k + A)^{-alpha} x|| + (int_{2^k}^inf ||t^{s+alpha} A^beta (t+A)^{-alpha-beta} x||^q dt/t)^{1/q}
NormResult continuous_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x,
                                 const NormOptions& opt = {});

// The same integral over the whole half-line (no lead term). Needs injective A.
NormResult continuous_homog_seminorm(const Operator& a, const BesovIndex& idx, const Block& x,
                                     const NormOptions& opt = {});

// (sum_{j in Z} block_j^q)^{1/q}; injective A, Re beta > 0.
NormResult homog_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt = {});

// ||A^beta (2^k + A)^{-beta} x|| + (sum_{j <= k} block_j^q)^{1/q}; injective A, Re beta > 0.
NormResult breve_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt = {});

// ||x|| + (sum_{j >= k} ||2^{j(s - beta)} A^beta T(2^{-j}) x||^q)^{1/q},  0 < s < Re beta.
NormResult semigroup_quasi_norm(const Operator& a, double s, double q, int k, Complex beta, const Block& x,
                                const NormOptions& opt = {});

// (sum_{j in Z} ||2^{js} (2^{-j} A)^beta T(2^{-j}) x||^q)^{1/q}; injective A.
NormResult homog_semigroup_seminorm(const Operator& a, double s, double q, Complex beta, const Block& x,
                                    const NormOptions& opt = {});

// Quasi-triangle modulus of the l_q aggregate, K = max(1, 2^{1/q - 1}).
double quasi_triangle_constant(double q);

// Aoki-Rolewicz exponent p = ln 2 / (ln K + ln 2).
double aoki_rolewicz_p(double q);

}  // namespace abesov
