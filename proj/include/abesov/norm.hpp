#pragma once

#include "abesov/types.hpp"

namespace abesov {

// Ambient norm on C^n. Euclidean is the default everywhere; the spectral
// fast paths and the K-functional minimiser rely on it.
struct Norm {
    enum class Kind { euclidean, p_norm, weighted };

    Kind kind = Kind::euclidean;
    double p = 2.0;
    RealVec weights;

    static Norm euclidean() { return {}; }
    static Norm lp(double p);
    static Norm weighted_l2(RealVec w);

    bool is_euclidean() const { return kind == Kind::euclidean; }
    double operator()(const Vec& x) const;
    // Quasi-triangle modulus: 1 for p >= 1, 2^{1/p-1} below.
    double triangle_constant() const;
};

// Largest column norm of a block.
double block_norm(const Norm& norm, const Block& x);

}  // namespace abesov
