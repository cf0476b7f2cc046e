#pragma once

#include <cmath>

#include "abesov/ensemble.hpp"
#include "abesov/operator.hpp"

namespace testutil {

using abesov::Block;
using abesov::Complex;

inline Block vec(std::initializer_list<Complex> v) {
    Block x(static_cast<Eigen::Index>(v.size()), 1);
    Eigen::Index i = 0;
    for (Complex c : v) x(i++, 0) = c;
    return x;
}

inline double rel(const Block& a, const Block& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

inline Block random_vector(int n, std::uint64_t seed) {
    abesov::PortableRng rng(seed);
    Block x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = rng.cnormal();
    return x;
}

inline abesov::Operator random_spd(int n, double cond, std::uint64_t seed) {
    return abesov::draw_operator(abesov::FamilySpec::spd(n, cond), seed);
}

}  // namespace testutil
