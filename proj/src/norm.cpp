#include "abesov/norm.hpp"

#include <cmath>
#include <limits>

namespace abesov {

Norm Norm::lp(double p) {
    if (!(p > 0.0)) throw Error("p-norm needs p > 0");
    Norm n;
    n.kind = Kind::p_norm;
    n.p = p;
    return n;
}

Norm Norm::weighted_l2(RealVec w) {
    if (w.size() == 0 || (w.array() <= 0.0).any()) throw Error("weights must be positive");
    Norm n;
    n.kind = Kind::weighted;
    n.weights = std::move(w);
    return n;
}

double Norm::operator()(const Vec& x) const {
    switch (kind) {
        case Kind::euclidean:
            return x.norm();
        case Kind::weighted: {
            if (weights.size() != x.size()) throw DimensionError("weight vector has wrong length");
            double acc = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) acc += weights[i] * std::norm(x[i]);
            return std::sqrt(acc);
        }
        case Kind::p_norm: {
            if (std::isinf(p)) return x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
            // scale by the max entry so that small p does not underflow
            double m = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
            if (m == 0.0) return 0.0;
            double acc = 0.0;
            for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / m, p);
            return m * std::pow(acc, 1.0 / p);
        }
    }
    return 0.0;
}

double Norm::triangle_constant() const {
    if (kind == Kind::p_norm && p < 1.0) return std::pow(2.0, 1.0 / p - 1.0);
    return 1.0;
}

double block_norm(const Norm& norm, const Block& x) {
    double m = 0.0;
    for (Eigen::Index c = 0; c < x.cols(); ++c) m = std::max(m, norm(Vec(x.col(c))));
    return m;
}

}  // namespace abesov
