#pragma once

#include <cstdint>
#include <vector>

#include "abesov/besov.hpp"
#include "abesov/operator.hpp"

namespace abesov {

// The couple (X, D(A^alpha)) with seminorm ||A^alpha .||, and (theta, q).
struct CoupleSpec {
    Operator a;
    Complex alpha = 1.0;
    double theta = 0.5;
    double q = 2.0;

    void validate() const;
};

struct KValue {
    double value = 0.0;
    double mu = 0.0;        // minimiser parameter, y = (I + mu B)^{-1} x; inf means y = 0 (kernel part)
    double residual = 0.0;  // ||x - y||
    double graph = 0.0;     // ||A^alpha y||
    bool endpoint = false;  // optimum at y = x or at mu = inf
};

// K(t, x) = inf ||x - y|| + t ||A^alpha y||, minimised over y_mu = (I + mu B)^{-1} x,
// B = (A^alpha)^H A^alpha. Euclidean ambient norm only.
class KFunctional {
public:
    KFunctional(const CoupleSpec& couple, const Block& x);

    KValue operator()(double t) const;
    // Explicit mu scan (log-spaced positives) before the golden refinement.
    KValue evaluate(double t, const std::vector<double>& mu_grid) const;

    // Below t_lower the optimum is y = x (K = t ||A^alpha x||);
    // above t_upper it is y = 0 (K = ||x||). t_upper = inf when A^alpha is not injective.
    double t_lower() const { return t_lower_; }
    double t_upper() const { return t_upper_; }
    double norm_x() const { return norm_x_; }
    double graph_norm_x() const { return graph_x_; }

    // ||x - y|| + t ||A^alpha y|| for an arbitrary y (validation).
    double objective(double t, const Vec& y) const;
    // The minimiser y_mu in the original coordinates.
    Vec minimiser(double mu) const;
    const Eigen::MatrixXcd& power_matrix() const { return c_; }

private:
    double profile(double t, double mu) const;

    Vec x_;
    RealVec sigma_;    // eigenvalues of B
    RealVec weights_;  // |V^H x|^2
    Eigen::MatrixXcd v_;
    Eigen::MatrixXcd c_;  // A^alpha as a matrix
    double norm_x_ = 0.0, graph_x_ = 0.0;
    double t_lower_ = 0.0, t_upper_ = 0.0;
};

KValue k_functional(const CoupleSpec& couple, double t, const Block& x, const std::vector<double>& mu_grid = {});

struct MinimiserCheck {
    double best_improvement = 0.0;  // largest relative decrease found (<= 0 means none)
    bool ok = true;
};

// Perturb the minimiser in `directions` random directions at several step sizes
// and report any decrease of the objective beyond tol.
MinimiserCheck verify_k_minimizer(const CoupleSpec& couple, double t, const Block& x, int directions = 64,
                                  std::uint64_t seed = 1, double tol = 1e-9);

// (int_0^inf (t^{-theta} K(t, x))^q dt/t)^{1/q}; sup for q = inf. Injective A.
NormResult interpolation_norm(const CoupleSpec& couple, const Block& x, const QuadratureScheme& scheme = {});

}  // namespace abesov
