#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "abesov/norm.hpp"
#include "abesov/types.hpp"

namespace abesov {

// Unitary transform into an eigenbasis: identity (diagonal kinds), a dense
// unitary matrix (self-adjoint dense kinds) or the normalised DFT (torus).
class Eigenbasis {
public:
    enum class Type { identity, matrix, fourier };

    static Eigenbasis identity(int n);
    static Eigenbasis unitary(Eigen::MatrixXcd v);
    static Eigenbasis fourier(std::vector<int> shape);

    Type type() const { return type_; }
    int dim() const { return n_; }
    const std::vector<int>& shape() const { return shape_; }
    Block forward(const Block& x) const;   // coefficients  V^H x
    Block backward(const Block& c) const;  // synthesis     V c

private:
    Type type_ = Type::identity;
    int n_ = 0;
    Eigen::MatrixXcd v_;
    std::vector<int> shape_;
};

// Spectral data of a normal operator with spectrum in [0, inf).
struct Spectral {
    RealVec eigenvalues;
    Eigenbasis basis;

    template <class F>
    Block multiply(const Block& x, F&& f) const {
        Block c = basis.forward(x);
        for (Eigen::Index i = 0; i < c.rows(); ++i) c.row(i) *= f(eigenvalues[i]);
        return basis.backward(c);
    }
};

struct NonNegConstants {
    double M = 1.0;
    double L = 1.0;
    bool injective = true;
    // Upper bound for the sectoriality angle, pi - arcsin(1/M).
    double angle_bound = 0.0;
    bool exact = false;  // analytic values for self-adjoint spectral kinds
};

enum class OperatorKind { dense_matrix, diagonal, torus_laplacian, shifted, inverse, frac_power };

class OperatorImpl;

// Immutable handle to a non-negative operator on C^n. Copies share state.
class Operator {
public:
    Operator() = default;
    explicit Operator(std::shared_ptr<const OperatorImpl> impl);

    static Operator diagonal(RealVec eigenvalues);
    static Operator dense(Eigen::MatrixXcd a);
    static Operator torus_laplacian(int grid, int dims = 1);
    static Operator shifted(const Operator& base, double eps);
    static Operator inverse(const Operator& base);
    static Operator frac_power(const Operator& base, double exponent);

    bool valid() const { return impl_ != nullptr; }
    OperatorKind kind() const;
    int dim() const;
    std::string describe() const;

    Block apply(const Block& x) const;
    Block apply_adjoint(const Block& x) const;
    // (lambda + A)^{-1} x
    Block resolve(double lambda, const Block& x) const;
    Block resolve_adjoint(double lambda, const Block& x) const;
    // (lambda + A)^{-m} x
    Block resolve_power(double lambda, int m, const Block& x) const;
    // A^{-1} x, only for injective handles
    Block solve(const Block& x) const;

    const Spectral* spectral() const;
    bool self_adjoint() const;
    bool injective() const;

    // Dense n x n matrix of the operator (built column by column).
    Eigen::MatrixXcd matrix() const;
    // (smallest nonzero, largest) spectral magnitude estimates
    std::pair<double, double> spectral_scale() const;
    // Non-negativity constants, estimated once and cached.
    const NonNegConstants& constants() const;

    const OperatorImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<const OperatorImpl> impl_;
};

class OperatorImpl {
public:
    virtual ~OperatorImpl() = default;
    virtual OperatorKind kind() const = 0;
    virtual int dim() const = 0;
    virtual std::string describe() const = 0;
    virtual Block apply(const Block& x) const = 0;
    virtual Block apply_adjoint(const Block& x) const = 0;
    virtual Block resolve(double lambda, const Block& x) const = 0;
    virtual Block resolve_adjoint(double lambda, const Block& x) const = 0;
    virtual Block solve(const Block& x) const = 0;
    virtual Block resolve_power(double lambda, int m, const Block& x) const;
    virtual const Spectral* spectral() const { return spectral_ ? &*spectral_ : nullptr; }
    virtual bool self_adjoint() const { return spectral_.has_value(); }
    bool injective() const;
    std::pair<double, double> spectral_scale() const;
    const NonNegConstants& constants(const Operator& self) const;

protected:
    virtual std::pair<double, double> compute_spectral_scale() const;
    virtual bool compute_injective() const;
    std::optional<Spectral> spectral_;

private:
    mutable std::once_flag scale_once_;
    mutable std::pair<double, double> scale_{1.0, 1.0};
    mutable std::once_flag injective_once_;
    mutable bool injective_ = false;
    mutable std::once_flag constants_once_;
    mutable NonNegConstants constants_;
};

// Log-spaced grid of `points` values over [lo, hi].
std::vector<double> log_grid(double lo, double hi, int points);

// Default grid: 61 points over [1e-6, 1e6] times the spectral radius estimate.
std::vector<double> default_lambda_grid(const Operator& a);

struct ConstantsEstimate {
    double M = 0.0;
    double L = 0.0;
    double argmax_M = 0.0;
    double argmax_L = 0.0;
};

// Max over the grid (refined by golden-section around interior maxima) of the
// induced norms of lambda (lambda+A)^{-1} and A (lambda+A)^{-1}.
// Throws NonNegativityError if the family grows without bound towards an end.
ConstantsEstimate estimate_nonnegativity_constants(const Operator& a, const std::vector<double>& lambda_grid,
                                                   const Norm& norm = Norm::euclidean());

// Induced norm of a matrix. Euclidean: largest singular value; p in {1, inf}: exact sums.
double induced_norm(const Eigen::MatrixXcd& m, const Norm& norm = Norm::euclidean());

// Euclidean operator norm by power iteration on B^H B (matrix-free).
double power_iteration_norm(const std::function<Block(const Block&)>& apply,
                            const std::function<Block(const Block&)>& apply_adjoint, int n, int iterations = 50,
                            double tol = 1e-10);

// Parse the operator grammar, e.g. "diagonal [1,2,4]", "torus_laplacian n=16 dims=2",
// "dense [[2,1],[0,3]]", "shifted(diagonal [1,4], eps=1)", "inverse(...)",
// "frac_power(..., 0.5)".
Operator build_operator(const std::string& spec);

}  // namespace abesov
