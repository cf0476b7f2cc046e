#include "abesov/operator.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/FFT>

#include "abesov/golden.hpp"

namespace abesov {

namespace {

void check_rows(int n, const Block& x) {
    if (x.rows() != n) {
        std::ostringstream os;
        os << "dimension mismatch: operator has dimension " << n << ", vector has " << x.rows();
        throw DimensionError(os.str());
    }
}

Eigen::PartialPivLU<Eigen::MatrixXcd> factor_checked(const Eigen::MatrixXcd& m, double lambda) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    if (!(lu.rcond() > 1e-15)) {
        std::ostringstream os;
        os << "singular shifted system at lambda = " << lambda << "; operator is not non-negative";
        throw NonNegativityError(os.str());
    }
    return lu;
}

// FFT along one axis of a row-major multi-index layout.
void fft_axis(std::vector<Complex>& data, const std::vector<int>& shape, size_t axis, bool inverse) {
    int n = shape[axis];
    size_t stride = 1;
    for (size_t d = axis + 1; d < shape.size(); ++d) stride *= static_cast<size_t>(shape[d]);
    size_t total = data.size();
    size_t block = stride * static_cast<size_t>(n);
    Eigen::FFT<double> fft;
    std::vector<Complex> in(n), out(n);
    for (size_t outer = 0; outer < total; outer += block) {
        for (size_t inner = 0; inner < stride; ++inner) {
            for (int i = 0; i < n; ++i) in[i] = data[outer + inner + i * stride];
            if (inverse)
                fft.inv(out, in);
            else
                fft.fwd(out, in);
            for (int i = 0; i < n; ++i) data[outer + inner + i * stride] = out[i];
        }
    }
}

}  // namespace

// ---------------------------------------------------------------- eigenbasis

Eigenbasis Eigenbasis::identity(int n) {
    Eigenbasis b;
    b.type_ = Type::identity;
    b.n_ = n;
    return b;
}

Eigenbasis Eigenbasis::unitary(Eigen::MatrixXcd v) {
    Eigenbasis b;
    b.type_ = Type::matrix;
    b.n_ = static_cast<int>(v.rows());
    b.v_ = std::move(v);
    return b;
}

Eigenbasis Eigenbasis::fourier(std::vector<int> shape) {
    Eigenbasis b;
    b.type_ = Type::fourier;
    int n = 1;
    for (int s : shape) n *= s;
    b.n_ = n;
    b.shape_ = std::move(shape);
    return b;
}

Block Eigenbasis::forward(const Block& x) const {
    switch (type_) {
        case Type::identity:
            return x;
        case Type::matrix:
            return v_.adjoint() * x;
        case Type::fourier: {
            Block out(x.rows(), x.cols());
            std::vector<Complex> buf(static_cast<size_t>(n_));
            double scale = 1.0 / std::sqrt(static_cast<double>(n_));
            for (Eigen::Index c = 0; c < x.cols(); ++c) {
                for (int i = 0; i < n_; ++i) buf[i] = x(i, c);
                for (size_t a = 0; a < shape_.size(); ++a) fft_axis(buf, shape_, a, false);
                for (int i = 0; i < n_; ++i) out(i, c) = buf[i] * scale;
            }
            return out;
        }
    }
    return x;
}

Block Eigenbasis::backward(const Block& c) const {
    switch (type_) {
        case Type::identity:
            return c;
        case Type::matrix:
            return v_ * c;
        case Type::fourier: {
            Block out(c.rows(), c.cols());
            std::vector<Complex> buf(static_cast<size_t>(n_));
            // Eigen's inverse FFT already divides by the axis length.
            double scale = std::sqrt(static_cast<double>(n_));
            for (Eigen::Index k = 0; k < c.cols(); ++k) {
                for (int i = 0; i < n_; ++i) buf[i] = c(i, k);
                for (size_t a = 0; a < shape_.size(); ++a) fft_axis(buf, shape_, a, true);
                for (int i = 0; i < n_; ++i) out(i, k) = buf[i] * scale;
            }
            return out;
        }
    }
    return c;
}

// ---------------------------------------------------------------- impl defaults

Block OperatorImpl::resolve_power(double lambda, int m, const Block& x) const {
    Block y = x;
    for (int i = 0; i < m; ++i) y = resolve(lambda, y);
    return y;
}

std::pair<double, double> OperatorImpl::spectral_scale() const {
    std::call_once(scale_once_, [&] { scale_ = compute_spectral_scale(); });
    return scale_;
}

std::pair<double, double> OperatorImpl::compute_spectral_scale() const {
    if (spectral_) {
        const RealVec& ev = spectral_->eigenvalues;
        double hi = ev.maxCoeff();
        double lo = hi;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (ev[i] > 1e-10 * hi) lo = std::min(lo, ev[i]);
        if (hi <= 0.0) return {1.0, 1.0};
        return {lo, hi};
    }
    Eigen::MatrixXcd m = apply(Eigen::MatrixXcd::Identity(dim(), dim()));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    double hi = svd.singularValues()(0);
    if (hi <= 0.0) return {1.0, 1.0};
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
    double lo = hi;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        double a = std::abs(es.eigenvalues()[i]);
        if (a > 1e-10 * hi) lo = std::min(lo, a);
    }
    return {lo, hi};
}

bool OperatorImpl::injective() const {
    std::call_once(injective_once_, [&] { injective_ = compute_injective(); });
    return injective_;
}

bool OperatorImpl::compute_injective() const {
    if (spectral_) {
        const RealVec& ev = spectral_->eigenvalues;
        double hi = ev.cwiseAbs().maxCoeff();
        return hi > 0.0 && ev.cwiseAbs().minCoeff() > 1e-10 * hi;
    }
    Eigen::MatrixXcd m = apply(Eigen::MatrixXcd::Identity(dim(), dim()));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    return sv(0) > 0.0 && sv(sv.size() - 1) > 1e-10 * sv(0);
}

const NonNegConstants& OperatorImpl::constants(const Operator& self) const {
    std::call_once(constants_once_, [&] {
        NonNegConstants c;
        c.injective = self.injective();
        if (self_adjoint() && spectral_) {
            c.M = 1.0;
            c.L = spectral_->eigenvalues.maxCoeff() > 0.0 ? 1.0 : 0.0;
            c.exact = true;
        } else {
            auto est = estimate_nonnegativity_constants(self, default_lambda_grid(self));
            c.M = est.M;
            c.L = est.L;
        }
        c.angle_bound = kPi - std::asin(std::min(1.0, 1.0 / std::max(c.M, 1.0)));
        if (c.exact) c.angle_bound = 0.0;
        constants_ = c;
    });
    return constants_;
}

// ---------------------------------------------------------------- diagonal

namespace {

class DiagonalImpl final : public OperatorImpl {
public:
    explicit DiagonalImpl(RealVec d) : d_(std::move(d)) {
        if (d_.size() < 1) throw DimensionError("diagonal operator needs at least one entry");
        for (Eigen::Index i = 0; i < d_.size(); ++i)
            if (!(d_[i] >= 0.0) || !std::isfinite(d_[i]))
                throw NonNegativityError("diagonal entries must be finite and non-negative");
        spectral_ = Spectral{d_, Eigenbasis::identity(static_cast<int>(d_.size()))};
    }
    OperatorKind kind() const override { return OperatorKind::diagonal; }
    int dim() const override { return static_cast<int>(d_.size()); }
    std::string describe() const override {
        std::ostringstream os;
        os << "diagonal [";
        for (Eigen::Index i = 0; i < d_.size(); ++i) os << (i ? "," : "") << d_[i];
        os << "]";
        return os.str();
    }
    Block apply(const Block& x) const override {
        check_rows(dim(), x);
        return d_.cast<Complex>().asDiagonal() * x;
    }
    Block apply_adjoint(const Block& x) const override { return apply(x); }
    Block resolve(double lambda, const Block& x) const override {
        check_rows(dim(), x);
        Block y = x;
        for (Eigen::Index i = 0; i < y.rows(); ++i) y.row(i) /= (lambda + d_[i]);
        return y;
    }
    Block resolve_adjoint(double lambda, const Block& x) const override { return resolve(lambda, x); }
    Block solve(const Block& x) const override {
        check_rows(dim(), x);
        if (!injective()) throw InjectivityError("diagonal operator has a zero eigenvalue");
        Block y = x;
        for (Eigen::Index i = 0; i < y.rows(); ++i) y.row(i) /= d_[i];
        return y;
    }

private:
    RealVec d_;
};

// ---------------------------------------------------------------- dense

class DenseImpl final : public OperatorImpl {
public:
    explicit DenseImpl(Eigen::MatrixXcd a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols() || a_.rows() < 1) throw DimensionError("dense operator must be square");
        if (!a_.allFinite()) throw Error("dense operator has non-finite entries");
        double scale = std::max(a_.norm(), 1e-300);
        bool hermitian = (a_ - a_.adjoint()).norm() <= 1e-12 * scale;
        if (hermitian) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a_);
            RealVec ev = es.eigenvalues();
            double hi = ev.cwiseAbs().maxCoeff();
            if (ev.minCoeff() < -1e-10 * std::max(hi, 1.0))
                throw NonNegativityError("self-adjoint dense operator has a negative eigenvalue");
            // rounding leaves kernel eigenvalues at ~n eps |A|; snap them to zero
            const double floor = 64.0 * a_.rows() * std::numeric_limits<double>::epsilon() * hi;
            ev = ev.unaryExpr([floor](double e) { return e <= floor ? 0.0 : e; });
            spectral_ = Spectral{ev, Eigenbasis::unitary(es.eigenvectors())};
        } else {
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a_, false);
            for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
                Complex e = es.eigenvalues()[i];
                if (e.real() < -1e-10 * scale && std::abs(e.imag()) <= 1e-10 * scale)
                    throw NonNegativityError("dense operator has a negative real eigenvalue");
            }
        }
    }
    OperatorKind kind() const override { return OperatorKind::dense_matrix; }
    int dim() const override { return static_cast<int>(a_.rows()); }
    std::string describe() const override {
        std::ostringstream os;
        os << "dense " << a_.rows() << "x" << a_.cols();
        return os.str();
    }
    Block apply(const Block& x) const override {
        check_rows(dim(), x);
        return a_ * x;
    }
    Block apply_adjoint(const Block& x) const override {
        check_rows(dim(), x);
        return a_.adjoint() * x;
    }
    Block resolve(double lambda, const Block& x) const override {
        check_rows(dim(), x);
        Eigen::MatrixXcd m = a_;
        m.diagonal().array() += lambda;
        return factor_checked(m, lambda).solve(x);
    }
    Block resolve_power(double lambda, int m, const Block& x) const override {
        check_rows(dim(), x);
        Eigen::MatrixXcd s = a_;
        s.diagonal().array() += lambda;
        auto lu = factor_checked(s, lambda);
        Block y = x;
        for (int i = 0; i < m; ++i) y = lu.solve(y);
        return y;
    }
    Block resolve_adjoint(double lambda, const Block& x) const override {
        check_rows(dim(), x);
        Eigen::MatrixXcd m = a_.adjoint();
        m.diagonal().array() += lambda;
        return factor_checked(m, lambda).solve(x);
    }
    Block solve(const Block& x) const override {
        check_rows(dim(), x);
        if (!injective()) throw InjectivityError("dense operator is not injective");
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(a_).solve(x);
    }
    bool compute_injective() const override {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a_);
        const auto& sv = svd.singularValues();
        return sv(0) > 0.0 && sv(sv.size() - 1) > 1e-10 * sv(0);
    }

private:
    Eigen::MatrixXcd a_;
};

// ---------------------------------------------------------------- torus

class TorusImpl final : public OperatorImpl {
public:
    TorusImpl(int grid, int dims) : grid_(grid), dims_(dims) {
        if (grid < 2) throw Error("torus_laplacian needs n >= 2");
        if (dims < 1 || dims > 3) throw Error("torus_laplacian supports dims in {1,2,3}");
        std::vector<int> shape(static_cast<size_t>(dims), grid);
        int n = 1;
        for (int d = 0; d < dims; ++d) n *= grid;
        RealVec ev(n);
        // grid-scaled symbol of the periodic second difference: 4 n^2 sin^2(pi k / n)
        std::vector<double> sym(static_cast<size_t>(grid));
        for (int k = 0; k < grid; ++k) {
            double s = std::sin(kPi * k / grid);
            sym[k] = 4.0 * grid * grid * s * s;
        }
        for (int i = 0; i < n; ++i) {
            int rem = i;
            double v = 0.0;
            for (int d = 0; d < dims; ++d) {
                v += sym[rem % grid];
                rem /= grid;
            }
            ev[i] = v;
        }
        spectral_ = Spectral{ev, Eigenbasis::fourier(shape)};
    }
    OperatorKind kind() const override { return OperatorKind::torus_laplacian; }
    int dim() const override { return static_cast<int>(spectral_->eigenvalues.size()); }
    std::string describe() const override {
        std::ostringstream os;
        os << "torus_laplacian n=" << grid_ << " dims=" << dims_;
        return os.str();
    }
    Block apply(const Block& x) const override {
        check_rows(dim(), x);
        return spectral_->multiply(x, [](double mu) { return Complex(mu); });
    }
    Block apply_adjoint(const Block& x) const override { return apply(x); }
    Block resolve(double lambda, const Block& x) const override {
        check_rows(dim(), x);
        return spectral_->multiply(x, [lambda](double mu) { return Complex(1.0 / (lambda + mu)); });
    }
    Block resolve_adjoint(double lambda, const Block& x) const override { return resolve(lambda, x); }
    Block solve(const Block&) const override {
        throw InjectivityError("torus Laplacian annihilates constants and has no inverse");
    }
    int grid() const { return grid_; }
    int dims() const { return dims_; }

private:
    int grid_;
    int dims_;
};

// ---------------------------------------------------------------- shifted

class ShiftedImpl final : public OperatorImpl {
public:
    ShiftedImpl(Operator base, double eps) : base_(std::move(base)), eps_(eps) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error("shift must be finite and non-negative");
        if (const Spectral* s = base_.spectral()) {
            RealVec ev = s->eigenvalues.array() + eps;
            spectral_ = Spectral{ev, s->basis};
        }
    }
    OperatorKind kind() const override { return OperatorKind::shifted; }
    int dim() const override { return base_.dim(); }
    std::string describe() const override {
        std::ostringstream os;
        os << "shifted(" << base_.describe() << ", eps=" << eps_ << ")";
        return os.str();
    }
    Block apply(const Block& x) const override { return base_.apply(x) + eps_ * x; }
    Block apply_adjoint(const Block& x) const override { return base_.apply_adjoint(x) + eps_ * x; }
    Block resolve(double lambda, const Block& x) const override { return base_.resolve(lambda + eps_, x); }
    Block resolve_power(double lambda, int m, const Block& x) const override {
        return base_.resolve_power(lambda + eps_, m, x);
    }
    Block resolve_adjoint(double lambda, const Block& x) const override {
        return base_.resolve_adjoint(lambda + eps_, x);
    }
    Block solve(const Block& x) const override {
        if (eps_ > 0.0) return base_.resolve(eps_, x);
        return base_.solve(x);
    }
    bool self_adjoint() const override { return base_.self_adjoint(); }
    bool compute_injective() const override { return eps_ > 0.0 || base_.injective(); }
    // shifts move the spectrum rigidly; avoids a decomposition per shifted handle
    std::pair<double, double> compute_spectral_scale() const override {
        auto [lo, hi] = base_.spectral_scale();
        if (eps_ == 0.0) return {lo, hi};
        return {base_.injective() ? lo + eps_ : eps_, hi + eps_};
    }

private:
    Operator base_;
    double eps_;
};

// ---------------------------------------------------------------- inverse

class InverseImpl final : public OperatorImpl {
public:
    explicit InverseImpl(Operator base) : base_(std::move(base)) {
        if (!base_.injective()) throw InjectivityError("inverse(...) needs an injective base operator");
        if (const Spectral* s = base_.spectral()) {
            RealVec ev = s->eigenvalues.cwiseInverse();
            spectral_ = Spectral{ev, s->basis};
        }
    }
    OperatorKind kind() const override { return OperatorKind::inverse; }
    int dim() const override { return base_.dim(); }
    std::string describe() const override { return "inverse(" + base_.describe() + ")"; }
    Block apply(const Block& x) const override { return base_.solve(x); }
    Block apply_adjoint(const Block& x) const override {
        // (A^{-1})^H = (A^H)^{-1}; solve with the adjoint resolvent at 0 is not
        // available generically, so go through the dense matrix.
        Eigen::MatrixXcd m = base_.matrix().adjoint();
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).solve(x);
    }
    // (lambda + A^{-1})^{-1} = mu A (mu + A)^{-1} = mu [I - mu (mu + A)^{-1}],  mu = 1/lambda.
    // The difference form cancels once mu dominates A, so switch at the spectral midpoint.
    Block resolve(double lambda, const Block& x) const override {
        double mu = 1.0 / lambda;
        if (mu > midpoint()) return mu * base_.apply(base_.resolve(mu, x));
        return mu * (x - mu * base_.resolve(mu, x));
    }
    Block resolve_adjoint(double lambda, const Block& x) const override {
        double mu = 1.0 / lambda;
        if (mu > midpoint()) return mu * base_.apply_adjoint(base_.resolve_adjoint(mu, x));
        return mu * (x - mu * base_.resolve_adjoint(mu, x));
    }
    Block solve(const Block& x) const override { return base_.apply(x); }
    bool self_adjoint() const override { return base_.self_adjoint(); }
    bool compute_injective() const override { return true; }
    std::pair<double, double> compute_spectral_scale() const override {
        auto [lo, hi] = base_.spectral_scale();
        return {1.0 / hi, 1.0 / lo};
    }

private:
    double midpoint() const {
        auto [lo, hi] = base_.spectral_scale();
        return std::sqrt(lo * hi);
    }
    Operator base_;
};

}  // namespace

// ---------------------------------------------------------------- handle

Operator::Operator(std::shared_ptr<const OperatorImpl> impl) : impl_(std::move(impl)) {}

Operator Operator::diagonal(RealVec eigenvalues) {
    return Operator(std::make_shared<DiagonalImpl>(std::move(eigenvalues)));
}

Operator Operator::dense(Eigen::MatrixXcd a) { return Operator(std::make_shared<DenseImpl>(std::move(a))); }

Operator Operator::torus_laplacian(int grid, int dims) { return Operator(std::make_shared<TorusImpl>(grid, dims)); }

Operator Operator::shifted(const Operator& base, double eps) {
    return Operator(std::make_shared<ShiftedImpl>(base, eps));
}

Operator Operator::inverse(const Operator& base) { return Operator(std::make_shared<InverseImpl>(base)); }

OperatorKind Operator::kind() const { return impl_->kind(); }
int Operator::dim() const { return impl_->dim(); }
std::string Operator::describe() const { return impl_->describe(); }
Block Operator::apply(const Block& x) const { return impl_->apply(x); }
Block Operator::apply_adjoint(const Block& x) const { return impl_->apply_adjoint(x); }

Block Operator::resolve(double lambda, const Block& x) const {
    if (!(lambda > 0.0)) throw Error("resolvent parameter must be positive");
    return impl_->resolve(lambda, x);
}

Block Operator::resolve_adjoint(double lambda, const Block& x) const {
    if (!(lambda > 0.0)) throw Error("resolvent parameter must be positive");
    return impl_->resolve_adjoint(lambda, x);
}

Block Operator::resolve_power(double lambda, int m, const Block& x) const {
    if (!(lambda > 0.0)) throw Error("resolvent parameter must be positive");
    return impl_->resolve_power(lambda, m, x);
}

Block Operator::solve(const Block& x) const { return impl_->solve(x); }
const Spectral* Operator::spectral() const { return impl_->spectral(); }
bool Operator::self_adjoint() const { return impl_->self_adjoint(); }
bool Operator::injective() const { return impl_->injective(); }

Eigen::MatrixXcd Operator::matrix() const { return apply(Eigen::MatrixXcd::Identity(dim(), dim())); }

std::pair<double, double> Operator::spectral_scale() const { return impl_->spectral_scale(); }

const NonNegConstants& Operator::constants() const { return impl_->constants(*this); }

// ---------------------------------------------------------------- constants

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<size_t>(points));
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
    return g;
}

std::vector<double> default_lambda_grid(const Operator& a) {
    double rho = a.spectral_scale().second;
    if (!(rho > 0.0)) rho = 1.0;
    return log_grid(1e-6 * rho, 1e6 * rho, 61);
}

double induced_norm(const Eigen::MatrixXcd& m, const Norm& norm) {
    if (norm.kind == Norm::Kind::p_norm && norm.p == 1.0) return m.cwiseAbs().colwise().sum().maxCoeff();
    if (norm.kind == Norm::Kind::p_norm && std::isinf(norm.p)) return m.cwiseAbs().rowwise().sum().maxCoeff();
    if (norm.kind == Norm::Kind::weighted) {
        RealVec s = norm.weights.cwiseSqrt();
        Eigen::MatrixXcd w = s.cast<Complex>().asDiagonal() * m * s.cwiseInverse().cast<Complex>().asDiagonal();
        return Eigen::JacobiSVD<Eigen::MatrixXcd>(w).singularValues()(0);
    }
    if (norm.kind == Norm::Kind::p_norm && norm.p != 2.0)
        throw UnsupportedError("induced norms are available for p in {1, 2, inf} and weighted l2");
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double power_iteration_norm(const std::function<Block(const Block&)>& apply,
                            const std::function<Block(const Block&)>& apply_adjoint, int n, int iterations,
                            double tol) {
    // deterministic, generic start vector
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.1 * i, 0.05 * (i % 7));
    v.normalize();
    double sigma2 = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vec w = apply_adjoint(apply(v));
        double nw = w.norm();
        if (nw == 0.0) return 0.0;
        double prev = sigma2;
        sigma2 = std::abs(v.dot(w));
        v = w / nw;
        if (it > 0 && std::abs(sigma2 - prev) <= tol * sigma2) break;
    }
    return std::sqrt(sigma2);
}

ConstantsEstimate estimate_nonnegativity_constants(const Operator& a, const std::vector<double>& grid,
                                                   const Norm& norm) {
    if (grid.size() < 3) throw Error("lambda grid needs at least three points");
    const int n = a.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    auto pair_at = [&](double lambda) {
        Eigen::MatrixXcd r = lambda * a.resolve(lambda, id);
        return std::pair<double, double>{induced_norm(r, norm), induced_norm(id - r, norm)};
    };
    std::vector<double> mv(grid.size()), lv(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
        auto [m, l] = pair_at(grid[i]);
        if (!std::isfinite(m) || !std::isfinite(l)) throw NonNegativityError("resolvent family is not finite");
        mv[i] = m;
        lv[i] = l;
    }
    // growth by a factor 10 over the last ten grid points towards either end
    const size_t last = grid.size() - 1, back = std::min<size_t>(10, last);
    auto grows = [&](const std::vector<double>& v) {
        return v[0] > 10.0 * v[back] || v[last] > 10.0 * v[last - back];
    };
    if (grows(mv) || grows(lv))
        throw NonNegativityError("resolvent family still growing at the grid ends; operator is not non-negative");

    ConstantsEstimate est;
    auto refine = [&](const std::vector<double>& v, bool take_m, double& best, double& arg) {
        size_t i = static_cast<size_t>(std::max_element(v.begin(), v.end()) - v.begin());
        best = v[i];
        arg = grid[i];
        if (i == 0 || i == last) return;
        auto f = [&](double u) {
            auto p = pair_at(std::exp(u));
            return take_m ? p.first : p.second;
        };
        auto r = golden_section_maximize(f, std::log(grid[i - 1]), std::log(grid[i + 1]), 1e-9);
        if (r.value > best) {
            best = r.value;
            arg = std::exp(r.x);
        }
    };
    refine(mv, true, est.M, est.argmax_M);
    refine(lv, false, est.L, est.argmax_L);
    return est;
}

}  // namespace abesov
