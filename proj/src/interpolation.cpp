#include "abesov/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "abesov/golden.hpp"

namespace abesov {

void CoupleSpec::validate() const {
    if (!a.valid()) throw Error("couple needs an operator");
    if (!(alpha.real() > 0.0)) throw AdmissibilityError("couple needs Re alpha > 0");
    if (!(theta > 0.0 && theta < 1.0)) throw AdmissibilityError("theta must lie in (0, 1)");
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
}

KFunctional::KFunctional(const CoupleSpec& couple, const Block& x) {
    couple.validate();
    const Operator& a = couple.a;
    if (x.rows() != a.dim() || x.cols() != 1) throw DimensionError("K-functional acts on a single vector of matching size");
    x_ = x.col(0);
    const int n = a.dim();
    if (const Spectral* sp = a.spectral()) {
        v_ = sp->basis.backward(Eigen::MatrixXcd::Identity(n, n));
        sigma_.resize(n);
        Vec mult(n);
        for (int i = 0; i < n; ++i) {
            double mu = sp->eigenvalues[i];
            sigma_[i] = mu > 0.0 ? std::pow(mu, 2.0 * couple.alpha.real()) : 0.0;
            mult[i] = mu > 0.0 ? std::exp(couple.alpha * std::log(mu)) : Complex(0.0);
        }
        c_ = v_ * mult.asDiagonal() * v_.adjoint();
    } else {
        c_ = frac_power(a, couple.alpha, Eigen::MatrixXcd::Identity(n, n)).value;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c_.adjoint() * c_);
        v_ = es.eigenvectors();
        sigma_ = es.eigenvalues().cwiseMax(0.0);
    }
    // singular values of A^alpha below 1e-10 of the largest count as kernel
    const double smax = sigma_.maxCoeff();
    for (int i = 0; i < n; ++i)
        if (sigma_[i] <= 1e-20 * smax) sigma_[i] = 0.0;
    weights_ = (v_.adjoint() * x_).cwiseAbs2();

    double wsum = weights_.sum(), ws = 0.0, ws2 = 0.0, winv = 0.0;
    bool injective = true;
    for (int i = 0; i < n; ++i) {
        if (weights_[i] == 0.0) continue;
        ws += weights_[i] * sigma_[i];
        ws2 += weights_[i] * sigma_[i] * sigma_[i];
        if (sigma_[i] > 0.0)
            winv += weights_[i] / sigma_[i];
        else
            injective = false;
    }
    norm_x_ = std::sqrt(wsum);
    graph_x_ = std::sqrt(ws);
    t_lower_ = ws2 > 0.0 ? std::sqrt(ws / ws2) : kInf;
    t_upper_ = injective ? std::sqrt(winv / std::max(wsum, 1e-300)) : kInf;
    if (norm_x_ == 0.0) t_lower_ = t_upper_ = 0.0;
}

double KFunctional::profile(double t, double mu) const {
    double r2 = 0.0, g2 = 0.0;
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
        double d = 1.0 + mu * sigma_[i];
        double r = mu * sigma_[i] / d;
        r2 += weights_[i] * r * r;
        g2 += weights_[i] * sigma_[i] / (d * d);
    }
    return std::sqrt(r2) + t * std::sqrt(g2);
}

KValue KFunctional::evaluate(double t, const std::vector<double>& mu_grid) const {
    KValue best;
    if (norm_x_ == 0.0) {
        best.endpoint = true;
        return best;
    }
    // endpoints: y = x and y = kernel part of x
    double kernel_residual = 0.0;
    for (Eigen::Index i = 0; i < sigma_.size(); ++i)
        if (sigma_[i] > 0.0) kernel_residual += weights_[i];
    kernel_residual = std::sqrt(kernel_residual);
    best.value = t * graph_x_;
    best.mu = 0.0;
    best.residual = 0.0;
    best.graph = graph_x_;
    best.endpoint = true;
    if (kernel_residual < best.value) {
        best.value = kernel_residual;
        best.mu = kInf;
        best.residual = kernel_residual;
        best.graph = 0.0;
    }
    if (t <= t_lower_ || t >= t_upper_) return best;

    int arg = -1;
    double fbest = best.value;
    for (size_t i = 0; i < mu_grid.size(); ++i) {
        double f = profile(t, mu_grid[i]);
        if (f < fbest) {
            fbest = f;
            arg = static_cast<int>(i);
        }
    }
    if (arg < 0) return best;
    double a = std::log(mu_grid[std::max(arg - 1, 0)]);
    double b = std::log(mu_grid[std::min<size_t>(arg + 1, mu_grid.size() - 1)]);
    auto g = golden_section_minimize([&](double u) { return profile(t, std::exp(u)); }, a, b, 1e-13);
    double mu = g.value < fbest ? std::exp(g.x) : mu_grid[arg];
    best.mu = mu;
    best.value = std::min(g.value, fbest);
    best.endpoint = false;
    double r2 = 0.0, g2 = 0.0;
    for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
        double d = 1.0 + mu * sigma_[i];
        r2 += weights_[i] * std::pow(mu * sigma_[i] / d, 2);
        g2 += weights_[i] * sigma_[i] / (d * d);
    }
    best.residual = std::sqrt(r2);
    best.graph = std::sqrt(g2);
    return best;
}

KValue KFunctional::operator()(double t) const {
    double smax = sigma_.maxCoeff(), smin = smax;
    for (Eigen::Index i = 0; i < sigma_.size(); ++i)
        if (sigma_[i] > 0.0) smin = std::min(smin, sigma_[i]);
    if (!(smax > 0.0)) return evaluate(t, {});
    return evaluate(t, log_grid(1e-12 / smax, 1e12 / smin, 200));
}

double KFunctional::objective(double t, const Vec& y) const { return (x_ - y).norm() + t * (c_ * y).norm(); }

Vec KFunctional::minimiser(double mu) const {
    Vec c = v_.adjoint() * x_;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (std::isinf(mu))
            c[i] = sigma_[i] > 0.0 ? Complex(0.0) : c[i];
        else
            c[i] /= 1.0 + mu * sigma_[i];
    }
    return v_ * c;
}

KValue k_functional(const CoupleSpec& couple, double t, const Block& x, const std::vector<double>& mu_grid) {
    if (!(t > 0.0)) throw AdmissibilityError("K-functional needs t > 0");
    KFunctional k(couple, x);
    return mu_grid.empty() ? k(t) : k.evaluate(t, mu_grid);
}

MinimiserCheck verify_k_minimizer(const CoupleSpec& couple, double t, const Block& x, int directions,
                                  std::uint64_t seed, double tol) {
    KFunctional k(couple, x);
    KValue kv = k(t);
    Vec y = k.minimiser(kv.mu);
    double f0 = k.objective(t, y);
    MinimiserCheck out;
    if (f0 == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const int n = static_cast<int>(y.size());
    double scale = std::max(k.norm_x(), 1e-300);
    out.best_improvement = -kInf;
    for (int d = 0; d < directions; ++d) {
        Vec dir(n);
        for (int i = 0; i < n; ++i) dir[i] = Complex(nd(rng), nd(rng));
        dir /= dir.norm();
        for (double step : {1e-1, 1e-3, 1e-5, 1e-7}) {
            for (double sgn : {1.0, -1.0}) {
                double f = k.objective(t, y + sgn * step * scale * dir);
                out.best_improvement = std::max(out.best_improvement, (f0 - f) / f0);
            }
        }
    }
    out.ok = out.best_improvement <= tol;
    return out;
}

NormResult interpolation_norm(const CoupleSpec& couple, const Block& x, const QuadratureScheme& scheme) {
    couple.validate();
    if (!couple.a.injective()) throw InjectivityError("interpolation norms are restricted to injective operators");
    KFunctional k(couple, x);
    NormResult r;
    if (k.norm_x() == 0.0) return r;
    const double th = couple.theta, q = couple.q;
    const double t0 = k.t_lower(), t1 = k.t_upper();
    const double cx = k.graph_norm_x(), nx = k.norm_x();
    auto h = [&](double u) {
        double t = std::exp(u);
        return std::exp(-th * u) * k(t).value;
    };
    const double u0 = std::log(t0), u1 = std::log(t1);
    if (std::isinf(q)) {
        double best = std::max(std::pow(t0, 1.0 - th) * cx, std::pow(t1, -th) * nx);
        if (u1 - u0 > 1e-12) {
            const int m = 200;
            int arg = 0;
            double bv = -1.0;
            for (int i = 0; i < m; ++i) {
                double v = h(u0 + (u1 - u0) * i / (m - 1));
                if (v > bv) {
                    bv = v;
                    arg = i;
                }
            }
            double step = (u1 - u0) / (m - 1);
            auto g = golden_section_maximize(h, std::max(u0, u0 + step * (arg - 1)), std::min(u1, u0 + step * (arg + 1)),
                                             1e-12);
            best = std::max({best, bv, g.value});
        }
        r.aggregate = r.value = best;
        r.certified = true;
        return r;
    }
    // closed-form pieces outside the kinks
    double lower = std::pow(cx, q) * std::pow(t0, (1.0 - th) * q) / ((1.0 - th) * q);
    double upper = std::pow(nx, q) * std::pow(t1, -th * q) / (th * q);
    double middle = 0.0;
    if (u1 - u0 > 1e-12) {
        double width = 0.25;
        if (scheme.has_limits()) width = std::min(width, (scheme.u_max - scheme.u_min) * 16.0 / scheme.nodes);
        middle = integrate_panels_scalar([&](double u) { return std::pow(h(u), q); }, u0, u1, width);
    }
    r.aggregate = r.value = std::pow(lower + middle + upper, 1.0 / q);
    r.tail_bound = 0.0;  // the tails are integrated exactly
    r.certified = true;
    return r;
}

}  // namespace abesov
