#include "abesov/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "abesov/gamma.hpp"

namespace abesov {

namespace {

// principal mu^z for mu >= 0, with 0^z = 0 for Re z > 0 and 0^0 = 1
Complex power0(double mu, Complex z) {
    if (mu > 0.0) return std::exp(z * std::log(mu));
    if (z == Complex(0.0)) return 1.0;
    if (z.real() > 0.0) return 0.0;
    throw InjectivityError("zero eigenvalue raised to a power with Re z <= 0");
}

Complex cexp_u(Complex z, double u) { return std::exp(z * u); }

void require_quadrature_exponent(Complex z) {
    if (std::abs(z.imag()) > 0.0 && z.real() == std::round(z.real()))
        throw QuadratureError(
            "integer real part with nonzero imaginary part has no quadrature representation here; "
            "use the spectral route");
}

// Inner solves nested inside an outer quadrature. The resolvent integrands are
// analytic in |Im u| < pi, so a step of 0.25 already puts the trapezoid error
// near e^{-79}; the default node count would only multiply the cost.
QuadratureScheme nested_scheme(const Operator& b, const QuadratureScheme& outer) {
    QuadratureScheme s = outer;
    s.u_min = s.u_max = std::numeric_limits<double>::quiet_NaN();
    s = scheme_for(b, s);
    s.rule = Rule::trapezoid_log;
    s.nodes = std::max(16, static_cast<int>(std::ceil((s.u_max - s.u_min) / 0.25)) + 1);
    s.tail_tolerance = std::min(s.tail_tolerance, 1e-13);
    return s;
}

Block repeated_apply(const Operator& a, int n, const Block& x) {
    Block y = x;
    for (int i = 0; i < n; ++i) y = a.apply(y);
    return y;
}

}  // namespace

QuadratureScheme scheme_for(const Operator& a, const QuadratureScheme& base) {
    QuadratureScheme s = base;
    if (!s.has_limits()) {
        auto [lo, hi] = a.spectral_scale();
        s.u_min = std::log(1e-8 * lo);
        s.u_max = std::log(1e8 * hi);
    }
    return s;
}

namespace {

// Balakrishnan integral with an explicit n > Re alpha.
QuadResult balakrishnan(const Operator& a, Complex alpha, int n, const Block& x, const QuadratureScheme& scheme,
                        Execution exec) {
    const Complex pref = gamma(Complex(n)) * rgamma(alpha) * rgamma(Complex(n) - alpha);
    QuadratureScheme s = scheme_for(a, scheme);
    Integrand g = [&](double u) -> Block {
        double lambda = std::exp(u);
        Block y = a.resolve_power(lambda, n, x);
        return cexp_u(alpha, u) * repeated_apply(a, n, y);
    };
    QuadResult r;
    r.value = pref * integrate_line(g, s, {alpha.real(), n - alpha.real()}, exec, &r.diagnostics);
    return r;
}

// A^alpha x for nested use: n one above the witness keeps the upper decay
// rate n - Re alpha at least 1 instead of possibly tiny.
Block nested_power(const Operator& a, Complex alpha, const Block& x, const QuadratureScheme& outer) {
    if (is_real_integer(alpha)) return repeated_apply(a, static_cast<int>(std::lround(alpha.real())), x);
    require_quadrature_exponent(alpha);
    return balakrishnan(a, alpha, witness_n(alpha) + 1, x, nested_scheme(a, outer), Execution::serial).value;
}

}  // namespace

QuadResult frac_power(const Operator& a, Complex alpha, const Block& x, const QuadratureScheme& scheme,
                      Execution exec) {
    if (x.rows() != a.dim()) throw DimensionError("frac_power: dimension mismatch");
    if (alpha == Complex(0.0)) return {x, {}};
    if (!(alpha.real() > 0.0)) throw AdmissibilityError("frac_power needs Re alpha > 0");
    if (is_real_integer(alpha)) return {repeated_apply(a, static_cast<int>(std::lround(alpha.real())), x), {}};
    require_quadrature_exponent(alpha);
    // any integer above Re alpha works; keep the upper decay rate n - Re alpha away from 0
    int n = witness_n(alpha);
    if (n - alpha.real() < 0.25) ++n;
    return balakrishnan(a, alpha, n, x, scheme, exec);
}

Block spectral_frac_power(const Operator& a, Complex z, const Block& x) {
    const Spectral* sp = a.spectral();
    if (!sp) throw UnsupportedError("spectral_frac_power needs spectral data");
    if (x.rows() != a.dim()) throw DimensionError("spectral_frac_power: dimension mismatch");
    return sp->multiply(x, [z](double mu) { return power0(mu, z); });
}

Block shifted_negative_power(const Operator& a, double t, Complex g, const Block& x, const QuadratureScheme& scheme) {
    if (g == Complex(0.0)) return x;
    if (g.real() < 0.0) throw AdmissibilityError("negative power needs Re gamma >= 0");
    if (const Spectral* sp = a.spectral())
        return sp->multiply(x, [&](double mu) { return std::exp(-g * std::log(t + mu)); });
    if (is_real_integer(g)) return a.resolve_power(t, static_cast<int>(std::lround(g.real())), x);
    // (t+A)^{-g} = (t+A)^{delta} (t+A)^{-m} with delta = m - g in [0.5, 1.5): the
    // positive power then decays at rate >= 0.5 towards lambda -> 0
    const int m = static_cast<int>(std::ceil(g.real() + 0.5));
    Block y = a.resolve_power(t, m, x);
    Operator b = Operator::shifted(a, t);
    return nested_power(b, Complex(m) - g, y, scheme);
}

Block resolvent_power(const Operator& a, Complex beta, double t, Complex g, const Block& x,
                      const QuadratureScheme& scheme) {
    if (beta.real() < 0.0) throw AdmissibilityError("resolvent_power needs Re beta >= 0");
    if (const Spectral* sp = a.spectral())
        return sp->multiply(x, [&](double mu) { return power0(mu, beta) * std::exp(-g * std::log(t + mu)); });
    Block y = shifted_negative_power(a, t, g, x, scheme);
    if (beta == Complex(0.0)) return y;
    return nested_power(a, beta, y, scheme);
}

QuadResult frac_power_unified(const Operator& a, Complex z, Complex alpha, Complex beta, const Block& x,
                              const QuadratureScheme& scheme, Execution exec) {
    if (x.rows() != a.dim()) throw DimensionError("frac_power_unified: dimension mismatch");
    if (!(-alpha.real() < z.real() && z.real() < beta.real())) {
        std::ostringstream os;
        os << "unified representation needs -Re alpha < Re z < Re beta (got Re z = " << z.real() << ", Re alpha = "
           << alpha.real() << ", Re beta = " << beta.real() << ")";
        throw AdmissibilityError(os.str());
    }
    if (z.real() <= 0.0 && !a.injective()) throw InjectivityError("Re z <= 0 needs an injective operator");
    const Complex pref = gamma(alpha + beta) * rgamma(alpha + z) * rgamma(beta - z);
    QuadratureScheme s = scheme_for(a, scheme);
    // A^beta commutes with the resolvents: without spectral data apply it once up front
    const bool spectral = a.spectral() != nullptr;
    Block xb = spectral ? x : frac_power(a, beta, x, scheme, exec).value;
    Integrand g = [&](double u) -> Block {
        double lambda = std::exp(u);
        if (spectral) return cexp_u(z + alpha, u) * resolvent_power(a, beta, lambda, alpha + beta, x, scheme);
        return cexp_u(z + alpha, u) * shifted_negative_power(a, lambda, alpha + beta, xb, scheme);
    };
    QuadResult r;
    r.value = pref * integrate_line(g, s, {(z + alpha).real(), (beta - z).real()}, exec, &r.diagnostics);
    return r;
}

QuadResult frac_resolvent(const Operator& a, double alpha, double lambda, const Block& x,
                          const QuadratureScheme& scheme, bool l_variant, Execution exec) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AdmissibilityError("frac_resolvent needs 0 < alpha < 1");
    if (!(lambda > 0.0)) throw AdmissibilityError("frac_resolvent needs lambda > 0");
    if (x.rows() != a.dim()) throw DimensionError("frac_resolvent: dimension mismatch");
    const double c = std::sin(kPi * alpha) / kPi;  // 1 / (Gamma(a) Gamma(1-a))
    const double cs = std::cos(kPi * alpha);
    QuadratureScheme s = scheme;
    if (!s.has_limits()) {
        auto [lo, hi] = a.spectral_scale();
        double centre = std::pow(lambda, 1.0 / alpha);
        s.u_min = std::log(1e-8 * std::min(lo, centre));
        s.u_max = std::log(1e8 * std::max(hi, centre));
    }
    // poles of the kernel sit at Im u = +-pi (1 - alpha) / alpha; keep the
    // trapezoid step well inside that strip
    double strip = std::min(kPi, kPi * (1.0 - alpha) / alpha);
    double hmax = 2.0 * kPi * strip / 36.0;
    int need = static_cast<int>(std::ceil((s.u_max - s.u_min) / hmax)) + 1;
    s.nodes = std::max(s.nodes, need);
    Integrand g = [&](double u) -> Block {
        double mu = std::exp(u);
        double w = std::pow(mu, alpha);
        double den = lambda * lambda + 2.0 * lambda * w * cs + w * w;
        if (l_variant) return (lambda * w / den) * a.apply(a.resolve(mu, x));
        return (mu * w / den) * a.resolve(mu, x);
    };
    QuadResult r;
    r.value = c * integrate_line(g, s, {alpha, alpha}, exec, &r.diagnostics);
    return r;
}

Block semigroup_apply(const Operator& a, double t, const Block& x, bool allow_matrix_exponential) {
    if (!(t >= 0.0)) throw Error("semigroup time must be non-negative");
    if (x.rows() != a.dim()) throw DimensionError("semigroup_apply: dimension mismatch");
    if (t == 0.0) return x;
    if (const Spectral* sp = a.spectral()) return sp->multiply(x, [t](double mu) { return Complex(std::exp(-t * mu)); });
    if (!allow_matrix_exponential)
        throw UnsupportedError("semigroup needs spectral data or the matrix-exponential fallback");
    Eigen::MatrixXcd m = (-t * a.matrix()).exp();
    return m * x;
}

QuadResult frac_power_via_semigroup(const Operator& a, Complex alpha, Complex beta, const Block& x,
                                    const QuadratureScheme& scheme, bool allow_matrix_exponential, Execution exec) {
    if (x.rows() != a.dim()) throw DimensionError("frac_power_via_semigroup: dimension mismatch");
    if (alpha == Complex(0.0)) return {x, {}};
    if (!(alpha.real() > 0.0)) throw AdmissibilityError("semigroup representation needs Re alpha > 0");
    if (!(beta.real() > alpha.real())) throw AdmissibilityError("semigroup representation needs Re beta > Re alpha");
    const Spectral* sp = a.spectral();
    if (!sp && !(is_real_integer(beta) && beta.real() >= 0.0))
        throw UnsupportedError("non-spectral semigroup route needs an integer beta");
    const Complex pref = rgamma(beta - alpha);
    QuadratureScheme s = scheme;
    if (!s.has_limits()) {
        auto [lo, hi] = a.spectral_scale();
        s.u_min = std::log(1e-8 / hi);
        s.u_max = std::log(1e8 / lo);
    }
    Integrand g = [&](double u) -> Block {
        double t = std::exp(u);
        if (sp)
            return sp->multiply(x, [&](double mu) {
                return std::exp(-alpha * u) * power0(t * mu, beta) * std::exp(-t * mu);
            });
        int b = static_cast<int>(std::lround(beta.real()));
        Block y = semigroup_apply(a, t, x, allow_matrix_exponential);
        return std::exp(-alpha * u) * std::pow(t, b) * repeated_apply(a, b, y);
    };
    QuadResult r;
    r.value = pref * integrate_line(g, s, {(beta - alpha).real(), 1.0}, exec, &r.diagnostics);
    return r;
}

// ------------------------------------------------------------ subordination

double subordination_kernel(double alpha, double t, double s) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AdmissibilityError("subordination needs 0 < alpha < 1");
    if (!(t > 0.0 && s > 0.0)) return 0.0;
    // r = w^{1/alpha}: the oscillation becomes linear in w
    const double p = 1.0 / alpha;
    const double cs = std::cos(kPi * alpha), sn = std::sin(kPi * alpha);
    auto f = [&](double w) {
        if (w <= 0.0) return 0.0;
        double e = -s * std::pow(w, p) - t * w * cs;
        return std::exp(e) * std::sin(t * w * sn) * std::pow(w, p - 1.0);
    };
    auto phi = [&](double w) { return s * std::pow(w, p) + t * w * cs - (p - 1.0) * std::log(w); };
    auto dphi = [&](double w) { return s * p * std::pow(w, p - 1.0) + t * cs - (p - 1.0) / w; };
    double big = 1.0;
    while ((phi(big) < 60.0 || dphi(big) <= 0.0) && big < 1e15) big *= 1.5;
    double w1 = std::min(1.0, big);
    double acc = 0.0;
    // geometric panels towards the origin
    double hi = w1;
    for (int k = 0; k < 60; ++k) {
        double lo = 0.5 * hi;
        acc += integrate_panels_scalar(f, lo, hi, hi - lo);
        hi = lo;
    }
    if (big > w1) {
        double width = std::min(0.5 * kPi / (t * sn), 2.0 / std::max(dphi(big), 1e-300));
        width = std::min(width, (big - w1) / 4.0);
        acc += integrate_panels_scalar(f, w1, big, width);
    }
    return acc / (kPi * alpha);
}

SubordinatedResult subordinated_semigroup(const Operator& a, double alpha, double t, const Block& x,
                                          SubordinationRoute route, Execution exec) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AdmissibilityError("subordination needs 0 < alpha < 1");
    if (!(t >= 0.0)) throw Error("subordinated semigroup needs t >= 0");
    if (x.rows() != a.dim()) throw DimensionError("subordinated_semigroup: dimension mismatch");
    SubordinatedResult res;
    if (t == 0.0) {
        res.value = x;
        return res;
    }
    const Spectral* sp = a.spectral();
    if (route == SubordinationRoute::spectral) {
        if (!sp) throw UnsupportedError("spectral subordination needs spectral data");
        res.value = sp->multiply(x, [&](double mu) { return Complex(std::exp(-t * std::pow(mu, alpha))); });
        return res;
    }
    // left end: the stable density is below exp(-40) there
    double c = (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
    double s_lo = std::pow(t / std::pow(40.0 / c, 1.0 - alpha), 1.0 / alpha);
    auto [lo, hi] = a.spectral_scale();
    double s_hi = std::max(60.0 / lo, 100.0 * s_lo);
    double width = 0.25;
    int panels = static_cast<int>(std::ceil((std::log(s_hi) - std::log(s_lo)) / width));
    Integrand g = [&](double u) -> Block {
        double s = std::exp(u);
        double k = subordination_kernel(alpha, t, s) * s;
        Block out(a.dim() + 1, x.cols());
        out.topRows(a.dim()) = k * semigroup_apply(a, s, x, true);
        out.row(a.dim()).setConstant(k);
        return out;
    };
    Block total = integrate_panels(g, std::log(s_lo), std::log(s_hi), width, exec);
    // survival function of the stable law beyond s_hi (entire series in t s^-a)
    double z = t * std::pow(s_hi, -alpha), term = 1.0, tail = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= z / k;
        double add = (k % 2 ? 1.0 : -1.0) * term * rgamma(Complex(1.0 - k * alpha)).real();
        tail += add;
        if (term < 1e-18) break;
    }
    res.value = total.topRows(a.dim());
    res.mass_residual = std::abs(total(a.dim(), 0).real() + tail - 1.0);
    res.outer_nodes = panels * 16;
    return res;
}

// ------------------------------------------------------------ ergodic limits

ErgodicLimits ergodic_limits(const Operator& a, Complex alpha, const Block& x, std::vector<double> grid) {
    if (!(alpha.real() > 0.0)) throw AdmissibilityError("ergodic limits need Re alpha > 0");
    const Spectral* sp = a.spectral();
    if (grid.empty()) {
        auto [lo, hi] = a.spectral_scale();
        grid = sp ? log_grid(1e-14 * lo, 1e14 * hi, 57) : log_grid(1e-8 * lo, 1e8 * hi, 33);
    }
    if (grid.size() < 2) throw Error("ergodic limits need at least two grid points");
    std::sort(grid.begin(), grid.end());
    auto v = [&](double t) -> Block {
        if (sp) return sp->multiply(x, [&](double mu) { return std::exp(alpha * (std::log(t) - std::log(t + mu))); });
        return std::exp(alpha * std::log(t)) * shifted_negative_power(a, t, alpha, x);
    };
    auto r = [&](double t) -> Block {
        if (sp) return sp->multiply(x, [&](double mu) { return power0(mu, alpha) * std::exp(-alpha * std::log(t + mu)); });
        return resolvent_power(a, alpha, t, alpha, x);
    };
    ErgodicLimits out;
    // Richardson steps with the known leading error orders:
    //   t^a (t+A)^{-a} x - x0  ~ t^a  near 0,   ~ 1/t near infinity,
    //   A^a (t+A)^{-a} x - x1  ~ t    near 0.
    double t1 = grid[0], t2 = grid[1];
    double rho = t2 / t1;
    Complex ra = std::exp(alpha * std::log(rho));
    Block v1 = v(t1), v2 = v(t2);
    out.at_zero = (ra * v1 - v2) / (ra - 1.0);
    Block r1 = r(t1), r2 = r(t2);
    out.range_at_zero = (rho * r1 - r2) / (rho - 1.0);
    double T1 = grid[grid.size() - 2], T2 = grid.back();
    double rr = T2 / T1;
    Block w1 = v(T1), w2 = v(T2);
    out.at_infinity = (rr * w2 - w1) / (rr - 1.0);
    double xn = x.norm();
    double scale = xn > 0.0 ? xn : 1.0;
    out.change_zero = std::max((out.at_zero - v1).norm(), (out.range_at_zero - r1).norm()) / scale;
    out.change_infinity = (out.at_infinity - w2).norm() / scale;
    out.split_residual = (x - out.at_zero - out.range_at_zero).norm() / scale;
    out.converged = out.change_zero < 1e-3 && out.change_infinity < 1e-3 && out.split_residual < 1e-6;
    return out;
}

// ------------------------------------------------------------ reproducing formulas

double reproducing_residual(const Operator& a, Complex alpha, int m, double lambda_cut, const Block& x,
                            const QuadratureScheme& scheme) {
    if (!(alpha.real() > 0.0)) throw AdmissibilityError("reproducing formula needs Re alpha > 0");
    if (m < 1) throw AdmissibilityError("reproducing formula needs m >= 1");
    if (!(lambda_cut >= 0.0)) throw AdmissibilityError("cut must be non-negative");
    const Complex pref = gamma(alpha + double(m)) * rgamma(alpha) * rgamma(Complex(m));
    QuadratureScheme s = scheme_for(a, scheme);
    Integrand g = [&](double u) -> Block {
        return cexp_u(alpha, u) * resolvent_power(a, Complex(m), std::exp(u), alpha + double(m), x, scheme);
    };
    Block value;
    if (lambda_cut == 0.0) {
        if (!a.injective()) throw InjectivityError("homogeneous reproducing formula needs an injective operator");
        value = pref * integrate_line(g, s, {alpha.real(), double(m)});
    } else {
        value = pref * integrate_right(g, std::log(lambda_cut), s, double(m));
        Block y = std::exp(alpha * std::log(lambda_cut)) * shifted_negative_power(a, lambda_cut, alpha, x, scheme);
        for (int k = 0; k < m; ++k) {
            Complex ck = gamma(alpha + double(k)) * rgamma(alpha) * rgamma(Complex(k + 1));
            value += ck * y;
            y = a.apply(a.resolve(lambda_cut, y));
        }
    }
    double xn = x.norm();
    return xn > 0.0 ? (x - value).norm() / xn : value.norm();
}

// ------------------------------------------------------------ frac_power handle

namespace {

class FracPowerImpl final : public OperatorImpl {
public:
    FracPowerImpl(Operator base, double exponent) : base_(std::move(base)), e_(exponent) {
        if (!(exponent > 0.0) || !std::isfinite(exponent))
            throw AdmissibilityError("frac_power handle needs a positive real exponent");
        if (const Spectral* s = base_.spectral()) {
            RealVec ev = s->eigenvalues.array().pow(e_);
            spectral_ = Spectral{ev, s->basis};
        }
    }
    OperatorKind kind() const override { return OperatorKind::frac_power; }
    int dim() const override { return base_.dim(); }
    std::string describe() const override {
        std::ostringstream os;
        os << "frac_power(" << base_.describe() << ", " << e_ << ")";
        return os.str();
    }
    Block apply(const Block& x) const override {
        if (spectral_) return spectral_->multiply(x, [](double mu) { return Complex(mu); });
        return frac_power(base_, e_, x, {}, Execution::serial).value;
    }
    Block apply_adjoint(const Block& x) const override {
        if (spectral_) return apply(x);
        return matrix_cache().adjoint() * x;
    }
    Block resolve(double lambda, const Block& x) const override {
        if (spectral_) return spectral_->multiply(x, [lambda](double mu) { return Complex(1.0 / (lambda + mu)); });
        if (e_ < 1.0) return frac_resolvent(base_, e_, lambda, x, {}, false, Execution::serial).value;
        Eigen::MatrixXcd m = matrix_cache();
        m.diagonal().array() += lambda;
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).solve(x);
    }
    Block resolve_adjoint(double lambda, const Block& x) const override {
        if (spectral_) return resolve(lambda, x);
        Eigen::MatrixXcd m = matrix_cache().adjoint();
        m.diagonal().array() += lambda;
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).solve(x);
    }
    Block solve(const Block& x) const override {
        if (spectral_) {
            if (!injective()) throw InjectivityError("fractional power of a non-injective operator");
            return spectral_->multiply(x, [](double mu) { return Complex(1.0 / mu); });
        }
        return Eigen::PartialPivLU<Eigen::MatrixXcd>(matrix_cache()).solve(x);
    }

private:
    const Eigen::MatrixXcd& matrix_cache() const {
        std::call_once(once_, [&] {
            m_ = frac_power(base_, e_, Eigen::MatrixXcd::Identity(dim(), dim()), {}, Execution::serial).value;
        });
        return m_;
    }
    Operator base_;
    double e_;
    mutable std::once_flag once_;
    mutable Eigen::MatrixXcd m_;
};

}  // namespace

Operator Operator::frac_power(const Operator& base, double exponent) {
    return Operator(std::make_shared<FracPowerImpl>(base, exponent));
}

}  // namespace abesov
