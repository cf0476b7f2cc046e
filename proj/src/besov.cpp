#include "abesov/besov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "abesov/golden.hpp"

namespace abesov {

void BesovIndex::validate(bool homogeneous) const {
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
    if (alpha.real() < 0.0 || beta.real() < 0.0) throw AdmissibilityError("Re alpha and Re beta must be >= 0");
    if (!(-alpha.real() < s && s < beta.real())) {
        std::ostringstream os;
        os << "s must satisfy -Re alpha < s < Re beta (s = " << s << ", Re alpha = " << alpha.real()
           << ", Re beta = " << beta.real() << ")";
        throw AdmissibilityError(os.str());
    }
    if (homogeneous && !(beta.real() > 0.0)) throw AdmissibilityError("homogeneous norms need Re beta > 0");
}

double quasi_triangle_constant(double q) {
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
    if (std::isinf(q) || q >= 1.0) return 1.0;
    return std::pow(2.0, 1.0 / q - 1.0);
}

double aoki_rolewicz_p(double q) {
    double K = quasi_triangle_constant(q);
    return std::log(2.0) / (std::log(K) + std::log(2.0));
}

namespace {

// A vector-valued family indexed by levels j, reduced to magnitudes, with
// bounds on the ratio of consecutive magnitudes beyond a given level.
struct Levels {
    std::function<double(int)> block;
    // bound on b_{i+1} / b_i valid for all i >= j
    std::function<double(int)> up_ratio;
    // bound on b_{i-1} / b_i valid for all i <= j
    std::function<double(int)> down_ratio;
    bool rigorous = false;
};

struct Scales {
    double rho = 1.0;     // spectral radius (or a safe overestimate)
    double mu_min = 1.0;  // smallest nonzero spectral magnitude (or a safe underestimate)
    bool rigorous = false;
};

Scales scales_of(const Operator& a, const NormOptions& opt) {
    Scales sc;
    if (a.spectral()) {
        auto [lo, hi] = a.spectral_scale();
        sc.rho = hi;
        sc.mu_min = lo;
        sc.rigorous = opt.norm.is_euclidean();
        if (!sc.rigorous) {
            sc.rho *= 4.0;
            sc.mu_min /= 4.0;
        }
        return sc;
    }
    // non-normal: singular values bracket the decay onset; keep a margin
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.matrix());
    const auto& sv = svd.singularValues();
    sc.rho = 4.0 * sv(0);
    double smin = sv(sv.size() - 1);
    sc.mu_min = smin > 1e-10 * sv(0) ? smin / 4.0 : a.spectral_scale().first / 4.0;
    sc.rigorous = false;
    return sc;
}

void require_vector(const Operator& a, const Block& x) {
    if (x.rows() != a.dim()) throw DimensionError("norm: dimension mismatch");
    if (x.cols() != 1) throw DimensionError("norms act on single vectors");
}

// |mu^beta| for mu >= 0
double mag_power(double mu, double re_beta, bool beta_zero) {
    if (beta_zero) return 1.0;
    if (mu > 0.0) return std::pow(mu, re_beta);
    return re_beta > 0.0 ? 0.0 : 1.0;
}

struct Coefficients {
    RealVec weights;  // |c_i|^2 in the unitary eigenbasis
    const Spectral* sp = nullptr;
};

Coefficients coefficients(const Operator& a, const Block& x) {
    Coefficients c;
    c.sp = a.spectral();
    if (c.sp) c.weights = c.sp->basis.forward(x).col(0).cwiseAbs2();
    return c;
}

Levels resolvent_levels(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    const double sa = idx.s + idx.alpha.real();
    const double ab = (idx.alpha + idx.beta).real();
    const double rb = idx.beta.real();
    const bool bzero = idx.beta == Complex(0.0);
    Scales sc = scales_of(a, opt);
    Levels lv;
    lv.rigorous = sc.rigorous;
    auto coef = std::make_shared<Coefficients>(coefficients(a, x));
    if (coef->sp && opt.norm.is_euclidean()) {
        lv.block = [=](int j) {
            const RealVec& ev = coef->sp->eigenvalues;
            double t = std::ldexp(1.0, j), acc = 0.0;
            for (Eigen::Index i = 0; i < ev.size(); ++i) {
                if (coef->weights[i] == 0.0) continue;
                double m = mag_power(ev[i], rb, bzero) * std::pow(t + ev[i], -ab);
                acc += coef->weights[i] * m * m;
            }
            return std::pow(t, sa) * std::sqrt(acc);
        };
    } else {
        lv.block = [=, &a](int j) {
            double t = std::ldexp(1.0, j);
            Block y = resolvent_power(a, idx.beta, t, idx.alpha + idx.beta, x, opt.scheme);
            return std::pow(t, sa) * opt.norm(y.col(0));
        };
    }
    lv.up_ratio = [=](int j) {
        double e = sc.rho / std::ldexp(1.0, j);
        return std::pow(2.0, sa) * std::pow((1.0 + e) / (2.0 + e), ab);
    };
    lv.down_ratio = [=](int j) {
        double e = std::ldexp(1.0, j) / sc.mu_min;
        return std::pow(2.0, -sa) * std::pow((1.0 + e) / (1.0 + 0.5 * e), ab);
    };
    return lv;
}

Block semigroup_power(const Operator& a, Complex beta, double t, const Block& x, const NormOptions& opt) {
    Block y = semigroup_apply(a, t, x, opt.allow_matrix_exponential);
    if (beta == Complex(0.0)) return y;
    if (a.spectral()) return spectral_frac_power(a, beta, y);
    return frac_power(a, beta, y, opt.scheme, Execution::serial).value;
}

// b_j = 2^{j(s - Re beta)} ||A^beta T(2^{-j}) x||
Levels semigroup_levels(const Operator& a, double s, Complex beta, const Block& x, const NormOptions& opt) {
    const double rb = beta.real();
    const bool bzero = beta == Complex(0.0);
    Scales sc = scales_of(a, opt);
    Levels lv;
    lv.rigorous = sc.rigorous;
    auto coef = std::make_shared<Coefficients>(coefficients(a, x));
    if (coef->sp && opt.norm.is_euclidean()) {
        lv.block = [=](int j) {
            const RealVec& ev = coef->sp->eigenvalues;
            double t = std::ldexp(1.0, -j), acc = 0.0;
            for (Eigen::Index i = 0; i < ev.size(); ++i) {
                if (coef->weights[i] == 0.0) continue;
                double m = mag_power(ev[i], rb, bzero) * std::exp(-t * ev[i]);
                acc += coef->weights[i] * m * m;
            }
            return std::pow(2.0, j * (s - rb)) * std::sqrt(acc);
        };
    } else {
        lv.block = [=, &a](int j) {
            double t = std::ldexp(1.0, -j);
            Block y = semigroup_power(a, beta, t, x, opt);
            return std::pow(2.0, j * (s - rb)) * opt.norm(y.col(0));
        };
    }
    lv.up_ratio = [=](int j) { return std::pow(2.0, s - rb) * std::exp(sc.rho * std::ldexp(1.0, -j - 1)); };
    lv.down_ratio = [=](int j) { return std::pow(2.0, rb - s) * std::exp(-sc.mu_min * std::ldexp(1.0, -j)); };
    return lv;
}

double powq(double b, double q) { return std::isinf(q) ? b : std::pow(b, q); }

double root(double S, double q) { return std::isinf(q) ? S : std::pow(S, 1.0 / q); }

enum class Sides { up, down, both };

struct Aggregate {
    double value = 0.0;  // (sum b^q)^{1/q} or sup
    int j_lo = 0, j_hi = 0;
    double tail_bound = 0.0;
    std::vector<double> trace;
};

// Sum over levels starting at `start`, extended in the requested directions
// until the geometric tail bound falls below tolerance * (lead + aggregate).
Aggregate aggregate(const Levels& lv, double q, int start, Sides sides, double lead, const NormOptions& opt) {
    Aggregate out;
    std::vector<double> down_terms, up_terms;  // down_terms[i] is level start-1-i
    double S = 0.0;
    auto add = [&](double b) { S = std::isinf(q) ? std::max(S, b) : S + powq(b, q); };

    if (opt.fixed_range) {
        auto [lo, hi] = *opt.fixed_range;
        if (sides == Sides::up) lo = std::max(lo, start);
        if (sides == Sides::down) hi = std::min(hi, start);
        for (int j = lo; j <= hi; ++j) {
            double b = lv.block(j);
            add(b);
            if (opt.keep_trace) out.trace.push_back(b);
        }
        out.value = root(S, q);
        out.j_lo = lo;
        out.j_hi = hi;
        out.tail_bound = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    const bool go_up = sides != Sides::down, go_down = sides != Sides::up;
    double b0 = lv.block(start);
    add(b0);
    int hi = start, lo = start;
    double b_hi = b0, b_lo = b0;
    auto side_tail = [&](double b, double R) {
        if (!(R < 1.0)) return kInf;
        if (std::isinf(q)) return 0.0;
        double rq = std::pow(R, q);
        return powq(b, q) * rq / (1.0 - rq);
    };
    for (;;) {
        double t_up = go_up ? side_tail(b_hi, lv.up_ratio(hi)) : 0.0;
        double t_dn = go_down ? side_tail(b_lo, lv.down_ratio(lo)) : 0.0;
        double tail = kInf;
        if (std::isfinite(t_up) && std::isfinite(t_dn)) tail = std::isinf(q) ? 0.0 : root(S + t_up + t_dn, q) - root(S, q);
        double value = lead + root(S, q);
        if (tail <= opt.tail_tolerance * value) {
            out.tail_bound = tail;
            break;
        }
        bool extend_up = go_up && (!go_down || t_up >= t_dn);
        if (extend_up) {
            if (hi + 1 > opt.max_level) {
                std::ostringstream os;
                os << "tail not certified below tolerance " << opt.tail_tolerance << " by level " << opt.max_level
                   << " (upper side)";
                throw TailError(os.str());
            }
            b_hi = lv.block(++hi);
            add(b_hi);
            up_terms.push_back(b_hi);
        } else {
            if (lo - 1 < -opt.max_level) {
                std::ostringstream os;
                os << "tail not certified below tolerance " << opt.tail_tolerance << " by level " << -opt.max_level
                   << " (lower side)";
                throw TailError(os.str());
            }
            b_lo = lv.block(--lo);
            add(b_lo);
            down_terms.push_back(b_lo);
        }
    }
    out.value = root(S, q);
    out.j_lo = lo;
    out.j_hi = hi;
    if (opt.keep_trace) {
        out.trace.assign(down_terms.rbegin(), down_terms.rend());
        out.trace.push_back(b0);
        out.trace.insert(out.trace.end(), up_terms.begin(), up_terms.end());
    }
    return out;
}

NormResult finish(double lead, const Aggregate& agg, bool rigorous) {
    NormResult r;
    r.lead = lead;
    r.aggregate = agg.value;
    r.value = lead + agg.value;
    r.j_lo = agg.j_lo;
    r.j_hi = agg.j_hi;
    r.tail_bound = agg.tail_bound;
    r.certified = rigorous && std::isfinite(agg.tail_bound);
    r.term_trace = agg.trace;
    return r;
}

int centre_level(const Operator& a, const NormOptions& opt) {
    Scales sc = scales_of(a, opt);
    return static_cast<int>(std::lround(0.5 * std::log2(sc.rho * sc.mu_min)));
}

double vector_norm(const NormOptions& opt, const Block& y) { return opt.norm(y.col(0)); }

}  // namespace

double dyadic_block(const Operator& a, int j, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    idx.validate();
    require_vector(a, x);
    return resolvent_levels(a, idx, x, opt).block(j);
}

NormResult inhom_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    idx.validate();
    require_vector(a, x);
    if (x.isZero(0.0)) return {};
    double lead = vector_norm(opt, shifted_negative_power(a, std::ldexp(1.0, idx.k), idx.alpha, x, opt.scheme));
    Levels lv = resolvent_levels(a, idx, x, opt);
    return finish(lead, aggregate(lv, idx.q, idx.k, Sides::up, lead, opt), lv.rigorous);
}

NormResult homog_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    idx.validate(true);
    require_vector(a, x);
    if (!a.injective()) throw InjectivityError("homogeneous norms need an injective operator");
    if (x.isZero(0.0)) return {};
    Levels lv = resolvent_levels(a, idx, x, opt);
    return finish(0.0, aggregate(lv, idx.q, centre_level(a, opt), Sides::both, 0.0, opt), lv.rigorous);
}

NormResult breve_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    idx.validate(true);
    require_vector(a, x);
    if (!a.injective()) throw InjectivityError("breve norms need an injective operator");
    if (x.isZero(0.0)) return {};
    double lead = vector_norm(opt, resolvent_power(a, idx.beta, std::ldexp(1.0, idx.k), idx.beta, x, opt.scheme));
    Levels lv = resolvent_levels(a, idx, x, opt);
    return finish(lead, aggregate(lv, idx.q, idx.k, Sides::down, lead, opt), lv.rigorous);
}

NormResult semigroup_quasi_norm(const Operator& a, double s, double q, int k, Complex beta, const Block& x,
                                const NormOptions& opt) {
    if (!(s > 0.0 && s < beta.real())) throw AdmissibilityError("semigroup norms need 0 < s < Re beta");
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
    require_vector(a, x);
    if (x.isZero(0.0)) return {};
    double lead = vector_norm(opt, x);
    Levels lv = semigroup_levels(a, s, beta, x, opt);
    return finish(lead, aggregate(lv, q, k, Sides::up, lead, opt), lv.rigorous);
}

NormResult homog_semigroup_seminorm(const Operator& a, double s, double q, Complex beta, const Block& x,
                                    const NormOptions& opt) {
    if (!(s > 0.0 && s < beta.real())) throw AdmissibilityError("semigroup norms need 0 < s < Re beta");
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
    require_vector(a, x);
    if (!a.injective()) throw InjectivityError("homogeneous norms need an injective operator");
    if (x.isZero(0.0)) return {};
    Levels lv = semigroup_levels(a, s, beta, x, opt);
    return finish(0.0, aggregate(lv, q, -centre_level(a, opt), Sides::both, 0.0, opt), lv.rigorous);
}

// ------------------------------------------------------------ continuous parameter

namespace {

// u -> ||e^{u(s+alpha)} A^beta (e^u + A)^{-alpha-beta} x||
std::function<double(double)> continuous_profile(const Operator& a, const BesovIndex& idx, const Block& x,
                                                 const NormOptions& opt) {
    const double sa = idx.s + idx.alpha.real();
    const double ab = (idx.alpha + idx.beta).real();
    const double rb = idx.beta.real();
    const bool bzero = idx.beta == Complex(0.0);
    auto coef = std::make_shared<Coefficients>(coefficients(a, x));
    if (coef->sp && opt.norm.is_euclidean()) {
        return [=](double u) {
            const RealVec& ev = coef->sp->eigenvalues;
            double t = std::exp(u), acc = 0.0;
            for (Eigen::Index i = 0; i < ev.size(); ++i) {
                if (coef->weights[i] == 0.0) continue;
                double m = mag_power(ev[i], rb, bzero) * std::pow(t + ev[i], -ab);
                acc += coef->weights[i] * m * m;
            }
            return std::exp(u * sa) * std::sqrt(acc);
        };
    }
    return [=, &a](double u) {
        Block y = resolvent_power(a, idx.beta, std::exp(u), idx.alpha + idx.beta, x, opt.scheme);
        return std::exp(u * sa) * opt.norm(y.col(0));
    };
}

double profile_sup(const std::function<double(double)>& f, double u0, double u1) {
    const int n = 400;
    double best = -1.0;
    int arg = 0;
    for (int i = 0; i < n; ++i) {
        double v = f(u0 + (u1 - u0) * i / (n - 1));
        if (v > best) {
            best = v;
            arg = i;
        }
    }
    double h = (u1 - u0) / (n - 1);
    double a = std::max(u0, u0 + h * (arg - 1)), b = std::min(u1, u0 + h * (arg + 1));
    auto g = golden_section_maximize(f, a, b, 1e-12);
    return std::max(best, g.value);
}

}  // namespace

NormResult continuous_quasi_norm(const Operator& a, const BesovIndex& idx, const Block& x, const NormOptions& opt) {
    idx.validate();
    require_vector(a, x);
    if (x.isZero(0.0)) return {};
    double lead = vector_norm(opt, shifted_negative_power(a, std::ldexp(1.0, idx.k), idx.alpha, x, opt.scheme));
    auto f = continuous_profile(a, idx, x, opt);
    const double u0 = idx.k * std::log(2.0);
    const double gap = idx.beta.real() - idx.s;
    NormResult r;
    r.lead = lead;
    r.j_lo = idx.k;
    if (std::isinf(idx.q)) {
        double hi = a.spectral_scale().second;
        double u1 = std::max(u0 + 1.0, std::log(hi) + 40.0 / gap);
        r.aggregate = profile_sup(f, u0, u1);
        r.certified = a.spectral() && opt.norm.is_euclidean();
    } else {
        QuadDiagnostics d;
        QuadratureScheme sch = opt.scheme;
        sch.tail_tolerance = std::min(sch.tail_tolerance, opt.tail_tolerance * 1e-2);
        Integrand g = [&](double u) {
            Block b(1, 1);
            b(0, 0) = std::pow(f(u), idx.q);
            return b;
        };
        double I = integrate_right(g, u0, sch, gap * idx.q, Execution::serial, &d)(0, 0).real();
        r.aggregate = std::pow(I, 1.0 / idx.q);
        r.tail_bound = std::pow(I + d.tail_estimate, 1.0 / idx.q) - r.aggregate;
        r.certified = d.tail_certified && a.spectral() && opt.norm.is_euclidean();
        r.j_hi = static_cast<int>(std::ceil(d.u_max / std::log(2.0)));
    }
    r.value = lead + r.aggregate;
    return r;
}

NormResult continuous_homog_seminorm(const Operator& a, const BesovIndex& idx, const Block& x,
                                     const NormOptions& opt) {
    idx.validate(true);
    require_vector(a, x);
    if (!a.injective()) throw InjectivityError("homogeneous norms need an injective operator");
    if (x.isZero(0.0)) return {};
    auto f = continuous_profile(a, idx, x, opt);
    auto [lo, hi] = a.spectral_scale();
    const double lo_gap = idx.s + idx.alpha.real(), hi_gap = idx.beta.real() - idx.s;
    NormResult r;
    if (std::isinf(idx.q)) {
        r.aggregate = profile_sup(f, std::log(lo) - 40.0 / lo_gap, std::log(hi) + 40.0 / hi_gap);
        r.certified = a.spectral() && opt.norm.is_euclidean();
    } else {
        QuadratureScheme sch = opt.scheme;
        if (!sch.has_limits()) {
            sch.u_min = std::log(lo) - 10.0;
            sch.u_max = std::log(hi) + 10.0;
        }
        sch.tail_tolerance = std::min(sch.tail_tolerance, opt.tail_tolerance * 1e-2);
        QuadDiagnostics d;
        double I = integrate_line_scalar([&](double u) { return std::pow(f(u), idx.q); }, sch,
                                         {lo_gap * idx.q, hi_gap * idx.q}, &d);
        r.aggregate = std::pow(I, 1.0 / idx.q);
        r.tail_bound = std::pow(I + d.tail_estimate, 1.0 / idx.q) - r.aggregate;
        r.certified = d.tail_certified && a.spectral() && opt.norm.is_euclidean();
        r.j_lo = static_cast<int>(std::floor(d.u_min / std::log(2.0)));
        r.j_hi = static_cast<int>(std::ceil(d.u_max / std::log(2.0)));
    }
    r.value = r.aggregate;
    return r;
}

}  // namespace abesov
