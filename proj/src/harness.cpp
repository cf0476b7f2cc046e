#include "abesov/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include <omp.h>

#include "abesov/fractional.hpp"
#include "abesov/gamma.hpp"
#include "abesov/interpolation.hpp"

namespace abesov {

namespace {

enum class Mode { main, calibration };

// Levels summed by the brute-force calibration runs.
constexpr int kBruteLevels = 120;
constexpr size_t kMaxFailureRecords = 20;

struct Outcome {
    std::vector<double> ratios;
    std::vector<std::string> ratio_labels;
    std::vector<double> excess;  // compared against the plan tolerance
    std::vector<std::string> excess_labels;
    int skipped = 0;  // evaluations without a defined ratio (0/0) or outside the admissible range

    void ratio(double num, double den, std::string label) {
        if (num == 0.0 && den == 0.0) {
            ++skipped;
            return;
        }
        ratios.push_back(num / den);
        ratio_labels.push_back(std::move(label));
    }
    // record lhs <= rhs as relative excess (lhs - rhs) / rhs
    void bound(double lhs, double rhs, std::string label) {
        double e = rhs > 0.0 ? (lhs - rhs) / rhs : (lhs > 0.0 ? kInf : 0.0);
        measure(e, lhs / rhs, std::move(label));
    }
    void measure(double e, double r, std::string label) {
        excess.push_back(e);
        excess_labels.push_back(label);
        if (std::isfinite(r)) {
            ratios.push_back(r);
            ratio_labels.push_back(std::move(label));
        }
    }
    bool empty() const { return ratios.empty() && excess.empty(); }
};

using Evaluator = std::function<Outcome(const Sample&, const CheckPlan&, Mode)>;

// ------------------------------------------------------------ formatting

std::string fmt(double v) { return format_double(v); }

std::string fmt(Complex z) {
    if (z.imag() == 0.0) return fmt(z.real());
    return fmt(z.real()) + (z.imag() < 0 ? "" : "+") + fmt(z.imag()) + "i";
}

std::string label(const BesovIndex& i) {
    std::ostringstream os;
    os << "s=" << fmt(i.s) << " q=" << fmt(i.q) << " k=" << i.k << " alpha=" << fmt(i.alpha)
       << " beta=" << fmt(i.beta);
    return os.str();
}

BesovIndex idx(double s, double q, Complex alpha, Complex beta, int k = 0) {
    BesovIndex b;
    b.s = s;
    b.q = q;
    b.alpha = alpha;
    b.beta = beta;
    b.k = k;
    return b;
}

std::vector<Complex> complex_params(const std::vector<double>& p) {
    std::vector<Complex> out;
    for (size_t i = 0; i + 1 < p.size(); i += 2) out.emplace_back(p[i], p[i + 1]);
    return out;
}

// ------------------------------------------------------------ numerics shared by checks

NormOptions norm_opts(Mode m) {
    NormOptions o;
    if (m == Mode::calibration) o.fixed_range = std::make_pair(-kBruteLevels, kBruteLevels);
    return o;
}

NormOptions fixed(int lo, int hi) {
    NormOptions o;
    o.fixed_range = std::make_pair(lo, hi);
    return o;
}

Block power_apply(const Operator& a, Complex z, const Block& x) {
    if (a.spectral()) return spectral_frac_power(a, z, x);
    return frac_power(a, z, x).value;
}

double largest_singular_value(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

// Orthogonal projector onto the kernel of a spectral handle.
Block kernel_part(const Operator& a, const Block& x) {
    const Spectral* sp = a.spectral();
    if (!sp) throw UnsupportedError("kernel projection needs a spectral handle");
    return sp->multiply(x, [](double mu) { return Complex(mu == 0.0 ? 1.0 : 0.0); });
}

// ------------------------------------------------------------ ratio evaluators

// grid = (reference, variant) pairs of one norm functional
Evaluator pair_ratio(std::function<double(const Operator&, const BesovIndex&, const Block&, Mode)> norm) {
    return [norm](const Sample& s, const CheckPlan& p, Mode m) {
        Outcome o;
        for (size_t i = 0; i + 1 < p.grid.size(); i += 2) {
            double ref = norm(s.a, p.grid[i], s.x, m);
            double var = norm(s.a, p.grid[i + 1], s.x, m);
            o.ratio(var, ref, label(p.grid[i + 1]) + " / " + label(p.grid[i]));
        }
        return o;
    };
}

double inhom_value(const Operator& a, const BesovIndex& i, const Block& x, Mode m) {
    return inhom_quasi_norm(a, i, x, norm_opts(m)).value;
}

double inhom_sigma(const Operator& a, const BesovIndex& i, const Block& x, Mode m) {
    return inhom_quasi_norm(a, i, x, norm_opts(m)).aggregate;
}

double homog_value(const Operator& a, const BesovIndex& i, const Block& x, Mode m) {
    return homog_quasi_norm(a, i, x, norm_opts(m)).value;
}

Outcome eval_continuity(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (const auto& i : p.grid)
        o.ratio(inhom_value(s.a, i, s.x, m), continuous_quasi_norm(s.a, i, s.x).value, label(i));
    return o;
}

Outcome eval_translation(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (double eps : p.params) {
        Operator shifted = Operator::shifted(s.a, eps);
        for (const auto& i : p.grid)
            o.ratio(inhom_value(shifted, i, s.x, m), inhom_value(s.a, i, s.x, m),
                    "eps=" + fmt(eps) + " " + label(i));
    }
    return o;
}

Outcome eval_lifting_pos(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (Complex g : complex_params(p.params)) {
        Block y = power_apply(s.a, g, s.x);
        for (const auto& i : p.grid) {
            if (!(g.real() > 0.0 && g.real() < i.s)) {
                ++o.skipped;
                continue;
            }
            BesovIndex j = i;
            j.s = i.s - g.real();
            o.ratio(inhom_value(s.a, j, y, m), inhom_value(s.a, i, s.x, m), "gamma=" + fmt(g) + " " + label(i));
        }
    }
    return o;
}

Outcome eval_lifting_equiv(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (Complex g : complex_params(p.params)) {
        Block down = power_apply(s.a, -g, s.x);
        Block up = power_apply(s.a, g, s.x);
        for (const auto& i : p.grid) {
            double base = inhom_value(s.a, i, s.x, m);
            if (i.s > 0.0 && i.s + g.real() < i.beta.real()) {
                BesovIndex j = i;
                j.s = i.s + g.real();
                o.ratio(inhom_value(s.a, j, down, m), base, "A^-gamma gamma=" + fmt(g) + " " + label(i));
            }
            if (g.real() < i.s) {
                BesovIndex j = i;
                j.s = i.s - g.real();
                o.ratio(inhom_value(s.a, j, up, m), base, "A^gamma gamma=" + fmt(g) + " " + label(i));
            }
        }
    }
    return o;
}

Outcome eval_reiteration(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (double e : p.params) {
        // angle gate: exponents above 1 only for self-adjoint operators
        if (e > 1.0 && !s.a.self_adjoint()) {
            o.skipped += static_cast<int>(p.grid.size());
            continue;
        }
        Operator ae = Operator::frac_power(s.a, e);
        for (const auto& i : p.grid) {
            BesovIndex j = i;
            j.s = i.s * e;
            o.ratio(inhom_value(ae, i, s.x, m), inhom_value(s.a, j, s.x, m), "power=" + fmt(e) + " " + label(i));
        }
    }
    return o;
}

// params = (power, theta) pairs; grid supplies q and the Besov (alpha, beta)
Outcome eval_interpolation(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (size_t t = 0; t + 1 < p.params.size(); t += 2) {
        CoupleSpec c;
        c.a = s.a;
        c.alpha = p.params[t];
        c.theta = p.params[t + 1];
        for (const auto& i : p.grid) {
            c.q = i.q;
            BesovIndex j = i;
            j.s = c.theta * c.alpha.real();
            o.ratio(interpolation_norm(c, s.x).value, inhom_value(s.a, j, s.x, m),
                    "power=" + fmt(c.alpha) + " theta=" + fmt(c.theta) + " " + label(j));
        }
    }
    return o;
}

Outcome eval_inhom_homog(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    double nx = s.x.col(0).norm();
    for (const auto& i : p.grid)
        o.ratio(inhom_value(s.a, i, s.x, m), nx + homog_value(s.a, i, s.x, m), label(i));
    return o;
}

// params = semigroup beta values
Outcome eval_semigroup(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (double b : p.params)
        for (const auto& i : p.grid) {
            if (!(i.s > 0.0 && i.s < b)) {
                ++o.skipped;
                continue;
            }
            o.ratio(inhom_value(s.a, i, s.x, m),
                    semigroup_quasi_norm(s.a, i.s, i.q, i.k, b, s.x, norm_opts(m)).value,
                    "semigroup beta=" + fmt(b) + " " + label(i));
        }
    return o;
}

Outcome eval_homog_semigroup(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (double b : p.params)
        for (const auto& i : p.grid) {
            if (!(i.s > 0.0 && i.s < b)) {
                ++o.skipped;
                continue;
            }
            o.ratio(homog_value(s.a, i, s.x, m), homog_semigroup_seminorm(s.a, i.s, i.q, b, s.x, norm_opts(m)).value,
                    "semigroup beta=" + fmt(b) + " " + label(i));
        }
    return o;
}

// params = (power, semigroup beta) pairs
Outcome eval_subordinated(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (size_t t = 0; t + 1 < p.params.size(); t += 2) {
        double e = p.params[t], b = p.params[t + 1];
        Operator ae = Operator::frac_power(s.a, e);
        for (const auto& i : p.grid) {
            double sg = i.s / e;
            if (!(sg > 0.0 && sg < b)) {
                ++o.skipped;
                continue;
            }
            o.ratio(inhom_value(s.a, i, s.x, m), semigroup_quasi_norm(ae, sg, i.q, 0, b, s.x, norm_opts(m)).value,
                    "power=" + fmt(e) + " semigroup beta=" + fmt(b) + " " + label(i));
        }
        if (m == Mode::main && e < 1.0) {
            // the subordinated semigroup through the stable kernel against the spectral one
            Block kern = subordinated_semigroup(s.a, e, 1.0, s.x, SubordinationRoute::kernel).value;
            Block spec = subordinated_semigroup(s.a, e, 1.0, s.x, SubordinationRoute::spectral).value;
            o.excess.push_back((kern - spec).norm() / std::max(spec.norm(), 1e-300));
            o.excess_labels.push_back("kernel route vs spectral, power=" + fmt(e) + " t=1");
        }
    }
    return o;
}

double littlewood_paley(const Operator& a, const Block& x, double sigma, double q) {
    return littlewood_paley_norm(a, x, sigma, q);
}

// grid: resolvent indices compared with the Fourier norm at smoothness 2s;
// params: smoothness values for the square-root comparison.
Outcome eval_classical(const Sample& s, const CheckPlan& p, Mode m) {
    Outcome o;
    for (const auto& i : p.grid)
        o.ratio(inhom_value(s.a, i, s.x, m), littlewood_paley(s.a, s.x, 2.0 * i.s, i.q),
                "Fourier smoothness=" + fmt(2.0 * i.s) + " " + label(i));
    Operator root = Operator::frac_power(s.a, 0.5);
    for (double sv : p.params) {
        BesovIndex i = idx(sv, 2.0, 1.0, 2.0);
        BesovIndex j = idx(sv / 2.0, 2.0, 1.0, 2.0);
        o.ratio(inhom_value(root, i, s.x, m), inhom_value(s.a, j, s.x, m), "square root " + label(i));
    }
    return o;
}

// params = flattened (s, alpha) pairs; grid supplies q; the sample seed draws the sequence
Outcome eval_ellq(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const int half = 40, len = 2 * half + 1;
    PortableRng rng(s.seed);
    RealVec a = RealVec::Zero(len);
    switch (s.index % 3) {
        case 0:
            a[rng.below(len)] = 1.0;
            break;
        case 1:
            for (int i = 0; i < len; ++i) a[i] = rng.normal();
            break;
        default: {
            int c = rng.below(len);
            double r = 0.05 + rng.uniform();
            for (int i = 0; i < len; ++i) a[i] = std::exp2(-r * std::abs(i - c));
            break;
        }
    }
    auto lq = [](const RealVec& v, double q) {
        if (std::isinf(q)) return v.cwiseAbs().maxCoeff();
        double S = 0.0;
        for (double e : v) S += std::pow(std::abs(e), q);
        return std::pow(S, 1.0 / q);
    };
    for (size_t t = 0; t + 1 < p.params.size(); t += 2) {
        double sm = p.params[t], al = p.params[t + 1];
        double c = std::cos(kPi * al);
        RealVec b = RealVec::Zero(len);
        for (int j = -half; j <= half; ++j)
            for (int i = -half; i <= half; ++i) {
                double mu = std::exp2(-j + i * al);
                b[j + half] += std::pow(mu, 1.0 - sm) / (1.0 + 2.0 * mu * c + mu * mu) * a[i + half];
            }
        for (const auto& gi : p.grid) {
            double bound = ellq_constant(sm, al, gi.q);
            o.ratio(lq(b, gi.q), bound * lq(a, gi.q), "s=" + fmt(sm) + " alpha=" + fmt(al) + " q=" + fmt(gi.q));
        }
    }
    return o;
}

// ------------------------------------------------------------ exact evaluators

// grid = (q, q1) pairs with q <= q1: the l_q1 aggregate is at most the l_q one, levels fixed
Outcome eval_embed_q(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    for (size_t t = 0; t + 1 < p.grid.size(); t += 2) {
        const BesovIndex &lo = p.grid[t], &hi = p.grid[t + 1];
        int J = std::max(inhom_quasi_norm(s.a, lo, s.x).j_hi, inhom_quasi_norm(s.a, hi, s.x).j_hi);
        double small_q = inhom_quasi_norm(s.a, lo, s.x, fixed(lo.k, J)).aggregate;
        double large_q = inhom_quasi_norm(s.a, hi, s.x, fixed(hi.k, J)).aggregate;
        o.bound(large_q, small_q, label(hi) + " <= " + label(lo));
    }
    return o;
}

double holder_constant(double s, double s1, double p, double q) {
    if (p >= q) return 1.0;
    // Hoelder with exponents q/p and q/(q-p) on the p-th powers
    if (std::isinf(q)) return std::pow(1.0 - std::exp2((s - s1) * p), -1.0 / p);
    double e = (s - s1) * q * p / (q - p);
    return std::pow(1.0 - std::exp2(e), -(1.0 / p - 1.0 / q));
}

// grid = (lhs (s, p), rhs (s1, q)) pairs at k = 0
Outcome eval_embed_s(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    for (size_t t = 0; t + 1 < p.grid.size(); t += 2) {
        const BesovIndex &l = p.grid[t], &r = p.grid[t + 1];
        int J = std::max(inhom_quasi_norm(s.a, l, s.x).j_hi, inhom_quasi_norm(s.a, r, s.x).j_hi);
        double lhs = inhom_quasi_norm(s.a, l, s.x, fixed(0, J)).aggregate;
        double rhs = inhom_quasi_norm(s.a, r, s.x, fixed(0, J)).aggregate;
        double c = holder_constant(l.s, r.s, l.q, r.q);
        o.bound(lhs, c * rhs, label(l) + " <= C " + label(r) + " C=" + fmt(c));
    }
    return o;
}

// breve^{-s,A}(beta, alpha) against B^{s,A^{-1}}(alpha, beta) at k = 0
Outcome eval_inverse_breve(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    Operator inv = Operator::inverse(s.a);
    for (const auto& i : p.grid) {
        BesovIndex b = idx(-i.s, i.q, i.beta, i.alpha);
        int J = std::max(inhom_quasi_norm(inv, i, s.x).j_hi, -breve_quasi_norm(s.a, b, s.x).j_lo);
        double rhs = inhom_quasi_norm(inv, i, s.x, fixed(0, J)).value;
        double lhs = breve_quasi_norm(s.a, b, s.x, fixed(-J, 0)).value;
        o.measure(std::abs(lhs - rhs) / rhs, lhs / rhs, label(i));
    }
    return o;
}

Outcome eval_inverse_homog(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    Operator inv = Operator::inverse(s.a);
    for (const auto& i : p.grid) {
        BesovIndex b = idx(-i.s, i.q, i.beta, i.alpha);
        NormResult r1 = homog_quasi_norm(inv, i, s.x), r2 = homog_quasi_norm(s.a, b, s.x);
        int J = std::max({std::abs(r1.j_lo), std::abs(r1.j_hi), std::abs(r2.j_lo), std::abs(r2.j_hi)});
        double rhs = homog_quasi_norm(inv, i, s.x, fixed(-J, J)).value;
        double lhs = homog_quasi_norm(s.a, b, s.x, fixed(-J, J)).value;
        o.measure(std::abs(lhs - rhs) / rhs, lhs / rhs, label(i));
    }
    return o;
}

// grid entries carry (s, q, alpha = domain exponent, beta)
Outcome eval_domain_sandwich(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const NonNegConstants& c = s.a.constants();
    const double nx = s.x.col(0).norm();
    for (const auto& i : p.grid) {
        const Complex al = i.alpha, be = i.beta;
        const int n = witness_n(al), m = witness_n(be - al);
        double C = composition_constant(al, n) * composition_constant(be - al, m) * std::pow(c.M, n) *
                   std::pow(c.L, m);
        double geo = std::isinf(i.q) ? 1.0 : std::pow(1.0 - std::exp2((i.s - al.real()) * i.q), -1.0 / i.q);
        double sigma = inhom_quasi_norm(s.a, idx(i.s, i.q, 0.0, be), s.x).aggregate;
        double graph = power_apply(s.a, al, s.x).col(0).norm();
        o.bound(sigma, C * geo * graph, "sum part <= C ||A^alpha x|| " + label(i));

        // int_0^1 ||l^alpha A^beta (l+A)^{-beta} x|| dl/l <= C_{beta,m} L^m / Re alpha ||x||
        const int mb = witness_n(be);
        double rhs = composition_constant(be, mb) * std::pow(c.L, mb) / al.real() * nx;
        double u0 = std::log(1e-16) / al.real();
        double lhs = integrate_panels_scalar(
            [&](double u) {
                double l = std::exp(u);
                return std::exp(al.real() * u) * std::exp(-al.imag() * 0.0) *
                       resolvent_power(s.a, be, l, be, s.x).col(0).norm();
            },
            u0, 0.0, 0.5);
        o.bound(lhs, rhs, "low-frequency integral " + label(i));
    }
    return o;
}

// params = approximation exponents; grid = Besov indices with q < inf
Outcome eval_denseness(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const int last = 40;
    for (double b : p.params)
        for (const auto& i : p.grid) {
            double base = inhom_value(s.a, i, s.x, Mode::main);
            std::vector<double> err;
            for (int mexp = 0; mexp <= last; ++mexp) {
                double nn = std::ldexp(1.0, mexp);
                Block d;
                if (const Spectral* sp = s.a.spectral())
                    d = sp->multiply(s.x, [&](double mu) { return Complex(std::expm1(-b * std::log1p(mu / nn))); });
                else
                    d = std::pow(nn, b) * resolvent_power(s.a, 0.0, nn, b, s.x) - s.x;
                err.push_back(inhom_value(s.a, i, d, Mode::main) / base);
            }
            std::string lab = "approximation beta=" + fmt(b) + " " + label(i);
            o.measure(err.back(), err.back(), lab + " at n=2^" + std::to_string(last));
            // eventually monotone once n passes the spectrum
            for (int k = last - 10; k < last; ++k)
                if (err[k + 1] > err[k] * (1.0 + 1e-9)) {
                    o.excess.push_back(1.0);
                    o.excess_labels.push_back(lab + " not decreasing at n=2^" + std::to_string(k + 1));
                }
        }
    return o;
}

// params = (re, im) pairs of alpha
Outcome eval_ergodicity(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const double nx = s.x.col(0).norm();
    Block px = kernel_part(s.a, s.x);
    Block rx = s.x - px;
    for (Complex al : complex_params(p.params)) {
        std::string lab = "alpha=" + fmt(al);
        ErgodicLimits lim = ergodic_limits(s.a, al, s.x);
        o.measure((lim.at_infinity - s.x).norm() / nx, 0.0, lab + " t->inf of t^a(t+A)^-a x = x");
        o.measure((lim.at_zero - px).norm() / nx, 0.0, lab + " t->0 of t^a(t+A)^-a x = Px");
        o.measure((lim.range_at_zero - rx).norm() / nx, 0.0, lab + " t->0 of A^a(t+A)^-a x = x - Px");
        // Ker A = Ker A^a
        o.measure(power_apply(s.a, al, px).norm() / nx, 0.0, lab + " A^a vanishes on Ker A");
        if (rx.norm() > 1e-12 * nx) {
            double img = power_apply(s.a, al, rx).norm();
            o.measure(img > 0.0 ? 0.0 : 1.0, 0.0, lab + " A^a injective off Ker A");
        }
    }
    return o;
}

// params = (re, im) pairs of alpha; bounds (M)*, (L)*, (C)* over a t grid
Outcome eval_uniform_bounds(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const NonNegConstants& c = s.a.constants();
    const int n = s.a.dim();
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
    auto [lo, hi] = s.a.spectral_scale();
    std::vector<double> ts = log_grid(1e-2 * lo, 1e2 * hi, 5);
    const std::pair<double, double> ratios[] = {{0.5, 0.25}, {0.5, 0.5}, {2.0, 1.0}, {2.0, 2.0}};
    for (Complex al : complex_params(p.params)) {
        const int nn = witness_n(al);
        const double cn = composition_constant(al, nn);
        for (double t : ts) {
            Eigen::MatrixXcd res = shifted_negative_power(s.a, t, al, I);
            std::string lab = "alpha=" + fmt(al) + " t=" + fmt(t);
            o.bound(std::pow(t, al.real()) * largest_singular_value(res), cn * std::pow(c.M, nn), lab + " (M)*");
            o.bound(largest_singular_value(power_apply(s.a, al, res)), cn * std::pow(c.L, nn), lab + " (L)*");
            for (auto [cc, ratio] : ratios) {
                Operator sh = Operator::shifted(s.a, ratio * t);
                double v = largest_singular_value(power_apply(sh, al, res));
                o.bound(v, cn * std::pow(c.L + std::max(cc, 1.0) * c.M, nn),
                        lab + " (C)* c=" + fmt(cc) + " s/t=" + fmt(ratio));
            }
        }
    }
    return o;
}

Outcome eval_moment(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const double M = s.a.constants().M;
    const double nx = s.x.col(0).norm();
    for (Complex al : complex_params(p.params)) {
        double lhs = power_apply(s.a, al, s.x).col(0).norm();
        for (int n : {witness_n(al), witness_n(al) + 1}) {
            Block an = s.x;
            for (int k = 0; k < n; ++k) an = s.a.apply(an);
            double r = al.real() / n;
            double rhs = moment_constant(al, n, M) * std::pow(an.col(0).norm(), r) * std::pow(nx, 1.0 - r);
            o.bound(lhs, rhs, "alpha=" + fmt(al) + " n=" + std::to_string(n));
        }
    }
    return o;
}

Outcome eval_spectral_map(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    const Spectral* sp = s.a.spectral();
    if (!sp) throw UnsupportedError("spectral_map needs a spectral handle");
    const int n = s.a.dim();
    for (Complex al : complex_params(p.params)) {
        Eigen::MatrixXcd f = spectral_frac_power(s.a, al, Eigen::MatrixXcd::Identity(n, n));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(f, false);
        std::vector<Complex> got(es.eigenvalues().data(), es.eigenvalues().data() + n);
        std::vector<Complex> want(n);
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            double mu = sp->eigenvalues[i];
            want[i] = mu > 0.0 ? std::exp(al * std::log(mu)) : Complex(0.0);
            scale = std::max(scale, std::abs(want[i]));
        }
        // greedy nearest matching
        std::vector<bool> used(n, false);
        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = -1;
            double d = kInf;
            for (int j = 0; j < n; ++j)
                if (!used[j] && std::abs(got[j] - want[i]) < d) {
                    d = std::abs(got[j] - want[i]);
                    best = j;
                }
            used[best] = true;
            err = std::max(err, d);
        }
        o.measure(err / scale, 1.0 + err / scale, "alpha=" + fmt(al) + " eigenvalues of A^alpha");
        if (al.imag() == 0.0 && al.real() > 0.0) {
            Operator fp = Operator::frac_power(s.a, al.real());
            const Spectral* fs = fp.spectral();
            double e2 = 0.0;
            for (int i = 0; i < n; ++i) e2 = std::max(e2, std::abs(fs->eigenvalues[i] - want[i].real()));
            o.measure(e2 / scale, 1.0 + e2 / scale, "alpha=" + fmt(al) + " power handle spectrum");
        }
    }
    return o;
}

// sample index selects alpha = params[index]
Outcome eval_cos(const Sample& s, const CheckPlan& p, Mode) {
    Outcome o;
    if (s.index >= static_cast<int>(p.params.size())) return o;
    const double al = p.params[s.index];
    const double K = cos_constant(al), c = std::cos(kPi * al);
    auto f = [c](double t) { return 1.0 + 2.0 * t * c + t * t; };
    const int nt = 1000, nu = 1000;
    std::vector<double> ts = log_grid(1e-3, 1e3, nt);
    double worst = 0.0;
    int violations = 0;
    double worst_t = 0.0;
    for (double t : ts) {
        double ft = K * f(t);
        for (int k = 0; k < nu; ++k) {
            double u = t * (0.5 + 0.5 * k / (nu - 1));
            double r = f(u) / ft;
            if (r > worst) {
                worst = r;
                worst_t = t;
            }
            if (r - 1.0 > p.tolerance) ++violations;
        }
    }
    o.measure(worst - 1.0, worst,
              "alpha=" + fmt(al) + " K=" + fmt(K) + " worst t=" + fmt(worst_t) + " violations=" +
                  std::to_string(violations));
    return o;
}

// ------------------------------------------------------------ registry

struct Entry {
    CheckInfo info;
    Evaluator eval;
    bool explicit_ceiling = false;  // ceiling fixed by a proven constant instead of calibration
};

const std::vector<Entry>& entries() {
    using K = CheckKind;
    static const std::vector<Entry> list = {
        {{"k_independence", "Lemma (independence of R-inhomogeneous in k)", "independent of the choice of $k$",
          K::ratio_bounded},
         pair_ratio(inhom_value)},
        {{"alpha_independence", "Lemma (independence of R-inhomogeneous in alpha)",
          "$R^{ s, A }_{ q, X } ( k, \\alpha, \\beta ) = R^{ s, A }_{ q, X } ( k, \\alpha', \\beta )$",
          K::ratio_bounded},
         pair_ratio(inhom_sigma)},
        {{"full_independence", "Lemma (independence of R-inhomogeneous in k, alpha, beta)",
          "crucial to the theory of inhomogeneous Besov", K::ratio_bounded},
         pair_ratio(inhom_value)},
        {{"homog_independence", "Lemma (independence of homogeneous quasi-norms in alpha and beta)",
          "in the sense of equivalent quasi-norms", K::ratio_bounded},
         pair_ratio(homog_value)},
        {{"continuity_equiv", "Lemma (continuous characterisation, inhomogeneous)",
          "characterized by use of the Lebesgue integrals", K::ratio_bounded},
         eval_continuity},
        {{"embed_q", "Proposition (embeddings), part (i)", "is continuously embedded into the quasi-normed",
          K::exact_inequality},
         eval_embed_q},
        {{"embed_s", "Proposition (embeddings), part (ii)", "is continuously embedded into the quasi-normed",
          K::exact_inequality},
         eval_embed_s},
        {{"translation", "Proposition (translation invariance, inhomogeneous)",
          "translation invariant with respect to the underlying", K::ratio_bounded},
         eval_translation},
        {{"lifting_pos", "Lemma (lifting property, positive order)",
          "continuous from $B^{ s, A }_{ q, X }$ to $B^{ s - \\RE \\gamma, A }_{ q, X }$", K::ratio_bounded, true},
         eval_lifting_pos},
        {{"lifting_equiv", "Theorem (lifting property, positive operators)",
          "is an equivalent quasi-norm on $B^{ s, A }_{ q, X }$", K::ratio_bounded},
         eval_lifting_equiv},
        {{"reiteration", "Theorem (smoothness reiteration)", "Let $A$ be sectorial of angle", K::ratio_bounded},
         eval_reiteration},
        {{"interpolation", "Theorem (real interpolation of domains)",
          "Then $( X, D ( A^\\alpha ) )_{ \\theta, q } = B^{ \\theta \\alpha, A }_{ q, X }$", K::ratio_bounded},
         eval_interpolation},
        {{"inverse_breve", "Proposition (inverse operators, inhomogeneous)",
          "$\\breve{B}^{ - s, A }_{ q, X } = B^{ s, A^{ - 1 } }_{ q, X }$", K::exact_identity},
         eval_inverse_breve},
        {{"inverse_homog", "Proposition (inverse operators, homogeneous)", "whenever $A$ is injective",
          K::exact_identity},
         eval_inverse_homog},
        {{"inhom_homog_cap", "Proposition (inhomogeneous versus homogeneous, s > 0)",
          "$B^{ s, A }_{ q, X } = \\dot{B}^{ s, A }_{ q, X } \\cap X$", K::ratio_bounded},
         eval_inhom_homog},
        {{"domain_sandwich", "Proposition (inclusions between domains of powers)",
          "$B^{ s', A }_{ q, X } \\subset D ( A^\\alpha ) \\subset B^{ s, A }_{ q, X }$", K::exact_inequality},
         eval_domain_sandwich},
        {{"denseness", "Proposition (denseness, inhomogeneous)", "dense in $B^{ s, A }_{ q, X }$", K::limit},
         eval_denseness},
        {{"ergodicity", "Lemma (ergodicity)", "$Ker ( A ) = Ker ( A^\\alpha )$", K::limit}, eval_ergodicity},
        {{"semigroup_norm", "Proposition (bounded analytic semigroups, inhomogeneous)", "Then, for $x \\in X$",
          K::ratio_bounded},
         eval_semigroup},
        {{"homog_semigroup_norm", "Proposition (bounded analytic semigroups, homogeneous)",
          "If $A$ is injective, then", K::ratio_bounded},
         eval_homog_semigroup},
        {{"subordinated_norm", "Corollary (subordinated semigroups)",
          "the bounded analytic semigroup generated by $- A^\\alpha$", K::ratio_bounded},
         eval_subordinated},
        {{"cos_estimate", "Lemma (estimate of cos)", "f ( u ) \\leq K_\\alpha f ( t )", K::grid_verification},
         eval_cos},
        {{"ellq_operator", "Lemma (l_q boundedness of T)", "Then $T$ is bounded on $\\ell_q$", K::ratio_bounded,
          true},
         eval_ellq, true},
        {{"uniform_bounds", "Lemma (uniform boundedness of compositions)",
          "uniformly non-negative and uniformly bounded", K::exact_inequality},
         eval_uniform_bounds},
        {{"moment", "Moment inequality for fractional powers", "the so-called moment inequality",
          K::exact_inequality},
         eval_moment},
        {{"spectral_map", "Spectral mapping for fractional powers", "The spectral mapping theorem for fractional",
          K::exact_identity},
         eval_spectral_map},
        {{"classical_torus", "Examples (Gaussian and Poisson semigroups)", "yields the classical Besov spaces",
          K::ratio_bounded},
         eval_classical},
    };
    return list;
}

const Entry& entry(const std::string& id) {
    for (const auto& e : entries())
        if (e.info.id == id) return e;
    throw Error("unknown check id '" + id + "'");
}

std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ------------------------------------------------------------ running

struct SampleResult {
    Outcome outcome;
    bool degenerate = false;
    bool error = false;
    std::string reason;
    std::uint64_t seed = 0;
};

std::vector<SampleResult> evaluate(const Evaluator& ev, const EnsembleSpec& ens, const CheckPlan& plan, Mode m,
                                   int jobs, bool alternate_sampler) {
    std::vector<SampleResult> out(static_cast<size_t>(ens.count));
    const int threads = jobs > 0 ? jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < ens.count; ++i) {
        SampleResult& r = out[static_cast<size_t>(i)];
        EnsembleSpec e = ens;
        if (alternate_sampler) e.sampler = (i % 2 == 0) ? SamplerKind::eigen_directions : SamplerKind::gaussian;
        try {
            Sample s = draw_sample(e, i);
            r.seed = s.seed;
            r.outcome = ev(s, plan, m);
            if (r.outcome.empty()) {
                r.degenerate = true;
                r.reason = "no admissible evaluation";
            }
        } catch (const AdmissibilityError& ex) {
            r.degenerate = true;
            r.reason = std::string("inadmissible: ") + ex.what();
        } catch (const std::exception& ex) {
            r.error = true;
            r.reason = ex.what();
        }
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

EnsembleSpec calibration_ensemble(const CheckPlan& plan, const HarnessConfig& cfg) {
    const FamilySpec& f = plan.ensemble.family;
    auto [lo, hi] = f.spectral_range();
    EnsembleSpec e;
    e.family = FamilySpec::diag(4, lo, hi, f.injective() ? 0 : 1);
    e.sampler = SamplerKind::eigen_directions;
    e.count = cfg.calibration_samples;
    e.seed = derive_seed(plan.ensemble.seed, 0xCA11B);
    return e;
}

}  // namespace

// ------------------------------------------------------------ constants

double composition_constant(Complex alpha, int n) {
    double a = alpha.real();
    if (!(a > 0.0 && a < n)) throw AdmissibilityError("composition constant needs 0 < Re alpha < n");
    return gamma(a) * gamma(static_cast<double>(n) - a) / std::abs(gamma(alpha) * gamma(Complex(n) - alpha));
}

double moment_constant(Complex alpha, int n, double M) {
    double a = alpha.real();
    if (!(a > 0.0 && a < n)) throw AdmissibilityError("moment constant needs 0 < Re alpha < n");
    double g = gamma(static_cast<double>(n) + 1.0) / std::abs(gamma(alpha) * gamma(Complex(n) - alpha));
    return g * std::pow(M, a) * std::pow(M + 1.0, n - a) / (a * (n - a));
}

double cos_constant(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw AdmissibilityError("cos estimate needs 0 < alpha < 1");
    if (alpha <= 0.5) return 1.0;
    double sn = std::sin(kPi * alpha);
    return 0.25 * (1.0 + 3.0 / (sn * sn));
}

double ellq_constant(double s, double alpha, double q) {
    if (!(s > 0.0 && s < 1.0 && alpha > 0.0 && alpha < 1.0 && q > 0.0))
        throw AdmissibilityError("l_q kernel bound needs 0 < s, alpha < 1 and q > 0");
    const double c = std::cos(kPi * alpha), K = cos_constant(alpha);
    auto J = [&](double p) {
        QuadratureScheme sc;
        sc.u_min = -40.0;
        sc.u_max = 40.0;
        sc.nodes = 4096;
        sc.tail_tolerance = 1e-14;
        return integrate_line_scalar(
            [&](double u) {
                double mu = std::exp(u);
                return std::pow(mu / (1.0 + 2.0 * mu * c + mu * mu) * std::exp(-s * u), p);
            },
            sc, {(1.0 - s) * p, (1.0 + s) * p});
    };
    auto c_low = [&](double p) { return std::pow(J(p) * K, 1.0 / p) * std::exp2(1.0 - s + 1.0 / p); };
    const double d_inf = K * std::exp2(alpha * (1.0 - s) + 1.0) * J(1.0) / alpha;
    if (std::isinf(q)) return d_inf;
    if (q <= 1.0) return c_low(q);
    // Riesz-Thorin between l_1 and l_inf
    return std::pow(c_low(1.0), 1.0 / q) * std::pow(d_inf, 1.0 - 1.0 / q);
}

double littlewood_paley_norm(const Operator& a, const Block& x, double sigma, double q) {
    const Spectral* sp = a.spectral();
    if (!sp) throw UnsupportedError("Littlewood-Paley norms need a spectral handle");
    if (!(q > 0.0)) throw AdmissibilityError("q must lie in (0, inf]");
    Block c = sp->basis.forward(x);
    double low = 0.0;
    std::map<int, double> shells;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        double w = std::norm(c(i, 0));
        double r = std::sqrt(sp->eigenvalues[i]);
        if (r < 1.0)
            low += w;
        else
            shells[static_cast<int>(std::floor(std::log2(r)))] += w;
    }
    double S = 0.0;
    for (auto [j, w] : shells) {
        double b = std::exp2(j * sigma) * std::sqrt(w);
        S = std::isinf(q) ? std::max(S, b) : S + std::pow(b, q);
    }
    return std::sqrt(low) + (std::isinf(q) ? S : std::pow(S, 1.0 / q));
}

// ------------------------------------------------------------ public interface

const std::vector<CheckInfo>& check_registry() {
    static const std::vector<CheckInfo> infos = [] {
        std::vector<CheckInfo> v;
        for (const auto& e : entries()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

const CheckInfo& check_info(const std::string& id) { return entry(id).info; }

CheckPlan default_plan(const std::string& id, const HarnessConfig& cfg) {
    entry(id);
    const double inf = kInf;
    CheckPlan p;
    EnsembleSpec& e = p.ensemble;
    e.seed = derive_seed(cfg.seed, fnv64(id));
    e.count = 24;
    e.family = FamilySpec::diag(8, 0.01, 100.0);

    auto pairs = [&](std::initializer_list<std::pair<BesovIndex, BesovIndex>> l) {
        for (const auto& [a, b] : l) {
            p.grid.push_back(a);
            p.grid.push_back(b);
        }
    };

    if (id == "k_independence") {
        for (double s : {-0.5, 0.5, 1.5})
            for (double q : {1.0, 2.0, inf})
                for (int k : {-2, -1, 1, 2, 3}) pairs({{idx(s, q, 1.0, 2.0, 0), idx(s, q, 1.0, 2.0, k)}});
        for (int k : {-2, 3}) pairs({{idx(0.5, 0.5, 1.0, 2.0, 0), idx(0.5, 0.5, 1.0, 2.0, k)}});
    } else if (id == "alpha_independence") {
        for (double s : {-0.25, 0.5})
            for (double q : {1.0, 2.0, inf})
                for (Complex a2 : {Complex(0.5), Complex(2.0), Complex(1.5, 1.0)})
                    pairs({{idx(s, q, 1.0, 2.0), idx(s, q, a2, 2.0)}});
    } else if (id == "full_independence") {
        e.family = FamilySpec::nonnormal(6, 1.0);
        e.count = 16;
        for (double s : {-0.5, 0.5})
            for (double q : {1.0, 2.0, inf})
                pairs({{idx(s, q, 1.0, 2.0, 0), idx(s, q, 2.0, 3.0, 2)},
                       {idx(s, q, 1.0, 2.0, 0), idx(s, q, 1.0, 1.0, -1)},
                       {idx(s, q, 1.0, 2.0, 0), idx(s, q, 2.0, 2.0, 1)}});
    } else if (id == "homog_independence") {
        // both tails of the homogeneous sum decay like 2^{-|j| min(s + Re alpha, Re beta - s)}
        for (double s : {-0.25, 0.25})
            for (double q : {1.0, 2.0, inf})
                pairs({{idx(s, q, 1.0, 2.0), idx(s, q, 0.75, 1.5)},
                       {idx(s, q, 1.0, 2.0), idx(s, q, 2.0, 1.0)},
                       {idx(s, q, 1.0, 2.0), idx(s, q, Complex(1.5, 0.5), 2.5)}});
    } else if (id == "continuity_equiv") {
        e.count = 16;
        for (double s : {-0.5, 0.5, 1.5})
            for (double q : {1.0, 2.0, inf})
                for (int k : {0, 2}) p.grid.push_back(idx(s, q, 1.0, 2.0, k));
    } else if (id == "embed_q") {
        e.family = FamilySpec::diag(8, 0.1, 10.0);
        e.count = 100;
        for (double s : {-0.5, 0.5})
            pairs({{idx(s, 0.5, 1.0, 2.0), idx(s, 1.0, 1.0, 2.0)},
                   {idx(s, 1.0, 1.0, 2.0), idx(s, 2.0, 1.0, 2.0)},
                   {idx(s, 2.0, 1.0, 2.0), idx(s, inf, 1.0, 2.0)}});
    } else if (id == "embed_s") {
        e.family = FamilySpec::diag(8, 0.1, 10.0);
        e.count = 50;
        for (auto [pp, qq] : std::vector<std::pair<double, double>>{
                 {1, 1}, {2, 2}, {inf, inf}, {2, 1}, {inf, 2}, {1, 2}, {0.5, inf}, {1, inf}, {0.5, 2}})
            pairs({{idx(0.25, pp, 1.0, 2.0), idx(0.75, qq, 1.0, 2.0)}});
    } else if (id == "translation") {
        e.family = FamilySpec::diag(8, 0.01, 100.0, 1);
        p.params = {0.1, 1.0, 10.0};
        for (double s : {-0.5, 0.5, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "lifting_pos") {
        e.family = FamilySpec::diag(8, 0.01, 100.0, 1);
        p.params = {0.25, 0.0, 0.5, 0.0, 0.5, 0.5};
        for (double s : {0.75, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "lifting_equiv") {
        p.params = {0.5, 0.0, 1.0, 0.0, 0.5, 0.5};
        for (double s : {0.5, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 3.0));
    } else if (id == "reiteration") {
        e.family = FamilySpec::diag(16, 0.01, 100.0);
        e.count = 200;
        p.params = {1.0 / 3.0, 0.5, 0.75, 1.5};
        for (double s : {0.3, 0.6})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "interpolation") {
        e.family = FamilySpec::shift(FamilySpec::diag(8, 0.01, 100.0, 1), 0.1);
        e.count = 16;
        for (double pw : {0.5, 1.0, 2.0})
            for (double th : {0.25, 0.5, 0.75}) {
                p.params.push_back(pw);
                p.params.push_back(th);
            }
        for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(0.0, q, 1.0, 2.0));
    } else if (id == "inverse_breve" || id == "inverse_homog") {
        for (double s : {-0.5, 0.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
        p.grid.push_back(idx(0.25, 2.0, Complex(1.5, 0.5), 1.0));
        EnsembleSpec sec = e;
        sec.family = FamilySpec::nonnormal(6, 1.0);
        sec.count = 4;
        sec.seed = derive_seed(e.seed, 2);
        p.secondary = sec;
        p.secondary_tolerance = 1e-9;
    } else if (id == "inhom_homog_cap") {
        e.family = FamilySpec::nonnormal(6, 1.0);
        e.count = 16;
        for (double s : {0.5, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "domain_sandwich") {
        e.family = FamilySpec::nonnormal(6, 1.0);
        e.count = 12;
        for (double q : {1.0, 2.0, inf}) {
            p.grid.push_back(idx(0.25, q, 0.5, 2.0));
            p.grid.push_back(idx(0.5, q, 1.0, 2.0));
        }
        EnsembleSpec sec = e;
        sec.family = FamilySpec::diag(8, 0.01, 100.0);
        sec.count = 24;
        sec.seed = derive_seed(e.seed, 2);
        p.secondary = sec;
    } else if (id == "denseness") {
        e.count = 16;
        p.params = {1.0, 2.0};
        p.tolerance = 1e-6;
        for (double s : {-0.5, 0.5})
            for (double q : {1.0, 2.0}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "ergodicity") {
        e.family = FamilySpec::diag(8, 0.01, 100.0, 1);
        e.count = 16;
        p.params = {0.5, 0.0, 1.0, 0.0, 0.5, 0.5};
        p.tolerance = 1e-6;
        EnsembleSpec sec = e;
        sec.family = FamilySpec::spd(6, 100.0);
        sec.family.zeros = 1;
        sec.count = 8;
        sec.seed = derive_seed(e.seed, 2);
        p.secondary = sec;
        p.secondary_tolerance = 1e-6;
    } else if (id == "semigroup_norm") {
        p.params = {2.0, 3.0};
        for (double s : {0.5, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "homog_semigroup_norm") {
        p.params = {2.0, 3.0};
        for (double s : {0.5, 1.5})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "subordinated_norm") {
        e.count = 16;
        p.params = {0.5, 3.0, 0.75, 3.0};
        p.tolerance = 1e-6;
        for (double s : {0.5, 1.0})
            for (double q : {1.0, 2.0, inf}) p.grid.push_back(idx(s, q, 1.0, 2.0));
    } else if (id == "cos_estimate") {
        p.params = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
        e.count = static_cast<int>(p.params.size());
        e.family = FamilySpec::diag(1, 1.0, 1.0);
    } else if (id == "ellq_operator") {
        e.family = FamilySpec::diag(1, 1.0, 1.0);
        for (double s : {0.25, 0.5, 0.75})
            for (double a : {0.25, 0.5, 0.75}) {
                p.params.push_back(s);
                p.params.push_back(a);
            }
        for (double q : {0.5, 1.0, 2.0, inf}) p.grid.push_back(idx(0.0, q, 0.0, 1.0));
    } else if (id == "uniform_bounds") {
        e.family = FamilySpec::nonnormal(5, 1.0);
        e.count = 3;
        p.params = {0.3, 0.0, 0.7, 0.0, 1.5, 0.0};
        EnsembleSpec sec = e;
        sec.family = FamilySpec::spd(8, 1000.0);
        sec.count = 8;
        sec.seed = derive_seed(e.seed, 2);
        p.secondary = sec;
    } else if (id == "moment") {
        e.family = FamilySpec::nonnormal(6, 1.0);
        e.count = 16;
        p.params = {0.25, 0.0, 0.5, 0.0, 1.5, 0.0, 2.2, 0.0};
        EnsembleSpec sec = e;
        sec.family = FamilySpec::diag(8, 0.01, 100.0);
        sec.count = 24;
        sec.seed = derive_seed(e.seed, 2);
        p.secondary = sec;
    } else if (id == "spectral_map") {
        e.family = FamilySpec::spd(8, 100.0);
        p.params = {0.5, 0.0, 1.5, 0.0, 0.3, 0.7, 2.2, 0.0};
        p.tolerance = 1e-12;
    } else if (id == "classical_torus") {
        e.family = FamilySpec::torus(64);
        e.sampler = SamplerKind::band_limited;
        e.band_fraction = 0.25;
        e.count = 100;
        p.params = {0.5, 1.0};
        for (double s : {0.25, 0.5, 0.75}) p.grid.push_back(idx(s, 2.0, 1.0, 2.0));
    }

    auto it = cfg.overrides.find(id);
    if (it != cfg.overrides.end()) {
        if (it->second.samples && id != "cos_estimate") e.count = *it->second.samples;
        if (it->second.dim && e.family.kind != FamilyKind::torus_laplacian && id != "cos_estimate" &&
            id != "ellq_operator") {
            e.family.n = *it->second.dim;
            if (e.family.base) {
                auto base = std::make_shared<FamilySpec>(*e.family.base);
                base->n = *it->second.dim;
                e.family.base = base;
            }
        }
    }
    return p;
}

std::string plan_hash(const std::string& id, const CheckPlan& plan, const HarnessConfig& cfg) {
    std::ostringstream os;
    os << id << "|" << plan.ensemble.describe();
    if (plan.secondary) os << "|secondary:" << plan.secondary->describe();
    for (const auto& i : plan.grid) os << "|" << label(i);
    os << "|params:";
    for (double v : plan.params) os << fmt(v) << ",";
    os << "|tol:" << fmt(plan.tolerance) << "," << fmt(plan.secondary_tolerance);
    os << "|calibration:" << cfg.calibration_samples << "," << fmt(cfg.safety_factor) << "," << kBruteLevels;
    return fnv1a_hex(os.str());
}

EquivalenceReport run_check(const std::string& id, const CheckPlan& plan, const HarnessConfig& cfg) {
    const Entry& en = entry(id);
    EquivalenceReport r;
    r.check_id = id;
    r.paper_ref = en.info.paper_ref;
    r.quote = en.info.quote;
    r.kind = en.info.kind;
    r.seed = plan.ensemble.seed;
    r.ensemble = plan.ensemble.describe();
    if (plan.secondary) r.ensemble += " + " + plan.secondary->describe();
    r.config_hash = plan_hash(id, plan, cfg);
    r.tolerance = plan.tolerance;
    r.ratio_stats.one_sided = en.info.one_sided;

    std::vector<double> ratios;
    std::vector<std::pair<double, FailureRecord>> extremes;  // (ratio, record) for band failures
    bool errors = false, nonfinite = false;

    auto absorb = [&](const std::vector<SampleResult>& res, double tol) {
        for (const auto& s : res) {
            if (s.error) {
                errors = true;
                if (r.failures.size() < kMaxFailureRecords) r.failures.push_back({s.seed, "", s.reason});
                continue;
            }
            if (s.degenerate) {
                ++r.degenerate;
                if (r.failures.size() < kMaxFailureRecords) r.failures.push_back({s.seed, "", s.reason});
                continue;
            }
            ++r.samples;
            const Outcome& o = s.outcome;
            r.evaluations += static_cast<int>(o.ratios.size());
            for (size_t i = 0; i < o.ratios.size(); ++i) {
                double v = o.ratios[i];
                if (!std::isfinite(v) || (r.kind == CheckKind::ratio_bounded && !(v > 0.0))) {
                    nonfinite = true;
                    r.failures.push_back({s.seed, o.ratio_labels[i], "ratio not finite and positive"});
                    continue;
                }
                ratios.push_back(v);
                extremes.push_back({v, {s.seed, o.ratio_labels[i], ""}});
            }
            if (r.kind != CheckKind::ratio_bounded) r.evaluations += static_cast<int>(o.excess.size() - o.ratios.size());
            for (size_t i = 0; i < o.excess.size(); ++i) {
                double e = o.excess[i];
                r.max_violation = std::max(r.max_violation, e);
                if (!(e <= tol)) {
                    ++r.violations;
                    if (r.failures.size() < kMaxFailureRecords)
                        r.failures.push_back({s.seed, o.excess_labels[i], "excess " + fmt(e) + " > " + fmt(tol)});
                }
            }
        }
    };

    absorb(evaluate(en.eval, plan.ensemble, plan, Mode::main, cfg.jobs, false), plan.tolerance);
    if (plan.secondary)
        absorb(evaluate(en.eval, *plan.secondary, plan, Mode::main, cfg.jobs, false), plan.secondary_tolerance);

    RatioStats& st = r.ratio_stats;
    if (!ratios.empty()) {
        st.min = *std::min_element(ratios.begin(), ratios.end());
        st.max = *std::max_element(ratios.begin(), ratios.end());
        st.median = median(ratios);
        st.band = en.info.one_sided ? st.max : (st.min > 0.0 ? st.max / st.min : std::nan(""));
    } else {
        st.min = st.max = st.median = st.band = std::nan("");
    }

    bool within = true;
    if (r.kind == CheckKind::ratio_bounded) {
        Calibration& cal = st.calibration;
        cal.safety_factor = cfg.safety_factor;
        if (en.explicit_ceiling) {
            cal.method = "explicit constant from the proof; ratios are normalised by it, ceiling 1";
            cal.safety_factor = 1.0;
            cal.band = 1.0;
            st.ceiling = 1.0;
        } else {
            EnsembleSpec ce = calibration_ensemble(plan, cfg);
            auto cres = evaluate(en.eval, ce, plan, Mode::calibration, cfg.jobs, true);
            std::vector<double> cr;
            for (const auto& s : cres)
                if (!s.error && !s.degenerate)
                    for (double v : s.outcome.ratios)
                        if (std::isfinite(v) && v > 0.0) cr.push_back(v);
            cal.ensemble = ce.family.describe() + "x" + std::to_string(ce.count) +
                           " sampler=eigen_directions/gaussian alternating seed=" + std::to_string(ce.seed);
            cal.samples = ce.count;
            cal.method = "brute-force level sums over [-" + std::to_string(kBruteLevels) + ", " +
                         std::to_string(kBruteLevels) + "]; integrals by quadrature";
            if (cr.empty()) {
                cal.band = std::nan("");
                st.ceiling = std::nan("");
            } else {
                double lo = *std::min_element(cr.begin(), cr.end()), hi = *std::max_element(cr.begin(), cr.end());
                cal.band = en.info.one_sided ? hi : hi / lo;
                st.ceiling = cal.band * cfg.safety_factor;
            }
        }
        within = std::isfinite(st.band) && std::isfinite(st.ceiling) && st.band <= st.ceiling;
        if (!within && !extremes.empty()) {
            auto mn = std::min_element(extremes.begin(), extremes.end(),
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
            auto mx = std::max_element(extremes.begin(), extremes.end(),
                                       [](const auto& a, const auto& b) { return a.first < b.first; });
            FailureRecord a = mx->second;
            a.reason = "largest ratio " + fmt(mx->first) + ", band " + fmt(st.band) + " > ceiling " + fmt(st.ceiling);
            r.failures.push_back(a);
            if (!en.info.one_sided) {
                FailureRecord b = mn->second;
                b.reason = "smallest ratio " + fmt(mn->first);
                r.failures.push_back(b);
            }
        }
    } else {
        st.ceiling = std::nan("");
        st.calibration.safety_factor = std::nan("");
        st.calibration.band = std::nan("");
        st.calibration.method = "not calibrated: violations counted against the tolerance";
    }

    if (r.samples == 0)
        r.verdict = errors ? Verdict::fail : Verdict::degenerate;
    else if (errors || nonfinite || r.violations > 0 || !within)
        r.verdict = Verdict::fail;
    else
        r.verdict = Verdict::pass;
    return r;
}

EquivalenceReport run_check(const std::string& id, const HarnessConfig& cfg) {
    return run_check(id, default_plan(id, cfg), cfg);
}

std::vector<EquivalenceReport> run_suite(const std::vector<std::string>& ids, const HarnessConfig& cfg) {
    for (const auto& id : ids) entry(id);
    std::vector<EquivalenceReport> out;
    out.reserve(ids.size());
    for (const auto& id : ids) out.push_back(run_check(id, cfg));
    return out;
}

std::vector<std::string> parse_suite(const std::string& list) {
    std::vector<std::string> ids;
    if (list == "all") {
        for (const auto& e : entries()) ids.push_back(e.info.id);
        return ids;
    }
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        entry(item);
        ids.push_back(item);
    }
    return ids;
}

}  // namespace abesov
