// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and time limits are fixed here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "abesov/fractional.hpp"
#include "abesov/gamma.hpp"
#include "abesov/harness.hpp"
#include "abesov/quadrature.hpp"

using namespace abesov;

namespace {

constexpr double kEulerTol = 1e-8;
constexpr double kKernelTol = 1e-6;
constexpr double kAnchorSeconds = 5.0;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleSeconds = 60.0;
constexpr double kReproTol = 1e-6;
constexpr double kExactSlack = 1e-9;
constexpr double kCosSeconds = 10.0;
constexpr double kSuiteSeconds = 300.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s  %s  [%s]\n", n, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

Block random_vector(int n, PortableRng& rng) {
    Block x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = rng.cnormal();
    return x;
}

double rel(const Block& a, const Block& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

const EquivalenceReport* find(const std::vector<EquivalenceReport>& rs, const std::string& id) {
    for (const auto& r : rs)
        if (r.check_id == id) return &r;
    return nullptr;
}

bool passed(const std::vector<EquivalenceReport>& rs, const std::string& id, std::string& detail) {
    const EquivalenceReport* r = find(rs, id);
    if (!r) {
        detail += id + " missing; ";
        return false;
    }
    bool ok = r->verdict == Verdict::pass && r->violations == 0;
    detail += id + "=" + to_string(r->verdict);
    if (r->kind == CheckKind::ratio_bounded)
        detail += fmt("(band %.3g <= %.3g)", r->ratio_stats.band, r->ratio_stats.ceiling);
    else
        detail += fmt("(%.0f viol)", r->violations);
    detail += " ";
    return ok;
}

void criterion_anchors() {
    auto t0 = Clock::now();
    double worst_euler = 0.0, worst_kernel = 0.0;
    for (double a : {0.25, 0.5, 0.75, 1.5})
        for (int n : {2, 3}) {
            QuadratureScheme sc;
            sc.u_min = -30.0;
            sc.u_max = 30.0;
            double I = integrate_line_scalar(
                [&](double u) { return std::exp(a * u) * std::pow(1.0 + std::exp(u), -n); }, sc, {a, n - a});
            double v = abesov::gamma(double(n)) / (abesov::gamma(a) * abesov::gamma(n - a)) * I;
            worst_euler = std::max(worst_euler, std::abs(v - 1.0));
        }
    for (double a : {0.25, 0.5, 0.75})
        for (double lam : {0.1, 1.0, 10.0}) {
            const double c = std::cos(kPi * a);
            QuadratureScheme sc;
            sc.u_min = -40.0;
            sc.u_max = 40.0;
            double I = integrate_line_scalar(
                [&](double u) {
                    double ma = std::exp(a * u);
                    return lam * ma / (lam * lam + 2.0 * lam * ma * c + ma * ma);
                },
                sc, {a, a});
            worst_kernel = std::max(worst_kernel, std::abs(I / (abesov::gamma(a) * abesov::gamma(1.0 - a)) - 1.0));
        }
    double dt = seconds_since(t0);
    report(1, worst_euler <= kEulerTol && worst_kernel <= kKernelTol && dt < kAnchorSeconds,
           "Gamma-integral anchors",
           fmt("euler err %.2e, kernel err %.2e, %.2f s", worst_euler, worst_kernel, dt));
}

void criterion_oracle() {
    auto t0 = Clock::now();
    PortableRng rng(20240901);
    double worst[3] = {0, 0, 0};
    int cases = 0;
    for (int i = 0; i < 100; ++i) {
        int n = 4 + rng.below(29);  // 4..32
        double cond = std::pow(10.0, 1.0 + 2.0 * rng.uniform());
        Operator a = draw_operator(FamilySpec::spd(n, cond), derive_seed(77, i));
        Block x = random_vector(n, rng);
        Complex z(0.05 + 2.4 * rng.uniform(), rng.uniform() < 0.5 ? 0.0 : rng.uniform() - 0.5);
        if (z.imag() != 0.0 && z.real() == std::round(z.real())) continue;
        Block want = spectral_frac_power(a, z, x);
        worst[0] = std::max(worst[0], rel(frac_power(a, z, x).value, want));
        double b = std::ceil(z.real()) + 1.0;
        worst[1] = std::max(worst[1], rel(frac_power_unified(a, z, 1.0, b, x).value, want));
        worst[2] = std::max(worst[2], rel(frac_power_via_semigroup(a, z, b, x).value, want));
        ++cases;
    }
    double dt = seconds_since(t0);
    bool ok = cases == 100 && *std::max_element(worst, worst + 3) <= kOracleTol && dt < kOracleSeconds;
    report(2, ok, "Balakrishnan, unified and semigroup routes vs spectral powers",
           fmt("max rel err %.2e / %.2e / %.2e", worst[0], worst[1], worst[2]) + fmt(", %.0f operators, %.1f s", cases, dt));
}

void criterion_reproducing() {
    PortableRng rng(20240902);
    double worst_inhom = 0.0, worst_homog = 0.0;
    for (int i = 0; i < 50; ++i) {
        FamilySpec f = i % 2 == 0 ? FamilySpec::diag(8, 0.01, 100.0) : FamilySpec::spd(8, 100.0);
        Operator a = draw_operator(f, derive_seed(78, i));
        Block x = random_vector(8, rng);
        Complex alpha(0.25 + 1.5 * rng.uniform(), rng.uniform() < 0.5 ? 0.0 : 0.5);
        int m = 1 + rng.below(3);
        worst_inhom = std::max(worst_inhom, reproducing_residual(a, alpha, m, 1.0, x));
        worst_homog = std::max(worst_homog, reproducing_residual(a, alpha, m, 0.0, x));
    }
    report(3, worst_inhom <= kReproTol && worst_homog <= kReproTol, "reproducing formulas on 50 invertible samples",
           fmt("inhomogeneous %.2e, homogeneous %.2e", worst_inhom, worst_homog));
}

void criterion_exact(const std::vector<EquivalenceReport>& suite) {
    std::string detail;
    bool ok = true;
    for (const char* id : {"embed_q", "embed_s", "uniform_bounds", "moment"}) ok = passed(suite, id, detail) && ok;

    // moment inequality on 500 (A, x) pairs: 50 nonnormal and 450 diagonal
    HarnessConfig cfg;
    CheckPlan p = default_plan("moment", cfg);
    p.ensemble.count = 50;
    p.secondary->count = 450;
    EquivalenceReport m = run_check("moment", p, cfg);
    ok = ok && m.verdict == Verdict::pass && m.violations == 0 && m.samples == 500;
    detail += fmt("moment500=%.0f samples/%.0f viol ", m.samples, m.violations);

    // semigroup property and resolvent identity
    PortableRng rng(20240903);
    double sg = 0.0, res = 0.0;
    for (int i = 0; i < 60; ++i) {
        FamilySpec f = i % 3 == 0 ? FamilySpec::diag(8, 0.01, 100.0)
                       : i % 3 == 1 ? FamilySpec::spd(8, 100.0)
                                    : FamilySpec::nonnormal(6, 1.0);
        Operator a = draw_operator(f, derive_seed(79, i));
        Block x = random_vector(a.dim(), rng);
        if (a.spectral()) {
            double s = rng.uniform(), t = rng.uniform();
            Block lhs = semigroup_apply(a, s, semigroup_apply(a, t, x));
            sg = std::max(sg, (lhs - semigroup_apply(a, s + t, x)).norm() / x.norm());
        }
        double l = std::pow(10.0, 4.0 * rng.uniform() - 2.0), mu = std::pow(10.0, 4.0 * rng.uniform() - 2.0);
        Block rl = a.resolve(l, x), rm = a.resolve(mu, x);
        Block rhs = (mu - l) * a.resolve(l, rm);
        res = std::max(res, ((rl - rm) - rhs).norm() / (rl.norm() + rm.norm()));
    }
    ok = ok && sg <= kExactSlack && res <= kExactSlack;
    detail += fmt("semigroup %.1e, resolvent %.1e", sg, res);
    report(4, ok, "exact inequality suites", detail);
}

void criterion_cos() {
    auto t0 = Clock::now();
    EquivalenceReport r = run_check("cos_estimate", HarnessConfig{});
    double dt = seconds_since(t0);
    report(5, r.verdict == Verdict::pass && r.violations == 0 && dt < kCosSeconds, "cos estimate grid",
           fmt("%.0f alphas, %.0f violations, %.2f s", r.evaluations, r.violations, dt));
}

void criterion_identities(const std::vector<EquivalenceReport>& suite) {
    std::string detail;
    bool ok = true;
    for (const char* id : {"inverse_breve", "inverse_homog", "spectral_map"}) ok = passed(suite, id, detail) && ok;
    const EquivalenceReport* s = find(suite, "spectral_map");
    ok = ok && s && s->tolerance <= 1e-12;
    const EquivalenceReport* b = find(suite, "inverse_breve");
    ok = ok && b && b->tolerance <= 1e-9;
    report(6, ok, "inverse and spectral-mapping identities", detail);
}

void criterion_ratios(const std::vector<EquivalenceReport>& suite, double dt) {
    std::string detail;
    bool ok = dt < kSuiteSeconds;
    int ratio_checks = 0;
    for (const auto& r : suite) {
        if (r.kind != CheckKind::ratio_bounded) continue;
        ++ratio_checks;
        const RatioStats& st = r.ratio_stats;
        bool good = r.verdict == Verdict::pass && std::isfinite(st.band) && st.band <= st.ceiling &&
                    std::isfinite(st.min) && std::isfinite(st.max);
        if (st.calibration.samples > 0) good = good && !st.calibration.ensemble.empty();
        if (!good) detail += r.check_id + " failed; ";
        ok = ok && good;
    }
    detail += fmt("%.0f ratio checks, full suite %.1f s", ratio_checks, dt);
    report(7, ok && ratio_checks > 0, "equivalence-ratio suites within calibrated ceilings", detail);
}

void criterion_torus(const std::vector<EquivalenceReport>& suite) {
    std::string detail;
    bool ok = passed(suite, "classical_torus", detail);
    const EquivalenceReport* r = find(suite, "classical_torus");
    ok = ok && r && r->samples == 100;
    report(8, ok, "classical Besov recovery on the 64-point torus", detail);
}

}  // namespace

int main() {
    criterion_anchors();
    criterion_oracle();
    criterion_reproducing();

    HarnessConfig cfg;
    auto t0 = Clock::now();
    std::vector<EquivalenceReport> first = run_suite(parse_suite("all"), cfg);
    double dt = seconds_since(t0);
    std::string first_json = reports_to_json(first);

    criterion_exact(first);
    criterion_cos();
    criterion_identities(first);
    criterion_ratios(first, dt);
    criterion_torus(first);

    std::string second_json = reports_to_json(run_suite(parse_suite("all"), cfg));
    report(9, first_json == second_json, "determinism of the full suite",
           fmt("%.0f bytes, identical=%.0f", double(first_json.size()), first_json == second_json ? 1.0 : 0.0));

    std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria failed");
    return failures == 0 ? 0 : 1;
}
