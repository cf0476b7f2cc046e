#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "abesov/besov.hpp"
#include "abesov/ensemble.hpp"
#include "abesov/report.hpp"

namespace abesov {

struct CheckOverride {
    std::optional<int> samples;
    std::optional<int> dim;
};

struct HarnessConfig {
    std::uint64_t seed = 20240917;
    int calibration_samples = 32;
    double safety_factor = 10.0;
    int jobs = 0;  // 0: OpenMP default
    std::map<std::string, CheckOverride> overrides;
};

// What a check evaluates. The meaning of `grid` and `params` is per check
// (see default_plan); ratio checks comparing two indices read `grid` as
// consecutive (reference, variant) pairs.
struct CheckPlan {
    EnsembleSpec ensemble;
    std::optional<EnsembleSpec> secondary;  // a second family evaluated with the same predicate
    std::vector<BesovIndex> grid;
    std::vector<double> params;
    double tolerance = 1e-9;
    double secondary_tolerance = 1e-9;
};

struct CheckInfo {
    std::string id;
    std::string paper_ref;
    std::string quote;
    CheckKind kind;
    bool one_sided = false;  // ratio checks bounded from above only
};

const std::vector<CheckInfo>& check_registry();
const CheckInfo& check_info(const std::string& id);  // throws Error for unknown ids

CheckPlan default_plan(const std::string& id, const HarnessConfig& cfg);

EquivalenceReport run_check(const std::string& id, const CheckPlan& plan, const HarnessConfig& cfg);
EquivalenceReport run_check(const std::string& id, const HarnessConfig& cfg);

std::vector<EquivalenceReport> run_suite(const std::vector<std::string>& ids, const HarnessConfig& cfg);

// "all" or a comma-separated list; unknown ids throw Error.
std::vector<std::string> parse_suite(const std::string& list);

// FNV-1a of the canonical description of (plan, calibration settings).
std::string plan_hash(const std::string& id, const CheckPlan& plan, const HarnessConfig& cfg);

// ---- explicit constants used by the exact checks

// C_{alpha,n} = Gamma(Re a) Gamma(n - Re a) / |Gamma(a) Gamma(n - a)|, 0 < Re a < n.
double composition_constant(Complex alpha, int n);

// Moment-inequality constant for ||A^a x|| <= C ||A^n x||^{Re a/n} ||x||^{1 - Re a/n}.
double moment_constant(Complex alpha, int n, double M);

// f(u) <= K f(t) for t/2 <= u <= t, f(t) = 1 + 2 t cos(pi a) + t^2.
double cos_constant(double alpha);

// Bound for the l_q norm of the dyadic kernel operator
// b_j = sum_i m(2^{-j} 2^{i a}) a_i, m(mu) = mu^{1-s} / (1 + 2 mu cos(pi a) + mu^2):
// explicit for q <= 1 and q = inf, Riesz-Thorin between 1 and inf otherwise.
double ellq_constant(double s, double alpha, double q);

// Littlewood-Paley norm through the spectral symbol: ||P_low x|| + l_q of
// 2^{j sigma} ||P_j x|| over the dyadic shells 2^j <= sqrt(mu) < 2^{j+1}.
double littlewood_paley_norm(const Operator& a, const Block& x, double sigma, double q);

}  // namespace abesov
