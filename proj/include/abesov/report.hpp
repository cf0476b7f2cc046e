#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace abesov {

enum class CheckKind { ratio_bounded, exact_inequality, exact_identity, limit, grid_verification };
enum class Verdict { pass, fail, degenerate };

struct Calibration {
    std::string ensemble;  // empty when the ceiling is not calibrated
    int samples = 0;
    double band = 0.0;     // max/min (two-sided) or max (one-sided) on the calibration family
    double safety_factor = 10.0;
    std::string method;    // how the calibration norms were summed
};

struct RatioStats {
    double min = 0.0;
    double max = 0.0;
    double median = 0.0;
    double band = 0.0;     // max/min for two-sided checks, max for one-sided ones
    double ceiling = 0.0;
    bool one_sided = false;
    Calibration calibration;
};

struct FailureRecord {
    std::uint64_t seed = 0;
    std::string parameters;
    std::string reason;
};

struct EquivalenceReport {
    std::string check_id;
    std::string paper_ref;
    std::string quote;
    CheckKind kind = CheckKind::ratio_bounded;
    int samples = 0;      // evaluated samples (degenerate ones excluded)
    int degenerate = 0;
    int evaluations = 0;  // individual ratios or inequality instances
    RatioStats ratio_stats;
    int violations = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::degenerate;
    std::vector<FailureRecord> failures;
    std::string ensemble;
    std::string config_hash;
    std::uint64_t seed = 0;
};

// NaN compares equal to NaN here so that round trips of degenerate stats hold.
bool operator==(const EquivalenceReport& a, const EquivalenceReport& b);

std::string to_string(CheckKind k);
std::string to_string(Verdict v);
CheckKind check_kind_from_string(const std::string& s);
Verdict verdict_from_string(const std::string& s);

// JSON text of a list of reports (stable key order, shortest round-trip doubles,
// non-finite numbers as the strings "inf", "-inf", "nan").
std::string reports_to_json(const std::vector<EquivalenceReport>& reports, int indent = 2);
std::vector<EquivalenceReport> reports_from_json(const std::string& text);

// One CSV row per report.
std::string reports_to_csv(const std::vector<EquivalenceReport>& reports);

// Shortest round-trip decimal representation.
std::string format_double(double v);

// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

}  // namespace abesov
