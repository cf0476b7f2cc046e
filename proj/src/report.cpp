#include "abesov/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace abesov {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double get_num(const ojson& j) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
        if (s == "nan") return std::nan("");
        throw std::runtime_error("bad numeric string '" + s + "'");
    }
    return j.get<double>();
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

ojson to_json(const EquivalenceReport& r) {
    ojson cal = {{"ensemble", r.ratio_stats.calibration.ensemble},
                 {"samples", r.ratio_stats.calibration.samples},
                 {"band", num(r.ratio_stats.calibration.band)},
                 {"safety_factor", num(r.ratio_stats.calibration.safety_factor)},
                 {"method", r.ratio_stats.calibration.method}};
    ojson stats = {{"min", num(r.ratio_stats.min)},
                   {"max", num(r.ratio_stats.max)},
                   {"median", num(r.ratio_stats.median)},
                   {"band", num(r.ratio_stats.band)},
                   {"ceiling", num(r.ratio_stats.ceiling)},
                   {"one_sided", r.ratio_stats.one_sided},
                   {"calibration", cal}};
    ojson failures = ojson::array();
    for (const auto& f : r.failures)
        failures.push_back({{"seed", f.seed}, {"parameters", f.parameters}, {"reason", f.reason}});
    return {{"check_id", r.check_id},
            {"paper_ref", r.paper_ref},
            {"quote", r.quote},
            {"kind", to_string(r.kind)},
            {"samples", r.samples},
            {"degenerate", r.degenerate},
            {"evaluations", r.evaluations},
            {"ratio_stats", stats},
            {"violations", r.violations},
            {"max_violation", num(r.max_violation)},
            {"tolerance", num(r.tolerance)},
            {"verdict", to_string(r.verdict)},
            {"failures", failures},
            {"ensemble", r.ensemble},
            {"config_hash", r.config_hash},
            {"seed", r.seed}};
}

EquivalenceReport from_json(const ojson& j) {
    EquivalenceReport r;
    r.check_id = j.at("check_id").get<std::string>();
    r.paper_ref = j.at("paper_ref").get<std::string>();
    r.quote = j.at("quote").get<std::string>();
    r.kind = check_kind_from_string(j.at("kind").get<std::string>());
    r.samples = j.at("samples").get<int>();
    r.degenerate = j.at("degenerate").get<int>();
    r.evaluations = j.at("evaluations").get<int>();
    const ojson& st = j.at("ratio_stats");
    r.ratio_stats.min = get_num(st.at("min"));
    r.ratio_stats.max = get_num(st.at("max"));
    r.ratio_stats.median = get_num(st.at("median"));
    r.ratio_stats.band = get_num(st.at("band"));
    r.ratio_stats.ceiling = get_num(st.at("ceiling"));
    r.ratio_stats.one_sided = st.at("one_sided").get<bool>();
    const ojson& c = st.at("calibration");
    r.ratio_stats.calibration.ensemble = c.at("ensemble").get<std::string>();
    r.ratio_stats.calibration.samples = c.at("samples").get<int>();
    r.ratio_stats.calibration.band = get_num(c.at("band"));
    r.ratio_stats.calibration.safety_factor = get_num(c.at("safety_factor"));
    r.ratio_stats.calibration.method = c.at("method").get<std::string>();
    r.violations = j.at("violations").get<int>();
    r.max_violation = get_num(j.at("max_violation"));
    r.tolerance = get_num(j.at("tolerance"));
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    for (const auto& f : j.at("failures"))
        r.failures.push_back({f.at("seed").get<std::uint64_t>(), f.at("parameters").get<std::string>(),
                              f.at("reason").get<std::string>()});
    r.ensemble = j.at("ensemble").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

bool operator==(const EquivalenceReport& a, const EquivalenceReport& b) {
    const RatioStats &x = a.ratio_stats, &y = b.ratio_stats;
    bool stats = same(x.min, y.min) && same(x.max, y.max) && same(x.median, y.median) && same(x.band, y.band) &&
                 same(x.ceiling, y.ceiling) && x.one_sided == y.one_sided &&
                 x.calibration.ensemble == y.calibration.ensemble &&
                 x.calibration.samples == y.calibration.samples && same(x.calibration.band, y.calibration.band) &&
                 same(x.calibration.safety_factor, y.calibration.safety_factor) &&
                 x.calibration.method == y.calibration.method;
    if (!stats || a.failures.size() != b.failures.size()) return false;
    for (size_t i = 0; i < a.failures.size(); ++i) {
        const auto &f = a.failures[i], &g = b.failures[i];
        if (f.seed != g.seed || f.parameters != g.parameters || f.reason != g.reason) return false;
    }
    return a.check_id == b.check_id && a.paper_ref == b.paper_ref && a.quote == b.quote && a.kind == b.kind &&
           a.samples == b.samples && a.degenerate == b.degenerate && a.evaluations == b.evaluations &&
           a.violations == b.violations && same(a.max_violation, b.max_violation) &&
           same(a.tolerance, b.tolerance) && a.verdict == b.verdict && a.ensemble == b.ensemble &&
           a.config_hash == b.config_hash && a.seed == b.seed;
}

std::string to_string(CheckKind k) {
    switch (k) {
        case CheckKind::ratio_bounded: return "ratio_bounded";
        case CheckKind::exact_inequality: return "exact_inequality";
        case CheckKind::exact_identity: return "exact_identity";
        case CheckKind::limit: return "limit";
        case CheckKind::grid_verification: return "grid_verification";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::degenerate: return "degenerate";
    }
    return "?";
}

CheckKind check_kind_from_string(const std::string& s) {
    for (CheckKind k : {CheckKind::ratio_bounded, CheckKind::exact_inequality, CheckKind::exact_identity,
                        CheckKind::limit, CheckKind::grid_verification})
        if (to_string(k) == s) return k;
    throw std::runtime_error("unknown check kind '" + s + "'");
}

Verdict verdict_from_string(const std::string& s) {
    for (Verdict v : {Verdict::pass, Verdict::fail, Verdict::degenerate})
        if (to_string(v) == s) return v;
    throw std::runtime_error("unknown verdict '" + s + "'");
}

std::string reports_to_json(const std::vector<EquivalenceReport>& reports, int indent) {
    ojson arr = ojson::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(indent) + "\n";
}

std::vector<EquivalenceReport> reports_from_json(const std::string& text) {
    ojson j = ojson::parse(text);
    std::vector<EquivalenceReport> out;
    if (j.is_object()) j = j.at("reports");
    for (const auto& e : j) out.push_back(from_json(e));
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string reports_to_csv(const std::vector<EquivalenceReport>& reports) {
    std::ostringstream os;
    os << "check_id,kind,verdict,samples,degenerate,evaluations,ratio_min,ratio_max,ratio_median,band,ceiling,"
          "violations,max_violation,tolerance,config_hash,seed\n";
    for (const auto& r : reports) {
        const auto& s = r.ratio_stats;
        os << csv_field(r.check_id) << ',' << to_string(r.kind) << ',' << to_string(r.verdict) << ',' << r.samples
           << ',' << r.degenerate << ',' << r.evaluations << ',' << format_double(s.min) << ','
           << format_double(s.max) << ',' << format_double(s.median) << ',' << format_double(s.band) << ','
           << format_double(s.ceiling) << ',' << r.violations << ',' << format_double(r.max_violation) << ','
           << format_double(r.tolerance) << ',' << r.config_hash << ',' << r.seed << '\n';
    }
    return os.str();
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* digits = "0123456789abcdef";
    for (int i = 15; i >= 0; --i) {
        buf[i] = digits[h & 0xF];
        h >>= 4;
    }
    buf[16] = '\0';
    return buf;
}

}  // namespace abesov
