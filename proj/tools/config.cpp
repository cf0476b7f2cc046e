#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace abesov::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kTopKeys = {
    "command", "operator", "x",       "alpha",          "method",    "unified",     "semigroup_beta",
    "index",   "norm",     "tail_tolerance", "theta",   "t_grid",    "suite",       "seed",
    "calibration_samples", "safety_factor",  "overrides", "jobs",    "inputs",      "output",
    "format"};

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw ConfigError("unknown config key '" + where + k + "'");
}

double real(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s == "inf") return HUGE_VAL;
        if (s == "-inf") return -HUGE_VAL;
    }
    bad(key, "expected a number (or \"inf\")");
}

// number or [re, im]
Complex complex(const json& v, const std::string& key) {
    if (v.is_array()) {
        if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) bad(key, "complex values are [re, im]");
        return {v[0].get<double>(), v[1].get<double>()};
    }
    if (!v.is_number()) bad(key, "expected a number or [re, im]");
    return v.get<double>();
}

int integer(const json& v, const std::string& key) {
    if (!v.is_number_integer()) bad(key, "expected an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& key) {
    if (!v.is_string()) bad(key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> t_grid(const json& v) {
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& e : v) out.push_back(real(e, "t_grid"));
        return out;
    }
    if (!v.is_object()) bad("t_grid", "expected a list or {\"min\", \"max\", \"points\"}");
    reject_unknown(v, {"min", "max", "points"}, "t_grid.");
    double lo = real(v.at("min"), "t_grid.min"), hi = real(v.at("max"), "t_grid.max");
    int n = integer(v.at("points"), "t_grid.points");
    if (!(lo > 0.0 && hi > lo && n >= 2)) bad("t_grid", "needs 0 < min < max and points >= 2");
    return log_grid(lo, hi, n);
}

std::pair<size_t, size_t> line_column(const std::string& text, size_t byte) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace

Command command_from_string(const std::string& s) {
    if (s == "power") return Command::power;
    if (s == "norm") return Command::norm;
    if (s == "kfun") return Command::kfun;
    if (s == "verify") return Command::verify;
    if (s == "report") return Command::report;
    throw ConfigError("config key 'command': unknown command '" + s + "' (power, norm, kfun, verify, report)");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::power: return "power";
        case Command::norm: return "norm";
        case Command::kfun: return "kfun";
        case Command::verify: return "verify";
        case Command::report: return "report";
    }
    return "?";
}

RunConfig parse_config_text(const std::string& src) {
    json j;
    try {
        j = json::parse(src);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(src, e.byte == 0 ? 0 : e.byte - 1);
        std::ostringstream os;
        os << "config parse error at line " << line << ", column " << col << ": " << e.what();
        throw ConfigError(os.str());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j, kTopKeys, "");

    RunConfig c;
    if (j.contains("command")) c.command = command_from_string(text(j["command"], "command"));
    if (j.contains("operator")) c.operator_spec = text(j["operator"], "operator");
    if (j.contains("x")) {
        if (!j["x"].is_array() || j["x"].empty()) bad("x", "expected a non-empty list");
        for (const auto& e : j["x"]) c.x.push_back(complex(e, "x"));
    }
    if (j.contains("alpha")) c.alpha = complex(j["alpha"], "alpha");
    if (j.contains("method")) {
        std::string m = text(j["method"], "method");
        if (m == "balakrishnan") c.method = PowerMethod::balakrishnan;
        else if (m == "spectral") c.method = PowerMethod::spectral;
        else if (m == "unified") c.method = PowerMethod::unified;
        else if (m == "semigroup") c.method = PowerMethod::semigroup;
        else bad("method", "one of balakrishnan, spectral, unified, semigroup");
    }
    if (j.contains("unified")) {
        const json& u = j["unified"];
        if (!u.is_object()) bad("unified", "expected {\"a\", \"b\"}");
        reject_unknown(u, {"a", "b"}, "unified.");
        if (u.contains("a")) c.unified_a = complex(u["a"], "unified.a");
        if (u.contains("b")) c.unified_b = complex(u["b"], "unified.b");
    }
    if (j.contains("semigroup_beta")) c.semigroup_beta = complex(j["semigroup_beta"], "semigroup_beta");
    if (j.contains("index")) {
        const json& i = j["index"];
        if (!i.is_object()) bad("index", "expected an object with s, q, k, alpha, beta");
        reject_unknown(i, {"s", "q", "k", "alpha", "beta"}, "index.");
        if (i.contains("s")) c.index.s = real(i["s"], "index.s");
        if (i.contains("q")) c.index.q = real(i["q"], "index.q");
        if (i.contains("k")) c.index.k = integer(i["k"], "index.k");
        if (i.contains("alpha")) c.index.alpha = complex(i["alpha"], "index.alpha");
        if (i.contains("beta")) c.index.beta = complex(i["beta"], "index.beta");
    }
    if (j.contains("norm")) {
        std::string n = text(j["norm"], "norm");
        if (n == "inhomogeneous") c.norm_kind = NormKind::inhomogeneous;
        else if (n == "homogeneous") c.norm_kind = NormKind::homogeneous;
        else if (n == "breve") c.norm_kind = NormKind::breve;
        else if (n == "continuous") c.norm_kind = NormKind::continuous;
        else if (n == "semigroup") c.norm_kind = NormKind::semigroup;
        else bad("norm", "one of inhomogeneous, homogeneous, breve, continuous, semigroup");
    }
    if (j.contains("tail_tolerance")) c.tail_tolerance = real(j["tail_tolerance"], "tail_tolerance");
    if (j.contains("theta")) c.theta = real(j["theta"], "theta");
    if (j.contains("t_grid")) c.t_grid = t_grid(j["t_grid"]);
    if (j.contains("suite")) {
        const json& s = j["suite"];
        try {
            if (s.is_string()) {
                c.suite = parse_suite(s.get<std::string>());
            } else if (s.is_array()) {
                for (const auto& e : s) c.suite.push_back(check_info(text(e, "suite")).id);
            } else {
                bad("suite", "expected \"all\", a comma-separated string or a list of check ids");
            }
        } catch (const Error& e) {
            bad("suite", e.what());
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("seed", "expected a non-negative integer");
        c.harness.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("calibration_samples")) c.harness.calibration_samples = integer(j["calibration_samples"], "calibration_samples");
    if (j.contains("safety_factor")) c.harness.safety_factor = real(j["safety_factor"], "safety_factor");
    if (j.contains("jobs")) c.harness.jobs = integer(j["jobs"], "jobs");
    if (j.contains("overrides")) {
        const json& o = j["overrides"];
        if (!o.is_object()) bad("overrides", "expected {check_id: {samples, dim}}");
        for (const auto& [id, v] : o.items()) {
            try {
                check_info(id);
            } catch (const Error& e) {
                bad("overrides." + id, e.what());
            }
            if (!v.is_object()) bad("overrides." + id, "expected {samples, dim}");
            reject_unknown(v, {"samples", "dim"}, "overrides." + id + ".");
            CheckOverride ov;
            if (v.contains("samples")) ov.samples = integer(v["samples"], "overrides." + id + ".samples");
            if (v.contains("dim")) ov.dim = integer(v["dim"], "overrides." + id + ".dim");
            c.harness.overrides[id] = ov;
        }
    }
    if (j.contains("inputs")) {
        if (!j["inputs"].is_array()) bad("inputs", "expected a list of report paths");
        for (const auto& e : j["inputs"]) c.inputs.push_back(text(e, "inputs"));
    }
    if (j.contains("output")) c.output = text(j["output"], "output");
    if (j.contains("format")) {
        std::string f = text(j["format"], "format");
        if (f == "json") c.format = Format::json;
        else if (f == "csv") c.format = Format::csv;
        else bad("format", "json or csv");
    }
    return c;
}

RunConfig parse_config(const std::string& source) {
    auto first = source.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && source[first] == '{') return parse_config_text(source);
    std::ifstream in(source);
    if (!in) throw ConfigError("cannot read config file '" + source + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void validate(const RunConfig& c) {
    auto need_operator = [&] {
        if (c.operator_spec.empty()) bad("operator", "required for '" + to_string(c.command) + "'");
        if (c.x.empty()) bad("x", "required for '" + to_string(c.command) + "'");
    };
    try {
        switch (c.command) {
            case Command::power:
                need_operator();
                if (c.method == PowerMethod::unified &&
                    !(-c.unified_a.real() < c.alpha.real() && c.alpha.real() < c.unified_b.real()))
                    bad("alpha", "unified formula needs -Re a < Re alpha < Re b");
                if (c.method == PowerMethod::balakrishnan && !(c.alpha.real() > 0.0))
                    bad("alpha", "must satisfy Re alpha > 0");
                break;
            case Command::norm:
                need_operator();
                if (c.norm_kind == NormKind::semigroup) {
                    if (!(c.index.q > 0.0)) bad("index.q", "q must lie in (0, inf]");
                    if (!(c.index.s > 0.0 && c.index.s < c.index.beta.real()))
                        bad("index.s", "semigroup norms need 0 < s < Re beta");
                } else {
                    c.index.validate(c.norm_kind == NormKind::homogeneous || c.norm_kind == NormKind::breve);
                }
                if (!(c.tail_tolerance > 0.0)) bad("tail_tolerance", "must be positive");
                break;
            case Command::kfun:
                need_operator();
                if (!(c.alpha.real() > 0.0)) bad("alpha", "must satisfy Re alpha > 0");
                for (double t : c.t_grid)
                    if (!(t > 0.0)) bad("t_grid", "entries must be positive");
                break;
            case Command::verify:
                if (c.harness.calibration_samples < 1) bad("calibration_samples", "must be at least 1");
                if (!(c.harness.safety_factor >= 1.0)) bad("safety_factor", "must be at least 1");
                if (c.harness.jobs < 0) bad("jobs", "must be non-negative");
                for (const auto& [id, ov] : c.harness.overrides) {
                    if (ov.samples && (*ov.samples < 1 || *ov.samples > 200))
                        bad("overrides." + id + ".samples", "must lie in [1, 200]");
                    if (ov.dim && (*ov.dim < 1 || *ov.dim > 64)) bad("overrides." + id + ".dim", "must lie in [1, 64]");
                }
                break;
            case Command::report:
                if (c.inputs.empty()) bad("inputs", "required for 'report'");
                break;
        }
    } catch (const AdmissibilityError& e) {
        throw ConfigError(std::string("config key 'index': ") + e.what());
    }
}

}  // namespace abesov::cli
