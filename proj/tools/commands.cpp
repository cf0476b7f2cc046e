#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "abesov/fractional.hpp"
#include "abesov/interpolation.hpp"
#include "json.hpp"

namespace abesov::cli {

namespace {

using ojson = nlohmann::ordered_json;

ojson num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

ojson cnum(Complex z) { return ojson::array({num(z.real()), num(z.imag())}); }

Block vector_of(const RunConfig& c, int n) {
    if (static_cast<int>(c.x.size()) != n) {
        std::ostringstream os;
        os << "config key 'x': length " << c.x.size() << " does not match the operator dimension " << n;
        throw ConfigError(os.str());
    }
    Block x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = c.x[i];
    return x;
}

Operator operator_of(const RunConfig& c) {
    try {
        return build_operator(c.operator_spec);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("config key 'operator': ") + e.what());
    }
}

ojson diagnostics_json(const QuadDiagnostics& d) {
    return {{"u_min", num(d.u_min)},       {"u_max", num(d.u_max)},
            {"nodes", d.nodes},            {"step", num(d.step)},
            {"tail_estimate", num(d.tail_estimate)}, {"value_norm", num(d.value_norm)},
            {"widenings", d.widenings},    {"tail_certified", d.tail_certified}};
}

std::string csv_vector(const Block& v) {
    std::ostringstream os;
    os << "i,re,im\n";
    for (Eigen::Index i = 0; i < v.rows(); ++i)
        os << i << ',' << format_double(v(i, 0).real()) << ',' << format_double(v(i, 0).imag()) << '\n';
    return os.str();
}

Outcome run_power(const RunConfig& c) {
    Operator a = operator_of(c);
    Block x = vector_of(c, a.dim());
    QuadResult r;
    std::string method;
    switch (c.method) {
        case PowerMethod::balakrishnan:
            r = frac_power(a, c.alpha, x);
            method = "balakrishnan";
            break;
        case PowerMethod::spectral:
            r.value = spectral_frac_power(a, c.alpha, x);
            method = "spectral";
            break;
        case PowerMethod::unified:
            r = frac_power_unified(a, c.alpha, c.unified_a, c.unified_b, x);
            method = "unified";
            break;
        case PowerMethod::semigroup: {
            Complex b = c.semigroup_beta;
            if (b == Complex(0.0)) b = std::ceil(c.alpha.real()) + 1.0;
            r = frac_power_via_semigroup(a, c.alpha, b, x);
            method = "semigroup";
            break;
        }
    }
    Outcome o;
    if (c.format == Format::csv) {
        o.payload = csv_vector(r.value);
        return o;
    }
    ojson vec = ojson::array();
    for (Eigen::Index i = 0; i < r.value.rows(); ++i) vec.push_back(cnum(r.value(i, 0)));
    ojson j = {{"command", "power"}, {"operator", a.describe()}, {"alpha", cnum(c.alpha)},
               {"method", method},   {"result", vec}};
    if (c.method != PowerMethod::spectral) j["diagnostics"] = diagnostics_json(r.diagnostics);
    o.payload = j.dump(2) + "\n";
    return o;
}

Outcome run_norm(const RunConfig& c) {
    Operator a = operator_of(c);
    Block x = vector_of(c, a.dim());
    NormOptions opt;
    opt.tail_tolerance = c.tail_tolerance;
    opt.keep_trace = true;
    NormResult r;
    std::string kind;
    switch (c.norm_kind) {
        case NormKind::inhomogeneous:
            r = inhom_quasi_norm(a, c.index, x, opt);
            kind = "inhomogeneous";
            break;
        case NormKind::homogeneous:
            r = homog_quasi_norm(a, c.index, x, opt);
            kind = "homogeneous";
            break;
        case NormKind::breve:
            r = breve_quasi_norm(a, c.index, x, opt);
            kind = "breve";
            break;
        case NormKind::continuous:
            r = continuous_quasi_norm(a, c.index, x);
            kind = "continuous";
            break;
        case NormKind::semigroup:
            r = semigroup_quasi_norm(a, c.index.s, c.index.q, c.index.k, c.index.beta, x, opt);
            kind = "semigroup";
            break;
    }
    Outcome o;
    if (c.format == Format::csv) {
        std::ostringstream os;
        os << "value,lead,aggregate,j_lo,j_hi,tail_bound,certified\n"
           << format_double(r.value) << ',' << format_double(r.lead) << ',' << format_double(r.aggregate) << ','
           << r.j_lo << ',' << r.j_hi << ',' << format_double(r.tail_bound) << ',' << (r.certified ? 1 : 0) << '\n';
        o.payload = os.str();
        return o;
    }
    ojson trace = ojson::array();
    for (double b : r.term_trace) trace.push_back(num(b));
    ojson idx = {{"s", num(c.index.s)}, {"q", num(c.index.q)}, {"k", c.index.k},
                 {"alpha", cnum(c.index.alpha)}, {"beta", cnum(c.index.beta)}};
    ojson j = {{"command", "norm"},         {"operator", a.describe()},  {"norm", kind},
               {"index", idx},              {"value", num(r.value)},     {"lead", num(r.lead)},
               {"aggregate", num(r.aggregate)}, {"j_lo", r.j_lo},        {"j_hi", r.j_hi},
               {"tail_bound", num(r.tail_bound)}, {"certified", r.certified}, {"term_trace", trace}};
    o.payload = j.dump(2) + "\n";
    return o;
}

Outcome run_kfun(const RunConfig& c) {
    Operator a = operator_of(c);
    Block x = vector_of(c, a.dim());
    CoupleSpec cs;
    cs.a = a;
    cs.alpha = c.alpha;
    cs.theta = c.theta;
    KFunctional k(cs, x);
    std::vector<double> ts = c.t_grid;
    if (ts.empty()) ts = log_grid(1e-4, 1e4, 33);
    Outcome o;
    std::ostringstream csv;
    csv << "t,K,mu,residual,graph,endpoint\n";
    ojson rows = ojson::array();
    for (double t : ts) {
        KValue v = k(t);
        csv << format_double(t) << ',' << format_double(v.value) << ',' << format_double(v.mu) << ','
            << format_double(v.residual) << ',' << format_double(v.graph) << ',' << (v.endpoint ? 1 : 0) << '\n';
        rows.push_back({{"t", num(t)},
                        {"K", num(v.value)},
                        {"mu", num(v.mu)},
                        {"residual", num(v.residual)},
                        {"graph", num(v.graph)},
                        {"endpoint", v.endpoint}});
    }
    if (c.format == Format::csv) {
        o.payload = csv.str();
        return o;
    }
    ojson j = {{"command", "kfun"},         {"operator", a.describe()},       {"alpha", cnum(c.alpha)},
               {"norm_x", num(k.norm_x())}, {"graph_norm_x", num(k.graph_norm_x())},
               {"t_lower", num(k.t_lower())}, {"t_upper", num(k.t_upper())}, {"table", rows}};
    o.payload = j.dump(2) + "\n";
    return o;
}

Outcome emit_reports(const std::vector<EquivalenceReport>& reports, Format f) {
    Outcome o;
    for (const auto& r : reports)
        if (r.verdict == Verdict::fail) o.status = 1;
    o.payload = f == Format::csv ? reports_to_csv(reports) : reports_to_json(reports);
    return o;
}

Outcome run_verify(const RunConfig& c) {
    std::vector<std::string> ids = c.suite;
    return emit_reports(run_suite(ids, c.harness), c.format);
}

Outcome run_report(const RunConfig& c) {
    std::vector<EquivalenceReport> all;
    for (const auto& path : c.inputs) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config key 'inputs': cannot read '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        std::vector<EquivalenceReport> part;
        try {
            part = reports_from_json(ss.str());
        } catch (const std::exception& e) {
            throw ConfigError("config key 'inputs': '" + path + "' is not a report file (" + e.what() + ")");
        }
        all.insert(all.end(), part.begin(), part.end());
    }
    return emit_reports(all, c.format);
}

}  // namespace

Outcome execute(const RunConfig& cfg) {
    validate(cfg);
    switch (cfg.command) {
        case Command::power: return run_power(cfg);
        case Command::norm: return run_norm(cfg);
        case Command::kfun: return run_kfun(cfg);
        case Command::verify: return run_verify(cfg);
        case Command::report: return run_report(cfg);
    }
    throw ConfigError("unknown command");
}

}  // namespace abesov::cli
