#include "abesov/quadrature.hpp"

#include <algorithm>
#include <exception>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abesov {

namespace {

constexpr int kChunk = 32;
constexpr int kMaxNodes = 1 << 18;
constexpr int kPanelOrder = 16;

using Gauss = boost::math::quadrature::gauss<double, kPanelOrder>;

// Abscissae and weights of the order-16 rule on [-1, 1].
const std::pair<std::vector<double>, std::vector<double>>& reference_rule() {
    static const auto rule = [] {
        std::vector<double> x, w;
        const auto& a = Gauss::abscissa();
        const auto& b = Gauss::weights();
        // boost stores the non-negative half; order 16 has no zero node
        for (size_t i = 0; i < a.size(); ++i) {
            x.push_back(-a[i]);
            w.push_back(b[i]);
            x.push_back(a[i]);
            w.push_back(b[i]);
        }
        std::vector<size_t> idx(x.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return x[i] < x[j]; });
        std::vector<double> xs, ws;
        for (size_t i : idx) {
            xs.push_back(x[i]);
            ws.push_back(w[i]);
        }
        return std::pair{xs, ws};
    }();
    return rule;
}

void panel_nodes(double a, double b, int panels, std::vector<double>& nodes, std::vector<double>& weights) {
    const auto& [x, w] = reference_rule();
    double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * width;
        double half = 0.5 * width, mid = lo + half;
        for (size_t i = 0; i < x.size(); ++i) {
            nodes.push_back(mid + half * x[i]);
            weights.push_back(half * w[i]);
        }
    }
}

void trapezoid_nodes(double a, double b, int count, std::vector<double>& nodes, std::vector<double>& weights) {
    double h = (b - a) / (count - 1);
    for (int i = 0; i < count; ++i) {
        nodes.push_back(a + h * i);
        weights.push_back((i == 0 || i == count - 1) ? 0.5 * h : h);
    }
}

double magnitude(const Block& b) { return b.norm(); }

}  // namespace

void QuadratureScheme::validate() const {
    if (nodes < 16) throw QuadratureError("quadrature needs at least 16 nodes");
    if (has_limits() && !(u_min < u_max)) throw QuadratureError("quadrature limits need u_min < u_max");
    if (!(tail_tolerance > 0.0)) throw QuadratureError("tail tolerance must be positive");
}

std::string to_string(Rule r) { return r == Rule::trapezoid_log ? "trapezoid_log" : "gauss_legendre_panels"; }

Rule rule_from_string(const std::string& s) {
    if (s == "trapezoid_log") return Rule::trapezoid_log;
    if (s == "gauss_legendre_panels") return Rule::gauss_legendre_panels;
    throw QuadratureError("unknown quadrature rule '" + s + "'");
}

Block node_sum(const Integrand& g, const std::vector<double>& nodes, const std::vector<double>& weights,
               Execution exec) {
    const int n = static_cast<int>(nodes.size());
    const int chunks = (n + kChunk - 1) / kChunk;
    std::vector<Block> partial(static_cast<size_t>(chunks));
    std::exception_ptr failure;
    auto run_chunk = [&](int c) {
        int lo = c * kChunk, hi = std::min(n, lo + kChunk);
        Block acc;
        for (int i = lo; i < hi; ++i) {
            Block v = g(nodes[i]);
            if (i == lo)
                acc = weights[i] * v;
            else
                acc += weights[i] * v;
        }
        partial[c] = std::move(acc);
    };
    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int c = 0; c < chunks; ++c) {
            try {
                run_chunk(c);
            } catch (...) {
#pragma omp critical(abesov_quadrature_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    } else {
        for (int c = 0; c < chunks; ++c) run_chunk(c);
    }
    Block total = partial[0];
    for (int c = 1; c < chunks; ++c) total += partial[c];
    return total;
}

Block integrate_line(const Integrand& g, const QuadratureScheme& scheme, TailRates rates, Execution exec,
                     QuadDiagnostics* diag) {
    scheme.validate();
    if (!scheme.has_limits()) throw QuadratureError("integration window not set");
    if (!(rates.lower > 0.0) || !(rates.upper > 0.0))
        throw QuadratureError("integrand does not decay at both ends; the integral diverges");
    double a = scheme.u_min, b = scheme.u_max;
    const bool trapezoid = scheme.rule == Rule::trapezoid_log;
    const double step = (b - a) / (scheme.nodes - 1);
    const int panels0 = std::max(1, scheme.nodes / kPanelOrder);
    const double panel_width = (b - a) / panels0;
    const double unit = trapezoid ? step : panel_width;
    const int unit_nodes = trapezoid ? 1 : kPanelOrder;

    // Composite rules split at any lattice point, so widening only adds the
    // new end segments; the original window is never re-evaluated.
    int total_units = trapezoid ? scheme.nodes - 1 : panels0;
    auto segment = [&](double lo, int units) {
        std::vector<double> nodes, weights;
        if (trapezoid)
            trapezoid_nodes(lo, lo + units * unit, units + 1, nodes, weights);
        else
            panel_nodes(lo, lo + units * unit, units, nodes, weights);
        return node_sum(g, nodes, weights, exec);
    };
    Block value = segment(a, total_units);
    Block g_lo = g(a), g_hi = g(b);
    QuadDiagnostics d;
    for (int round = 0;; ++round) {
        double vnorm = magnitude(value);
        double lo_tail = magnitude(g_lo) / rates.lower;
        double hi_tail = magnitude(g_hi) / rates.upper;
        double budget = 0.5 * scheme.tail_tolerance * vnorm;
        d.u_min = a;
        d.u_max = b;
        d.nodes = total_units * unit_nodes + (trapezoid ? 1 : 0);
        d.step = unit;
        d.tail_estimate = lo_tail + hi_tail;
        d.value_norm = vnorm;
        d.widenings = round;
        bool lo_ok = lo_tail <= budget, hi_ok = hi_tail <= budget;
        if (vnorm == 0.0) lo_ok = hi_ok = (lo_tail == 0.0 && hi_tail == 0.0);
        if ((lo_ok && hi_ok) || round >= scheme.max_widenings) {
            d.tail_certified = lo_ok && hi_ok;
            break;
        }
        // assume exponential decay beyond the current end and jump far enough
        auto extension = [&](double tail, double rate) {
            double need = (budget > 0.0) ? std::log(tail / budget) / rate : 4.0 / rate;
            return static_cast<int>(std::ceil(std::clamp(need + 1.0, 1.0, 60.0) / unit));
        };
        int add_lo = lo_ok ? 0 : extension(lo_tail, rates.lower);
        int add_hi = hi_ok ? 0 : extension(hi_tail, rates.upper);
        if ((total_units + add_lo + add_hi) * unit_nodes > kMaxNodes)
            throw QuadratureError("quadrature widening exceeded the node budget");
        if (add_lo > 0) {
            double lo = a - add_lo * unit;
            value += segment(lo, add_lo);
            a = lo;
            g_lo = g(a);
        }
        if (add_hi > 0) {
            value += segment(b, add_hi);
            b += add_hi * unit;
            g_hi = g(b);
        }
        total_units += add_lo + add_hi;
    }
    if (diag) *diag = d;
    return value;
}

Block integrate_right(const Integrand& g, double u0, const QuadratureScheme& scheme, double upper_rate,
                      Execution exec, QuadDiagnostics* diag) {
    scheme.validate();
    if (!(upper_rate > 0.0)) throw QuadratureError("integrand does not decay at +inf");
    double b = scheme.has_limits() ? std::max(scheme.u_max, u0 + 1.0) : u0 + 40.0;
    // panel width from the scheme's density, never coarser than 0.5 in u
    double width = 0.5;
    if (scheme.has_limits()) width = std::min(0.5, (scheme.u_max - scheme.u_min) * kPanelOrder / scheme.nodes);
    QuadDiagnostics d;
    Block value;
    for (int round = 0;; ++round) {
        int panels = static_cast<int>(std::ceil((b - u0) / width - 1e-9));
        if (panels * kPanelOrder > kMaxNodes) throw QuadratureError("quadrature widening exceeded the node budget");
        std::vector<double> nodes, weights;
        panel_nodes(u0, b, panels, nodes, weights);
        value = node_sum(g, nodes, weights, exec);
        double vnorm = magnitude(value);
        double tail = magnitude(g(b)) / upper_rate;
        double budget = scheme.tail_tolerance * vnorm;
        d.u_min = u0;
        d.u_max = b;
        d.nodes = static_cast<int>(nodes.size());
        d.step = width;
        d.tail_estimate = tail;
        d.value_norm = vnorm;
        d.widenings = round;
        bool ok = vnorm == 0.0 ? tail == 0.0 : tail <= budget;
        if (ok || round >= scheme.max_widenings) {
            d.tail_certified = ok;
            break;
        }
        double need = budget > 0.0 ? std::log(tail / budget) / upper_rate : 4.0 / upper_rate;
        b += std::clamp(need + 1.0, 1.0, 60.0);
    }
    if (diag) *diag = d;
    return value;
}

Block integrate_panels(const Integrand& g, double a, double b, double width, Execution exec) {
    if (!(b > a)) throw QuadratureError("empty integration interval");
    int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
    std::vector<double> nodes, weights;
    panel_nodes(a, b, panels, nodes, weights);
    return node_sum(g, nodes, weights, exec);
}

double integrate_line_scalar(const std::function<double(double)>& g, const QuadratureScheme& scheme, TailRates rates,
                             QuadDiagnostics* diag) {
    Integrand h = [&](double u) {
        Block b(1, 1);
        b(0, 0) = g(u);
        return b;
    };
    return integrate_line(h, scheme, rates, Execution::serial, diag)(0, 0).real();
}

double integrate_panels_scalar(const std::function<double(double)>& g, double a, double b, double width) {
    Integrand h = [&](double u) {
        Block v(1, 1);
        v(0, 0) = g(u);
        return v;
    };
    return integrate_panels(h, a, b, width, Execution::serial)(0, 0).real();
}

}  // namespace abesov
