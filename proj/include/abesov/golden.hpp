#pragma once

#include <cmath>
#include <utility>

namespace abesov {

struct GoldenResult {
    double x = 0.0;
    double value = 0.0;
    int evaluations = 0;
};

// Golden-section search for the minimum of a unimodal f on [a, b].
template <class F>
GoldenResult golden_section_minimize(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int evals = 2;
    for (int it = 0; it < max_iter && std::abs(b - a) > tol * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    return fc <= fd ? GoldenResult{c, fc, evals} : GoldenResult{d, fd, evals};
}

template <class F>
GoldenResult golden_section_maximize(F&& f, double a, double b, double tol = 1e-10, int max_iter = 200) {
    auto r = golden_section_minimize([&](double x) { return -f(x); }, a, b, tol, max_iter);
    r.value = -r.value;
    return r;
}

}  // namespace abesov
