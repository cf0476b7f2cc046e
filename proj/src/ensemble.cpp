#include "abesov/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace abesov {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double PortableRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ULL);
    splitmix64(s);
    return splitmix64(s);
}

namespace {

RealVec loguniform(PortableRng& rng, int n, double lo, double hi) {
    RealVec v(n);
    double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * rng.uniform());
    return v;
}

Eigen::MatrixXcd random_unitary(PortableRng& rng, int n) {
    Eigen::MatrixXcd g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.cnormal();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

Operator make(const FamilySpec& f, PortableRng& rng) {
    switch (f.kind) {
        case FamilyKind::diag_loguniform: {
            RealVec ev = loguniform(rng, f.n, f.lambda_min, f.lambda_max);
            for (int i = 0; i < std::min(f.zeros, f.n); ++i) ev[i] = 0.0;
            return Operator::diagonal(ev);
        }
        case FamilyKind::dense_spd: {
            double lo = f.lambda_max / f.condition;
            RealVec ev = loguniform(rng, f.n, lo, f.lambda_max);
            // pin both ends so the condition number is exact
            if (f.n >= 2) {
                ev[0] = lo;
                ev[1] = f.lambda_max;
            }
            for (int i = 0; i < std::min(f.zeros, f.n); ++i) ev[i] = 0.0;
            Eigen::MatrixXcd q = random_unitary(rng, f.n);
            Eigen::MatrixXcd m = q * ev.cast<Complex>().asDiagonal() * q.adjoint();
            m = 0.5 * (m + m.adjoint()).eval();
            return Operator::dense(m);
        }
        case FamilyKind::torus_laplacian:
            return Operator::torus_laplacian(f.n, 1);
        case FamilyKind::nonnormal_upper: {
            RealVec d = loguniform(rng, f.n, f.lambda_min, f.lambda_max);
            Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(f.n, f.n);
            for (int j = 0; j < f.n; ++j)
                for (int i = 0; i < j; ++i) upper(i, j) = rng.normal() / std::sqrt(static_cast<double>(f.n));
            double c = f.coupling;
            for (int attempt = 0; attempt < 40; ++attempt, c *= 0.5) {
                Eigen::MatrixXcd m = c * upper;
                m.diagonal() = d.cast<Complex>();
                Operator a = Operator::dense(m);
                if (a.constants().M <= f.max_M) return a;
            }
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(f.n, f.n);
            m.diagonal() = d.cast<Complex>();
            return Operator::dense(m);
        }
        case FamilyKind::shifted:
            if (!f.base) throw Error("shifted family needs a base family");
            return Operator::shifted(make(*f.base, rng), f.eps);
    }
    throw Error("unknown operator family");
}

// Eigenvector basis as columns, in ascending eigenvalue order (by real part).
Eigen::MatrixXcd eigenvectors_sorted(const Operator& a) {
    const int n = a.dim();
    if (const Spectral* sp = a.spectral()) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int i, int j) { return sp->eigenvalues[i] < sp->eigenvalues[j]; });
        Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
        for (int k = 0; k < n; ++k) e(idx[k], k) = 1.0;
        return sp->basis.backward(e);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.matrix());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int i, int j) { return es.eigenvalues()[i].real() < es.eigenvalues()[j].real(); });
    Eigen::MatrixXcd v(n, n);
    for (int k = 0; k < n; ++k) v.col(k) = es.eigenvectors().col(idx[k]).normalized();
    return v;
}

}  // namespace

FamilySpec FamilySpec::diag(int n, double lo, double hi, int zeros) {
    FamilySpec f;
    f.kind = FamilyKind::diag_loguniform;
    f.n = n;
    f.lambda_min = lo;
    f.lambda_max = hi;
    f.zeros = zeros;
    return f;
}

FamilySpec FamilySpec::spd(int n, double condition, double lambda_max) {
    FamilySpec f;
    f.kind = FamilyKind::dense_spd;
    f.n = n;
    f.condition = condition;
    f.lambda_max = lambda_max;
    f.lambda_min = lambda_max / condition;
    return f;
}

FamilySpec FamilySpec::torus(int n) {
    FamilySpec f;
    f.kind = FamilyKind::torus_laplacian;
    f.n = n;
    return f;
}

FamilySpec FamilySpec::nonnormal(int n, double coupling) {
    FamilySpec f;
    f.kind = FamilyKind::nonnormal_upper;
    f.n = n;
    f.coupling = coupling;
    return f;
}

FamilySpec FamilySpec::shift(const FamilySpec& base, double eps) {
    FamilySpec f;
    f.kind = FamilyKind::shifted;
    f.n = base.n;
    f.eps = eps;
    f.base = std::make_shared<FamilySpec>(base);
    return f;
}

std::string FamilySpec::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case FamilyKind::diag_loguniform:
            os << "diag_loguniform(" << n << "," << lambda_min << "," << lambda_max;
            if (zeros) os << ",zeros=" << zeros;
            os << ")";
            break;
        case FamilyKind::dense_spd:
            os << "dense_spd(" << n << "," << condition << ",lambda_max=" << lambda_max;
            if (zeros) os << ",zeros=" << zeros;
            os << ")";
            break;
        case FamilyKind::torus_laplacian:
            os << "torus_laplacian(" << n << ")";
            break;
        case FamilyKind::nonnormal_upper:
            os << "nonnormal_upper(" << n << "," << coupling << ",diag=[" << lambda_min << "," << lambda_max
               << "],M<=" << max_M << ")";
            break;
        case FamilyKind::shifted:
            os << "shifted(" << (base ? base->describe() : std::string("?")) << "," << eps << ")";
            break;
    }
    return os.str();
}

std::pair<double, double> FamilySpec::spectral_range() const {
    switch (kind) {
        case FamilyKind::diag_loguniform:
        case FamilyKind::nonnormal_upper:
            return {lambda_min, lambda_max};
        case FamilyKind::dense_spd:
            return {lambda_max / condition, lambda_max};
        case FamilyKind::torus_laplacian: {
            double s = std::sin(kPi / n);
            return {4.0 * n * n * s * s, 4.0 * n * n};
        }
        case FamilyKind::shifted: {
            auto [lo, hi] = base->spectral_range();
            return {base->injective() ? lo + eps : eps, hi + eps};
        }
    }
    return {1.0, 1.0};
}

bool FamilySpec::self_adjoint() const {
    switch (kind) {
        case FamilyKind::nonnormal_upper:
            return false;
        case FamilyKind::shifted:
            return base->self_adjoint();
        default:
            return true;
    }
}

bool FamilySpec::injective() const {
    switch (kind) {
        case FamilyKind::diag_loguniform:
        case FamilyKind::dense_spd:
            return zeros == 0;
        case FamilyKind::torus_laplacian:
            return false;
        case FamilyKind::nonnormal_upper:
            return true;
        case FamilyKind::shifted:
            return eps > 0.0 || base->injective();
    }
    return true;
}

std::string EnsembleSpec::describe() const {
    std::ostringstream os;
    os << family.describe() << "x" << count << " sampler=" << to_string(sampler);
    if (sampler == SamplerKind::band_limited) os << "(" << band_fraction << ")";
    os << " seed=" << seed;
    return os.str();
}

Operator draw_operator(const FamilySpec& family, std::uint64_t seed) {
    PortableRng rng(seed);
    return make(family, rng);
}

Sample draw_sample(const EnsembleSpec& spec, int index) {
    Sample s;
    s.index = index;
    s.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(index) + 1);
    PortableRng rng(s.seed);
    s.a = make(spec.family, rng);
    const int n = s.a.dim();
    Vec x = Vec::Zero(n);
    switch (spec.sampler) {
        case SamplerKind::gaussian:
            for (int i = 0; i < n; ++i) x[i] = rng.cnormal();
            break;
        case SamplerKind::eigen_directions: {
            Eigen::MatrixXcd v = eigenvectors_sorted(s.a);
            x = v.col(rng.below(n));
            break;
        }
        case SamplerKind::band_limited: {
            if (!s.a.spectral()) {
                for (int i = 0; i < n; ++i) x[i] = rng.cnormal();
                break;
            }
            Eigen::MatrixXcd v = eigenvectors_sorted(s.a);
            int keep = std::clamp(static_cast<int>(std::ceil(spec.band_fraction * n)), 1, n);
            for (int k = 0; k < keep; ++k) x += rng.cnormal() * v.col(k);
            break;
        }
    }
    double nx = x.norm();
    if (nx > 0.0) x /= nx;
    s.x = x;
    return s;
}

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::diag_loguniform: return "diag_loguniform";
        case FamilyKind::dense_spd: return "dense_spd";
        case FamilyKind::torus_laplacian: return "torus_laplacian";
        case FamilyKind::nonnormal_upper: return "nonnormal_upper";
        case FamilyKind::shifted: return "shifted";
    }
    return "?";
}

std::string to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::gaussian: return "gaussian";
        case SamplerKind::eigen_directions: return "eigen_directions";
        case SamplerKind::band_limited: return "band_limited";
    }
    return "?";
}

}  // namespace abesov
