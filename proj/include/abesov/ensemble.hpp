#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "abesov/operator.hpp"

namespace abesov {

// splitmix64 step; also used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Draws built directly on the engine output, which the standard fixes
// (the distribution objects are implementation-defined).
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double normal();
    Complex cnormal() {
        double re = normal();
        return {re, normal()};
    }
    int below(int n) { return static_cast<int>(uniform() * n) % n; }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

enum class FamilyKind { diag_loguniform, dense_spd, torus_laplacian, nonnormal_upper, shifted };

struct FamilySpec {
    FamilyKind kind = FamilyKind::diag_loguniform;
    int n = 8;
    double lambda_min = 0.1;
    double lambda_max = 10.0;
    int zeros = 0;            // diag_loguniform / dense_spd: leading zero eigenvalues
    double condition = 100.0; // dense_spd: eigenvalues log-uniform in [lambda_max / condition, lambda_max]
    double coupling = 1.0;    // nonnormal_upper: scale of the strictly upper part
    double max_M = 50.0;      // nonnormal_upper: coupling is halved until the estimated M_A fits
    double eps = 1.0;         // shifted
    std::shared_ptr<FamilySpec> base;  // shifted

    static FamilySpec diag(int n, double lo, double hi, int zeros = 0);
    static FamilySpec spd(int n, double condition, double lambda_max = 10.0);
    static FamilySpec torus(int n);
    static FamilySpec nonnormal(int n, double coupling);
    static FamilySpec shift(const FamilySpec& base, double eps);

    std::string describe() const;
    // (smallest nonzero, largest) eigenvalue magnitudes the family can produce
    std::pair<double, double> spectral_range() const;
    bool self_adjoint() const;
    bool injective() const;
};

enum class SamplerKind { gaussian, eigen_directions, band_limited };

struct EnsembleSpec {
    FamilySpec family;
    SamplerKind sampler = SamplerKind::gaussian;
    double band_fraction = 0.25;
    int count = 16;
    std::uint64_t seed = 1;

    std::string describe() const;
};

struct Sample {
    Operator a;
    Block x;
    std::uint64_t seed = 0;
    int index = 0;
};

// The index-th sample; depends only on (spec, index), not on evaluation order.
Sample draw_sample(const EnsembleSpec& spec, int index);

// One operator drawn from a family with the given generator seed.
Operator draw_operator(const FamilySpec& family, std::uint64_t seed);

std::string to_string(FamilyKind k);
std::string to_string(SamplerKind k);

}  // namespace abesov
