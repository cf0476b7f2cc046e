#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abesov/besov.hpp"
#include "abesov/harness.hpp"

namespace abesov::cli {

// Raised for anything that should end with exit status 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { power, norm, kfun, verify, report };
enum class Format { json, csv };
enum class NormKind { inhomogeneous, homogeneous, breve, continuous, semigroup };
enum class PowerMethod { balakrishnan, spectral, unified, semigroup };

struct RunConfig {
    Command command = Command::verify;
    std::string operator_spec;
    std::vector<Complex> x;

    // power
    Complex alpha = 0.5;
    PowerMethod method = PowerMethod::balakrishnan;
    Complex unified_a = 1.0, unified_b = 1.0;  // integrand exponents of the unified formula
    Complex semigroup_beta = 0.0;               // 0: ceil(Re alpha) + 1

    // norm
    BesovIndex index;
    NormKind norm_kind = NormKind::inhomogeneous;
    double tail_tolerance = 1e-8;

    // kfun
    double theta = 0.5;
    std::vector<double> t_grid;

    // verify
    std::vector<std::string> suite;
    HarnessConfig harness;

    // report
    std::vector<std::string> inputs;

    std::string output;  // empty: standard output
    Format format = Format::json;
};

// `source` is a path, or inline JSON when it starts with '{'.
RunConfig parse_config(const std::string& source);
RunConfig parse_config_text(const std::string& text);

// Admissibility of the parsed values for the selected command.
void validate(const RunConfig& cfg);

Command command_from_string(const std::string& s);
std::string to_string(Command c);

}  // namespace abesov::cli
