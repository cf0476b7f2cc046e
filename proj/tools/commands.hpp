#pragma once

#include <string>

#include "config.hpp"

namespace abesov::cli {

struct Outcome {
    int status = 0;       // 0 success, 1 check failure
    std::string payload;  // what goes to the output file or stdout
};

// Runs the command; throws ConfigError for invalid configs and abesov::Error for numerical failures.
Outcome execute(const RunConfig& cfg);

}  // namespace abesov::cli
