// abesov: fractional powers, Besov quasi-norms and the check suite from a JSON config.
//
// Exit status: 0 success, 1 a check failed or a computation failed, 2 bad configuration.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    using namespace abesov;
    CLI::App app{"Fractional powers and Besov quasi-norms of non-negative operators"};
    std::string config, out, format, suite;
    std::uint64_t seed = 0;
    int jobs = -1;
    auto* seed_opt = app.add_option("--seed", seed, "Master seed (overrides the config)");
    app.add_option("--config", config, "JSON config file, or inline JSON starting with '{'");
    app.add_option("--out", out, "Output path (default: standard output)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--suite", suite, "Check ids, comma-separated, or 'all' (implies verify)");
    app.add_option("--jobs", jobs, "Worker threads for the check samples (0: OpenMP default)")
        ->check(CLI::NonNegativeNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cli::RunConfig cfg;
        if (!config.empty())
            cfg = cli::parse_config(config);
        else if (suite.empty())
            throw cli::ConfigError("nothing to do: give --config or --suite");
        if (!suite.empty()) {
            if (!config.empty() && cfg.command != cli::Command::verify)
                throw cli::ConfigError("--suite only applies to the verify command");
            cfg.command = cli::Command::verify;
            try {
                cfg.suite = parse_suite(suite);
            } catch (const Error& e) {
                throw cli::ConfigError(std::string("--suite: ") + e.what());
            }
        }
        if (*seed_opt) cfg.harness.seed = seed;
        if (jobs >= 0) cfg.harness.jobs = jobs;
        if (!out.empty()) cfg.output = out;
        if (!format.empty()) cfg.format = format == "csv" ? cli::Format::csv : cli::Format::json;

        cli::Outcome o = cli::execute(cfg);
        if (cfg.output.empty()) {
            std::cout << o.payload;
        } else {
            std::ofstream f(cfg.output, std::ios::binary);
            if (!f || !(f << o.payload)) {
                std::cerr << "abesov: cannot write '" << cfg.output << "'\n";
                return 1;
            }
        }
        return o.status;
    } catch (const cli::ConfigError& e) {
        std::cerr << "abesov: " << e.what() << "\n";
        return 2;
    } catch (const AdmissibilityError& e) {
        std::cerr << "abesov: inadmissible input: " << e.what() << "\n";
        return 2;
    } catch (const InjectivityError& e) {
        std::cerr << "abesov: inadmissible input: " << e.what() << "\n";
        return 2;
    } catch (const NonNegativityError& e) {
        std::cerr << "abesov: inadmissible operator: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "abesov: inadmissible input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "abesov: " << e.what() << "\n";
        return 1;
    }
}
