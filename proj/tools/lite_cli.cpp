// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lite/errors.hpp"
#include "lite/harness.hpp"

namespace {

enum Exit : int { ok = 0, usage = 2, config = 3, numerical = 4, diverged = 10 };

/// Opens `path` for writing, or returns nullptr to mean standard output.
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto out = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*out) throw lite::ConfigError("cannot open output file '" + path + "'");
    return out;
}

int cmd_run(const std::string& config_path, const std::string& output_override) {
    auto cfg = lite::harness::load_config(config_path, lite::harness::ConfigPurpose::run);
    if (!output_override.empty()) cfg.output_path = output_override;
    auto file = open_output(cfg.output_path);
    std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;
    const auto summary = lite::harness::run_experiment(cfg, out);
    std::cerr << summary.describe() << '\n';
    return summary.diverged ? diverged : ok;
}

int cmd_align(const std::string& config_path, const std::string& output_override) {
    auto cfg = lite::harness::load_config(config_path, lite::harness::ConfigPurpose::align);
    if (!output_override.empty()) cfg.output_path = output_override;
    auto file = open_output(cfg.output_path);
    std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;
    lite::harness::run_alignment(cfg, out);
    return ok;
}

int cmd_dynamics_check() {
    const auto checks = lite::harness::dynamics_checks();
    std::cout << "check,value,threshold,pass\n";
    bool all = true;
    for (const auto& c : checks) {
        std::cout << c.name << ',' << lite::harness::format_double(c.value) << ','
                  << lite::harness::format_double(c.threshold) << ',' << (c.pass ? "true" : "false") << '\n';
        all = all && c.pass;
    }
    return all ? ok : numerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimizer dynamics toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    auto* run = app.add_subcommand("run", "Run an optimizer experiment and write CSV telemetry");
    run->add_option("--config", config_path, "Config file")->required();
    run->add_option("--output", output_path, "CSV output path (overrides run.output; '-' for stdout)");

    double alpha = 0.0, beta = 0.0, eta = 0.0, lambda_min = 0.0, lambda_max = 0.0;
    std::size_t points = 0;
    auto* report = app.add_subcommand("quadratic-report", "Print per-eigenvalue recurrence analysis as CSV");
    report->add_option("--alpha", alpha, "Momentum decay")->required();
    report->add_option("--beta", beta, "Gradient correction coefficient")->required();
    report->add_option("--eta", eta, "Step size")->required();
    report->add_option("--lambda-min", lambda_min, "Smallest eigenvalue")->required();
    report->add_option("--lambda-max", lambda_max, "Largest eigenvalue")->required();
    report->add_option("--points", points, "Number of eigenvalues")->required()->check(CLI::PositiveNumber);

    auto* align = app.add_subcommand("align", "Run the Hessian/gradient-Gram alignment experiment");
    align->add_option("--config", config_path, "Config file")->required();
    align->add_option("--output", output_path, "CSV output path (overrides run.output; '-' for stdout)");

    auto* dyn = app.add_subcommand("dynamics-check", "Run the ODE consistency and equivalence checks");
    auto* version = app.add_subcommand("version", "Print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*run) return cmd_run(config_path, output_path);
        if (*align) return cmd_align(config_path, output_path);
        if (*report) {
            lite::harness::quadratic_report(alpha, beta, eta, lambda_min, lambda_max, points, std::cout);
            return ok;
        }
        if (*dyn) return cmd_dynamics_check();
        if (*version) {
            std::cout << lite::harness::kVersion << '\n';
            return ok;
        }
    } catch (const lite::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical;
    }
    std::cerr << app.help();
    return usage;
}
