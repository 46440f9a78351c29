// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_HARNESS_HPP
#define LITE_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "lite/landscapes.hpp"
#include "lite/optim.hpp"
#include "lite/quadratic.hpp"
#include "lite/schedule.hpp"

namespace lite::harness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class LandscapeKind { quadratic, river_valley, kronecker, mlp };

LandscapeKind parse_landscape_kind(const std::string& name);
std::string to_string(LandscapeKind kind);

struct LandscapeConfig {
    LandscapeKind kind = LandscapeKind::quadratic;
    quadratic::QuadraticSpec quadratic;
    std::vector<double> quadratic_init;  // empty draws N(0, 1)
    landscapes::RiverValleySpec river;
    landscapes::KroneckerSpec kronecker;
    landscapes::MlpSpec mlp;
    /// Train on fresh minibatch gradients instead of the fixed batch.
    bool stochastic = false;
};

/// Which subcommand the config feeds; `align` does not need optimizer or
/// schedule sections.
enum class ConfigPurpose { run, align };

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::size_t steps = 0;
    std::size_t log_every = 1;
    std::string output_path;  // empty writes to standard output
    /// Loss growth beyond factor·max(1, |f(w_1)|) above f(w_1) counts as divergence.
    double divergence_factor = 1e12;
    LandscapeConfig landscape;
    optim::OptimizerConfig optimizer;
    optim::ScheduleSpec schedule;
    landscapes::AlignSpec align;
};

/// Parses line-oriented `section.key = value` text. `#` starts a comment.
/// Unknown, duplicate, malformed and missing keys raise ConfigError naming
/// the offending line.
ExperimentConfig parse_config(std::string_view text, ConfigPurpose purpose = ConfigPurpose::run);
ExperimentConfig load_config(const std::string& path, ConfigPurpose purpose = ConfigPurpose::run);

std::unique_ptr<landscapes::Landscape> make_landscape(const ExperimentConfig& config);

struct RunSummary {
    std::size_t steps_completed = 0;
    bool diverged = false;
    std::optional<std::size_t> diverged_at;
    double final_loss = 0.0;
    std::vector<double> final_w;

    std::string describe() const;
};

/// Seeded landscape → optimizer loop (clip, route_and_step with lr_at) →
/// CSV rows for step 1, every log_every-th step after it and the last step.
/// Divergence is reported in the summary, not thrown.
RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv);

/// Runs alignment_experiment on the configured landscape and writes
/// `block,side,d_s,k,coverage` rows.
landscapes::AlignmentResult run_alignment(const ExperimentConfig& config, std::ostream& csv);

/// Writes `lambda,T,D,discriminant,regime,dominant_modulus` rows for
/// `points` evenly spaced λ in [lambda_min, lambda_max].
void quadratic_report(double alpha, double beta, double eta, double lambda_min, double lambda_max,
                      std::size_t points, std::ostream& csv);

struct CheckResult {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

/// Nesterov form gap, AdEMAMix residuals, the h = 1 discretization identity
/// and the first-order consistency slope on fixed quadratics. Every row
/// passes against its threshold except the printed-coefficient row, which
/// passes when its residual exceeds the threshold; the slope row's
/// threshold is the allowed |slope - 1|.
std::vector<CheckResult> dynamics_checks();

/// Renders with 17 significant digits so values round-trip.
std::string format_double(double x);

}  // namespace lite::harness

#endif  // LITE_HARNESS_HPP
