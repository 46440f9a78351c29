// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_OPTIM_HPP
#define LITE_OPTIM_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lite/linalg.hpp"
#include "lite/polar.hpp"
#include "lite/schedule.hpp"
#include "lite/subspace.hpp"

namespace lite::optim {

using linalg::DenseMatrix;

/// Which stepper family owns a block.
///  - muon: hidden 2-D weights (Muon/SOAP and their LITE variants);
///  - adam: generic AdamW-managed tensors, never accelerated;
///  - embedding, norm: AdamW-managed, accelerated by the elementwise LITE mask;
///  - output: AdamW-managed and always treated as all-sharp.
enum class Role { muon, adam, embedding, norm, output };

enum class Family { adamw, n_adamw, lion, mars, ademamix, muon, soap, muon_lite, soap_lite, momentum };

Role parse_role(const std::string& name);
Family parse_family(const std::string& name);
std::string to_string(Role role);
std::string to_string(Family family);
bool is_lite(Family family);

struct MatrixBlock {
    std::string name;
    DenseMatrix matrix;
    Role role = Role::adam;
};

struct LitePolicy {
    double chi = 1.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double r_s = 0.1;
    double d_smooth_ratio = 0.1;
    std::optional<double> chi_embedding;
    std::optional<double> chi_norm;
    // Damping pair for the elementwise (embedding/norm) blocks.
    double adam_beta1 = 0.0;
    double adam_beta2 = 0.0;

    /// Negative beta1 is allowed; only beta2 >= beta1 is enforced.
    void validate() const;
    double chi_for(Role role) const;
};

struct OptimizerConfig {
    Family family = Family::adamw;
    double theta = 0.95;
    double beta_v = 0.99;
    double theta_shampoo = 0.95;
    double epsilon = 1e-8;
    double weight_decay = 0.1;
    /// Values <= 0 disable clipping.
    double clip_norm = 1.0;
    double nesterov_beta = 0.0;
    double mars_gamma = 0.025;
    double ademamix_kappa = 2.0;
    double alpha_fast = 0.1;
    double alpha_slow = 1e-4;
    std::size_t qr_refresh_every = 10;
    polar::NsSchedule ns = polar::NsSchedule::polar_express();
    std::optional<LitePolicy> lite;

    void validate() const;
};

/// Per-block optimizer memory. Tensors stay empty until the first step of
/// the stepper that needs them.
struct BlockOptState {
    DenseMatrix m;
    DenseMatrix v;
    DenseMatrix prev_g;
    DenseMatrix m_slow;
    DenseMatrix gram_l;
    DenseMatrix gram_r;
    DenseMatrix q_l;
    DenseMatrix q_r;
    std::optional<polar::RankController> rank_ctrl;
    std::optional<subspace::SoapMaskController> mask_ctrl;
    std::size_t step = 0;
};

struct StepReport {
    double update_rms = 0.0;  // RMS of the lr-scaled direction, decay excluded
    double sharp_mass = 0.0;  // ‖P‖_F² or mask sum; 0 for non-LITE steppers
};

/// Sharp dimension ⌈ratio·count⌉, at least 1.
std::size_t sharp_dim(double ratio, std::size_t count);

/// Scales every gradient by threshold/norm when the joint norm exceeds
/// threshold. Returns the joint norm before scaling.
double clip_global_norm(std::vector<DenseMatrix>& grads, double threshold);

// Steppers apply w <- w·(1 - lr·λ) - step·dir and advance state.step.
StepReport step_adamw(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                      const OptimizerConfig& cfg);
StepReport step_n_adamw(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                        const OptimizerConfig& cfg);
StepReport step_lion(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg);
StepReport step_mars(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg);
StepReport step_ademamix(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                         const OptimizerConfig& cfg);
/// Plain heavy-ball form with gradient correction and identity metric:
/// m <- θm + g, w <- w - lr(m + β·g), β = cfg.nesterov_beta.
StepReport step_momentum(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                         const OptimizerConfig& cfg);
StepReport step_muon(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg);
StepReport step_soap(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg);
StepReport step_muon_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg);
StepReport step_soap_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg);
StepReport step_adam_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg);

/// Muon update scale 0.2·√max(rows, cols).
double muon_scale(const DenseMatrix& w);

struct RouteReport {
    double lr = 0.0;
    double grad_norm = 0.0;                    // joint norm before clipping
    std::map<std::string, StepReport> blocks;  // keyed by block name
};

/// Clips once across all blocks, then dispatches each block by
/// (cfg.family, role) in lexicographic name order. grads[i] belongs to
/// blocks[i]; states are created on first use.
RouteReport route_and_step(std::vector<MatrixBlock>& blocks, std::map<std::string, BlockOptState>& states,
                           std::vector<DenseMatrix> grads, std::size_t step, const ScheduleSpec& schedule,
                           const OptimizerConfig& cfg);

}  // namespace lite::optim

#endif  // LITE_OPTIM_HPP
