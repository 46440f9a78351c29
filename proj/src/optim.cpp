// SPDX-License-Identifier: Apache-2.0

#include "lite/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace lite::optim {
namespace {

void ensure(DenseMatrix& x, std::size_t rows, std::size_t cols) {
    if (x.empty()) x = DenseMatrix(rows, cols);
}

void require_same_shape(const MatrixBlock& block, const DenseMatrix& g) {
    if (!block.matrix.same_shape(g)) throw ShapeError("gradient shape does not match block '" + block.name + "'");
}

/// w <- w·(1 - lr·λ) - step·dir. Returns RMS of step·dir.
double apply_update(DenseMatrix& w, const DenseMatrix& dir, double step, double lr, const OptimizerConfig& cfg) {
    const double keep = 1.0 - lr * cfg.weight_decay;
    auto wd = w.data();
    auto dd = dir.data();
    double sq = 0.0;
    for (std::size_t i = 0; i < wd.size(); ++i) {
        const double delta = step * dd[i];
        wd[i] = wd[i] * keep - delta;
        sq += delta * delta;
    }
    return wd.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(wd.size()));
}

void adam_moments(BlockOptState& s, const DenseMatrix& g, double theta, const OptimizerConfig& cfg) {
    ensure(s.m, g.rows(), g.cols());
    ensure(s.v, g.rows(), g.cols());
    auto m = s.m.data();
    auto v = s.v.data();
    auto gd = g.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        m[i] = theta * m[i] + (1.0 - theta) * gd[i];
        v[i] = cfg.beta_v * v[i] + (1.0 - cfg.beta_v) * gd[i] * gd[i];
    }
}

DenseMatrix denominator(const DenseMatrix& v, double eps) {
    DenseMatrix d(v.rows(), v.cols());
    auto vd = v.data();
    auto dd = d.data();
    for (std::size_t i = 0; i < vd.size(); ++i) dd[i] = std::sqrt(vd[i]) + eps;
    return d;
}

DenseMatrix divide(const DenseMatrix& num, const DenseMatrix& den) {
    DenseMatrix out(num.rows(), num.cols());
    auto nd = num.data();
    auto dd = den.data();
    auto od = out.data();
    for (std::size_t i = 0; i < nd.size(); ++i) od[i] = nd[i] / dd[i];
    return out;
}

const LitePolicy& require_policy(const OptimizerConfig& cfg, const char* who) {
    if (!cfg.lite) throw ConfigError(std::string(who) + " requires a lite policy");
    return *cfg.lite;
}

/// m <- θm + g; returns θm + g with the new m.
DenseMatrix muon_momentum(BlockOptState& s, const DenseMatrix& g, const OptimizerConfig& cfg) {
    ensure(s.m, g.rows(), g.cols());
    DenseMatrix u(g.rows(), g.cols());
    auto m = s.m.data();
    auto gd = g.data();
    auto ud = u.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        m[i] = cfg.theta * m[i] + gd[i];
        ud[i] = cfg.theta * m[i] + gd[i];
    }
    return u;
}

struct SoapTerms {
    DenseMatrix g_rot;
    DenseMatrix m_rot;
    DenseMatrix denom;
};

SoapTerms soap_moments(BlockOptState& s, const DenseMatrix& g, const OptimizerConfig& cfg, bool rotate) {
    const std::size_t rows = g.rows();
    const std::size_t cols = g.cols();
    if (rotate) {
        if (s.q_l.empty()) s.q_l = DenseMatrix::identity(rows);
        if (s.q_r.empty()) s.q_r = DenseMatrix::identity(cols);
        ensure(s.gram_l, rows, rows);
        ensure(s.gram_r, cols, cols);
    }
    ensure(s.m, rows, cols);
    ensure(s.v, rows, cols);

    SoapTerms t;
    t.g_rot = rotate ? linalg::matmul(linalg::matmul_tn(s.q_l, g), s.q_r) : g;
    auto m = s.m.data();
    auto v = s.v.data();
    auto gd = g.data();
    auto gr = t.g_rot.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        m[i] = cfg.theta * m[i] + (1.0 - cfg.theta) * gd[i];
        v[i] = cfg.beta_v * v[i] + (1.0 - cfg.beta_v) * gr[i] * gr[i];
    }
    t.m_rot = rotate ? linalg::matmul(linalg::matmul_tn(s.q_l, s.m), s.q_r) : s.m;
    t.denom = denominator(s.v, cfg.epsilon);
    return t;
}

DenseMatrix soap_unrotate(const BlockOptState& s, const DenseMatrix& inner, bool rotate) {
    if (!rotate) return inner;
    return linalg::matmul_nt(linalg::matmul(s.q_l, inner), s.q_r);
}

void soap_refresh(BlockOptState& s, const DenseMatrix& g, const OptimizerConfig& cfg) {
    const double th = cfg.theta_shampoo;
    DenseMatrix ggt = linalg::matmul_nt(g, g);
    DenseMatrix gtg = linalg::matmul_tn(g, g);
    s.gram_l *= th;
    ggt *= 1.0 - th;
    s.gram_l += ggt;
    s.gram_r *= th;
    gtg *= 1.0 - th;
    s.gram_r += gtg;
    if (s.step % cfg.qr_refresh_every == 0) {
        s.q_l = linalg::qr_decompose(linalg::matmul(s.gram_l, s.q_l)).q;
        s.q_r = linalg::qr_decompose(linalg::matmul(s.gram_r, s.q_r)).q;
    }
}

struct MaskedTerms {
    DenseMatrix inner;
    double sharp_mass = 0.0;
};

/// Elementwise LITE direction in the rotated frame:
/// base + (χ-1)·Q⊙base + (β₁P + χβ₂Q)⊙G_rot/(√V+ε), with base = M_rot/(√V+ε).
MaskedTerms lite_masked_direction(BlockOptState& s, const SoapTerms& t, double chi, double beta1, double beta2,
                                  const LitePolicy& policy) {
    const std::size_t count = t.g_rot.size();
    if (!s.mask_ctrl) {
        subspace::SoapMaskController ctrl;
        ctrl.d_s = sharp_dim(policy.r_s, count);
        ctrl.d_smooth = static_cast<std::size_t>(std::ceil(policy.d_smooth_ratio * static_cast<double>(count) - 1e-9));
        s.mask_ctrl = ctrl;
    }
    const DenseMatrix p = subspace::smoothed_sharp_mask(s.v, *s.mask_ctrl);
    const auto thr = subspace::mask_thresholds(s.v, *s.mask_ctrl);
    s.mask_ctrl = subspace::update_soap_controller(*s.mask_ctrl, subspace::count_above(s.v, thr.tau_s),
                                                   subspace::count_above(s.v, thr.tau_smooth));

    MaskedTerms out{divide(t.m_rot, t.denom), 0.0};
    auto pd = p.data();
    for (double x : pd) out.sharp_mass += x;

    auto id = out.inner.data();
    if (chi != 1.0) {
        for (std::size_t i = 0; i < id.size(); ++i) id[i] += (chi - 1.0) * (1.0 - pd[i]) * id[i];
    }
    if (beta1 != 0.0 || beta2 != 0.0) {
        auto gr = t.g_rot.data();
        auto dd = t.denom.data();
        for (std::size_t i = 0; i < id.size(); ++i) {
            const double coef = beta1 * pd[i] + chi * beta2 * (1.0 - pd[i]);
            id[i] += coef * gr[i] / dd[i];
        }
    }
    return out;
}

}  // namespace

Role parse_role(const std::string& name) {
    if (name == "muon") return Role::muon;
    if (name == "adam") return Role::adam;
    if (name == "embedding") return Role::embedding;
    if (name == "norm") return Role::norm;
    if (name == "output") return Role::output;
    throw ConfigError("unknown block role '" + name + "'");
}

Family parse_family(const std::string& name) {
    static const std::map<std::string, Family> table{
        {"adamw", Family::adamw},       {"n_adamw", Family::n_adamw},     {"lion", Family::lion},
        {"mars", Family::mars},         {"ademamix", Family::ademamix},   {"muon", Family::muon},
        {"soap", Family::soap},         {"muon_lite", Family::muon_lite}, {"soap_lite", Family::soap_lite},
        {"momentum", Family::momentum},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown optimizer family '" + name + "'");
    return it->second;
}

std::string to_string(Role role) {
    switch (role) {
        case Role::muon: return "muon";
        case Role::adam: return "adam";
        case Role::embedding: return "embedding";
        case Role::norm: return "norm";
        case Role::output: return "output";
    }
    return "adam";
}

std::string to_string(Family family) {
    switch (family) {
        case Family::adamw: return "adamw";
        case Family::n_adamw: return "n_adamw";
        case Family::lion: return "lion";
        case Family::mars: return "mars";
        case Family::ademamix: return "ademamix";
        case Family::muon: return "muon";
        case Family::soap: return "soap";
        case Family::muon_lite: return "muon_lite";
        case Family::soap_lite: return "soap_lite";
        case Family::momentum: return "momentum";
    }
    return "adamw";
}

bool is_lite(Family family) { return family == Family::muon_lite || family == Family::soap_lite; }

void LitePolicy::validate() const {
    if (!(chi >= 1.0)) throw ConfigError("lite.chi must be >= 1");
    if (!(beta2 >= beta1)) throw ConfigError("beta2 must be ≥ beta1");
    if (!(adam_beta2 >= adam_beta1)) throw ConfigError("adam_beta2 must be ≥ adam_beta1");
    if (!(r_s > 0.0 && r_s <= 1.0)) throw ConfigError("lite.r_s must lie in (0, 1]");
    if (!(d_smooth_ratio >= 0.0 && d_smooth_ratio < 1.0)) throw ConfigError("lite.d_smooth_ratio must lie in [0, 1)");
    if (chi_embedding && !(*chi_embedding >= 1.0)) throw ConfigError("lite.chi_embedding must be >= 1");
    if (chi_norm && !(*chi_norm >= 1.0)) throw ConfigError("lite.chi_norm must be >= 1");
}

double LitePolicy::chi_for(Role role) const {
    if (role == Role::embedding && chi_embedding) return *chi_embedding;
    if (role == Role::norm && chi_norm) return *chi_norm;
    return chi;
}

void OptimizerConfig::validate() const {
    const auto unit = [](double x) { return x >= 0.0 && x < 1.0; };
    if (!unit(theta)) throw ConfigError("optimizer.theta must lie in [0, 1)");
    if (!unit(beta_v)) throw ConfigError("optimizer.beta_v must lie in [0, 1)");
    if (!unit(theta_shampoo)) throw ConfigError("optimizer.theta_shampoo must lie in [0, 1)");
    if (!(epsilon >= 0.0)) throw ConfigError("optimizer.epsilon must be >= 0");
    if (!(weight_decay >= 0.0)) throw ConfigError("optimizer.weight_decay must be >= 0");
    if (family == Family::mars && mars_gamma == 1.0) throw ConfigError("optimizer.mars_gamma must differ from 1");
    if (!(alpha_fast > 0.0 && alpha_fast <= 1.0)) throw ConfigError("optimizer.alpha_fast must lie in (0, 1]");
    if (!(alpha_slow > 0.0 && alpha_slow <= 1.0)) throw ConfigError("optimizer.alpha_slow must lie in (0, 1]");
    if (qr_refresh_every == 0) throw ConfigError("optimizer.qr_refresh_every must be positive");
    try {
        ns.validate();
    } catch (const ContractError& e) {
        throw ConfigError(e.what());
    }
    if (is_lite(family) && !lite) throw ConfigError(to_string(family) + " requires a lite policy");
    if (!is_lite(family) && lite) throw ConfigError("lite policy requires a lite family");
    if (lite) lite->validate();
}

std::size_t sharp_dim(double ratio, std::size_t count) {
    const double raw = std::ceil(ratio * static_cast<double>(count) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::max(raw, 0.0)));
}

double clip_global_norm(std::vector<DenseMatrix>& grads, double threshold) {
    if (!(threshold > 0.0)) throw ContractError("clip_global_norm: threshold must be positive");
    double sq = 0.0;
    for (const auto& g : grads)
        for (double x : g.data()) sq += x * x;
    const double norm = std::sqrt(sq);
    if (norm > threshold) {
        const double scale = threshold / norm;
        for (auto& g : grads) g *= scale;
    }
    return norm;
}

double muon_scale(const DenseMatrix& w) {
    return 0.2 * std::sqrt(static_cast<double>(std::max(w.rows(), w.cols())));
}

StepReport step_adamw(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                      const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    adam_moments(state, g, cfg.theta, cfg);
    const DenseMatrix dir = divide(state.m, denominator(state.v, cfg.epsilon));
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_n_adamw(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                        const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    adam_moments(state, g, cfg.theta, cfg);
    DenseMatrix num = state.m;
    if (cfg.nesterov_beta != 0.0) {
        DenseMatrix corr = g;
        corr *= cfg.nesterov_beta;
        num += corr;
    }
    const DenseMatrix dir = divide(num, denominator(state.v, cfg.epsilon));
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_lion(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    ensure(state.m, g.rows(), g.cols());
    DenseMatrix dir(g.rows(), g.cols());
    auto m = state.m.data();
    auto gd = g.data();
    auto dd = dir.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        const double u = cfg.theta * m[i] + (1.0 - cfg.theta) * gd[i];
        dd[i] = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
        m[i] = cfg.beta_v * m[i] + (1.0 - cfg.beta_v) * gd[i];
    }
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_mars(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    if (cfg.mars_gamma == 1.0) throw ConfigError("optimizer.mars_gamma must differ from 1");
    ++state.step;
    ensure(state.prev_g, g.rows(), g.cols());
    const double coef = cfg.mars_gamma * cfg.theta / (1.0 - cfg.theta);
    DenseMatrix c(g.rows(), g.cols());
    auto gd = g.data();
    auto pd = state.prev_g.data();
    auto cd = c.data();
    for (std::size_t i = 0; i < gd.size(); ++i) cd[i] = gd[i] + coef * (gd[i] - pd[i]);
    state.prev_g = g;
    adam_moments(state, c, cfg.theta, cfg);
    const DenseMatrix dir = divide(state.m, denominator(state.v, cfg.epsilon));
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_ademamix(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                         const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    ensure(state.m, g.rows(), g.cols());
    ensure(state.m_slow, g.rows(), g.cols());
    ensure(state.v, g.rows(), g.cols());
    const double a1 = cfg.alpha_fast;
    const double a2 = cfg.alpha_slow;
    DenseMatrix dir(g.rows(), g.cols());
    auto mf = state.m.data();
    auto ms = state.m_slow.data();
    auto v = state.v.data();
    auto gd = g.data();
    auto dd = dir.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        mf[i] = (1.0 - a1) * mf[i] + a1 * gd[i];
        ms[i] = (1.0 - a2) * ms[i] + a2 * gd[i];
        v[i] = cfg.beta_v * v[i] + (1.0 - cfg.beta_v) * gd[i] * gd[i];
        dd[i] = (mf[i] + cfg.ademamix_kappa * ms[i]) / (std::sqrt(v[i]) + cfg.epsilon);
    }
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_momentum(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                         const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    ensure(state.m, g.rows(), g.cols());
    DenseMatrix dir(g.rows(), g.cols());
    auto m = state.m.data();
    auto gd = g.data();
    auto dd = dir.data();
    for (std::size_t i = 0; i < gd.size(); ++i) {
        m[i] = cfg.theta * m[i] + gd[i];
        dd[i] = m[i] + cfg.nesterov_beta * gd[i];
    }
    return {apply_update(block.matrix, dir, lr, lr, cfg), 0.0};
}

StepReport step_muon(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    const DenseMatrix u = muon_momentum(state, g, cfg);
    const DenseMatrix dir = polar::ns_polar(u, cfg.ns);
    return {apply_update(block.matrix, dir, muon_scale(block.matrix) * lr, lr, cfg), 0.0};
}

StepReport step_muon_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    const LitePolicy& policy = require_policy(cfg, "muon_lite");
    ++state.step;
    // θM + G is a positive multiple of M + G/θ; NS and τ are scale-free.
    const DenseMatrix u = muon_momentum(state, g, cfg);
    const bool wide = u.rows() < u.cols();
    const DenseMatrix u_t = wide ? u.transposed() : u;
    const std::size_t n = u_t.cols();
    if (!state.rank_ctrl) {
        state.rank_ctrl = polar::RankController{1.0 / std::sqrt(static_cast<double>(n)), sharp_dim(policy.r_s, n)};
    }

    const auto proj = polar::composite_sharp_projection(u_t, *state.rank_ctrl, cfg.ns);
    const double chi = policy.chi_for(Role::muon);
    DenseMatrix dir = proj.polar;
    DenseMatrix flat;
    if (chi != 1.0 || policy.beta2 != 0.0) flat = DenseMatrix::identity(n) - proj.projector;
    if (chi != 1.0) {
        DenseMatrix extra = linalg::matmul(proj.polar, flat);
        extra *= chi - 1.0;
        dir += extra;
    }
    if (policy.beta1 != 0.0 || policy.beta2 != 0.0) {
        const DenseMatrix g_t = wide ? g.transposed() : g;
        DenseMatrix coef = proj.projector;
        coef *= policy.beta1;
        if (policy.beta2 != 0.0) {
            DenseMatrix f = flat;
            f *= chi * policy.beta2;
            coef += f;
        }
        dir += linalg::matmul(polar::ns_polar(g_t, cfg.ns), coef);
    }
    if (wide) dir = dir.transposed();

    const double p_frob = linalg::frobenius_norm(proj.projector);
    state.rank_ctrl = polar::update_rank_controller(*state.rank_ctrl, p_frob);
    return {apply_update(block.matrix, dir, muon_scale(block.matrix) * lr, lr, cfg), p_frob * p_frob};
}

StepReport step_soap(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                     const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    ++state.step;
    const SoapTerms t = soap_moments(state, g, cfg, true);
    const DenseMatrix dir = soap_unrotate(state, divide(t.m_rot, t.denom), true);
    const double rms = apply_update(block.matrix, dir, lr, lr, cfg);
    soap_refresh(state, g, cfg);
    return {rms, 0.0};
}

StepReport step_soap_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    const LitePolicy& policy = require_policy(cfg, "soap_lite");
    ++state.step;
    const SoapTerms t = soap_moments(state, g, cfg, true);
    const auto masked = lite_masked_direction(state, t, policy.chi_for(Role::muon), policy.beta1, policy.beta2, policy);
    const DenseMatrix dir = soap_unrotate(state, masked.inner, true);
    const double rms = apply_update(block.matrix, dir, lr, lr, cfg);
    soap_refresh(state, g, cfg);
    return {rms, masked.sharp_mass};
}

StepReport step_adam_lite(MatrixBlock& block, BlockOptState& state, const DenseMatrix& g, double lr,
                          const OptimizerConfig& cfg) {
    require_same_shape(block, g);
    const LitePolicy& policy = require_policy(cfg, "adam_lite");
    if (block.role == Role::output) throw ContractError("adam_lite: output blocks are excluded from acceleration");
    ++state.step;
    const SoapTerms t = soap_moments(state, g, cfg, false);
    const auto masked =
        lite_masked_direction(state, t, policy.chi_for(block.role), policy.adam_beta1, policy.adam_beta2, policy);
    return {apply_update(block.matrix, masked.inner, lr, lr, cfg), masked.sharp_mass};
}

RouteReport route_and_step(std::vector<MatrixBlock>& blocks, std::map<std::string, BlockOptState>& states,
                           std::vector<DenseMatrix> grads, std::size_t step, const ScheduleSpec& schedule,
                           const OptimizerConfig& cfg) {
    if (blocks.size() != grads.size()) throw ShapeError("route_and_step: blocks and gradients differ in count");
    if (is_lite(cfg.family) && !cfg.lite) throw ConfigError(to_string(cfg.family) + " requires a lite policy");

    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return blocks[a].name < blocks[b].name; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (blocks[order[i]].name == blocks[order[i - 1]].name) {
            throw ConfigError("duplicate block name '" + blocks[order[i]].name + "'");
        }
    }

    std::vector<DenseMatrix> sorted;
    sorted.reserve(grads.size());
    for (std::size_t idx : order) sorted.push_back(std::move(grads[idx]));

    RouteReport report;
    report.lr = lr_at(schedule, step);
    if (cfg.clip_norm > 0.0) {
        report.grad_norm = clip_global_norm(sorted, cfg.clip_norm);
    } else {
        double sq = 0.0;
        for (const auto& g : sorted)
            for (double x : g.data()) sq += x * x;
        report.grad_norm = std::sqrt(sq);
    }

    for (std::size_t k = 0; k < order.size(); ++k) {
        MatrixBlock& block = blocks[order[k]];
        BlockOptState& state = states[block.name];
        const DenseMatrix& g = sorted[k];
        const double lr = report.lr;
        StepReport r;
        const bool hidden = block.role == Role::muon;
        const bool accelerated_aux = block.role == Role::embedding || block.role == Role::norm;
        switch (cfg.family) {
            case Family::adamw: r = step_adamw(block, state, g, lr, cfg); break;
            case Family::n_adamw: r = step_n_adamw(block, state, g, lr, cfg); break;
            case Family::lion: r = step_lion(block, state, g, lr, cfg); break;
            case Family::mars: r = step_mars(block, state, g, lr, cfg); break;
            case Family::ademamix: r = step_ademamix(block, state, g, lr, cfg); break;
            case Family::momentum: r = step_momentum(block, state, g, lr, cfg); break;
            case Family::muon:
                r = hidden ? step_muon(block, state, g, lr, cfg) : step_adamw(block, state, g, lr, cfg);
                break;
            case Family::soap:
                r = hidden ? step_soap(block, state, g, lr, cfg) : step_adamw(block, state, g, lr, cfg);
                break;
            case Family::muon_lite:
                r = hidden            ? step_muon_lite(block, state, g, lr, cfg)
                    : accelerated_aux ? step_adam_lite(block, state, g, lr, cfg)
                                      : step_adamw(block, state, g, lr, cfg);
                break;
            case Family::soap_lite:
                r = hidden            ? step_soap_lite(block, state, g, lr, cfg)
                    : accelerated_aux ? step_adam_lite(block, state, g, lr, cfg)
                                      : step_adamw(block, state, g, lr, cfg);
                break;
        }
        report.blocks[block.name] = r;
    }
    return report;
}

}  // namespace lite::optim
