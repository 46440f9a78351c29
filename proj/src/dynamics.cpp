// SPDX-License-Identifier: Apache-2.0

#include "lite/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "lite/errors.hpp"

namespace lite::dynamics {

namespace {

void require_state(const DynamicsState& s, std::size_t dim) {
    if (s.w.size() != dim || s.m.size() != dim) throw ShapeError("dynamics: state length mismatch");
}

/// F⁻¹x, or x when the metric is the identity.
std::vector<double> apply_metric_inverse(const DenseMatrix& metric, std::vector<double> x) {
    if (metric.empty()) return x;
    return linalg::solve(metric, x);
}

void require_projector(const DenseMatrix& p, std::size_t dim) {
    if (p.rows() != dim || p.cols() != dim) throw ShapeError("lite_flow_rhs: projector shape mismatch");
    const double tol = 1e-8;
    if (!linalg::is_symmetric(p, tol)) throw ContractError("lite_flow_rhs: projector is not symmetric");
    if (linalg::max_abs(linalg::matmul(p, p) - p) > tol) {
        throw ContractError("lite_flow_rhs: projector is not idempotent");
    }
}

DynamicsState add_scaled(const DynamicsState& s, const StateRate& r, double h) {
    DynamicsState out = s;
    for (std::size_t i = 0; i < out.w.size(); ++i) {
        out.w[i] += h * r.w_dot[i];
        out.m[i] += h * r.m_dot[i];
    }
    out.t += h;
    return out;
}

/// State of the AdEMAMix flow, one entry per coordinate.
struct AdemamixState {
    std::vector<double> w;
    std::vector<double> fast;
    std::vector<double> slow;
};

struct AdemamixRates {
    std::vector<double> w;
    std::vector<double> fast;
    std::vector<double> slow;
};

AdemamixRates ademamix_rates(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                             const AdemamixState& s) {
    const std::size_t n = s.w.size();
    AdemamixRates r{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double g = spec.eigenvalues[i] * s.w[i] + spec.offsets[i];
        r.w[i] = -flow.eta * (s.fast[i] + flow.kappa * s.slow[i]);
        r.fast[i] = flow.alpha1 * (g - s.fast[i]);
        r.slow[i] = flow.alpha2 * (g - s.slow[i]);
    }
    return r;
}

AdemamixState ademamix_axpy(const AdemamixState& s, const AdemamixRates& r, double h) {
    AdemamixState out = s;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        out.w[i] += h * r.w[i];
        out.fast[i] += h * r.fast[i];
        out.slow[i] += h * r.slow[i];
    }
    return out;
}

AdemamixState ademamix_rk4(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow, const AdemamixState& s,
                           double h) {
    const auto k1 = ademamix_rates(spec, flow, s);
    const auto k2 = ademamix_rates(spec, flow, ademamix_axpy(s, k1, 0.5 * h));
    const auto k3 = ademamix_rates(spec, flow, ademamix_axpy(s, k2, 0.5 * h));
    const auto k4 = ademamix_rates(spec, flow, ademamix_axpy(s, k3, h));
    AdemamixState out = s;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        out.w[i] += h / 6.0 * (k1.w[i] + 2.0 * k2.w[i] + 2.0 * k3.w[i] + k4.w[i]);
        out.fast[i] += h / 6.0 * (k1.fast[i] + 2.0 * k2.fast[i] + 2.0 * k3.fast[i] + k4.fast[i]);
        out.slow[i] += h / 6.0 * (k1.slow[i] + 2.0 * k2.slow[i] + 2.0 * k3.slow[i] + k4.slow[i]);
    }
    return out;
}

/// Largest residual entry at state s; `third` selects the third-order
/// identity, otherwise the reduced second-order one.
double ademamix_residual_at(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow, const AdemamixState& s,
                            bool third) {
    const double a1 = flow.alpha1;
    const double a2 = flow.alpha2;
    const double k = flow.kappa;
    const double eta = flow.eta;
    const double c = ademamix_gradient_coefficient(flow);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.w.size(); ++i) {
        const double lam = spec.eigenvalues[i];
        const double g = lam * s.w[i] + spec.offsets[i];
        const double w1 = -eta * (s.fast[i] + k * s.slow[i]);
        const double f1 = a1 * (g - s.fast[i]);
        const double s1 = a2 * (g - s.slow[i]);
        const double g1 = lam * w1;
        const double w2 = -eta * (f1 + k * s1);
        double r;
        if (third) {
            const double f2 = a1 * (g1 - f1);
            const double s2 = a2 * (g1 - s1);
            const double w3 = -eta * (f2 + k * s2);
            r = w3 + (a1 + a2) * w2 + a1 * a2 * w1 + eta * (a1 + k * a2) * lam * w1 + c * g;
        } else {
            r = w2 + a1 * w1 + eta * a1 * g;
        }
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double ademamix_residual_path(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                              const std::vector<double>& w0, double t_end, double h, bool third) {
    spec.validate();
    if (w0.size() != spec.eigenvalues.size()) throw ShapeError("ademamix residual: w0 length mismatch");
    if (!(h > 0.0) || !(t_end >= 0.0)) throw ContractError("ademamix residual: need h > 0 and t_end >= 0");
    const std::size_t n = w0.size();
    AdemamixState s{w0, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    double worst = ademamix_residual_at(spec, flow, s, third);
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) {
        s = ademamix_rk4(spec, flow, s, h);
        worst = std::max(worst, ademamix_residual_at(spec, flow, s, third));
    }
    return worst;
}

}  // namespace

void FlowParams::validate(std::size_t dim) const {
    if (!(alpha >= 0.0)) throw ContractError("flow: alpha must be non-negative");
    if (!eta_of_t) throw ContractError("flow: eta_of_t is not set");
    if (!metric.empty()) {
        if (metric.rows() != dim || metric.cols() != dim) throw ShapeError("flow: metric shape mismatch");
        if (!linalg::is_symmetric(metric, 1e-12 * std::max(1.0, linalg::max_abs(metric)))) {
            throw ContractError("flow: metric must be symmetric");
        }
    }
}

StateRate first_order_rhs(const DynamicsState& state, const landscapes::Landscape& landscape,
                          const FlowParams& params) {
    const std::size_t n = landscape.dim();
    require_state(state, n);
    params.validate(n);
    const auto g = landscape.grad(state.w);
    const double eta = params.eta_of_t(state.t);
    std::vector<double> drive(n);
    StateRate r{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        drive[i] = state.m[i] + params.beta * g[i];
        r.m_dot[i] = -params.alpha * state.m[i] + g[i];
    }
    drive = apply_metric_inverse(params.metric, std::move(drive));
    for (std::size_t i = 0; i < n; ++i) r.w_dot[i] = -eta * drive[i];
    return r;
}

StateRate lite_flow_rhs(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params) {
    const std::size_t n = landscape.dim();
    require_state(state, n);
    params.validate(n);
    if (!params.projector) throw ContractError("lite_flow_rhs: projector is not set");
    const DenseMatrix p = params.projector(state.w);
    require_projector(p, n);

    const auto g = landscape.grad(state.w);
    const double eta = params.eta_of_t(state.t);
    std::vector<double> sharp(n);
    std::vector<double> flat(n);
    StateRate r{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) {
        sharp[i] = state.m[i] + params.beta * g[i];
        flat[i] = state.m[i] + params.beta2 * g[i];
        r.m_dot[i] = -params.alpha * state.m[i] + g[i];
    }
    const auto p_sharp = linalg::matvec(p, sharp);
    const auto p_flat = linalg::matvec(p, flat);
    std::vector<double> drive(n);
    for (std::size_t i = 0; i < n; ++i) drive[i] = p_sharp[i] + params.chi * (flat[i] - p_flat[i]);
    drive = apply_metric_inverse(params.metric, std::move(drive));
    for (std::size_t i = 0; i < n; ++i) r.w_dot[i] = -eta * drive[i];
    return r;
}

StateRate flow_rhs(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params,
                   FlowKind kind) {
    return kind == FlowKind::lite ? lite_flow_rhs(state, landscape, params)
                                  : first_order_rhs(state, landscape, params);
}

DynamicsState semi_implicit_step(const DynamicsState& state, const landscapes::Landscape& landscape,
                                 const FlowParams& params, double h, FlowKind kind) {
    if (!(h > 0.0)) throw ContractError("semi_implicit_step: h must be positive");
    const std::size_t n = landscape.dim();
    require_state(state, n);
    params.validate(n);
    const auto g = landscape.grad(state.w);
    const double eta = params.eta_of_t(state.t);

    DynamicsState next = state;
    const double keep = 1.0 - h * params.alpha;
    for (std::size_t i = 0; i < n; ++i) next.m[i] = keep * state.m[i] + h * g[i];

    std::vector<double> drive(n);
    if (kind == FlowKind::lite) {
        if (!params.projector) throw ContractError("semi_implicit_step: projector is not set");
        const DenseMatrix p = params.projector(state.w);
        require_projector(p, n);
        std::vector<double> sharp(n);
        std::vector<double> flat(n);
        for (std::size_t i = 0; i < n; ++i) {
            sharp[i] = next.m[i] + params.beta * g[i];
            flat[i] = next.m[i] + params.beta2 * g[i];
        }
        const auto p_sharp = linalg::matvec(p, sharp);
        const auto p_flat = linalg::matvec(p, flat);
        for (std::size_t i = 0; i < n; ++i) drive[i] = p_sharp[i] + params.chi * (flat[i] - p_flat[i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) drive[i] = next.m[i] + params.beta * g[i];
    }
    drive = apply_metric_inverse(params.metric, std::move(drive));
    const double step = h * eta;
    for (std::size_t i = 0; i < n; ++i) next.w[i] = state.w[i] - step * drive[i];
    next.t = state.t + h;
    return next;
}

DynamicsState rk4_step(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params,
                       double h, FlowKind kind) {
    if (!(h > 0.0)) throw ContractError("rk4_step: h must be positive");
    const auto k1 = flow_rhs(state, landscape, params, kind);
    const auto k2 = flow_rhs(add_scaled(state, k1, 0.5 * h), landscape, params, kind);
    const auto k3 = flow_rhs(add_scaled(state, k2, 0.5 * h), landscape, params, kind);
    const auto k4 = flow_rhs(add_scaled(state, k3, h), landscape, params, kind);
    DynamicsState next = state;
    for (std::size_t i = 0; i < next.w.size(); ++i) {
        next.w[i] += h / 6.0 * (k1.w_dot[i] + 2.0 * k2.w_dot[i] + 2.0 * k3.w_dot[i] + k4.w_dot[i]);
        next.m[i] += h / 6.0 * (k1.m_dot[i] + 2.0 * k2.m_dot[i] + 2.0 * k3.m_dot[i] + k4.m_dot[i]);
    }
    next.t = state.t + h;
    return next;
}

DynamicsState integrate_rk4(DynamicsState state, const landscapes::Landscape& landscape, const FlowParams& params,
                            double t_end, double h, FlowKind kind) {
    if (!(h > 0.0)) throw ContractError("integrate_rk4: h must be positive");
    const double t0 = state.t;
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - t0) / h - 1e-9));
    for (std::size_t k = 0; k < steps; ++k) {
        const double remaining = t_end - state.t;
        state = rk4_step(state, landscape, params, std::min(h, remaining), kind);
    }
    state.t = std::max(state.t, t_end);
    return state;
}

std::vector<double> ishd_acceleration(std::span<const double> w, std::span<const double> w_dot,
                                      const landscapes::Landscape& landscape, double alpha_t, double beta_t,
                                      double gamma_t) {
    const auto g = landscape.grad(w);
    const auto hv = landscape.hvp(w, w_dot);
    std::vector<double> acc(w.size());
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = -alpha_t * w_dot[i] - beta_t * hv[i] - gamma_t * g[i];
    return acc;
}

NesterovTrace nesterov_forms_trace(const quadratic::QuadraticSpec& spec, double alpha, double eta, std::size_t steps,
                                   const std::vector<double>& w0) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ContractError("nesterov_forms_trace: alpha must lie in (0, 1)");
    const landscapes::QuadraticLandscape land(spec);
    if (w0.size() != land.dim()) throw ShapeError("nesterov_forms_trace: w0 length mismatch");
    const std::size_t n = w0.size();

    NesterovTrace trace;
    // x/w form.
    std::vector<double> w = w0;
    std::vector<double> x_prev = w0;
    trace.traj_a.push_back(w);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto g = land.grad(w);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = w[i] - eta * g[i];
            w[i] = x[i] + (1.0 - alpha) * (x[i] - x_prev[i]);
        }
        x_prev = std::move(x);
        trace.traj_a.push_back(w);
    }

    // Momentum form.
    const double eta1 = eta * (1.0 - alpha);
    const double beta = 1.0 / (1.0 - alpha);
    w = w0;
    std::vector<double> m(n, 0.0);
    trace.traj_b.push_back(w);
    for (std::size_t k = 0; k < steps; ++k) {
        const auto g = land.grad(w);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = (1.0 - alpha) * m[i] + g[i];
            w[i] -= eta1 * (m[i] + beta * g[i]);
        }
        trace.traj_b.push_back(w);
    }

    for (std::size_t k = 0; k <= steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            trace.max_gap = std::max(trace.max_gap, std::abs(trace.traj_a[k][i] - trace.traj_b[k][i]));
        }
    }
    return trace;
}

double ademamix_gradient_coefficient(const AdemamixFlow& flow) {
    if (flow.gradient_coefficient == AdemamixCoefficient::printed) {
        return flow.eta * (1.0 + flow.alpha1 * flow.alpha2);
    }
    return flow.eta * flow.alpha1 * flow.alpha2 * (1.0 + flow.kappa);
}

double ademamix_ode_residual(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                             const std::vector<double>& w0, double t_end, double h) {
    return ademamix_residual_path(spec, flow, w0, t_end, h, true);
}

double ademamix_reduced_residual(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                                 const std::vector<double>& w0, double t_end, double h) {
    AdemamixFlow reduced = flow;
    reduced.kappa = 0.0;
    return ademamix_residual_path(spec, reduced, w0, t_end, h, false);
}

ConsistencyReport discretization_consistency(const DynamicsState& start, const landscapes::Landscape& landscape,
                                             const FlowParams& params, double t_end, int k_min, int k_max,
                                             FlowKind kind) {
    if (k_min > k_max || k_min < 0) throw ContractError("discretization_consistency: bad refinement range");
    if (!(t_end > start.t)) throw ContractError("discretization_consistency: t_end must exceed the start time");
    const DynamicsState ref = integrate_rk4(start, landscape, params, t_end, 1e-3, kind);

    ConsistencyReport report;
    for (int k = k_min; k <= k_max; ++k) {
        const double h = std::ldexp(1.0, -k);
        const auto steps = static_cast<std::size_t>(std::llround((t_end - start.t) / h));
        if (std::abs(static_cast<double>(steps) * h - (t_end - start.t)) > 1e-12 * std::max(1.0, t_end)) {
            throw ContractError("discretization_consistency: horizon is not a multiple of 2^-k");
        }
        DynamicsState s = start;
        for (std::size_t i = 0; i < steps; ++i) s = semi_implicit_step(s, landscape, params, h, kind);
        double sq = 0.0;
        for (std::size_t i = 0; i < s.w.size(); ++i) sq += (s.w[i] - ref.w[i]) * (s.w[i] - ref.w[i]);
        report.h.push_back(h);
        report.error.push_back(std::sqrt(sq));
    }

    const std::size_t n = report.h.size();
    if (n >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::log(report.h[i]);
            const double y = std::log(report.error[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double dn = static_cast<double>(n);
        report.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    }
    return report;
}

}  // namespace lite::dynamics
