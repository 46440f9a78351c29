// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_DYNAMICS_HPP
#define LITE_DYNAMICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lite/landscapes.hpp"
#include "lite/linalg.hpp"
#include "lite/quadratic.hpp"

namespace lite::dynamics {

using linalg::DenseMatrix;

struct DynamicsState {
    std::vector<double> w;
    std::vector<double> m;
    double t = 0.0;
};

/// Coefficients of the first-order system
///   ẇ = -η(t) F⁻¹ (m + β∇f(w)),  ṁ = -αm + ∇f(w)
/// and of its LITE variant, where β is the sharp coefficient β₁.
struct FlowParams {
    double alpha = 0.0;
    double beta = 0.0;   // β, or β₁ for the LITE flow
    double beta2 = 0.0;  // flat coefficient, LITE flow only
    double chi = 1.0;
    std::function<double(double)> eta_of_t = [](double) { return 0.1; };
    /// Sharp projector P(w) for the LITE flow.
    std::function<DenseMatrix(std::span<const double>)> projector;
    /// Constant SPD metric F; empty means the identity.
    DenseMatrix metric;

    void validate(std::size_t dim) const;
};

enum class FlowKind { first_order, lite };

struct StateRate {
    std::vector<double> w_dot;
    std::vector<double> m_dot;
};

StateRate first_order_rhs(const DynamicsState& state, const landscapes::Landscape& landscape,
                          const FlowParams& params);

/// ẇ = -ηF⁻¹P(m + β₁∇f) - χηF⁻¹(I - P)(m + β₂∇f). The projector must be
/// symmetric and idempotent within 1e-8.
StateRate lite_flow_rhs(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params);

StateRate flow_rhs(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params,
                   FlowKind kind);

/// m ← (1 - hα)m + h∇f(w), then w ← w + h·ẇ with ẇ evaluated from the new
/// m and the gradient at the old w. At h = 1 this is the discrete momentum
/// step m ← (1-α)m + g, w ← w - η(m + βg).
DynamicsState semi_implicit_step(const DynamicsState& state, const landscapes::Landscape& landscape,
                                 const FlowParams& params, double h, FlowKind kind = FlowKind::first_order);

/// One classical fourth-order Runge–Kutta step of the continuous flow.
DynamicsState rk4_step(const DynamicsState& state, const landscapes::Landscape& landscape, const FlowParams& params,
                       double h, FlowKind kind = FlowKind::first_order);

/// Integrates to `t_end` with steps of at most h (the last one is shortened).
DynamicsState integrate_rk4(DynamicsState state, const landscapes::Landscape& landscape, const FlowParams& params,
                            double t_end, double h = 1e-3, FlowKind kind = FlowKind::first_order);

/// ẅ = -α_t ẇ - β_t ∇²f(w)ẇ - γ_t ∇f(w).
std::vector<double> ishd_acceleration(std::span<const double> w, std::span<const double> w_dot,
                                      const landscapes::Landscape& landscape, double alpha_t, double beta_t,
                                      double gamma_t);

struct NesterovTrace {
    std::vector<std::vector<double>> traj_a;  // x/w form, w_k
    std::vector<std::vector<double>> traj_b;  // momentum form with η₁ = η(1-α), β = 1/(1-α)
    double max_gap = 0.0;
};

/// Iterates x_k = w_{k-1} - η∇f(w_{k-1}), w_k = x_k + (1-α)(x_k - x_{k-1})
/// from x_0 = w_0, and m_k = (1-α)m_{k-1} + ∇f(w_k),
/// w_{k+1} = w_k - η₁(m_k + β∇f(w_k)) from m_{-1} = 0.
NesterovTrace nesterov_forms_trace(const quadratic::QuadraticSpec& spec, double alpha, double eta, std::size_t steps,
                                   const std::vector<double>& w0);

enum class AdemamixCoefficient { derived, printed };

struct AdemamixFlow {
    double alpha1 = 0.1;
    double alpha2 = 1e-3;
    double kappa = 2.0;
    double eta = 0.1;
    AdemamixCoefficient gradient_coefficient = AdemamixCoefficient::derived;
};

/// Gradient coefficient of the third-order identity: ηα₁α₂(1+κ) when
/// derived from the flow, η(1+α₁α₂) for the printed form.
double ademamix_gradient_coefficient(const AdemamixFlow& flow);

/// Integrates ẇ = -η(m_f + κm_s), ṁ_f = α₁(∇f - m_f), ṁ_s = α₂(∇f - m_s)
/// on the quadratic with RK4 at step h from (w0, 0, 0), evaluates
///   w⃛ + (α₁+α₂)ẅ + α₁α₂ẇ + η(α₁+κα₂)∇²f ẇ + c∇f
/// from analytic derivatives at every step and returns the largest
/// absolute entry.
double ademamix_ode_residual(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                             const std::vector<double>& w0, double t_end, double h = 1e-3);

/// Residual of ẅ + α₁ẇ + ηα₁∇f = 0 along the κ = 0 flow.
double ademamix_reduced_residual(const quadratic::QuadraticSpec& spec, const AdemamixFlow& flow,
                                 const std::vector<double>& w0, double t_end, double h = 1e-3);

struct ConsistencyReport {
    std::vector<double> h;
    std::vector<double> error;  // ‖w_h(t_end) - w_ref(t_end)‖ for each h
    double slope = 0.0;         // least-squares slope of log error vs log h
};

/// Runs semi_implicit_step with h = 2^-k for k in [k_min, k_max] to t_end
/// and compares against integrate_rk4 at h = 1e-3.
ConsistencyReport discretization_consistency(const DynamicsState& start, const landscapes::Landscape& landscape,
                                             const FlowParams& params, double t_end, int k_min, int k_max,
                                             FlowKind kind = FlowKind::first_order);

}  // namespace lite::dynamics

#endif  // LITE_DYNAMICS_HPP
