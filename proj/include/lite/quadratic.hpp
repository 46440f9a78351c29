// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_QUADRATIC_HPP
#define LITE_QUADRATIC_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lite/linalg.hpp"

namespace lite::quadratic {

/// f(w) = ½ Σ λᵢ wᵢ² + bᵀw with λ sorted descending.
struct QuadraticSpec {
    std::vector<double> eigenvalues;
    std::vector<double> offsets;

    void validate() const;
    /// Minimizer coordinate -bᵢ/λᵢ; 0 for a λ = 0 mode (which must have bᵢ = 0).
    double optimum(std::size_t i) const;
};

enum class Regime { overdamped, critical, underdamped };
std::string to_string(Regime regime);

/// Per-mode recurrence e_{k+1} - 2T e_k + D e_{k-1} = 0 of the momentum
/// method m <- (1-α)m + g, w <- w - η(m + βg) with identity metric.
struct RegimeReport {
    double lambda = 0.0;
    double T = 0.0;
    double D = 0.0;
    double discriminant = 0.0;
    std::complex<double> r1;  // larger modulus
    std::complex<double> r2;
    Regime regime = Regime::overdamped;
    std::optional<double> theta;  // arg of r1 when underdamped
    double dominant_modulus = 0.0;
};

std::pair<double, double> recurrence_coeffs(double lambda, double alpha, double beta, double eta);

/// Roots of r² - 2Tr + D. The critical band is |Δ| < 1e-14·max(1, T²).
RegimeReport characteristic_roots(double T, double D);
RegimeReport classify(double lambda, double alpha, double beta, double eta);

/// Largest step with all roots in the closed unit disc:
/// 2(2-α) / (λ_max · max{1 + 2β - αβ, 2β(1-α)}). Returns 0 for α ≥ 2.
double stability_bound(double lambda_max, double alpha, double beta);

/// The two positive λ with T(λ)² = D(λ), ascending. Between them the mode
/// is underdamped. Throws ContractError when no such split exists.
std::pair<double, double> regime_boundaries(double alpha, double beta, double eta);

struct ModeTrace {
    double lambda = 0.0;
    double eta = 0.0;
    double beta = 0.0;
    std::vector<double> e;  // e_0 .. e_steps, truncated once it overflows
    double max_ratio = 0.0;  // max |e_k| / |e_0|
    bool diverged = false;   // crossed 10³·|e_0|
    std::size_t diverged_at = 0;
    double fitted_log_rate = 0.0;  // NaN when not measurable
};

struct SimulationResult {
    std::vector<ModeTrace> modes;
    bool diverged = false;
};

/// Runs the optimizer coordinatewise for `steps` iterations from (w0, m0)
/// and fits the asymptotic log decay rate over the last half. Underdamped
/// modes are fitted through ½·log(e_k² - 2T e_k e_{k-1} + D e_{k-1}²),
/// which shrinks by exactly D per step; other modes through log‖(e_k, e_{k-1})‖.
SimulationResult simulate_recurrence(const QuadraticSpec& spec, double alpha, double beta, double eta,
                                     const std::vector<double>& w0, const std::vector<double>& m0, std::size_t steps);

/// LITE with an exact eigen-projector: the first `sharp_count` modes use
/// (η, β₁) and the rest use (χη, β₂).
struct LiteSplit {
    std::size_t sharp_count = 1;
    double chi = 1.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
};

SimulationResult simulate_lite_recurrence(const QuadraticSpec& spec, double alpha, double eta, const LiteSplit& split,
                                          const std::vector<double>& w0, const std::vector<double>& m0,
                                          std::size_t steps);

/// First k with f(w_k) - f⋆ ≤ tol, or nullopt.
std::optional<std::size_t> steps_to_tolerance(const QuadraticSpec& spec, const SimulationResult& sim, double tol);

struct ProbePoint {
    double eta = 0.0;
    double beta = 0.0;
    double r1 = 0.0;
    bool in_band = true;
};

struct ProbeTable {
    double lambda = 0.0;
    double alpha = 0.0;
    std::vector<double> eta_grid;
    std::vector<double> beta_grid;
    std::vector<ProbePoint> points;  // row-major over (eta, beta)
    std::size_t violations = 0;
    std::size_t excluded = 0;
    bool pass = false;
};

/// Dominant root along an (η, β) grid. For λ < 0 the root must strictly
/// increase along both axes; for λ > 0 it must strictly decrease, with
/// points outside the flat band 0 < λ < λ̃₁ excluded.
ProbeTable monotonicity_probe(double lambda, double alpha, const std::vector<double>& eta_grid,
                              const std::vector<double>& beta_grid);

/// Solution X of AᵀXA - X = -I for the companion matrix A = [[2T, -D], [1, 0]].
/// V(s) = sᵀXs decreases by exactly ‖s‖² per step for a stable mode.
linalg::DenseMatrix lyapunov_form(double T, double D);

}  // namespace lite::quadratic

#endif  // LITE_QUADRATIC_HPP
