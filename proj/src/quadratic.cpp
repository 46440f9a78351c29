// SPDX-License-Identifier: Apache-2.0

#include "lite/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lite/errors.hpp"

namespace lite::quadratic {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double lsq_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    if (xs.size() < 2) return kNaN;
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double gap(double lambda, double alpha, double beta, double eta) {
    const auto [T, D] = recurrence_coeffs(lambda, alpha, beta, eta);
    return T * T - D;
}

double refine_root(double root, double alpha, double beta, double eta) {
    const double g0 = gap(root, alpha, beta, eta);
    if (g0 == 0.0) return root;
    double delta = 1e-10 * std::max(std::abs(root), 1e-300);
    double lo = root;
    double hi = root;
    bool bracketed = false;
    for (int i = 0; i < 80 && !bracketed; ++i) {
        lo = root - delta;
        hi = root + delta;
        bracketed = (gap(lo, alpha, beta, eta) > 0.0) != (gap(hi, alpha, beta, eta) > 0.0);
        delta *= 2.0;
    }
    if (!bracketed) return root;
    const bool lo_positive = gap(lo, alpha, beta, eta) > 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if ((gap(mid, alpha, beta, eta) > 0.0) == lo_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(gap(lo, alpha, beta, eta)) <= std::abs(gap(hi, alpha, beta, eta)) ? lo : hi;
}

struct ModeParams {
    double eta;
    double beta;
};

SimulationResult simulate_modes(const QuadraticSpec& spec, double alpha, const std::vector<ModeParams>& params,
                                const std::vector<double>& w0, const std::vector<double>& m0, std::size_t steps) {
    spec.validate();
    const std::size_t n = spec.eigenvalues.size();
    if (w0.size() != n || m0.size() != n) throw ShapeError("simulate_recurrence: initial state length mismatch");

    SimulationResult out;
    out.modes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lambda = spec.eigenvalues[i];
        const auto [eta, beta] = params[i];
        ModeTrace& tr = out.modes[i];
        tr.lambda = lambda;
        tr.eta = eta;
        tr.beta = beta;
        tr.e.reserve(steps + 1);

        // Error dynamics are linear and homogeneous around (w⋆, 0), so the
        // state is kept normalized and its scale tracked in log space.
        double e = w0[i] - spec.optimum(i);
        double m = m0[i];
        double e_prev = e;
        double log_scale = 0.0;
        const double e0 = std::abs(e);
        const double log_limit = e0 > 0.0 ? std::log(1e3 * e0) : 0.0;
        tr.e.push_back(e);

        const auto [T, D] = recurrence_coeffs(lambda, alpha, beta, eta);
        const RegimeReport rep = characteristic_roots(T, D);
        const bool use_energy = rep.regime == Regime::underdamped;
        std::vector<double> ks;
        std::vector<double> ys;
        const std::size_t fit_from = steps - steps / 2;

        bool truncated = false;
        double max_log = e0 > 0.0 ? std::log(e0) : -std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= steps; ++k) {
            const double g = lambda * e;
            m = (1.0 - alpha) * m + g;
            e_prev = e;
            e = e - eta * (m + beta * g);

            const double mag = std::max({std::abs(e), std::abs(m), std::abs(e_prev)});
            if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
                e /= mag;
                m /= mag;
                e_prev /= mag;
                log_scale += std::log(mag);
            }
            const double log_abs_e = std::log(std::abs(e)) + log_scale;
            max_log = std::max(max_log, log_abs_e);
            if (e0 > 0.0 && !tr.diverged && log_abs_e > log_limit) {
                tr.diverged = true;
                tr.diverged_at = k;
            }
            if (!truncated) {
                const double raw = e * std::exp(log_scale);
                if (std::isfinite(raw)) {
                    tr.e.push_back(raw);
                } else {
                    truncated = true;
                }
            }
            if (k >= fit_from) {
                double y;
                if (use_energy) {
                    const double q = e * e - 2.0 * T * e * e_prev + D * e_prev * e_prev;
                    y = 0.5 * std::log(q) + log_scale;
                } else {
                    y = std::log(std::hypot(e, e_prev)) + log_scale;
                }
                ks.push_back(static_cast<double>(k));
                ys.push_back(y);
            }
        }
        tr.max_ratio = e0 > 0.0 ? std::exp(max_log - std::log(e0)) : 0.0;
        const bool finite = std::all_of(ys.begin(), ys.end(), [](double y) { return std::isfinite(y); });
        tr.fitted_log_rate = finite ? lsq_slope(ks, ys) : kNaN;
        out.diverged = out.diverged || tr.diverged;
    }
    return out;
}

}  // namespace

void QuadraticSpec::validate() const {
    if (eigenvalues.empty()) throw ContractError("QuadraticSpec: no eigenvalues");
    if (offsets.size() != eigenvalues.size()) throw ShapeError("QuadraticSpec: offsets length mismatch");
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        if (!std::isfinite(eigenvalues[i]) || !std::isfinite(offsets[i])) {
            throw ContractError("QuadraticSpec: non-finite entry");
        }
        if (i > 0 && eigenvalues[i] > eigenvalues[i - 1]) {
            throw ContractError("QuadraticSpec: eigenvalues must be sorted descending");
        }
        if (eigenvalues[i] == 0.0 && offsets[i] != 0.0) {
            throw ContractError("QuadraticSpec: a zero-curvature mode needs a zero offset");
        }
    }
}

double QuadraticSpec::optimum(std::size_t i) const {
    return eigenvalues[i] == 0.0 ? 0.0 : -offsets[i] / eigenvalues[i];
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::overdamped: return "overdamped";
        case Regime::critical: return "critical";
        case Regime::underdamped: return "underdamped";
    }
    return "overdamped";
}

std::pair<double, double> recurrence_coeffs(double lambda, double alpha, double beta, double eta) {
    const double T = 1.0 - (alpha + eta * lambda * (beta + 1.0)) / 2.0;
    const double D = (1.0 - alpha) * (1.0 - eta * beta * lambda);
    return {T, D};
}

RegimeReport characteristic_roots(double T, double D) {
    RegimeReport rep;
    rep.T = T;
    rep.D = D;
    rep.discriminant = T * T - D;
    const double tol = 1e-14 * std::max(1.0, T * T);
    if (std::abs(rep.discriminant) < tol) {
        rep.regime = Regime::critical;
        rep.r1 = rep.r2 = T;
        rep.dominant_modulus = std::abs(T);
    } else if (rep.discriminant > 0.0) {
        rep.regime = Regime::overdamped;
        const double s = std::sqrt(rep.discriminant);
        const double big = T >= 0.0 ? T + s : T - s;
        const double small = big != 0.0 ? D / big : (T >= 0.0 ? T - s : T + s);
        rep.r1 = big;
        rep.r2 = small;
        rep.dominant_modulus = std::abs(big);
    } else {
        if (!(D > 0.0)) throw ContractError("characteristic_roots: underdamped mode with D <= 0");
        rep.regime = Regime::underdamped;
        const double s = std::sqrt(-rep.discriminant);
        rep.r1 = {T, s};
        rep.r2 = {T, -s};
        const double rho = std::sqrt(D);
        rep.dominant_modulus = rho;
        rep.theta = std::acos(std::clamp(T / rho, -1.0, 1.0));
    }
    return rep;
}

RegimeReport classify(double lambda, double alpha, double beta, double eta) {
    const auto [T, D] = recurrence_coeffs(lambda, alpha, beta, eta);
    RegimeReport rep = characteristic_roots(T, D);
    rep.lambda = lambda;
    return rep;
}

double stability_bound(double lambda_max, double alpha, double beta) {
    if (!(lambda_max > 0.0)) throw ContractError("stability_bound: lambda_max must be positive");
    if (alpha >= 2.0) return 0.0;
    const double denom = std::max(1.0 + 2.0 * beta - alpha * beta, 2.0 * beta * (1.0 - alpha));
    return 2.0 * (2.0 - alpha) / (lambda_max * denom);
}

std::pair<double, double> regime_boundaries(double alpha, double beta, double eta) {
    const double A = 1.0 - alpha / 2.0;
    const double B = eta * (beta + 1.0) / 2.0;
    const double C = 1.0 - alpha;
    const double E = (1.0 - alpha) * eta * beta;
    const double a2 = B * B;
    const double a1 = -(2.0 * A * B - E);
    const double a0 = A * A - C;
    const char* no_split = "no river/valley split at these hyper-parameters";
    if (a2 == 0.0) throw ContractError(no_split);
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) throw ContractError(no_split);
    const double q = -0.5 * (a1 + (a1 >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
    if (q == 0.0) throw ContractError(no_split);
    double lo = q / a2;
    double hi = a0 / q;
    if (lo > hi) std::swap(lo, hi);
    if (!(lo > 0.0)) throw ContractError(no_split);
    return {refine_root(lo, alpha, beta, eta), refine_root(hi, alpha, beta, eta)};
}

SimulationResult simulate_recurrence(const QuadraticSpec& spec, double alpha, double beta, double eta,
                                     const std::vector<double>& w0, const std::vector<double>& m0, std::size_t steps) {
    return simulate_modes(spec, alpha, std::vector<ModeParams>(spec.eigenvalues.size(), {eta, beta}), w0, m0, steps);
}

SimulationResult simulate_lite_recurrence(const QuadraticSpec& spec, double alpha, double eta, const LiteSplit& split,
                                          const std::vector<double>& w0, const std::vector<double>& m0,
                                          std::size_t steps) {
    std::vector<ModeParams> params(spec.eigenvalues.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i] = i < split.sharp_count ? ModeParams{eta, split.beta1} : ModeParams{split.chi * eta, split.beta2};
    }
    return simulate_modes(spec, alpha, params, w0, m0, steps);
}

std::optional<std::size_t> steps_to_tolerance(const QuadraticSpec& spec, const SimulationResult& sim, double tol) {
    if (sim.modes.size() != spec.eigenvalues.size()) throw ShapeError("steps_to_tolerance: mode count mismatch");
    std::size_t len = std::numeric_limits<std::size_t>::max();
    for (const auto& mode : sim.modes) len = std::min(len, mode.e.size());
    for (std::size_t k = 0; k < len; ++k) {
        double excess = 0.0;
        for (std::size_t i = 0; i < sim.modes.size(); ++i) {
            const double e = sim.modes[i].e[k];
            excess += 0.5 * spec.eigenvalues[i] * e * e;
        }
        if (excess <= tol) return k;
    }
    return std::nullopt;
}

ProbeTable monotonicity_probe(double lambda, double alpha, const std::vector<double>& eta_grid,
                              const std::vector<double>& beta_grid) {
    if (lambda == 0.0) throw ContractError("monotonicity_probe: lambda must be nonzero");
    ProbeTable table;
    table.lambda = lambda;
    table.alpha = alpha;
    table.eta_grid = eta_grid;
    table.beta_grid = beta_grid;
    for (double eta : eta_grid) {
        for (double beta : beta_grid) {
            ProbePoint p{eta, beta, kNaN, true};
            if (lambda > 0.0) {
                try {
                    p.in_band = lambda < regime_boundaries(alpha, beta, eta).first;
                } catch (const ContractError&) {
                    p.in_band = false;
                }
            }
            const RegimeReport rep = classify(lambda, alpha, beta, eta);
            if (rep.regime == Regime::underdamped) p.in_band = false;
            p.r1 = rep.r1.real();
            if (!p.in_band) ++table.excluded;
            table.points.push_back(p);
        }
    }

    const std::size_t nb = beta_grid.size();
    const auto at = [&](std::size_t i, std::size_t j) -> const ProbePoint& { return table.points[i * nb + j]; };
    const auto ordered = [&](double before, double after) { return lambda < 0.0 ? after > before : after < before; };
    std::size_t comparisons = 0;
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            if (!at(i, j).in_band) continue;
            if (i + 1 < eta_grid.size() && at(i + 1, j).in_band) {
                ++comparisons;
                if (!ordered(at(i, j).r1, at(i + 1, j).r1)) ++table.violations;
            }
            if (j + 1 < nb && at(i, j + 1).in_band) {
                ++comparisons;
                if (!ordered(at(i, j).r1, at(i, j + 1).r1)) ++table.violations;
            }
        }
    }
    table.pass = comparisons > 0 && table.violations == 0;
    return table;
}

linalg::DenseMatrix lyapunov_form(double T, double D) {
    const double a[2][2] = {{2.0 * T, -D}, {1.0, 0.0}};
    // Column-major vec: vec(AᵀXA) = (Aᵀ ⊗ Aᵀ) vec(X).
    linalg::DenseMatrix k(4, 4);
    for (std::size_t p = 0; p < 2; ++p)
        for (std::size_t q = 0; q < 2; ++q)
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t s = 0; s < 2; ++s) k(p * 2 + r, q * 2 + s) = a[q][p] * a[s][r];
    for (std::size_t i = 0; i < 4; ++i) k(i, i) -= 1.0;
    const std::vector<double> rhs{-1.0, 0.0, 0.0, -1.0};
    const auto x = linalg::solve(k, rhs);
    linalg::DenseMatrix out(2, 2);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t r = 0; r < 2; ++r) out(r, c) = x[c * 2 + r];
    return out;
}

}  // namespace lite::quadratic
