// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lite/dynamics.hpp"
#include "lite/harness.hpp"
#include "lite/landscapes.hpp"
#include "lite/linalg.hpp"
#include "lite/optim.hpp"
#include "lite/polar.hpp"
#include "lite/quadratic.hpp"
#include "lite/rng.hpp"

namespace {

using lite::linalg::DenseMatrix;
namespace la = lite::linalg;
namespace ls = lite::landscapes;
namespace opt = lite::optim;
namespace quad = lite::quadratic;
namespace dyn = lite::dynamics;
namespace hs = lite::harness;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

DenseMatrix random_orthonormal(std::size_t n, std::size_t k, lite::Rng& rng) {
    DenseMatrix g(n, k);
    for (double& x : g.data()) x = rng.normal();
    return la::qr_decompose(g).q;
}

/// U diag(sigma) Vᵀ with U m×k and V n×k, k = sigma.size() ≤ min(m, n).
DenseMatrix with_spectrum(std::size_t m, std::size_t n, const std::vector<double>& sigma, lite::Rng& rng) {
    const std::size_t k = sigma.size();
    const auto u = random_orthonormal(m, k, rng);
    const auto v = random_orthonormal(n, k, rng);
    return la::matmul_nt(la::matmul(u, DenseMatrix::diagonal(sigma)), v);
}

std::size_t uniform_index(lite::Rng& rng, std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

// ---------------------------------------------------------------------------
// 1. Baseline recovery on the toy MLP.

std::vector<opt::MatrixBlock> blocks_of(const ls::Landscape& land, const std::vector<double>& w) {
    std::vector<opt::MatrixBlock> out;
    for (const auto& b : land.blocks()) out.push_back({b.name, ls::extract_block(w, b), b.role});
    return out;
}

/// Steps two optimizers side by side and returns the first step whose
/// parameters differ, or 0 when all steps agree exactly.
std::size_t first_divergent_step(const opt::OptimizerConfig& a, const opt::OptimizerConfig& b, std::size_t steps) {
    const ls::MlpLandscape land(ls::MlpSpec{}, 42);
    lite::Rng init(7);
    auto w = land.initial_point(init);
    const auto layout = land.blocks();
    auto blocks_a = blocks_of(land, w);
    auto blocks_b = blocks_of(land, w);
    std::map<std::string, opt::BlockOptState> states_a, states_b;
    const opt::ScheduleSpec sched{opt::ScheduleKind::wsd, 0.02, 0, steps};
    std::vector<double> wa = w, wb = w;
    for (std::size_t t = 1; t <= steps; ++t) {
        const auto ga = land.grad(wa);
        const auto gb = land.grad(wb);
        std::vector<DenseMatrix> grads_a, grads_b;
        for (const auto& bl : layout) {
            grads_a.push_back(ls::extract_block(ga, bl));
            grads_b.push_back(ls::extract_block(gb, bl));
        }
        opt::route_and_step(blocks_a, states_a, grads_a, t, sched, a);
        opt::route_and_step(blocks_b, states_b, grads_b, t, sched, b);
        for (std::size_t i = 0; i < layout.size(); ++i) {
            if (!(blocks_a[i].matrix == blocks_b[i].matrix)) return t;
            ls::write_block(wa, layout[i], blocks_a[i].matrix);
            ls::write_block(wb, layout[i], blocks_b[i].matrix);
        }
    }
    return 0;
}

opt::OptimizerConfig family_config(opt::Family family) {
    opt::OptimizerConfig cfg;
    cfg.family = family;
    if (opt::is_lite(family)) {
        cfg.lite = opt::LitePolicy{};
        cfg.lite->chi = 1.0;
        cfg.lite->beta1 = 0.0;
        cfg.lite->beta2 = 0.0;
    }
    return cfg;
}

Outcome baseline_recovery() {
    const std::size_t muon = first_divergent_step(family_config(opt::Family::muon),
                                                  family_config(opt::Family::muon_lite), 200);
    const std::size_t soap = first_divergent_step(family_config(opt::Family::soap),
                                                  family_config(opt::Family::soap_lite), 200);
    const auto describe = [](std::size_t s) {
        return s == 0 ? std::string("identical") : "differs at step " + std::to_string(s);
    };
    return {muon == 0 && soap == 0, "muon_lite vs muon " + describe(muon) + ", soap_lite vs soap " + describe(soap)};
}

// ---------------------------------------------------------------------------
// 2. Polar oracle.

Outcome polar_oracle() {
    lite::Rng rng(2002);
    double worst6 = 0.0, worst10 = 0.0;
    for (int c = 0; c < 200; ++c) {
        const std::size_t m = uniform_index(rng, 1, 64);
        const std::size_t n = uniform_index(rng, 1, 32);
        std::vector<double> sigma(std::min(m, n));
        for (double& s : sigma) s = rng.uniform(0.05, 1.0);
        const auto a = with_spectrum(m, n, sigma, rng);
        const auto svd = la::svd_oracle(a);
        const auto oracle = la::matmul_nt(svd.u, svd.v);
        const double scale = std::sqrt(static_cast<double>(m * n));
        const auto s6 = lite::polar::ns_polar(a, lite::polar::NsSchedule::polar_express(6));
        const auto s10 = lite::polar::ns_polar(a, lite::polar::NsSchedule::polar_express(10));
        worst6 = std::max(worst6, la::frobenius_distance(s6, oracle) / scale);
        worst10 = std::max(worst10, la::frobenius_distance(s10, oracle) / scale);
    }
    return {worst6 <= 1e-2 && worst10 <= 1e-4,
            "max err/sqrt(mn): 6 its " + fmt("%.3g", worst6) + " (<= 1e-2), 10 its " + fmt("%.3g", worst10) +
                " (<= 1e-4)"};
}

// ---------------------------------------------------------------------------
// 3. Composite projection oracle and rank-controller feedback.

DenseMatrix top_right_projector(const DenseMatrix& a, std::size_t k) {
    const auto s = la::svd_oracle(a);
    DenseMatrix vk(a.cols(), k);
    for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = 0; j < k; ++j) vk(i, j) = s.v(i, j);
    return la::matmul_nt(vk, vk);
}

Outcome composite_oracle() {
    lite::Rng rng(3003);
    const auto schedule = lite::polar::NsSchedule::polar_express();
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
        const std::size_t n = uniform_index(rng, 2, 16);
        const std::size_t m = uniform_index(rng, n, 2 * n);
        const std::size_t k = uniform_index(rng, 1, n - 1);
        // τ = 1; kept values in [1.1, 3], dropped values in [0.05, 0.9].
        std::vector<double> sigma(n);
        for (std::size_t i = 0; i < n; ++i) sigma[i] = i < k ? rng.uniform(1.1, 3.0) : rng.uniform(0.05, 0.9);
        const auto a = with_spectrum(m, n, sigma, rng);
        lite::polar::RankController ctrl;
        ctrl.scale_l = 1.0 / la::frobenius_norm(a);
        ctrl.target_dim = k;
        const auto cp = lite::polar::composite_sharp_projection(a, ctrl, schedule);
        worst = std::max(worst, la::frobenius_distance(cp.projector, top_right_projector(a, k)));
    }

    // Feedback: start far from the target scale and record the first update
    // at which ‖P‖_F² lands in [d_s - 1, d_s + 1]. The share of later updates
    // still in the band is reported as a diagnostic.
    std::size_t worst_entry = 0, after = 0, after_in_band = 0;
    for (int c = 0; c < 10; ++c) {
        const std::size_t ds = 2 + static_cast<std::size_t>(c % 4);
        std::vector<double> sigma(12);
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            sigma[i] = i < ds ? rng.uniform(5.0, 10.0) : rng.uniform(0.05, 0.5);
        }
        const auto a = with_spectrum(24, 12, sigma, rng);
        lite::polar::RankController ctrl{c % 2 == 0 ? 1e-3 : 0.9, ds, 1.05, 0.95};
        std::size_t entry = 0;
        for (std::size_t u = 1; u <= 200; ++u) {
            const auto cp = lite::polar::composite_sharp_projection(a, ctrl, schedule);
            const double pf = la::frobenius_norm(cp.projector);
            const double pf2 = pf * pf;
            const bool in_band = pf2 >= static_cast<double>(ds) - 1.0 && pf2 <= static_cast<double>(ds) + 1.0;
            if (in_band && entry == 0) entry = u;
            if (entry != 0 && u > entry) {
                ++after;
                if (in_band) ++after_in_band;
            }
            ctrl = lite::polar::update_rank_controller(ctrl, pf);
        }
        worst_entry = std::max(worst_entry, entry == 0 ? std::size_t{201} : entry);
    }
    const double held = after == 0 ? 0.0 : static_cast<double>(after_in_band) / static_cast<double>(after);
    return {worst < 1e-2 && worst_entry <= 200,
            "max ||P - P_topk||_F " + fmt("%.3g", worst) + " (< 1e-2); band reached by update " +
                std::to_string(worst_entry) + " (<= 200), in band on " + fmt("%.1f", 100.0 * held) +
                "% of later updates"};
}

// ---------------------------------------------------------------------------
// 4. Jury stability boundary.

Outcome jury_boundary() {
    lite::Rng rng(4004);
    std::size_t mismatches = 0, checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform(0.01, 0.99);
        const double beta = rng.uniform(0.0, 3.0);
        const double lambda = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
        const double bound = quad::stability_bound(lambda, alpha, beta);
        const double eta = bound * rng.uniform(0.5, 1.5);
        if (std::abs(eta - bound) <= 1e-9 * bound) continue;
        ++checked;
        const double modulus = quad::classify(lambda, alpha, beta, eta).dominant_modulus;
        const bool stable = modulus <= 1.0 + 1e-9;
        if (stable != (eta < bound)) ++mismatches;
    }

    std::size_t spot_failures = 0;
    for (int i = 0; i < 20; ++i) {
        const double alpha = rng.uniform(0.05, 0.5);
        const double beta = rng.uniform(0.0, 2.0);
        const double lambda = std::exp(rng.uniform(std::log(1.0), std::log(100.0)));
        const double bound = quad::stability_bound(lambda, alpha, beta);
        const quad::QuadraticSpec spec{{lambda}, {0.0}};
        const auto below = quad::simulate_recurrence(spec, alpha, beta, 0.999 * bound, {1.0}, {0.0}, 5000);
        const auto above = quad::simulate_recurrence(spec, alpha, beta, 1.001 * bound, {1.0}, {0.0}, 5000);
        if (below.diverged || !above.diverged) ++spot_failures;
    }
    return {mismatches == 0 && spot_failures == 0,
            std::to_string(mismatches) + " root/bound mismatches over " + std::to_string(checked) + " tuples, " +
                std::to_string(spot_failures) + "/20 simulator spot failures"};
}

// ---------------------------------------------------------------------------
// 5. Regime boundaries.

Outcome regime_boundaries() {
    const double alpha = 0.1, beta = 1.0, eta = 0.01;
    const auto [lo, hi] = quad::regime_boundaries(alpha, beta, eta);
    bool ok = std::abs(lo - 0.25063) <= 1e-3 && std::abs(hi - 99.74937) <= 1e-3;
    for (double l : {lo, hi}) ok = ok && quad::classify(l, alpha, beta, eta).regime == quad::Regime::critical;
    for (double f : {0.9, 0.99}) {
        ok = ok && quad::classify(f * lo, alpha, beta, eta).regime == quad::Regime::overdamped;
        ok = ok && quad::classify(lo / f, alpha, beta, eta).regime == quad::Regime::underdamped;
        ok = ok && quad::classify(f * hi, alpha, beta, eta).regime == quad::Regime::underdamped;
        ok = ok && quad::classify(hi / f, alpha, beta, eta).regime == quad::Regime::overdamped;
    }
    return {ok, "lambda1 " + fmt("%.5f", lo) + ", lambda2 " + fmt("%.5f", hi) + " (expected 0.25063, 99.74937)"};
}

// ---------------------------------------------------------------------------
// 6. Monotonicity probes.

Outcome monotonicity() {
    const double alpha = 0.1;
    const std::vector<double> eta_grid{0.002, 0.004, 0.006, 0.008, 0.01};
    const std::vector<double> beta_grid{0.0, 0.5, 1.0, 1.5, 2.0};
    std::size_t violations = 0, excluded = 0, points = 0;
    for (int i = 1; i <= 10; ++i) {
        const auto neg = quad::monotonicity_probe(-0.1 * i, alpha, eta_grid, beta_grid);
        const auto pos = quad::monotonicity_probe(0.002 * i, alpha, eta_grid, beta_grid);
        violations += neg.violations + pos.violations;
        excluded += neg.excluded + pos.excluded;
        points += neg.points.size() + pos.points.size();
    }
    return {violations == 0 && excluded < points,
            std::to_string(violations) + " violations over " + std::to_string(points) + " grid points (" +
                std::to_string(excluded) + " outside the flat band)"};
}

// ---------------------------------------------------------------------------
// 7. LITE acceleration on a sharp/flat quadratic.

Outcome lite_acceleration() {
    const double alpha = 0.1, beta = 0.0, chi = 4.0, beta2 = 1.0;
    std::vector<double> lambda(100, 0.01);
    lambda[0] = 100.0;
    const quad::QuadraticSpec spec{lambda, std::vector<double>(100, 0.0)};
    const double eta = 0.9 * quad::stability_bound(100.0, alpha, beta);

    const double base_r1 = quad::classify(0.01, alpha, beta, eta).dominant_modulus;
    const double lite_r1 = quad::classify(0.01, alpha, beta2, chi * eta).dominant_modulus;

    const std::vector<double> w0(100, 1.0), m0(100, 0.0);
    const std::size_t steps = 40000;
    const auto base = quad::simulate_recurrence(spec, alpha, beta, eta, w0, m0, steps);
    const auto lite = quad::simulate_lite_recurrence(spec, alpha, eta, {1, chi, beta, beta2}, w0, m0, steps);
    const auto kb = quad::steps_to_tolerance(spec, base, 1e-6);
    const auto kl = quad::steps_to_tolerance(spec, lite, 1e-6);
    const double speedup = kb && kl ? static_cast<double>(*kb) / static_cast<double>(*kl) : 0.0;
    return {lite_r1 < base_r1 && speedup >= 1.5,
            "flat r1 " + fmt("%.8f", lite_r1) + " vs " + fmt("%.8f", base_r1) + "; steps to 1e-6: " +
                (kl ? std::to_string(*kl) : "none") + " vs " + (kb ? std::to_string(*kb) : "none") + " (speedup " +
                fmt("%.2f", speedup) + ", >= 1.5)"};
}

// ---------------------------------------------------------------------------
// 8. Discretization identity and first-order convergence.

dyn::FlowParams flow(double alpha, double beta, double eta) {
    dyn::FlowParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.eta_of_t = [eta](double) { return eta; };
    return p;
}

Outcome discretization() {
    const ls::QuadraticLandscape land({{4.0, 1.0, 0.25}, {0.5, 0.0, -0.1}});
    const double alpha = 0.1, beta = 0.6, eta = 0.05;
    dyn::DynamicsState s{{1.0, -1.0, 2.0}, {0.0, 0.0, 0.0}, 0.0};
    opt::MatrixBlock block{"w", DenseMatrix::column(s.w), opt::Role::muon};
    opt::BlockOptState state;
    opt::OptimizerConfig cfg;
    cfg.family = opt::Family::momentum;
    cfg.theta = 1.0 - alpha;
    cfg.nesterov_beta = beta;
    cfg.weight_decay = 0.0;
    bool identical = true;
    for (int k = 0; k < 100 && identical; ++k) {
        const auto g = land.grad(block.matrix.data());
        opt::step_momentum(block, state, DenseMatrix::column(g), eta, cfg);
        s = dyn::semi_implicit_step(s, land, flow(alpha, beta, eta), 1.0);
        const auto w = block.matrix.data();
        const auto m = state.m.data();
        identical = std::equal(s.w.begin(), s.w.end(), w.begin()) && std::equal(s.m.begin(), s.m.end(), m.begin());
    }
    const ls::QuadraticLandscape land2({{2.0, 0.5}, {0.0, 0.0}});
    const auto rep =
        dyn::discretization_consistency({{1.0, -1.0}, {0.0, 0.0}, 0.0}, land2, flow(0.5, 0.5, 0.5), 4.0, 3, 8);
    return {identical && rep.slope >= 0.8 && rep.slope <= 1.2,
            std::string("h=1 step ") + (identical ? "identical" : "differs") + " over 100 steps; slope " +
                fmt("%.4f", rep.slope) + " (in [0.8, 1.2])"};
}

// ---------------------------------------------------------------------------
// 9. Nesterov form equivalence.

Outcome nesterov() {
    lite::Rng rng(9009);
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const std::size_t n = uniform_index(rng, 1, 8);
        std::vector<double> lambda(n), w0(n);
        for (double& l : lambda) l = rng.uniform(0.1, 4.0);
        std::sort(lambda.rbegin(), lambda.rend());
        for (double& x : w0) x = rng.normal();
        const double alpha = rng.uniform(0.05, 0.5);
        const double eta = rng.uniform(0.001, 0.1);
        const auto t = dyn::nesterov_forms_trace({lambda, std::vector<double>(n, 0.0)}, alpha, eta, 100, w0);
        worst = std::max(worst, t.max_gap);
    }
    return {worst <= 1e-10, "max gap " + fmt("%.3g", worst) + " over 20 quadratics (<= 1e-10)"};
}

// ---------------------------------------------------------------------------
// 10. AdEMAMix third-order identity.

Outcome ademamix() {
    double worst = 0.0, printed = 0.0;
    for (double lambda : {0.25, 1.0, 4.0}) {
        dyn::AdemamixFlow f{0.1, 1e-3, 2.0, 0.1, dyn::AdemamixCoefficient::derived};
        const quad::QuadraticSpec spec{{lambda}, {0.0}};
        worst = std::max(worst, dyn::ademamix_ode_residual(spec, f, {1.0}, 10.0));
        f.gradient_coefficient = dyn::AdemamixCoefficient::printed;
        printed = std::max(printed, dyn::ademamix_ode_residual(spec, f, {1.0}, 10.0));
    }
    return {worst <= 1e-8, "max residual " + fmt("%.3g", worst) + " (<= 1e-8); printed-coefficient form " +
                               fmt("%.3g", printed)};
}

// ---------------------------------------------------------------------------
// 11. Alignment properties.

const char* kAlignKronecker =
    "run.seed = 5\nlandscape.kind = kronecker\nlandscape.rows = 16\nlandscape.cols = 8\nlandscape.sharp = 2\n"
    "align.train_steps = 0\nalign.d_s = 2\nalign.k_grid = 2, 3, 4, 6, 8\nalign.batches = 64\n";
const char* kAlignMlp =
    "run.seed = 11\nlandscape.kind = mlp\nlandscape.widths = 8, 16, 32, 16, 4\n"
    "align.train_steps = 100\nalign.lr = 0.001\nalign.d_s = 4\nalign.k_grid = 4, 5, 6, 8, 12, 16\n"
    "align.batches = 32\n";

Outcome alignment() {
    std::size_t bad = 0, curves = 0;
    double kron_min = 1.0;
    for (const char* text : {kAlignKronecker, kAlignMlp}) {
        std::ostringstream csv;
        const auto r = hs::run_alignment(hs::parse_config(text, hs::ConfigPurpose::align), csv);
        for (const auto& c : r.curves) {
            ++curves;
            bool ok = !c.coverage.empty() && c.coverage.back() == 1.0;
            for (std::size_t i = 0; i < c.coverage.size(); ++i) {
                ok = ok && c.coverage[i] >= 0.0 && c.coverage[i] <= 1.0;
                if (i > 0) ok = ok && c.coverage[i] >= c.coverage[i - 1] - 1e-12;
            }
            if (!ok) ++bad;
            if (text == kAlignKronecker) {
                for (std::size_t i = 0; i < c.k.size(); ++i)
                    if (c.k[i] == c.d_s) kron_min = std::min(kron_min, c.coverage[i]);
            }
        }
    }
    return {bad == 0 && kron_min >= 0.99, std::to_string(bad) + "/" + std::to_string(curves) +
                                              " malformed curves; Kronecker coverage at k=d_s " +
                                              fmt("%.6f", kron_min) + " (>= 0.99)"};
}

// ---------------------------------------------------------------------------
// 12. Uniform Hessian damping shrinks the stable step.

Outcome ablation() {
    std::size_t violations = 0;
    for (int i = 1; i <= 50; ++i) {
        const double alpha = static_cast<double>(i) / 51.0;
        if (!(quad::stability_bound(100.0, alpha, 2.0) < quad::stability_bound(100.0, alpha, 0.0))) ++violations;
    }
    return {violations == 0, std::to_string(violations) + "/50 alpha values where beta=2 does not shrink the bound"};
}

// ---------------------------------------------------------------------------
// 13. Determinism of every CSV-producing experiment.

std::string mlp_run(const std::string& optimizer) {
    return "run.seed = 42\nrun.steps = 200\nrun.log_every = 1\nlandscape.kind = mlp\n"
           "landscape.widths = 8, 16, 32, 16, 4\n" +
           optimizer + "schedule.kind = wsd\nschedule.lr_max = 0.02\n";
}

Outcome determinism() {
    std::vector<std::pair<std::string, std::function<std::string()>>> experiments;
    const auto run = [](std::string text) {
        return [text] {
            std::ostringstream out;
            hs::run_experiment(hs::parse_config(text), out);
            return out.str();
        };
    };
    experiments.emplace_back("mlp muon", run(mlp_run("optimizer.family = muon\n")));
    experiments.emplace_back("mlp muon_lite", run(mlp_run("optimizer.family = muon_lite\nlite.chi = 1\n")));
    experiments.emplace_back("mlp soap", run(mlp_run("optimizer.family = soap\n")));
    experiments.emplace_back("mlp soap_lite", run(mlp_run("optimizer.family = soap_lite\nlite.chi = 1\n")));
    experiments.emplace_back(
        "mlp soap_lite stochastic",
        run(mlp_run("optimizer.family = soap_lite\nlite.chi = 2\nlite.beta2 = 0.5\nlandscape.stochastic = true\n")));
    experiments.emplace_back(
        "quadratic diverge",
        run("run.seed = 1\nrun.steps = 2000\nlandscape.kind = quadratic\nlandscape.eigenvalues = 100, 1\n"
            "landscape.init = 1, 1\noptimizer.family = momentum\noptimizer.theta = 0.9\n"
            "optimizer.nesterov_beta = 1\noptimizer.weight_decay = 0\noptimizer.clip_norm = 0\n"
            "schedule.kind = constant\nschedule.lr_max = 0.0135\n"));
    for (const char* text : {kAlignKronecker, kAlignMlp}) {
        experiments.emplace_back(text == kAlignKronecker ? "align kronecker" : "align mlp", [text] {
            std::ostringstream out;
            hs::run_alignment(hs::parse_config(text, hs::ConfigPurpose::align), out);
            return out.str();
        });
    }
    experiments.emplace_back("quadratic report", [] {
        std::ostringstream out;
        hs::quadratic_report(0.1, 1.0, 0.01, -1.0, 100.0, 50, out);
        return out.str();
    });

    std::vector<std::string> differing;
    for (const auto& [name, fn] : experiments) {
        const auto a = fn();
        const auto b = fn();
        if (a.empty() || a != b) differing.push_back(name);
    }
    std::string detail = std::to_string(experiments.size() - differing.size()) + "/" +
                         std::to_string(experiments.size()) + " experiments byte-identical";
    for (const auto& d : differing) detail += "; differs: " + d;
    return {differing.empty(), detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"baseline recovery", baseline_recovery},
        {"polar oracle", polar_oracle},
        {"composite projection oracle", composite_oracle},
        {"jury stability boundary", jury_boundary},
        {"regime boundaries", regime_boundaries},
        {"monotonicity probes", monotonicity},
        {"lite acceleration", lite_acceleration},
        {"discretization identity", discretization},
        {"nesterov equivalence", nesterov},
        {"ademamix third-order identity", ademamix},
        {"alignment properties", alignment},
        {"damping ablation", ablation},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!out.pass) ++failures;
        std::printf("criterion %2zu %s: %s (%s) [%.2fs]\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
