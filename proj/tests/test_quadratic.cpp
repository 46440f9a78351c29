// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "lite/errors.hpp"
#include "lite/quadratic.hpp"
#include "lite/rng.hpp"

namespace q = lite::quadratic;
using q::Regime;

namespace {

q::QuadraticSpec single(double lambda) { return {{lambda}, {0.0}}; }

}  // namespace

TEST(RecurrenceCoeffs, Example) {
    const auto [T, D] = q::recurrence_coeffs(1.0, 0.1, 1.0, 0.01);
    EXPECT_NEAR(T, 0.94, 1e-15);
    EXPECT_NEAR(D, 0.891, 1e-15);
}

TEST(RecurrenceCoeffs, MomentumFreeRecoversGradientDescent) {
    const double lambda = 3.0, eta = 0.2;
    const auto [T, D] = q::recurrence_coeffs(lambda, 1.0, 0.0, eta);
    EXPECT_DOUBLE_EQ(T, (1.0 - eta * lambda) / 2.0);
    EXPECT_EQ(D, 0.0);
    const auto rep = q::characteristic_roots(T, D);
    EXPECT_NEAR(rep.r1.real(), 1.0 - eta * lambda, 1e-15);
    EXPECT_NEAR(std::abs(rep.r2), 0.0, 1e-15);
}

TEST(RecurrenceCoeffs, ZeroCurvature) {
    const auto [T, D] = q::recurrence_coeffs(0.0, 0.3, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(T, 1.0 - 0.15);
    EXPECT_DOUBLE_EQ(D, 0.7);
}

TEST(CharacteristicRoots, Underdamped) {
    const auto rep = q::characteristic_roots(0.94, 0.891);
    EXPECT_EQ(rep.regime, Regime::underdamped);
    EXPECT_NEAR(rep.discriminant, -0.0074, 1e-12);
    EXPECT_NEAR(rep.dominant_modulus, 0.94393, 1e-5);
    EXPECT_NEAR(rep.dominant_modulus, std::sqrt(0.891), 1e-15);
    ASSERT_TRUE(rep.theta.has_value());
    EXPECT_NEAR(*rep.theta, std::acos(0.94 / std::sqrt(0.891)), 1e-12);
}

TEST(CharacteristicRoots, Critical) {
    const auto rep = q::characteristic_roots(1.0, 1.0);
    EXPECT_EQ(rep.regime, Regime::critical);
    EXPECT_DOUBLE_EQ(rep.r1.real(), 1.0);
    EXPECT_DOUBLE_EQ(rep.r2.real(), 1.0);
}

TEST(CharacteristicRoots, Overdamped) {
    const auto rep = q::characteristic_roots(0.6, 0.05);
    EXPECT_EQ(rep.regime, Regime::overdamped);
    EXPECT_NEAR(rep.discriminant, 0.31, 1e-15);
    EXPECT_NEAR(rep.r1.real(), 0.6 + std::sqrt(0.31), 1e-15);
    EXPECT_NEAR(rep.r2.real(), 0.6 - std::sqrt(0.31), 1e-15);
    EXPECT_FALSE(rep.theta.has_value());
}

TEST(CharacteristicRoots, NegativeDeterminantIsOverdamped) {
    const auto rep = q::characteristic_roots(0.2, -0.5);
    EXPECT_EQ(rep.regime, Regime::overdamped);
    EXPECT_GT(rep.r1.real(), 0.0);
    EXPECT_LT(rep.r2.real(), 0.0);
}

TEST(CharacteristicRoots, RootIdentitiesHold) {
    lite::Rng rng(61);
    for (int i = 0; i < 2000; ++i) {
        const double T = rng.uniform(-2.0, 2.0);
        const double D = rng.uniform(-1.5, 1.5);
        const auto rep = q::characteristic_roots(T, D);
        const auto sum = rep.r1 + rep.r2;
        const auto prod = rep.r1 * rep.r2;
        ASSERT_NEAR(sum.real(), 2.0 * T, 1e-12);
        ASSERT_NEAR(sum.imag(), 0.0, 1e-12);
        ASSERT_NEAR(prod.real(), D, 1e-12);
        ASSERT_NEAR(prod.imag(), 0.0, 1e-12);
        for (const auto& r : {rep.r1, rep.r2}) ASSERT_LT(std::abs(r * r - 2.0 * T * r + D), 1e-12);
        ASSERT_GE(std::abs(rep.r1), std::abs(rep.r2) - 1e-15);
        ASSERT_EQ(rep.regime == Regime::underdamped, rep.discriminant < 0.0 && rep.regime != Regime::critical);
    }
}

TEST(StabilityBound, Examples) {
    EXPECT_DOUBLE_EQ(q::stability_bound(1.0, 1.0, 0.0), 2.0);
    EXPECT_NEAR(q::stability_bound(10.0, 0.1, 1.0), 0.131034, 1e-6);
    EXPECT_NEAR(q::stability_bound(10.0, 0.1, 1.0), 3.8 / 29.0, 1e-15);
    EXPECT_EQ(q::stability_bound(1.0, 2.0, 1.0), 0.0);
    EXPECT_LT(q::stability_bound(1.0, 1.999, 1.0), 1e-2);
}

TEST(StabilityBound, AgreesWithRootModulus) {
    lite::Rng rng(62);
    for (int i = 0; i < 1000; ++i) {
        const double alpha = rng.uniform(0.01, 0.99);
        const double beta = rng.uniform(0.0, 3.0);
        const double lambda = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
        const double bound = q::stability_bound(lambda, alpha, beta);
        const double eta = bound * rng.uniform(0.5, 1.5);
        const double modulus = q::classify(lambda, alpha, beta, eta).dominant_modulus;
        if (eta <= bound * (1.0 - 1e-9)) {
            ASSERT_LE(modulus, 1.0 + 1e-9) << "alpha " << alpha << " beta " << beta;
        } else if (eta >= bound * (1.0 + 1e-9)) {
            ASSERT_GT(modulus, 1.0 - 1e-9) << "alpha " << alpha << " beta " << beta;
        }
    }
}

TEST(StabilityBound, SimulatorBoundary) {
    const double bound = q::stability_bound(10.0, 0.1, 1.0);
    const auto below = q::simulate_recurrence(single(10.0), 0.1, 1.0, 0.999 * bound, {1.0}, {0.0}, 2000);
    EXPECT_FALSE(below.diverged);
    EXPECT_LT(below.modes[0].max_ratio, 1e3);
    const auto above = q::simulate_recurrence(single(10.0), 0.1, 1.0, 1.001 * bound, {1.0}, {0.0}, 5000);
    EXPECT_TRUE(above.diverged);
    EXPECT_LE(above.modes[0].diverged_at, 5000u);
}

TEST(RegimeBoundaries, Example) {
    const auto [lo, hi] = q::regime_boundaries(0.1, 1.0, 0.01);
    EXPECT_NEAR(lo, 0.25063, 1e-3);
    EXPECT_NEAR(hi, 99.74937, 1e-3);
    // Oracle: roots of 0.0001λ² − 0.01λ + 0.0025 = 0.
    const double disc = std::sqrt(0.01 * 0.01 - 4.0 * 0.0001 * 0.0025);
    EXPECT_NEAR(lo, (0.01 - disc) / 0.0002, 1e-9);
    EXPECT_NEAR(hi, (0.01 + disc) / 0.0002, 1e-9);
}

TEST(RegimeBoundaries, BoundaryIsCritical) {
    const auto [lo, hi] = q::regime_boundaries(0.1, 1.0, 0.01);
    for (double lambda : {lo, hi}) {
        const auto rep = q::classify(lambda, 0.1, 1.0, 0.01);
        EXPECT_LT(std::abs(rep.discriminant), 1e-10);
    }
    EXPECT_EQ(q::classify(0.5 * lo, 0.1, 1.0, 0.01).regime, Regime::overdamped);
    EXPECT_EQ(q::classify(2.0 * lo, 0.1, 1.0, 0.01).regime, Regime::underdamped);
    EXPECT_EQ(q::classify(2.0 * hi, 0.1, 1.0, 0.01).regime, Regime::overdamped);
}

TEST(RegimeBoundaries, StepRescalingShiftsBoundaries) {
    const auto [lo, hi] = q::regime_boundaries(0.1, 1.0, 0.01);
    const auto [lo10, hi10] = q::regime_boundaries(0.1, 1.0, 0.001);
    EXPECT_NEAR(lo10 / lo, 10.0, 0.1);
    EXPECT_NEAR(hi10 / hi, 10.0, 0.1);
}

TEST(RegimeBoundaries, NoSplitThrows) {
    EXPECT_THROW(q::regime_boundaries(0.1, 1.0, 0.0), lite::ContractError);
}

TEST(Simulator, FittedRateMatchesClosedForm) {
    for (double lambda : {-0.5, 0.05, 1.0, 150.0}) {
        const double alpha = 0.1, beta = 1.0, eta = 0.01;
        const auto rep = q::classify(lambda, alpha, beta, eta);
        ASSERT_NE(rep.regime, Regime::critical);
        const auto sim = q::simulate_recurrence(single(lambda), alpha, beta, eta, {1.0}, {0.3}, 2000);
        const double expected = std::log(rep.dominant_modulus);
        EXPECT_NEAR(sim.modes[0].fitted_log_rate, expected, 0.02 * std::abs(expected)) << "lambda " << lambda;
    }
}

TEST(Simulator, NegativeCurvatureGrows) {
    const auto rep = q::classify(-0.5, 0.1, 1.0, 0.01);
    EXPECT_GT(rep.r1.real(), 1.0);
    const auto sim = q::simulate_recurrence(single(-0.5), 0.1, 1.0, 0.01, {1.0}, {0.0}, 2000);
    EXPECT_TRUE(sim.diverged);
}

TEST(Simulator, MatchesDirectIteration) {
    const q::QuadraticSpec spec{{4.0, 0.5}, {1.0, -0.5}};
    const double alpha = 0.2, beta = 0.5, eta = 0.1;
    const auto sim = q::simulate_recurrence(spec, alpha, beta, eta, {2.0, -1.0}, {0.1, 0.2}, 50);
    for (std::size_t i = 0; i < 2; ++i) {
        const double lambda = spec.eigenvalues[i];
        double w = i == 0 ? 2.0 : -1.0;
        double m = i == 0 ? 0.1 : 0.2;
        for (std::size_t k = 1; k <= 50; ++k) {
            const double g = lambda * w + spec.offsets[i];
            m = (1.0 - alpha) * m + g;
            w -= eta * (m + beta * g);
            EXPECT_NEAR(sim.modes[i].e[k], w - spec.optimum(i), 1e-12);
        }
    }
}

TEST(Simulator, StepsToTolerance) {
    const auto sim = q::simulate_recurrence(single(1.0), 1.0, 0.0, 0.5, {1.0}, {0.0}, 100);
    // Gradient descent halves the error each step: f - f⋆ = ½·4^{-k}.
    const auto k = q::steps_to_tolerance(single(1.0), sim, 1e-6);
    ASSERT_TRUE(k.has_value());
    EXPECT_EQ(*k, 10u);
}

TEST(Simulator, RejectsLengthMismatch) {
    EXPECT_THROW(q::simulate_recurrence(single(1.0), 0.1, 0.0, 0.1, {1.0, 2.0}, {0.0}, 10), lite::ShapeError);
}

TEST(MonotonicityProbe, NegativeCurvatureIncreasing) {
    const auto t = q::monotonicity_probe(-0.5, 0.1, {0.005, 0.01, 0.02}, {0.0, 1.0, 2.0});
    EXPECT_TRUE(t.pass);
    EXPECT_EQ(t.violations, 0u);
    EXPECT_EQ(t.excluded, 0u);
    for (const auto& p : t.points) EXPECT_GT(p.r1, 1.0);
}

TEST(MonotonicityProbe, FlatConvexDecreasing) {
    const auto t = q::monotonicity_probe(0.1, 0.1, {0.005, 0.01, 0.02}, {0.0, 1.0, 2.0});
    EXPECT_TRUE(t.pass);
    EXPECT_EQ(t.violations, 0u);
    EXPECT_EQ(t.excluded, 0u);
    for (const auto& p : t.points) EXPECT_LT(p.r1, 1.0);
}

TEST(MonotonicityProbe, VanishingStepApproachesOne) {
    EXPECT_NEAR(q::classify(0.1, 0.1, 1.0, 1e-9).r1.real(), 1.0, 1e-8);
    EXPECT_NEAR(q::classify(-0.1, 0.1, 1.0, 1e-9).r1.real(), 1.0, 1e-8);
}

TEST(MonotonicityProbe, LiteFlatModeContractsFaster) {
    const double alpha = 0.1, eta = 0.01;
    int compared = 0;
    for (double lambda : {0.005, 0.01, 0.05}) {
        for (double chi : {1.0, 2.0, 4.0}) {
            for (double b2 : {0.0, 0.5, 1.0}) {
                if (chi == 1.0 && b2 == 0.0) continue;
                if (!(lambda < q::regime_boundaries(alpha, b2, chi * eta).first)) continue;
                ++compared;
                EXPECT_LT(q::classify(lambda, alpha, b2, chi * eta).r1.real(),
                          q::classify(lambda, alpha, 0.0, eta).r1.real());
            }
        }
    }
    EXPECT_GE(compared, 20);
}

TEST(Lyapunov, EnergyDropsByStateNorm) {
    lite::Rng rng(63);
    for (auto [T, D] : {std::pair{0.94, 0.891}, std::pair{0.3, 0.05}, std::pair{-0.3, 0.5}}) {
        const auto x = q::lyapunov_form(T, D);
        EXPECT_NEAR(x(0, 1), x(1, 0), 1e-12);
        for (int i = 0; i < 10; ++i) {
            const double s0 = rng.normal(), s1 = rng.normal();
            const double n0 = 2.0 * T * s0 - D * s1, n1 = s0;
            const auto v = [&](double a, double b) { return x(0, 0) * a * a + 2.0 * x(0, 1) * a * b + x(1, 1) * b * b; };
            EXPECT_NEAR(v(n0, n1) - v(s0, s1), -(s0 * s0 + s1 * s1), 1e-9 * (1.0 + v(s0, s1)));
            EXPECT_GT(v(s0, s1), 0.0);
        }
    }
}

TEST(QuadraticSpec, Validation) {
    EXPECT_THROW((q::QuadraticSpec{{1.0, 2.0}, {0.0, 0.0}}.validate()), lite::ContractError);
    EXPECT_THROW((q::QuadraticSpec{{1.0}, {0.0, 0.0}}.validate()), lite::ShapeError);
    EXPECT_THROW((q::QuadraticSpec{{1.0, 0.0}, {0.0, 1.0}}.validate()), lite::ContractError);
    EXPECT_DOUBLE_EQ((q::QuadraticSpec{{2.0}, {1.0}}.optimum(0)), -0.5);
}
