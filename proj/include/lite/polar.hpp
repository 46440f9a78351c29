// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_POLAR_HPP
#define LITE_POLAR_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "lite/linalg.hpp"

namespace lite::polar {

using linalg::DenseMatrix;

/// Odd quintic step X <- a X + b X (XᵀX) + c X (XᵀX)².
struct QuinticCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Newton–Schulz coefficient schedule. Iteration i uses table[i], or the last
/// entry once i runs past the table. The input is divided by its Frobenius
/// norm before the first iteration.
///
/// Any injected table must be an odd polynomial map: the composite projector
/// feeds it matrices whose signed spectrum straddles zero.
struct NsSchedule {
    int iterations = 6;
    std::vector<QuinticCoeffs> table;

    /// Greedy minimax quintics for singular values in [1e-3, 1]; six
    /// iterations land in [0.999, 1.001]. Tail iterations use the
    /// (15/8, -10/8, 3/8) refinement polynomial.
    static NsSchedule polar_express(int iterations = 6);
    /// The fixed (3.4445, -4.7750, 2.0315) quintic common in Muon code.
    /// Fast but only drives singular values into roughly [0.7, 1.2].
    static NsSchedule jordan(int iterations = 6);

    const QuinticCoeffs& at(int i) const;
    void validate() const;
};

/// Approximate polar factor U Vᵀ of a. Wide inputs are transposed,
/// iterated in the tall orientation and transposed back. An all-zero input
/// returns zeros.
DenseMatrix ns_polar(const DenseMatrix& a, const NsSchedule& schedule);

/// Multiplicative feedback on the threshold scale l. It steers ‖P‖_F toward
/// √target_dim.
struct RankController {
    double scale_l = 1.0;
    std::size_t target_dim = 1;
    double up_factor = 1.05;
    double down_factor = 0.95;
};

RankController update_rank_controller(RankController controller, double p_frob);

struct CompositeProjection {
    DenseMatrix projector;  // n × n, P = TᵀT
    DenseMatrix filter;     // m × n, T
    DenseMatrix polar;      // m × n, NS(M̃), reusable as the momentum direction
    double tau = 0.0;
};

/// Composite NS step filter T = ½NS(M̃) + ½NS(M̃/τ − NS(M̃)) with
/// τ = scale_l·‖M̃‖_F. T keeps the singular directions with σ > τ and drops
/// the rest; P = TᵀT projects onto the matching right singular subspace.
/// Requires rows >= cols.
CompositeProjection composite_sharp_projection(const DenseMatrix& m_tilde, const RankController& controller,
                                               const NsSchedule& schedule);

}  // namespace lite::polar

#endif  // LITE_POLAR_HPP
