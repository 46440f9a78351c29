// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_SUBSPACE_HPP
#define LITE_SUBSPACE_HPP

#include <cstddef>

#include "lite/linalg.hpp"

namespace lite::subspace {

using linalg::DenseMatrix;

/// Dual threshold scales for the entrywise sharp mask. Thresholds are
/// τ_s = l_s·mean(V) and τ_smooth = l_smooth·mean(V).
struct SoapMaskController {
    double l_s = 1.0;
    double l_smooth = 0.5;
    std::size_t d_s = 1;
    std::size_t d_smooth = 0;
};

struct MaskThresholds {
    double tau_s = 0.0;
    double tau_smooth = 0.0;
};

MaskThresholds mask_thresholds(const DenseMatrix& v, const SoapMaskController& ctrl);

/// Entrywise ramp: 1 at or above τ_s, 0 at or below τ_smooth, linear in
/// between. A zero V gives an all-ones mask.
DenseMatrix smoothed_sharp_mask(const DenseMatrix& v, const SoapMaskController& ctrl);

/// Number of entries strictly above tau.
std::size_t count_above(const DenseMatrix& v, double tau);

/// Each scale moves ×1.05 when its count reaches the target (d_s for l_s,
/// d_s + d_smooth for l_smooth) and ×0.95 otherwise, after which
/// l_smooth is clamped to at most 0.95·l_s.
SoapMaskController update_soap_controller(SoapMaskController ctrl, std::size_t count_above_s,
                                          std::size_t count_above_smooth);

/// (1/k_A)·‖AᵀB‖_* for orthonormal bases A (d×k_A) and B (d×k_B), k_A ≤ k_B.
/// Equals the mean cosine of the principal angles; clamped to [0, 1].
double coverage_score(const DenseMatrix& basis_a, const DenseMatrix& basis_b);

}  // namespace lite::subspace

#endif  // LITE_SUBSPACE_HPP
