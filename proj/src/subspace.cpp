// SPDX-License-Identifier: Apache-2.0

#include "lite/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace lite::subspace {
namespace {

double mean_of(const DenseMatrix& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v.data()) s += x;
    return s / static_cast<double>(v.size());
}

void require_orthonormal(const DenseMatrix& basis, const char* which) {
    DenseMatrix gram = linalg::matmul_tn(basis, basis);
    gram -= DenseMatrix::identity(basis.cols());
    if (linalg::max_abs(gram) > 1e-8) {
        throw ContractError(std::string("coverage_score: ") + which + " columns are not orthonormal");
    }
}

}  // namespace

MaskThresholds mask_thresholds(const DenseMatrix& v, const SoapMaskController& ctrl) {
    const double mean = mean_of(v);
    return {ctrl.l_s * mean, ctrl.l_smooth * mean};
}

DenseMatrix smoothed_sharp_mask(const DenseMatrix& v, const SoapMaskController& ctrl) {
    if (!(ctrl.l_s > ctrl.l_smooth)) {
        throw ContractError("smoothed_sharp_mask: l_s must exceed l_smooth");
    }
    for (double x : v.data()) {
        if (!(x >= 0.0)) throw ContractError("smoothed_sharp_mask: second moment must be non-negative");
    }
    const auto [tau_s, tau_smooth] = mask_thresholds(v, ctrl);
    DenseMatrix p(v.rows(), v.cols());
    if (tau_s == 0.0) {
        for (double& x : p.data()) x = 1.0;
        return p;
    }
    const double width = tau_s - tau_smooth;
    auto vd = v.data();
    auto pd = p.data();
    for (std::size_t i = 0; i < vd.size(); ++i) {
        if (vd[i] >= tau_s) {
            pd[i] = 1.0;
        } else if (vd[i] <= tau_smooth) {
            pd[i] = 0.0;
        } else {
            pd[i] = std::clamp((vd[i] - tau_smooth) / width, 0.0, 1.0);
        }
    }
    return p;
}

std::size_t count_above(const DenseMatrix& v, double tau) {
    return static_cast<std::size_t>(std::count_if(v.data().begin(), v.data().end(), [tau](double x) { return x > tau; }));
}

SoapMaskController update_soap_controller(SoapMaskController ctrl, std::size_t count_above_s,
                                          std::size_t count_above_smooth) {
    ctrl.l_s *= count_above_s >= ctrl.d_s ? 1.05 : 0.95;
    ctrl.l_smooth *= count_above_smooth >= ctrl.d_s + ctrl.d_smooth ? 1.05 : 0.95;
    ctrl.l_smooth = std::min(0.95 * ctrl.l_s, ctrl.l_smooth);
    return ctrl;
}

double coverage_score(const DenseMatrix& basis_a, const DenseMatrix& basis_b) {
    if (basis_a.rows() != basis_b.rows()) throw ShapeError("coverage_score: bases live in different dimensions");
    if (basis_a.cols() == 0) throw ShapeError("coverage_score: empty basis");
    if (basis_a.cols() > basis_b.cols()) throw ContractError("coverage_score: requires k_A <= k_B");
    require_orthonormal(basis_a, "basis_a");
    require_orthonormal(basis_b, "basis_b");
    // An orthonormal basis of the whole space covers everything.
    if (basis_b.cols() == basis_b.rows()) return 1.0;

    const auto svd = linalg::svd_oracle(linalg::matmul_tn(basis_a, basis_b));
    double nuclear = 0.0;
    for (double s : svd.sigma) nuclear += s;
    return std::clamp(nuclear / static_cast<double>(basis_a.cols()), 0.0, 1.0);
}

}  // namespace lite::subspace
