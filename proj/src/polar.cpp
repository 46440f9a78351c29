// SPDX-License-Identifier: Apache-2.0

#include "lite/polar.hpp"

#include <cmath>
#include <string>

namespace lite::polar {
namespace {

// Designed offline by greedy minimax (LP over sample points) on [1e-3, 1].
constexpr std::array<QuinticCoeffs, 7> kPolarExpress{{
    {8.470328678787942, -25.10807423304369, 18.62927522557688},
    {4.182834256090471, -3.1087012698809944, 0.5806067273062527},
    {3.9618576978173405, -2.9540641729200856, 0.562976205715749},
    {3.286587056963506, -2.4647207752458535, 0.5073577687096809},
    {2.2737507239135293, -1.6446610543936273, 0.4161910154315463},
    {1.8887164716970872, -1.2651577096042035, 0.3765191270113866},
    {1.875, -1.25, 0.375},
}};

DenseMatrix ns_tall(const DenseMatrix& a, const NsSchedule& schedule) {
    const double norm = linalg::frobenius_norm(a);
    if (norm == 0.0) return DenseMatrix(a.rows(), a.cols());

    DenseMatrix x = a;
    x *= 1.0 / norm;
    for (int i = 0; i < schedule.iterations; ++i) {
        const auto& k = schedule.at(i);
        const DenseMatrix gram = linalg::matmul_tn(x, x);
        DenseMatrix poly = linalg::matmul(gram, gram);
        poly *= k.c;
        DenseMatrix lin = gram;
        lin *= k.b;
        poly += lin;
        DenseMatrix next = linalg::matmul(x, poly);
        DenseMatrix ax = x;
        ax *= k.a;
        next += ax;
        x = std::move(next);
    }
    return x;
}

}  // namespace

NsSchedule NsSchedule::polar_express(int iterations) {
    return {iterations, std::vector<QuinticCoeffs>(kPolarExpress.begin(), kPolarExpress.end())};
}

NsSchedule NsSchedule::jordan(int iterations) { return {iterations, {{3.4445, -4.7750, 2.0315}}}; }

const QuinticCoeffs& NsSchedule::at(int i) const {
    const auto idx = static_cast<std::size_t>(i);
    return idx < table.size() ? table[idx] : table.back();
}

void NsSchedule::validate() const {
    if (iterations < 1) throw ContractError("NsSchedule: iterations must be >= 1");
    if (table.empty()) throw ContractError("NsSchedule: empty coefficient table");
}

DenseMatrix ns_polar(const DenseMatrix& a, const NsSchedule& schedule) {
    schedule.validate();
    if (!a.all_finite()) throw ContractError("ns_polar: non-finite input");
    if (a.rows() >= a.cols()) return ns_tall(a, schedule);
    return ns_tall(a.transposed(), schedule).transposed();
}

RankController update_rank_controller(RankController controller, double p_frob) {
    const double target = std::sqrt(static_cast<double>(controller.target_dim));
    controller.scale_l *= p_frob >= target ? controller.up_factor : controller.down_factor;
    return controller;
}

CompositeProjection composite_sharp_projection(const DenseMatrix& m_tilde, const RankController& controller,
                                               const NsSchedule& schedule) {
    if (m_tilde.rows() < m_tilde.cols()) {
        throw ShapeError("composite_sharp_projection: needs rows >= cols, got " + std::to_string(m_tilde.rows()) +
                         "x" + std::to_string(m_tilde.cols()));
    }
    if (!(controller.scale_l > 0.0)) throw ContractError("composite_sharp_projection: scale_l must be positive");

    const std::size_t m = m_tilde.rows();
    const std::size_t n = m_tilde.cols();
    const double norm = linalg::frobenius_norm(m_tilde);
    CompositeProjection out{DenseMatrix(n, n), DenseMatrix(m, n), DenseMatrix(m, n), controller.scale_l * norm};
    if (norm == 0.0) return out;

    out.polar = ns_polar(m_tilde, schedule);
    DenseMatrix shifted = m_tilde;
    shifted *= 1.0 / out.tau;
    shifted -= out.polar;
    DenseMatrix step = ns_polar(shifted, schedule);

    out.filter = out.polar;
    out.filter += step;
    out.filter *= 0.5;
    out.projector = linalg::matmul_tn(out.filter, out.filter);
    return out;
}

}  // namespace lite::polar
