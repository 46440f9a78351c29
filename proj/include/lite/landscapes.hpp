// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_LANDSCAPES_HPP
#define LITE_LANDSCAPES_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lite/linalg.hpp"
#include "lite/optim.hpp"
#include "lite/quadratic.hpp"
#include "lite/rng.hpp"

namespace lite::landscapes {

using linalg::DenseMatrix;

/// Placement of one named parameter block inside the flat vector.
struct BlockLayout {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    optim::Role role = optim::Role::adam;

    std::size_t size() const noexcept { return rows * cols; }
};

class Landscape {
public:
    virtual ~Landscape() = default;

    virtual std::size_t dim() const = 0;
    virtual double loss(std::span<const double> w) const = 0;
    virtual std::vector<double> grad(std::span<const double> w) const = 0;
    /// Hessian-vector product. The default is a central difference of the
    /// gradient with step 1e-5·(1 + ‖w‖) along v/‖v‖.
    virtual std::vector<double> hvp(std::span<const double> w, std::span<const double> v) const;
    /// Default: one block "w" of shape dim×1 with role adam.
    virtual std::vector<BlockLayout> blocks() const;
    virtual std::vector<double> initial_point(Rng& rng) const = 0;

    virtual bool stochastic() const { return false; }
    /// Fresh-minibatch gradient; deterministic landscapes return grad(w).
    virtual std::vector<double> sample_grad(std::span<const double> w, Rng& rng) const;
};

/// f(w) = ½ Σ λᵢ wᵢ² + bᵀw, exact Hessian.
class QuadraticLandscape final : public Landscape {
public:
    explicit QuadraticLandscape(quadratic::QuadraticSpec spec, std::vector<double> init = {});

    std::size_t dim() const override { return spec_.eigenvalues.size(); }
    double loss(std::span<const double> w) const override;
    std::vector<double> grad(std::span<const double> w) const override;
    std::vector<double> hvp(std::span<const double> w, std::span<const double> v) const override;
    std::vector<double> initial_point(Rng& rng) const override;

    const quadratic::QuadraticSpec& spec() const noexcept { return spec_; }
    /// Loss at the minimizer, 0 contribution from zero-curvature modes.
    double optimal_loss() const;

private:
    quadratic::QuadraticSpec spec_;
    std::vector<double> init_;
};

struct RiverValleySpec {
    std::size_t sharp_dim = 1;
    std::size_t flat_dim = 1;
    double sharp_curvature = 100.0;
    double valley_amplitude = 0.1;
    /// Curvature of the along-valley term; ≤ 0 selects sharp_curvature / 10⁴.
    double flat_curvature = 0.0;
    double init_scale = 1.0;
};

/// f(x_s, x_f) = ½·L·‖x_s - c(x_f)‖² + ½·μ·‖x_f‖², with
/// c_i(x_f) = a·sin(x_f[i mod flat_dim]). Parameters are laid out as
/// [x_s, x_f] in blocks "sharp" and "flat".
class RiverValleyLandscape final : public Landscape {
public:
    explicit RiverValleyLandscape(RiverValleySpec spec);

    std::size_t dim() const override { return spec_.sharp_dim + spec_.flat_dim; }
    double loss(std::span<const double> w) const override;
    std::vector<double> grad(std::span<const double> w) const override;
    std::vector<BlockLayout> blocks() const override;
    std::vector<double> initial_point(Rng& rng) const override;

    double flat_curvature() const noexcept { return mu_; }
    std::vector<double> valley_center(std::span<const double> x_flat) const;

private:
    RiverValleySpec spec_;
    double mu_;
};

struct KroneckerSpec {
    std::size_t rows = 16;
    std::size_t cols = 8;
    std::size_t sharp = 2;
    double sharp_scale = 10.0;
    double flat_scale = 1.0;
    double noise = 1.0;
    /// Standard deviation of the initial offset from the minimizer.
    double init_offset = 0.0;
};

/// f(W) = ½ tr((W - W⋆)ᵀ L (W - W⋆) R) with SPD factors L (rows×rows) and
/// R (cols×cols) whose top `sharp` eigenvalues are separated from the rest.
/// Stochastic gradients add noise·L Z R with Z iid standard normal, so
/// E[GᵀG] ∝ R² and E[GGᵀ] ∝ L² at W⋆ while the row and column Hessians are
/// proportional to R and L.
class KroneckerQuadratic final : public Landscape {
public:
    KroneckerQuadratic(KroneckerSpec spec, std::uint64_t seed);

    std::size_t dim() const override { return spec_.rows * spec_.cols; }
    double loss(std::span<const double> w) const override;
    std::vector<double> grad(std::span<const double> w) const override;
    std::vector<double> hvp(std::span<const double> w, std::span<const double> v) const override;
    std::vector<BlockLayout> blocks() const override;
    std::vector<double> initial_point(Rng& rng) const override;
    bool stochastic() const override { return true; }
    std::vector<double> sample_grad(std::span<const double> w, Rng& rng) const override;

    const DenseMatrix& left() const noexcept { return l_; }
    const DenseMatrix& right() const noexcept { return r_; }
    const DenseMatrix& optimum() const noexcept { return w_star_; }

private:
    DenseMatrix residual_grad(const DenseMatrix& diff) const;

    KroneckerSpec spec_;
    DenseMatrix l_;
    DenseMatrix r_;
    DenseMatrix w_star_;
};

struct MlpSpec {
    std::vector<std::size_t> widths{8, 16, 32, 16, 4};
    std::size_t batch = 64;
    double noise = 0.01;
};

/// Teacher–student regression MLP with tanh hidden layers and a linear
/// output, loss = mean over batch and outputs of (y - t)². Block "l<k>.w"
/// holds layer k's weight (out×in) and "l<k>.b" its bias (out×1). The
/// first weight is the embedding block, the last weight and bias are the
/// output blocks, hidden weights are muon blocks and hidden biases are norm
/// blocks.
class MlpLandscape final : public Landscape {
public:
    MlpLandscape(MlpSpec spec, std::uint64_t seed);

    std::size_t dim() const override { return dim_; }
    double loss(std::span<const double> w) const override;
    std::vector<double> grad(std::span<const double> w) const override;
    std::vector<BlockLayout> blocks() const override { return layout_; }
    std::vector<double> initial_point(Rng& rng) const override;
    bool stochastic() const override { return true; }
    std::vector<double> sample_grad(std::span<const double> w, Rng& rng) const override;

    const MlpSpec& spec() const noexcept { return spec_; }
    const DenseMatrix& inputs() const noexcept { return x_; }
    const DenseMatrix& targets() const noexcept { return t_; }

private:
    std::vector<double> forward(std::span<const double> w, std::span<const double> x,
                                std::vector<std::vector<double>>* acts) const;
    void draw_batch(Rng& rng, DenseMatrix& x, DenseMatrix& t) const;
    double batch_loss(std::span<const double> w, const DenseMatrix& x, const DenseMatrix& t) const;
    std::vector<double> batch_grad(std::span<const double> w, const DenseMatrix& x, const DenseMatrix& t) const;

    MlpSpec spec_;
    std::size_t dim_ = 0;
    std::vector<BlockLayout> layout_;
    std::vector<double> teacher_;
    DenseMatrix x_;
    DenseMatrix t_;
};

/// Central-difference Hessian over the coordinates `idx`, one gradient
/// pair per coordinate with step 1e-5·(1 + |wᵢ|). Not symmetrized.
DenseMatrix fd_subset_hessian(const Landscape& landscape, std::span<const double> w,
                              const std::vector<std::size_t>& idx);
/// Hessian of one named block; at most 1024 parameters.
DenseMatrix fd_block_hessian(const Landscape& landscape, const std::string& block_name, std::span<const double> w);
DenseMatrix symmetrized(const DenseMatrix& h);

std::vector<std::size_t> row_indices(const BlockLayout& block, std::size_t row);
std::vector<std::size_t> column_indices(const BlockLayout& block, std::size_t col);
const BlockLayout& find_block(const std::vector<BlockLayout>& blocks, const std::string& name);

DenseMatrix extract_block(std::span<const double> w, const BlockLayout& block);
void write_block(std::span<double> w, const BlockLayout& block, const DenseMatrix& m);

struct AlignSpec {
    std::size_t train_steps = 100;
    double lr = 1e-3;
    std::size_t d_s = 4;
    std::vector<std::size_t> k_grid{4, 5, 6, 8, 12, 16};
    std::size_t batches = 32;
    /// Empty selects every block with at least two rows and two columns.
    std::vector<std::string> blocks;
};

struct CoverageCurve {
    std::string block;
    std::string side;  // "row" (Hessian of one row vs E[GᵀG]) or "col"
    std::size_t d_s = 0;
    std::vector<std::size_t> k;
    std::vector<double> coverage;  // averaged over the rows or columns
};

struct AlignmentResult {
    std::vector<CoverageCurve> curves;
    std::vector<double> w;  // trained parameters
};

/// Trains with AdamW on sampled gradients, then compares the top-d_s
/// eigenspaces of per-row (per-column) finite-difference Hessians with the
/// top-k eigenspaces of E[GᵀG] (E[GGᵀ]) estimated over `batches` fresh
/// minibatches. Each curve ends at the full dimension.
AlignmentResult alignment_experiment(const Landscape& landscape, std::vector<double> w0, const AlignSpec& spec,
                                     Rng& rng);

}  // namespace lite::landscapes

#endif  // LITE_LANDSCAPES_HPP
