// SPDX-License-Identifier: Apache-2.0

#include "lite/landscapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lite/errors.hpp"
#include "lite/subspace.hpp"

namespace lite::landscapes {

namespace {

double norm2(std::span<const double> v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

void require_dim(std::span<const double> w, std::size_t n, const char* who) {
    if (w.size() != n) throw ShapeError(std::string(who) + ": parameter length mismatch");
}

DenseMatrix gaussian(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
    DenseMatrix m(rows, cols);
    for (double& x : m.data()) x = scale * rng.normal();
    return m;
}

DenseMatrix random_orthogonal(std::size_t n, Rng& rng) { return linalg::qr_decompose(gaussian(n, n, rng)).q; }

/// Descending spectrum: `sharp` values in [0.8, 1]·sharp_scale, the rest in
/// [0.1, 0.5]·flat_scale.
std::vector<double> split_spectrum(std::size_t n, std::size_t sharp, double sharp_scale, double flat_scale) {
    std::vector<double> lam(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < sharp) {
            const double t = sharp > 1 ? static_cast<double>(i) / static_cast<double>(sharp - 1) : 0.0;
            lam[i] = sharp_scale * (1.0 - 0.2 * t);
        } else {
            const std::size_t flat = n - sharp;
            const double t = flat > 1 ? static_cast<double>(i - sharp) / static_cast<double>(flat - 1) : 0.0;
            lam[i] = flat_scale * (0.5 - 0.4 * t);
        }
    }
    return lam;
}

DenseMatrix spd_from(const DenseMatrix& q, const std::vector<double>& lam) {
    return linalg::matmul_nt(linalg::matmul(q, DenseMatrix::diagonal(lam)), q);
}

DenseMatrix top_columns(const DenseMatrix& vectors, std::size_t k) {
    DenseMatrix out(vectors.rows(), k);
    for (std::size_t r = 0; r < vectors.rows(); ++r)
        for (std::size_t c = 0; c < k; ++c) out(r, c) = vectors(r, c);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Landscape

std::vector<double> Landscape::hvp(std::span<const double> w, std::span<const double> v) const {
    require_dim(w, dim(), "hvp");
    require_dim(v, dim(), "hvp");
    const double vn = norm2(v);
    std::vector<double> out(dim(), 0.0);
    if (vn == 0.0) return out;
    const double h = 1e-5 * (1.0 + norm2(w));
    std::vector<double> wp(w.begin(), w.end());
    std::vector<double> wm(w.begin(), w.end());
    for (std::size_t i = 0; i < wp.size(); ++i) {
        wp[i] += h * v[i] / vn;
        wm[i] -= h * v[i] / vn;
    }
    const auto gp = grad(wp);
    const auto gm = grad(wm);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = vn * (gp[i] - gm[i]) / (2.0 * h);
    return out;
}

std::vector<BlockLayout> Landscape::blocks() const { return {BlockLayout{"w", 0, dim(), 1, optim::Role::adam}}; }

std::vector<double> Landscape::sample_grad(std::span<const double> w, Rng& /*rng*/) const { return grad(w); }

// ---------------------------------------------------------------- quadratic

QuadraticLandscape::QuadraticLandscape(quadratic::QuadraticSpec spec, std::vector<double> init)
    : spec_(std::move(spec)), init_(std::move(init)) {
    spec_.validate();
    if (!init_.empty() && init_.size() != spec_.eigenvalues.size()) {
        throw ShapeError("quadratic landscape: initial point length mismatch");
    }
}

double QuadraticLandscape::loss(std::span<const double> w) const {
    require_dim(w, dim(), "quadratic loss");
    double f = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        f += 0.5 * spec_.eigenvalues[i] * w[i] * w[i] + spec_.offsets[i] * w[i];
    }
    return f;
}

std::vector<double> QuadraticLandscape::grad(std::span<const double> w) const {
    require_dim(w, dim(), "quadratic grad");
    std::vector<double> g(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = spec_.eigenvalues[i] * w[i] + spec_.offsets[i];
    return g;
}

std::vector<double> QuadraticLandscape::hvp(std::span<const double> w, std::span<const double> v) const {
    require_dim(w, dim(), "quadratic hvp");
    require_dim(v, dim(), "quadratic hvp");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = spec_.eigenvalues[i] * v[i];
    return out;
}

std::vector<double> QuadraticLandscape::initial_point(Rng& rng) const {
    if (!init_.empty()) return init_;
    std::vector<double> w(dim());
    for (double& x : w) x = rng.normal();
    return w;
}

double QuadraticLandscape::optimal_loss() const {
    std::vector<double> w(dim());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = spec_.optimum(i);
    return loss(w);
}

// ------------------------------------------------------------- river valley

RiverValleyLandscape::RiverValleyLandscape(RiverValleySpec spec) : spec_(spec) {
    if (spec_.sharp_dim == 0 || spec_.flat_dim == 0) throw ShapeError("river valley: dimensions must be positive");
    if (!(spec_.sharp_curvature > 0.0)) throw ContractError("river valley: sharp_curvature must be positive");
    mu_ = spec_.flat_curvature > 0.0 ? spec_.flat_curvature : spec_.sharp_curvature / 1e4;
}

std::vector<double> RiverValleyLandscape::valley_center(std::span<const double> x_flat) const {
    std::vector<double> c(spec_.sharp_dim);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = spec_.valley_amplitude * std::sin(x_flat[i % spec_.flat_dim]);
    return c;
}

double RiverValleyLandscape::loss(std::span<const double> w) const {
    require_dim(w, dim(), "river valley loss");
    const auto xs = w.first(spec_.sharp_dim);
    const auto xf = w.subspan(spec_.sharp_dim);
    const auto c = valley_center(xf);
    double sharp = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) sharp += (xs[i] - c[i]) * (xs[i] - c[i]);
    double flat = 0.0;
    for (double x : xf) flat += x * x;
    return 0.5 * spec_.sharp_curvature * sharp + 0.5 * mu_ * flat;
}

std::vector<double> RiverValleyLandscape::grad(std::span<const double> w) const {
    require_dim(w, dim(), "river valley grad");
    const auto xs = w.first(spec_.sharp_dim);
    const auto xf = w.subspan(spec_.sharp_dim);
    const auto c = valley_center(xf);
    std::vector<double> g(dim(), 0.0);
    for (std::size_t j = 0; j < spec_.flat_dim; ++j) g[spec_.sharp_dim + j] = mu_ * xf[j];
    for (std::size_t i = 0; i < spec_.sharp_dim; ++i) {
        const double r = spec_.sharp_curvature * (xs[i] - c[i]);
        g[i] = r;
        const std::size_t j = i % spec_.flat_dim;
        g[spec_.sharp_dim + j] -= r * spec_.valley_amplitude * std::cos(xf[j]);
    }
    return g;
}

std::vector<BlockLayout> RiverValleyLandscape::blocks() const {
    return {BlockLayout{"sharp", 0, spec_.sharp_dim, 1, optim::Role::adam},
            BlockLayout{"flat", spec_.sharp_dim, spec_.flat_dim, 1, optim::Role::adam}};
}

std::vector<double> RiverValleyLandscape::initial_point(Rng& rng) const {
    std::vector<double> w(dim());
    for (double& x : w) x = spec_.init_scale * rng.normal();
    return w;
}

// ---------------------------------------------------------------- Kronecker

KroneckerQuadratic::KroneckerQuadratic(KroneckerSpec spec, std::uint64_t seed) : spec_(spec) {
    if (spec_.rows == 0 || spec_.cols == 0) throw ShapeError("kronecker: dimensions must be positive");
    if (spec_.sharp > std::min(spec_.rows, spec_.cols)) throw ShapeError("kronecker: sharp exceeds a factor dimension");
    if (!(spec_.sharp_scale > 0.5 * spec_.flat_scale) || !(spec_.flat_scale > 0.0)) {
        throw ContractError("kronecker: sharp_scale must dominate flat_scale");
    }
    Rng root(seed);
    Rng rl = root.child("left");
    Rng rr = root.child("right");
    Rng rw = root.child("optimum");
    l_ = spd_from(random_orthogonal(spec_.rows, rl),
                  split_spectrum(spec_.rows, spec_.sharp, spec_.sharp_scale, spec_.flat_scale));
    r_ = spd_from(random_orthogonal(spec_.cols, rr),
                  split_spectrum(spec_.cols, spec_.sharp, spec_.sharp_scale, spec_.flat_scale));
    w_star_ = gaussian(spec_.rows, spec_.cols, rw);
}

DenseMatrix KroneckerQuadratic::residual_grad(const DenseMatrix& diff) const {
    return linalg::matmul(linalg::matmul(l_, diff), r_);
}

double KroneckerQuadratic::loss(std::span<const double> w) const {
    require_dim(w, dim(), "kronecker loss");
    DenseMatrix diff(spec_.rows, spec_.cols, std::vector<double>(w.begin(), w.end()));
    diff -= w_star_;
    const DenseMatrix g = residual_grad(diff);
    double f = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) f += diff.data()[i] * g.data()[i];
    return 0.5 * f;
}

std::vector<double> KroneckerQuadratic::grad(std::span<const double> w) const {
    require_dim(w, dim(), "kronecker grad");
    DenseMatrix diff(spec_.rows, spec_.cols, std::vector<double>(w.begin(), w.end()));
    diff -= w_star_;
    const DenseMatrix g = residual_grad(diff);
    return {g.data().begin(), g.data().end()};
}

std::vector<double> KroneckerQuadratic::hvp(std::span<const double> w, std::span<const double> v) const {
    require_dim(w, dim(), "kronecker hvp");
    require_dim(v, dim(), "kronecker hvp");
    const DenseMatrix g = residual_grad(DenseMatrix(spec_.rows, spec_.cols, std::vector<double>(v.begin(), v.end())));
    return {g.data().begin(), g.data().end()};
}

std::vector<BlockLayout> KroneckerQuadratic::blocks() const {
    return {BlockLayout{"w", 0, spec_.rows, spec_.cols, optim::Role::muon}};
}

std::vector<double> KroneckerQuadratic::initial_point(Rng& rng) const {
    std::vector<double> w(w_star_.data().begin(), w_star_.data().end());
    if (spec_.init_offset != 0.0) {
        for (double& x : w) x += spec_.init_offset * rng.normal();
    }
    return w;
}

std::vector<double> KroneckerQuadratic::sample_grad(std::span<const double> w, Rng& rng) const {
    auto g = grad(w);
    if (spec_.noise == 0.0) return g;
    const DenseMatrix noise = residual_grad(gaussian(spec_.rows, spec_.cols, rng, spec_.noise));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += noise.data()[i];
    return g;
}

// ---------------------------------------------------------------------- MLP

MlpLandscape::MlpLandscape(MlpSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
    const auto& widths = spec_.widths;
    if (widths.size() < 2) throw ShapeError("mlp: need at least input and output widths");
    if (std::any_of(widths.begin(), widths.end(), [](std::size_t n) { return n == 0; })) {
        throw ShapeError("mlp: widths must be positive");
    }
    if (spec_.batch == 0) throw ShapeError("mlp: batch must be positive");

    const std::size_t layers = widths.size() - 1;
    std::size_t offset = 0;
    for (std::size_t k = 0; k < layers; ++k) {
        const std::size_t in = widths[k];
        const std::size_t out = widths[k + 1];
        const bool last = k + 1 == layers;
        const optim::Role wrole = k == 0 ? optim::Role::embedding : last ? optim::Role::output : optim::Role::muon;
        const optim::Role brole = last ? optim::Role::output : optim::Role::norm;
        const std::string prefix = "l" + std::to_string(k);
        layout_.push_back({prefix + ".w", offset, out, in, wrole});
        offset += out * in;
        layout_.push_back({prefix + ".b", offset, out, 1, brole});
        offset += out;
    }
    dim_ = offset;
    if (dim_ > 20000) throw ShapeError("mlp: parameter count exceeds 20000");

    Rng root(seed);
    Rng teacher_rng = root.child("teacher");
    teacher_ = initial_point(teacher_rng);
    Rng data_rng = root.child("data");
    draw_batch(data_rng, x_, t_);
}

std::vector<double> MlpLandscape::initial_point(Rng& rng) const {
    std::vector<double> w(dim_, 0.0);
    for (const auto& b : layout_) {
        if (b.cols == 1 && b.name.back() == 'b') continue;  // biases start at zero
        const double scale = 1.0 / std::sqrt(static_cast<double>(b.cols));
        for (std::size_t i = 0; i < b.size(); ++i) w[b.offset + i] = scale * rng.normal();
    }
    return w;
}

std::vector<double> MlpLandscape::forward(std::span<const double> w, std::span<const double> x,
                                          std::vector<std::vector<double>>* acts) const {
    std::vector<double> h(x.begin(), x.end());
    if (acts) acts->assign(1, h);
    const std::size_t layers = spec_.widths.size() - 1;
    for (std::size_t k = 0; k < layers; ++k) {
        const auto& wb = layout_[2 * k];
        const auto& bb = layout_[2 * k + 1];
        std::vector<double> z(wb.rows);
        for (std::size_t o = 0; o < wb.rows; ++o) {
            double s = w[bb.offset + o];
            const double* row = w.data() + wb.offset + o * wb.cols;
            for (std::size_t i = 0; i < wb.cols; ++i) s += row[i] * h[i];
            z[o] = k + 1 == layers ? s : std::tanh(s);
        }
        h = std::move(z);
        if (acts) acts->push_back(h);
    }
    return h;
}

void MlpLandscape::draw_batch(Rng& rng, DenseMatrix& x, DenseMatrix& t) const {
    const std::size_t in = spec_.widths.front();
    const std::size_t out = spec_.widths.back();
    x = DenseMatrix(spec_.batch, in);
    t = DenseMatrix(spec_.batch, out);
    for (std::size_t s = 0; s < spec_.batch; ++s) {
        for (double& v : x.row(s)) v = rng.normal();
        const auto y = forward(teacher_, x.row(s), nullptr);
        for (std::size_t o = 0; o < out; ++o) t(s, o) = y[o] + spec_.noise * rng.normal();
    }
}

double MlpLandscape::batch_loss(std::span<const double> w, const DenseMatrix& x, const DenseMatrix& t) const {
    require_dim(w, dim_, "mlp loss");
    double sum = 0.0;
    for (std::size_t s = 0; s < x.rows(); ++s) {
        const auto y = forward(w, x.row(s), nullptr);
        for (std::size_t o = 0; o < y.size(); ++o) sum += (y[o] - t(s, o)) * (y[o] - t(s, o));
    }
    return sum / static_cast<double>(x.rows() * t.cols());
}

std::vector<double> MlpLandscape::batch_grad(std::span<const double> w, const DenseMatrix& x,
                                             const DenseMatrix& t) const {
    require_dim(w, dim_, "mlp grad");
    std::vector<double> g(dim_, 0.0);
    const std::size_t layers = spec_.widths.size() - 1;
    const double scale = 2.0 / static_cast<double>(x.rows() * t.cols());
    std::vector<std::vector<double>> acts;
    for (std::size_t s = 0; s < x.rows(); ++s) {
        const auto y = forward(w, x.row(s), &acts);
        std::vector<double> delta(y.size());
        for (std::size_t o = 0; o < y.size(); ++o) delta[o] = scale * (y[o] - t(s, o));
        for (std::size_t k = layers; k-- > 0;) {
            const auto& wb = layout_[2 * k];
            const auto& bb = layout_[2 * k + 1];
            const auto& h_in = acts[k];
            for (std::size_t o = 0; o < wb.rows; ++o) {
                g[bb.offset + o] += delta[o];
                if (delta[o] == 0.0) continue;
                double* grow = g.data() + wb.offset + o * wb.cols;
                for (std::size_t i = 0; i < wb.cols; ++i) grow[i] += delta[o] * h_in[i];
            }
            if (k == 0) break;
            std::vector<double> prev(wb.cols, 0.0);
            for (std::size_t o = 0; o < wb.rows; ++o) {
                const double* row = w.data() + wb.offset + o * wb.cols;
                for (std::size_t i = 0; i < wb.cols; ++i) prev[i] += row[i] * delta[o];
            }
            for (std::size_t i = 0; i < prev.size(); ++i) prev[i] *= 1.0 - h_in[i] * h_in[i];
            delta = std::move(prev);
        }
    }
    return g;
}

double MlpLandscape::loss(std::span<const double> w) const { return batch_loss(w, x_, t_); }

std::vector<double> MlpLandscape::grad(std::span<const double> w) const { return batch_grad(w, x_, t_); }

std::vector<double> MlpLandscape::sample_grad(std::span<const double> w, Rng& rng) const {
    DenseMatrix x;
    DenseMatrix t;
    draw_batch(rng, x, t);
    return batch_grad(w, x, t);
}

// --------------------------------------------------------------- Hessians

DenseMatrix fd_subset_hessian(const Landscape& landscape, std::span<const double> w,
                              const std::vector<std::size_t>& idx) {
    require_dim(w, landscape.dim(), "fd_subset_hessian");
    for (std::size_t i : idx) {
        if (i >= w.size()) throw ShapeError("fd_subset_hessian: index out of range");
    }
    DenseMatrix h(idx.size(), idx.size());
    std::vector<double> probe(w.begin(), w.end());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const std::size_t c = idx[j];
        const double step = 1e-5 * (1.0 + std::abs(w[c]));
        probe[c] = w[c] + step;
        const auto gp = landscape.grad(probe);
        probe[c] = w[c] - step;
        const auto gm = landscape.grad(probe);
        probe[c] = w[c];
        for (std::size_t i = 0; i < idx.size(); ++i) h(i, j) = (gp[idx[i]] - gm[idx[i]]) / (2.0 * step);
    }
    return h;
}

const BlockLayout& find_block(const std::vector<BlockLayout>& blocks, const std::string& name) {
    for (const auto& b : blocks) {
        if (b.name == name) return b;
    }
    throw ShapeError("unknown block '" + name + "'");
}

DenseMatrix fd_block_hessian(const Landscape& landscape, const std::string& block_name, std::span<const double> w) {
    const auto layout = landscape.blocks();
    const BlockLayout& block = find_block(layout, block_name);
    if (block.size() > 1024) throw ShapeError("fd_block_hessian: block '" + block_name + "' exceeds 1024 parameters");
    std::vector<std::size_t> idx(block.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = block.offset + i;
    return fd_subset_hessian(landscape, w, idx);
}

DenseMatrix symmetrized(const DenseMatrix& h) {
    if (h.rows() != h.cols()) throw ShapeError("symmetrized: matrix must be square");
    DenseMatrix s = h;
    s += h.transposed();
    s *= 0.5;
    return s;
}

std::vector<std::size_t> row_indices(const BlockLayout& block, std::size_t row) {
    if (row >= block.rows) throw ShapeError("row_indices: row out of range");
    std::vector<std::size_t> idx(block.cols);
    for (std::size_t c = 0; c < block.cols; ++c) idx[c] = block.offset + row * block.cols + c;
    return idx;
}

std::vector<std::size_t> column_indices(const BlockLayout& block, std::size_t col) {
    if (col >= block.cols) throw ShapeError("column_indices: column out of range");
    std::vector<std::size_t> idx(block.rows);
    for (std::size_t r = 0; r < block.rows; ++r) idx[r] = block.offset + r * block.cols + col;
    return idx;
}

DenseMatrix extract_block(std::span<const double> w, const BlockLayout& block) {
    if (block.offset + block.size() > w.size()) throw ShapeError("extract_block: block outside parameter vector");
    const auto part = w.subspan(block.offset, block.size());
    return DenseMatrix(block.rows, block.cols, std::vector<double>(part.begin(), part.end()));
}

void write_block(std::span<double> w, const BlockLayout& block, const DenseMatrix& m) {
    if (m.rows() != block.rows || m.cols() != block.cols) throw ShapeError("write_block: shape mismatch");
    if (block.offset + block.size() > w.size()) throw ShapeError("write_block: block outside parameter vector");
    std::copy(m.data().begin(), m.data().end(), w.begin() + static_cast<std::ptrdiff_t>(block.offset));
}

// -------------------------------------------------------------- alignment

namespace {

std::vector<double> train_adamw(const Landscape& landscape, std::vector<double> w, const AlignSpec& spec, Rng& rng) {
    if (spec.train_steps == 0) return w;
    const auto layout = landscape.blocks();
    std::vector<optim::MatrixBlock> blocks;
    for (const auto& b : layout) blocks.push_back({b.name, extract_block(w, b), b.role});
    std::map<std::string, optim::BlockOptState> states;
    optim::OptimizerConfig cfg;
    cfg.family = optim::Family::adamw;
    optim::ScheduleSpec schedule{optim::ScheduleKind::constant, spec.lr, 0, spec.train_steps};
    for (std::size_t step = 1; step <= spec.train_steps; ++step) {
        for (std::size_t i = 0; i < layout.size(); ++i) write_block(w, layout[i], blocks[i].matrix);
        const auto g = landscape.sample_grad(w, rng);
        std::vector<DenseMatrix> grads;
        for (const auto& b : layout) grads.push_back(extract_block(g, b));
        optim::route_and_step(blocks, states, std::move(grads), step, schedule, cfg);
    }
    for (std::size_t i = 0; i < layout.size(); ++i) write_block(w, layout[i], blocks[i].matrix);
    return w;
}

CoverageCurve coverage_curve(const std::string& block, const std::string& side, std::size_t d_s,
                             const std::vector<DenseMatrix>& hessians, const DenseMatrix& gram,
                             const std::vector<std::size_t>& k_grid) {
    const std::size_t n = gram.rows();
    CoverageCurve curve{block, side, d_s, {}, {}};
    for (std::size_t k : k_grid) {
        if (k >= d_s && k <= n && (curve.k.empty() || k > curve.k.back())) curve.k.push_back(k);
    }
    if (curve.k.empty() || curve.k.back() != n) curve.k.push_back(n);

    const auto gram_eig = linalg::sym_eig(gram);
    std::vector<DenseMatrix> hess_tops;
    for (const auto& h : hessians) hess_tops.push_back(top_columns(linalg::sym_eig(symmetrized(h)).vectors, d_s));
    for (std::size_t k : curve.k) {
        const DenseMatrix gram_top = top_columns(gram_eig.vectors, k);
        double sum = 0.0;
        for (const auto& a : hess_tops) sum += subspace::coverage_score(a, gram_top);
        curve.coverage.push_back(sum / static_cast<double>(hess_tops.size()));
    }
    return curve;
}

}  // namespace

AlignmentResult alignment_experiment(const Landscape& landscape, std::vector<double> w0, const AlignSpec& spec,
                                     Rng& rng) {
    require_dim(w0, landscape.dim(), "alignment_experiment");
    if (spec.d_s == 0) throw ContractError("alignment_experiment: d_s must be positive");
    if (spec.batches < 32) throw ContractError("alignment_experiment: at least 32 batches are required");

    Rng train_rng = rng.child("train");
    Rng gram_rng = rng.child("gram");
    AlignmentResult result;
    result.w = train_adamw(landscape, std::move(w0), spec, train_rng);

    const auto layout = landscape.blocks();
    std::vector<BlockLayout> chosen;
    if (spec.blocks.empty()) {
        for (const auto& b : layout) {
            if (b.rows >= 2 && b.cols >= 2) chosen.push_back(b);
        }
    } else {
        for (const auto& name : spec.blocks) chosen.push_back(find_block(layout, name));
    }
    std::sort(chosen.begin(), chosen.end(), [](const auto& a, const auto& b) { return a.name < b.name; });

    std::vector<DenseMatrix> gram_r(chosen.size());
    std::vector<DenseMatrix> gram_c(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        gram_r[i] = DenseMatrix(chosen[i].cols, chosen[i].cols);
        gram_c[i] = DenseMatrix(chosen[i].rows, chosen[i].rows);
    }
    for (std::size_t s = 0; s < spec.batches; ++s) {
        const auto g = landscape.sample_grad(result.w, gram_rng);
        for (std::size_t i = 0; i < chosen.size(); ++i) {
            const DenseMatrix gb = extract_block(g, chosen[i]);
            gram_r[i] += linalg::matmul_tn(gb, gb);
            gram_c[i] += linalg::matmul_nt(gb, gb);
        }
    }
    const double inv = 1.0 / static_cast<double>(spec.batches);

    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto& b = chosen[i];
        gram_r[i] *= inv;
        gram_c[i] *= inv;

        std::vector<DenseMatrix> row_h;
        for (std::size_t r = 0; r < b.rows; ++r) row_h.push_back(fd_subset_hessian(landscape, result.w, row_indices(b, r)));
        result.curves.push_back(
            coverage_curve(b.name, "row", std::min(spec.d_s, b.cols), row_h, gram_r[i], spec.k_grid));

        std::vector<DenseMatrix> col_h;
        for (std::size_t c = 0; c < b.cols; ++c) col_h.push_back(fd_subset_hessian(landscape, result.w, column_indices(b, c)));
        result.curves.push_back(
            coverage_curve(b.name, "col", std::min(spec.d_s, b.rows), col_h, gram_c[i], spec.k_grid));
    }
    return result;
}

}  // namespace lite::landscapes
