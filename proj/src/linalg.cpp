// SPDX-License-Identifier: Apache-2.0

#include "lite/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lite::linalg {
namespace {

std::string shape_str(const DenseMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    if (!all_finite()) throw ContractError("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::initializer_list<double> diag) {
    return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(data));
}

DenseMatrix DenseMatrix::column(std::span<const double> values) {
    return DenseMatrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

std::vector<double> DenseMatrix::column_copy(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
    return out;
}

void DenseMatrix::set_column(std::size_t c, std::span<const double> values) {
    if (values.size() != rows_) throw ShapeError("set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = values[i];
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) noexcept {
    for (double& x : data_) x *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: " + shape_str(a) + " times " + shape_str(b));
    }
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: " + shape_str(a) + "ᵀ times " + shape_str(b));
    }
    DenseMatrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto arow = a.row(k);
        auto brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            auto crow = c.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: " + shape_str(a) + " times " + shape_str(b) + "ᵀ");
    }
    DenseMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto arow = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto brow = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
            c(i, j) = s;
        }
    }
    return c;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "hadamard");
    DenseMatrix c(a.rows(), a.cols());
    auto ad = a.data();
    auto bd = b.data();
    auto cd = c.data();
    for (std::size_t i = 0; i < cd.size(); ++i) cd[i] = ad[i] * bd[i];
    return c;
}

double frobenius_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return std::sqrt(s);
}

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "frobenius_distance");
    double s = 0.0;
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < ad.size(); ++i) {
        const double d = ad[i] - bd[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

bool is_symmetric(const DenseMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::abs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

QrResult qr_decompose(const DenseMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) throw ShapeError("qr_decompose: requires rows >= cols, got " + shape_str(a));

    DenseMatrix work = a;
    std::vector<std::vector<double>> reflectors(n);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += work(i, k) * work(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;

        const double alpha = work(k, k) >= 0.0 ? -norm : norm;
        std::vector<double> v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = work(i, k);
        v[0] -= alpha;
        double vnorm = 0.0;
        for (double x : v) vnorm += x * x;
        vnorm = std::sqrt(vnorm);
        if (vnorm == 0.0) continue;
        for (double& x : v) x /= vnorm;

        for (std::size_t j = k; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * work(i, j);
            for (std::size_t i = k; i < m; ++i) work(i, j) -= 2.0 * v[i - k] * dot;
        }
        reflectors[k] = std::move(v);
    }

    // Q = H_0 H_1 ... H_{n-1} applied to the first n columns of I.
    DenseMatrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t kk = n; kk-- > 0;) {
        const auto& v = reflectors[kk];
        if (v.empty()) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = kk; i < m; ++i) dot += v[i - kk] * q(i, j);
            for (std::size_t i = kk; i < m; ++i) q(i, j) -= 2.0 * v[i - kk] * dot;
        }
    }

    DenseMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);

    for (std::size_t k = 0; k < n; ++k) {
        if (r(k, k) < 0.0) {
            for (std::size_t j = k; j < n; ++j) r(k, j) = -r(k, j);
            for (std::size_t i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
    }
    return {std::move(q), std::move(r)};
}

EigenResult sym_eig(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw ShapeError("sym_eig: matrix must be square, got " + shape_str(a));
    const double scale = std::max(1.0, max_abs(a));
    if (!is_symmetric(a, 1e-12 * scale)) throw ContractError("sym_eig: input is not symmetric");

    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w(i, j) = 0.5 * (a(i, j) + a(j, i));
    DenseMatrix v = DenseMatrix::identity(n);

    const double total = frobenius_norm(w);
    const double tol = 1e-14 * total;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) off += w(i, j) * w(i, j);
        if (std::sqrt(off) <= tol) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w(i, i) > w(j, j); });

    EigenResult out{std::vector<double>(n), DenseMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = w(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

namespace {

// Extends the first `filled` orthonormal columns of q to a full orthonormal
// set by Gram–Schmidt against the standard basis.
void complete_orthonormal(DenseMatrix& q, std::size_t filled) {
    const std::size_t m = q.rows();
    std::size_t next = filled;
    for (std::size_t e = 0; e < m && next < q.cols(); ++e) {
        std::vector<double> cand(m, 0.0);
        cand[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < next; ++j) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += q(i, j) * cand[i];
                for (std::size_t i = 0; i < m; ++i) cand[i] -= dot * q(i, j);
            }
        }
        double norm = 0.0;
        for (double x : cand) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (std::size_t i = 0; i < m; ++i) q(i, next) = cand[i] / norm;
        ++next;
    }
}

SvdResult svd_tall(const DenseMatrix& a) {
    const std::size_t n = a.cols();
    auto eig = sym_eig(matmul_tn(a, a));
    SvdResult out{DenseMatrix(a.rows(), n), std::vector<double>(n), std::move(eig.vectors)};

    const double smax = std::sqrt(std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0));
    const double cutoff = std::max(smax, 1.0) * 1e-13;
    std::size_t filled = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double sigma = std::sqrt(std::max(eig.values[k], 0.0));
        out.sigma[k] = sigma;
        if (sigma <= cutoff) continue;
        const auto vk = out.v.column_copy(k);
        auto uk = matvec(a, vk);
        for (double& x : uk) x /= sigma;
        out.u.set_column(k, uk);
        ++filled;
    }
    if (filled < n) complete_orthonormal(out.u, filled);
    return out;
}

}  // namespace

SvdResult svd_oracle(const DenseMatrix& a) {
    if (!a.all_finite()) throw ContractError("svd_oracle: non-finite input");
    if (a.rows() >= a.cols()) return svd_tall(a);
    auto t = svd_tall(a.transposed());
    return {std::move(t.v), std::move(t.sigma), std::move(t.u)};
}

DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw ShapeError("solve: matrix must be square");
    if (b.rows() != n) throw ShapeError("solve: right-hand side has wrong row count");

    DenseMatrix lu = a;
    DenseMatrix x = b;
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
        if (std::abs(lu(piv, k)) <= 1e-14 * scale) throw ContractError("solve: matrix is singular");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = x(k, j);
            for (std::size_t i = k + 1; i < n; ++i) s -= lu(k, i) * x(i, j);
            x(k, j) = s / lu(k, k);
        }
    }
    return x;
}

std::vector<double> solve(const DenseMatrix& a, std::span<const double> b) {
    auto x = solve(a, DenseMatrix(b.size(), 1, std::vector<double>(b.begin(), b.end())));
    return {x.data().begin(), x.data().end()};
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw ShapeError("matvec: length mismatch");
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

}  // namespace lite::linalg
