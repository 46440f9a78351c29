// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_LINALG_HPP
#define LITE_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "lite/errors.hpp"

namespace lite::linalg {

/// Dense row-major matrix of doubles.
///
/// Matrices built from caller data are checked for shape and finiteness.
/// Arithmetic results are not re-checked; a diverging optimizer is allowed
/// to produce non-finite entries and the harness reports that as data.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(std::span<const double> diag);
    static DenseMatrix diagonal(std::initializer_list<double> diag);
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix column(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool same_shape(const DenseMatrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double> column_copy(std::size_t c) const;
    void set_column(std::size_t c, std::span<const double> values);

    DenseMatrix transposed() const;
    bool all_finite() const noexcept;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s) noexcept;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

/// a · b. Throws ShapeError when a.cols != b.rows.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ · b without materializing the transpose.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a · bᵀ without materializing the transpose.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

double frobenius_norm(const DenseMatrix& a);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);
double max_abs(const DenseMatrix& a);
bool is_symmetric(const DenseMatrix& a, double tol);

struct QrResult {
    DenseMatrix q;  // rows × cols, orthonormal columns
    DenseMatrix r;  // cols × cols, upper triangular, non-negative diagonal
};

/// Householder QR for rows >= cols. Zero pivots skip their reflection, so
/// rank-deficient input still yields an orthonormal Q.
QrResult qr_decompose(const DenseMatrix& a);

struct EigenResult {
    std::vector<double> values;  // descending
    DenseMatrix vectors;         // column i pairs with values[i]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Stops when the
/// off-diagonal Frobenius mass falls below 1e-14·‖A‖_F or after 100 sweeps.
EigenResult sym_eig(const DenseMatrix& a);

struct SvdResult {
    DenseMatrix u;               // rows × k
    std::vector<double> sigma;   // k = min(rows, cols), descending
    DenseMatrix v;               // cols × k
};

/// Thin SVD through the Gram eigendecomposition. Reference path for tests
/// of the Newton–Schulz machinery; loses relative accuracy for singular
/// values near machine epsilon.
SvdResult svd_oracle(const DenseMatrix& a);

/// Solves a·x = b by LU with partial pivoting. Throws ContractError on a
/// numerically singular a.
DenseMatrix solve(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> solve(const DenseMatrix& a, std::span<const double> b);

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);

}  // namespace lite::linalg

#endif  // LITE_LINALG_HPP
