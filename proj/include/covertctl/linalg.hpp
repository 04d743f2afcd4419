// Minimal dense linear algebra: row-major matrices and Cholesky
// factorization. The closed forms in this library only ever need small
// matrices (tens to low hundreds), so there is no blocking or pivoting.
#pragma once

#include <span>
#include <vector>

namespace covertctl {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double &operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)};
    }

    bool operator==(const Matrix &) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

Matrix matmul(const Matrix &a, const Matrix &b);
Matrix transpose(const Matrix &a);

/// Largest absolute entry of a - b; matrices must have equal shape.
double max_abs_diff(const Matrix &a, const Matrix &b);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// All determinant and inverse work in the library routes through this
/// factor; explicit inverses appear only in the oracle module.
class Cholesky {
public:
    explicit Cholesky(const Matrix &a); // throws std::domain_error if not PD

    int dim() const { return lower_.rows(); }
    const Matrix &lower() const { return lower_; }

    /// log(det A) = 2 * sum(log diag L).
    double log_det() const;

    /// Solves L y = b.
    std::vector<double> forward_solve(std::span<const double> b) const;

    /// Solves A x = b.
    std::vector<double> solve(std::span<const double> b) const;

    /// x' A^{-1} x = || L^{-1} x ||^2.
    double inverse_quad_form(std::span<const double> x) const;

    /// tr(A^{-1} B) via one triangular solve per column of B.
    double trace_inverse_product(const Matrix &b) const;

private:
    Matrix lower_;
};

} // namespace covertctl
