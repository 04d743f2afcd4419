#include "covertctl/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace covertctl {

Matrix matmul(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            for (int j = 0; j < b.cols(); ++j)
                out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix &a) {
    Matrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out(j, i) = a(i, j);
    return out;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: shapes differ");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

Cholesky::Cholesky(const Matrix &a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("cholesky: matrix not square");
    const int n = a.rows();
    lower_ = Matrix(n, n);
    for (int j = 0; j < n; ++j) {
        double d = a(j, j);
        for (int k = 0; k < j; ++k)
            d -= lower_(j, k) * lower_(j, k);
        if (!(d > 0.0))
            throw std::domain_error("cholesky: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        lower_(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k)
                s -= lower_(i, k) * lower_(j, k);
            lower_(i, j) = s / ljj;
        }
    }
}

double Cholesky::log_det() const {
    double s = 0.0;
    for (int i = 0; i < dim(); ++i)
        s += std::log(lower_(i, i));
    return 2.0 * s;
}

std::vector<double> Cholesky::forward_solve(std::span<const double> b) const {
    const int n = dim();
    if (static_cast<int>(b.size()) != n)
        throw std::invalid_argument("forward_solve: size mismatch");
    std::vector<double> y(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k)
            y[i] -= lower_(i, k) * y[k];
        y[i] /= lower_(i, i);
    }
    return y;
}

std::vector<double> Cholesky::solve(std::span<const double> b) const {
    const int n = dim();
    std::vector<double> x = forward_solve(b);
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k)
            x[i] -= lower_(k, i) * x[k];
        x[i] /= lower_(i, i);
    }
    return x;
}

double Cholesky::inverse_quad_form(std::span<const double> x) const {
    const std::vector<double> y = forward_solve(x);
    double s = 0.0;
    for (double v : y)
        s += v * v;
    return s;
}

double Cholesky::trace_inverse_product(const Matrix &b) const {
    const int n = dim();
    if (b.rows() != n || b.cols() != n)
        throw std::invalid_argument("trace_inverse_product: size mismatch");
    double tr = 0.0;
    std::vector<double> col(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            col[i] = b(i, j);
        tr += solve(col)[j];
    }
    return tr;
}

} // namespace covertctl
