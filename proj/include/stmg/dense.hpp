#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stmg/errors.hpp"

namespace stmg {

using Vector = std::vector<double>;

/// Row-major dense real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw ParameterError("DenseMatrix: negative dimension");
    }

    static DenseMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    std::span<double> row(int i) { return {a_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {a_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    DenseMatrix transposed() const;

    double frobenius_norm() const;
    double max_abs() const;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s);

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b); // aᵀ·b
Vector matvec(const DenseMatrix& a, std::span<const double> x);
Vector matvec_t(const DenseMatrix& a, std::span<const double> x);  // aᵀ·x

// Vector helpers.
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
void axpy(double alpha, std::span<const double> x, std::span<double> y); // y += alpha·x
void scale(double alpha, std::span<double> x);

/// LU factorization with partial pivoting.
class DenseLu {
public:
    explicit DenseLu(DenseMatrix a);

    int size() const { return lu_.rows(); }
    /// Largest |pivot| ratio; 0 signals exact singularity.
    double min_pivot_ratio() const { return min_pivot_ratio_; }

    Vector solve(std::span<const double> rhs) const;
    DenseMatrix solve(const DenseMatrix& rhs) const;         // column-wise solves
    DenseMatrix solve_transposed(const DenseMatrix& rhs) const; // solves Aᵀx = rhs column-wise
    DenseMatrix inverse() const;

private:
    DenseMatrix lu_;
    std::vector<int> piv_;
    double min_pivot_ratio_ = 0.0;
};

/// Cholesky factorization of a dense SPD matrix (used by test oracles and
/// the generalized symmetric eigenvalue reductions).
class DenseCholesky {
public:
    explicit DenseCholesky(const DenseMatrix& a);

    int size() const { return l_.rows(); }
    Vector solve(std::span<const double> rhs) const;
    /// L⁻¹·b (forward substitution only).
    Vector forward(std::span<const double> rhs) const;
    /// L⁻ᵀ·b (backward substitution only).
    Vector backward(std::span<const double> rhs) const;
    const DenseMatrix& l() const { return l_; }

private:
    DenseMatrix l_;
};

} // namespace stmg
