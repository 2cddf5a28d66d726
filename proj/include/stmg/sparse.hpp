#pragma once

#include <span>
#include <string>
#include <vector>

#include "stmg/dense.hpp"

namespace stmg {

/// Compressed sparse row real matrix. Column indices are strictly increasing
/// within each row; finalized matrices store no explicit zeros.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                 std::vector<double> values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }

    double at(int i, int j) const; // 0 if not stored

    void matvec(std::span<const double> x, std::span<double> y) const;      // y = A x
    void matvec_add(std::span<const double> x, std::span<double> y, double s = 1.0) const; // y += s·A x
    void matvec_transpose(std::span<const double> x, std::span<double> y) const; // y = Aᵀ x
    Vector apply(std::span<const double> x) const;
    Vector apply_transpose(std::span<const double> x) const;

    SparseMatrix transposed() const;
    DenseMatrix to_dense() const;

    /// Largest |i - j| over stored entries.
    int bandwidth() const;
    double sym_error() const; // max |A - Aᵀ| over the pattern

    void write_matrix_market(const std::string& path) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Triplet accumulator; duplicate entries are summed, exact zeros dropped.
class SparseBuilder {
public:
    SparseBuilder(int rows, int cols) : rows_(rows), cols_(cols) {}
    void add(int i, int j, double v);
    SparseMatrix finalize();

private:
    int rows_, cols_;
    std::vector<int> is_, js_;
    std::vector<double> vs_;
};

SparseMatrix sparse_identity(int n);
SparseMatrix sparse_add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                        double beta = 1.0); // alpha·A + beta·B
SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b);
SparseMatrix from_dense(const DenseMatrix& m, double drop_tol = 0.0);
/// Extract rows [r0,r1) x cols [c0,c1).
SparseMatrix sparse_submatrix(const SparseMatrix& a, int r0, int r1, int c0, int c1);

/// Banded LU with partial pivoting (LAPACK-style band storage), used for the
/// exact slab solves.
class BandLu {
public:
    explicit BandLu(const SparseMatrix& a);

    int size() const { return n_; }
    Vector solve(std::span<const double> rhs) const;

private:
    int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
    std::vector<double> ab_; // (2*kl+ku+1) x n, column-major bands
    std::vector<int> piv_;

    double& ab(int i, int j) { return ab_[static_cast<size_t>(j) * ldab_ + i]; }
    double ab(int i, int j) const { return ab_[static_cast<size_t>(j) * ldab_ + i]; }
};

} // namespace stmg
