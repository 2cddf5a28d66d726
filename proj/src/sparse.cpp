#include "stmg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "stmg/errors.hpp"

namespace stmg {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (static_cast<int>(row_ptr_.size()) != rows_ + 1)
        throw DimensionError("SparseMatrix: row_ptr size mismatch");
    if (col_idx_.size() != values_.size()) throw DimensionError("SparseMatrix: index/value size mismatch");
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k + 1 < row_ptr_[i + 1]; ++k)
            if (col_idx_[k] >= col_idx_[k + 1])
                throw ParameterError("SparseMatrix: column indices not strictly increasing");
}

double SparseMatrix::at(int i, int j) const {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        if (col_idx_[k] == j) return values_[k];
    return 0.0;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
        throw DimensionError("SparseMatrix::matvec: shape mismatch");
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[i] = s;
    }
}

void SparseMatrix::matvec_add(std::span<const double> x, std::span<double> y, double s) const {
    if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_)
        throw DimensionError("SparseMatrix::matvec_add: shape mismatch");
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += values_[k] * x[col_idx_[k]];
        y[i] += s * acc;
    }
}

void SparseMatrix::matvec_transpose(std::span<const double> x, std::span<double> y) const {
    if (static_cast<int>(x.size()) != rows_ || static_cast<int>(y.size()) != cols_)
        throw DimensionError("SparseMatrix::matvec_transpose: shape mismatch");
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) y[col_idx_[k]] += values_[k] * x[i];
}

Vector SparseMatrix::apply(std::span<const double> x) const {
    Vector y(rows_);
    matvec(x, y);
    return y;
}

Vector SparseMatrix::apply_transpose(std::span<const double> x) const {
    Vector y(cols_);
    matvec_transpose(x, y);
    return y;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<int> count(cols_ + 1, 0);
    for (int c : col_idx_) ++count[c + 1];
    std::partial_sum(count.begin(), count.end(), count.begin());
    std::vector<int> rp(count);
    std::vector<int> ci(values_.size());
    std::vector<double> v(values_.size());
    for (int i = 0; i < rows_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            const int pos = rp[col_idx_[k]]++;
            ci[pos] = i;
            v[pos] = values_[k];
        }
    }
    return SparseMatrix(cols_, rows_, std::move(count), std::move(ci), std::move(v));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) m(i, col_idx_[k]) = values_[k];
    return m;
}

int SparseMatrix::bandwidth() const {
    int bw = 0;
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            bw = std::max(bw, std::abs(i - col_idx_[k]));
    return bw;
}

double SparseMatrix::sym_error() const {
    if (rows_ != cols_) return std::numeric_limits<double>::infinity();
    double e = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
            e = std::max(e, std::abs(values_[k] - at(col_idx_[k], i)));
    return e;
}

void SparseMatrix::write_matrix_market(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("write_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << rows_ << " " << cols_ << " " << nnz() << "\n";
    char buf[64];
    for (int i = 0; i < rows_; ++i) {
        for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, col_idx_[k] + 1, values_[k]);
            out << buf;
        }
    }
    if (!out) throw IoError("write_matrix_market: write failed for " + path);
}

void SparseBuilder::add(int i, int j, double v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("SparseBuilder::add: index out of range");
    is_.push_back(i);
    js_.push_back(j);
    vs_.push_back(v);
}

SparseMatrix SparseBuilder::finalize() {
    std::vector<size_t> order(is_.size());
    std::iota(order.begin(), order.end(), 0);
    // Stable: duplicates accumulate in insertion order, so symmetric pairs
    // (i,j)/(j,i) sum identical products in the same order bit for bit.
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return is_[a] != is_[b] ? is_[a] < is_[b] : js_[a] < js_[b];
    });
    std::vector<int> rp(rows_ + 1, 0), ci;
    std::vector<double> v;
    ci.reserve(order.size());
    v.reserve(order.size());
    size_t k = 0;
    while (k < order.size()) {
        const int i = is_[order[k]], j = js_[order[k]];
        double sum = 0.0;
        while (k < order.size() && is_[order[k]] == i && js_[order[k]] == j) sum += vs_[order[k++]];
        if (sum != 0.0) {
            ci.push_back(j);
            v.push_back(sum);
            ++rp[i + 1];
        }
    }
    std::partial_sum(rp.begin(), rp.end(), rp.begin());
    return SparseMatrix(rows_, cols_, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix sparse_identity(int n) {
    std::vector<int> rp(n + 1), ci(n);
    std::vector<double> v(n, 1.0);
    for (int i = 0; i <= n; ++i) rp[i] = i;
    for (int i = 0; i < n; ++i) ci[i] = i;
    return SparseMatrix(n, n, std::move(rp), std::move(ci), std::move(v));
}

SparseMatrix sparse_add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("sparse_add: shape mismatch");
    SparseBuilder builder(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
            builder.add(i, a.col_idx()[k], alpha * a.values()[k]);
        for (int k = b.row_ptr()[i]; k < b.row_ptr()[i + 1]; ++k)
            builder.add(i, b.col_idx()[k], beta * b.values()[k]);
    }
    return builder.finalize();
}

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseBuilder builder(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia) {
        for (int ka = a.row_ptr()[ia]; ka < a.row_ptr()[ia + 1]; ++ka) {
            const int ja = a.col_idx()[ka];
            const double va = a.values()[ka];
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int kb = b.row_ptr()[ib]; kb < b.row_ptr()[ib + 1]; ++kb)
                    builder.add(ia * b.rows() + ib, ja * b.cols() + b.col_idx()[kb],
                                va * b.values()[kb]);
        }
    }
    return builder.finalize();
}

SparseMatrix from_dense(const DenseMatrix& m, double drop_tol) {
    SparseBuilder builder(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j)) > drop_tol) builder.add(i, j, m(i, j));
    return builder.finalize();
}

SparseMatrix sparse_submatrix(const SparseMatrix& a, int r0, int r1, int c0, int c1) {
    SparseBuilder builder(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const int j = a.col_idx()[k];
            if (j >= c0 && j < c1) builder.add(i - r0, j - c0, a.values()[k]);
        }
    return builder.finalize();
}

BandLu::BandLu(const SparseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("BandLu: matrix not square");
    n_ = a.rows();
    kl_ = ku_ = 0;
    for (int i = 0; i < n_; ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const int j = a.col_idx()[k];
            if (j < i) kl_ = std::max(kl_, i - j);
            else ku_ = std::max(ku_, j - i);
        }
    ldab_ = 2 * kl_ + ku_ + 1;
    ab_.assign(static_cast<size_t>(ldab_) * n_, 0.0);
    // Row i, col j sits at ab(kl + ku + i - j, j).
    for (int i = 0; i < n_; ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k)
            ab(kl_ + ku_ + i - a.col_idx()[k], a.col_idx()[k]) = a.values()[k];
    piv_.resize(n_);

    for (int j = 0; j < n_; ++j) {
        // Pivot search within the lower band of column j.
        const int last = std::min(n_ - 1, j + kl_);
        int p = j;
        double best = std::abs(ab(kl_ + ku_, j));
        for (int i = j + 1; i <= last; ++i) {
            const double v = std::abs(ab(kl_ + ku_ + i - j, j));
            if (v > best) { best = v; p = i; }
        }
        piv_[j] = p;
        if (best == 0.0) throw SingularityError("BandLu: zero pivot at column " + std::to_string(j));
        const int jmax = std::min(n_ - 1, j + kl_ + ku_);
        if (p != j) {
            for (int c = j; c <= jmax; ++c)
                std::swap(ab(kl_ + ku_ + j - c, c), ab(kl_ + ku_ + p - c, c));
        }
        const double pivot = ab(kl_ + ku_, j);
        for (int i = j + 1; i <= last; ++i) {
            const double m = ab(kl_ + ku_ + i - j, j) / pivot;
            ab(kl_ + ku_ + i - j, j) = m;
            if (m == 0.0) continue;
            for (int c = j + 1; c <= jmax; ++c)
                ab(kl_ + ku_ + i - c, c) -= m * ab(kl_ + ku_ + j - c, c);
        }
    }
}

Vector BandLu::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw DimensionError("BandLu::solve: rhs size mismatch");
    Vector x(rhs.begin(), rhs.end());
    for (int j = 0; j < n_; ++j) {
        if (piv_[j] != j) std::swap(x[j], x[piv_[j]]);
        const int last = std::min(n_ - 1, j + kl_);
        for (int i = j + 1; i <= last; ++i) x[i] -= ab(kl_ + ku_ + i - j, j) * x[j];
    }
    for (int i = n_ - 1; i >= 0; --i) {
        const int jmax = std::min(n_ - 1, i + kl_ + ku_);
        for (int j = i + 1; j <= jmax; ++j) x[i] -= ab(kl_ + ku_ + i - j, j) * x[j];
        x[i] /= ab(kl_ + ku_, i);
    }
    return x;
}

} // namespace stmg
