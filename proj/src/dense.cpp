#include "stmg/dense.hpp"

#include <algorithm>
#include <cmath>

namespace stmg {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return std::sqrt(s);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("DenseMatrix +=: shape mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += other.a_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("DenseMatrix -=: shape mismatch");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= other.a_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& v : a_) v *= s;
    return *this;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: shape mismatch");
    DenseMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("matmul_tn: shape mismatch");
    DenseMatrix c(a.cols(), b.cols());
    for (int k = 0; k < a.rows(); ++k) {
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = a(k, i);
            if (aki == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aki * b(k, j);
        }
    }
    return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.cols()) throw DimensionError("matvec: shape mismatch");
    Vector y(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        auto r = a.row(i);
        for (int j = 0; j < a.cols(); ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector matvec_t(const DenseMatrix& a, std::span<const double> x) {
    if (static_cast<int>(x.size()) != a.rows()) throw DimensionError("matvec_t: shape mismatch");
    Vector y(a.cols(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        for (int j = 0; j < a.cols(); ++j) y[j] += r[j] * x[i];
    }
    return y;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(double alpha, std::span<double> x) {
    for (double& v : x) v *= alpha;
}

DenseLu::DenseLu(DenseMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols()) throw DimensionError("DenseLu: matrix not square");
    const int n = lu_.rows();
    piv_.resize(n);
    double max_pivot = 0.0, min_pivot = 0.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) { best = std::abs(lu_(i, k)); p = i; }
        }
        piv_[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        const double pivot = lu_(k, k);
        if (k == 0) { max_pivot = min_pivot = std::abs(pivot); }
        max_pivot = std::max(max_pivot, std::abs(pivot));
        min_pivot = std::min(min_pivot, std::abs(pivot));
        if (pivot == 0.0) continue; // exactly singular; solves will refuse
        for (int i = k + 1; i < n; ++i) {
            lu_(i, k) /= pivot;
            const double lik = lu_(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
        }
    }
    min_pivot_ratio_ = (max_pivot > 0.0) ? min_pivot / max_pivot : 0.0;
}

Vector DenseLu::solve(std::span<const double> rhs) const {
    const int n = lu_.rows();
    if (static_cast<int>(rhs.size()) != n) throw DimensionError("DenseLu::solve: rhs size mismatch");
    if (min_pivot_ratio_ == 0.0) throw SingularityError("DenseLu::solve: singular matrix");
    Vector x(rhs.begin(), rhs.end());
    // Rows were swapped in full during factorization: apply P first, then
    // the two clean triangular solves.
    for (int k = 0; k < n; ++k)
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

DenseMatrix DenseLu::solve(const DenseMatrix& rhs) const {
    DenseMatrix x(rhs.rows(), rhs.cols());
    Vector col(rhs.rows());
    for (int j = 0; j < rhs.cols(); ++j) {
        for (int i = 0; i < rhs.rows(); ++i) col[i] = rhs(i, j);
        Vector sol = solve(col);
        for (int i = 0; i < rhs.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

DenseMatrix DenseLu::solve_transposed(const DenseMatrix& rhs) const {
    // Aᵀx = b  ⇔  Uᵀ Lᵀ Pᵀ... solve via Uᵀy = b, Lᵀz = y, x = Pᵀz.
    const int n = lu_.rows();
    if (rhs.rows() != n) throw DimensionError("DenseLu::solve_transposed: shape mismatch");
    if (min_pivot_ratio_ == 0.0) throw SingularityError("DenseLu::solve_transposed: singular matrix");
    DenseMatrix x(n, rhs.cols());
    Vector v(n);
    for (int j = 0; j < rhs.cols(); ++j) {
        for (int i = 0; i < n; ++i) v[i] = rhs(i, j);
        for (int i = 0; i < n; ++i) { // Uᵀ forward
            for (int k = 0; k < i; ++k) v[i] -= lu_(k, i) * v[k];
            v[i] /= lu_(i, i);
        }
        for (int i = n - 1; i >= 0; --i) { // Lᵀ backward (unit diagonal)
            for (int k = i + 1; k < n; ++k) v[i] -= lu_(k, i) * v[k];
        }
        for (int k = n - 1; k >= 0; --k)
            if (piv_[k] != k) std::swap(v[k], v[piv_[k]]);
        for (int i = 0; i < n; ++i) x(i, j) = v[i];
    }
    return x;
}

DenseMatrix DenseLu::inverse() const { return solve(DenseMatrix::identity(lu_.rows())); }

DenseCholesky::DenseCholesky(const DenseMatrix& a) : l_(a.rows(), a.cols()) {
    if (a.rows() != a.cols()) throw DimensionError("DenseCholesky: matrix not square");
    const int n = a.rows();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
            if (i == j) {
                if (s <= 0.0) throw DefinitenessError("DenseCholesky: non-positive pivot");
                l_(i, i) = std::sqrt(s);
            } else {
                l_(i, j) = s / l_(j, j);
            }
        }
    }
}

Vector DenseCholesky::forward(std::span<const double> rhs) const {
    const int n = l_.rows();
    Vector y(rhs.begin(), rhs.end());
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) y[i] -= l_(i, k) * y[k];
        y[i] /= l_(i, i);
    }
    return y;
}

Vector DenseCholesky::backward(std::span<const double> rhs) const {
    const int n = l_.rows();
    Vector x(rhs.begin(), rhs.end());
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) x[i] -= l_(k, i) * x[k];
        x[i] /= l_(i, i);
    }
    return x;
}

Vector DenseCholesky::solve(std::span<const double> rhs) const {
    Vector y = forward(rhs);
    return backward(y);
}

} // namespace stmg
