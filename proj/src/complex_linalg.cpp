#include "stmg/complex_linalg.hpp"

#include <algorithm>

namespace stmg {

double cnorm2(const CVector& x) {
    double s = 0.0;
    for (const Cplx& v : x) s += v.re * v.re + v.im * v.im;
    return std::sqrt(s);
}

Cplx cdot(const CVector& x, const CVector& y) {
    Cplx s;
    for (size_t i = 0; i < x.size(); ++i) s += conj(x[i]) * y[i];
    return s;
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Cplx(1.0);
    return m;
}

ComplexMatrix ComplexMatrix::from_real(const DenseMatrix& r) {
    ComplexMatrix m(r.rows(), r.cols());
    for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j) m(i, j) = Cplx(r(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = conj((*this)(i, j));
    return t;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Cplx& v : a_) s += v.re * v.re + v.im * v.im;
    return std::sqrt(s);
}

DenseMatrix ComplexMatrix::real_part() const {
    DenseMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).re;
    return m;
}

DenseMatrix ComplexMatrix::imag_part() const {
    DenseMatrix m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).im;
    return m;
}

DenseMatrix ComplexMatrix::real_embedding() const {
    DenseMatrix m(2 * rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            const Cplx v = (*this)(i, j);
            m(i, j) = v.re;
            m(i, cols_ + j) = -v.im;
            m(rows_ + i, j) = v.im;
            m(rows_ + i, cols_ + j) = v.re;
        }
    }
    return m;
}

ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("cmatmul: shape mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const Cplx aik = a(i, k);
            if (aik.re == 0.0 && aik.im == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

CVector cmatvec(const ComplexMatrix& a, const CVector& x) {
    if (static_cast<int>(x.size()) != a.cols()) throw DimensionError("cmatvec: shape mismatch");
    CVector y(a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        Cplx s;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexLu::ComplexLu(ComplexMatrix a) : lu_(std::move(a)) {
    if (lu_.rows() != lu_.cols()) throw DimensionError("ComplexLu: matrix not square");
    const int n = lu_.rows();
    piv_.resize(n);
    double max_pivot = 0.0, min_pivot = 0.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = cabs(lu_(k, k));
        for (int i = k + 1; i < n; ++i)
            if (cabs(lu_(i, k)) > best) { best = cabs(lu_(i, k)); p = i; }
        piv_[k] = p;
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        const Cplx pivot = lu_(k, k);
        const double pmag = cabs(pivot);
        if (k == 0) { max_pivot = min_pivot = pmag; }
        max_pivot = std::max(max_pivot, pmag);
        min_pivot = std::min(min_pivot, pmag);
        if (pmag == 0.0) continue;
        for (int i = k + 1; i < n; ++i) {
            lu_(i, k) = lu_(i, k) / pivot;
            const Cplx lik = lu_(i, k);
            if (lik.re == 0.0 && lik.im == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
        }
    }
    min_pivot_ratio_ = (max_pivot > 0.0) ? min_pivot / max_pivot : 0.0;
}

CVector ComplexLu::solve(const CVector& rhs) const {
    const int n = lu_.rows();
    if (static_cast<int>(rhs.size()) != n) throw DimensionError("ComplexLu::solve: rhs size mismatch");
    if (min_pivot_ratio_ == 0.0) throw SingularityError("ComplexLu::solve: singular matrix");
    CVector x(rhs);
    // Full-row pivoting in the factorization: apply P before the solves.
    for (int k = 0; k < n; ++k)
        if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] = x[i] / lu_(i, i);
    }
    return x;
}

ComplexMatrix ComplexLu::inverse() const {
    const int n = lu_.rows();
    ComplexMatrix inv(n, n);
    CVector e(n);
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), Cplx());
        e[j] = Cplx(1.0);
        CVector col = solve(e);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

} // namespace stmg
