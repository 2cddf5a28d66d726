#pragma once

#include <cmath>
#include <vector>

#include "stmg/dense.hpp"

namespace stmg {

/// Complex scalar kept as an explicit (re, im) pair.
struct Cplx {
    double re = 0.0;
    double im = 0.0;

    constexpr Cplx() = default;
    constexpr Cplx(double re, double im = 0.0) : re(re), im(im) {}

    friend constexpr Cplx operator+(Cplx a, Cplx b) { return {a.re + b.re, a.im + b.im}; }
    friend constexpr Cplx operator-(Cplx a, Cplx b) { return {a.re - b.re, a.im - b.im}; }
    friend constexpr Cplx operator-(Cplx a) { return {-a.re, -a.im}; }
    friend constexpr Cplx operator*(Cplx a, Cplx b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend constexpr Cplx operator*(double s, Cplx a) { return {s * a.re, s * a.im}; }
    friend Cplx operator/(Cplx a, Cplx b) {
        // Smith's algorithm, avoids overflow for extreme components.
        if (std::abs(b.re) >= std::abs(b.im)) {
            const double r = b.im / b.re, d = b.re + b.im * r;
            return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
        }
        const double r = b.re / b.im, d = b.re * r + b.im;
        return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
    }
    Cplx& operator+=(Cplx b) { re += b.re; im += b.im; return *this; }
    Cplx& operator-=(Cplx b) { re -= b.re; im -= b.im; return *this; }
};

inline constexpr Cplx conj(Cplx a) { return {a.re, -a.im}; }
inline double cabs(Cplx a) { return std::hypot(a.re, a.im); }
inline Cplx csqrt(Cplx a) {
    const double m = cabs(a);
    double re = std::sqrt(0.5 * (m + a.re));
    double im = std::sqrt(0.5 * (m - a.re));
    if (a.im < 0.0) im = -im;
    return {re, im};
}

using CVector = std::vector<Cplx>;

double cnorm2(const CVector& x);
Cplx cdot(const CVector& x, const CVector& y); // Σ conj(xᵢ)·yᵢ

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static ComplexMatrix identity(int n);
    static ComplexMatrix from_real(const DenseMatrix& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    Cplx operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;

    DenseMatrix real_part() const;
    DenseMatrix imag_part() const;
    /// [[Re, −Im], [Im, Re]]; shares the singular values of the complex matrix.
    DenseMatrix real_embedding() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Cplx> a_;
};

ComplexMatrix cmatmul(const ComplexMatrix& a, const ComplexMatrix& b);
CVector cmatvec(const ComplexMatrix& a, const CVector& x);

/// Complex LU with partial pivoting.
class ComplexLu {
public:
    explicit ComplexLu(ComplexMatrix a);
    CVector solve(const CVector& rhs) const;
    ComplexMatrix inverse() const;
    double min_pivot_ratio() const { return min_pivot_ratio_; }

private:
    ComplexMatrix lu_;
    std::vector<int> piv_;
    double min_pivot_ratio_ = 0.0;
};

} // namespace stmg
