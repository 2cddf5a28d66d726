#pragma once

// Shared test-only helpers: dense oracles and random generators. These stay
// independent of the implementation paths they check.

#include <random>

#include "stmg/assembly.hpp"
#include "stmg/dense.hpp"
#include "stmg/sparse.hpp"

namespace stmg::test {

inline DenseMatrix random_matrix(int n, int m, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    DenseMatrix a(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = dist(rng);
    return a;
}

inline Vector random_vector(size_t n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    Vector v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

/// Random SPD matrix a·aᵀ + shift·I.
inline DenseMatrix random_spd(int n, std::mt19937_64& rng, double shift = 0.0) {
    const DenseMatrix a = random_matrix(n, n, rng);
    DenseMatrix s = matmul(a, a.transposed());
    if (shift == 0.0) shift = n * 0.5;
    for (int i = 0; i < n; ++i) s(i, i) += shift;
    return s;
}

/// Dense Kronecker product (independent oracle for the slab operator).
inline DenseMatrix dense_kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja)
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = a(ia, ja) * b(ib, jb);
    return k;
}

/// Densely materialized slab operator K_t⊗M_x + M_t⊗K_x.
inline DenseMatrix dense_slab_operator(const SlabOperator& op) {
    DenseMatrix a = dense_kron(op.K_t, op.M_x->to_dense());
    a += dense_kron(op.M_t, op.K_x->to_dense());
    return a;
}

inline double rel_diff(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(1e-300, std::sqrt(den));
}

} // namespace stmg::test
