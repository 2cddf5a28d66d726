#pragma once

#include <vector>

#include "stmg/complex_linalg.hpp"
#include "stmg/dense.hpp"

namespace stmg {

/// Diagonal block of a real Schur form: size 1 (real eigenvalue) or
/// size 2 (complex-conjugate pair).
struct SchurBlock {
    int start = 0;
    int size = 1;
};

/// Real Schur decomposition a = q · t · qᵀ with orthogonal q and
/// quasi-upper-triangular t (Francis double-shift QR).
struct RealSchurResult {
    DenseMatrix q;
    DenseMatrix t;
    std::vector<SchurBlock> blocks;

    std::vector<Cplx> eigenvalues() const;
};

RealSchurResult real_schur(const DenseMatrix& a);

/// Eigenvalues only (no Schur vector accumulation).
std::vector<Cplx> eigenvalues(const DenseMatrix& a);

/// Givens similarity bringing the 2x2 block at (k, k+1) to the form
/// [[alpha, beta1], [beta2, alpha]] with beta1*beta2 < 0; t and q are
/// updated in place. The block must have complex eigenvalues.
void normalize_2x2(DenseMatrix& t, DenseMatrix& q, int k);

/// Complex Schur decomposition a = q · t · qᴴ with unitary q and upper
/// triangular t; conjugate pairs appear adjacent (positive imaginary first).
struct ComplexSchurResult {
    ComplexMatrix q;
    ComplexMatrix t;
};

ComplexSchurResult complex_schur(const DenseMatrix& a);

/// Generalized eigenpair of K z = lambda M z.
struct EigenPair {
    Cplx lambda;
    CVector vec;
};

/// All eigenpairs of (K, M), solved as the standard problem on M⁻¹K.
/// Eigenvectors have unit Euclidean norm; complex pairs are adjacent and
/// exactly conjugate. x holds the eigenvectors as columns.
struct GeneralizedEig {
    std::vector<EigenPair> pairs;
    ComplexMatrix x;

    Cplx min_real_part() const;
};

GeneralizedEig generalized_eig(const DenseMatrix& k_t, const DenseMatrix& m_t);

/// Singular values by one-sided Jacobi (descending).
std::vector<double> singular_values(const DenseMatrix& a);

/// 2-norm condition number sigma_max / sigma_min; +inf when singular.
double cond_2norm(const DenseMatrix& a);

/// Eigenvalues of b⁻¹a for symmetric a and SPD b (Cholesky reduction),
/// ascending.
std::vector<double> generalized_sym_eigenvalues(const DenseMatrix& a, const DenseMatrix& b_spd);

/// Smallest eigenvalue of the symmetric part (a + aᵀ)/2.
double min_symmetric_eigenvalue(const DenseMatrix& a);

/// Factored form of M_t⁻¹K_t used by the slab inverses:
/// M_t⁻¹K_t = X · Z · X⁻¹ with Y = (M_t X)⁻¹, so that
/// A⁻¹ = (X⊗I)(Z⊗M_x + I⊗K_x)⁻¹(Y⊗I).
struct TimeDecomposition {
    enum class Kind { Diag, ComplexSchur, RealSchur };

    Kind kind = Kind::Diag;
    // Diag / ComplexSchur: X columns are eigenvectors / Schur vectors,
    // Z is diag(lambda) (stored in diag) / complex triangular T.
    ComplexMatrix x;
    ComplexMatrix y;
    ComplexMatrix t;          // ComplexSchur only
    std::vector<Cplx> diag;   // Diag only
    // RealSchur: real orthogonal Q, quasi-triangular T (2x2 blocks
    // normalized to equal diagonals), Y = Qᵀ M_t⁻¹.
    DenseMatrix qr;
    DenseMatrix tr;
    DenseMatrix yr;
    std::vector<SchurBlock> blocks;

    std::vector<Cplx> eigenvalue_list() const;
};

TimeDecomposition decompose_time(const DenseMatrix& k_t, const DenseMatrix& m_t,
                                 TimeDecomposition::Kind kind);

} // namespace stmg
