#pragma once

#include <memory>
#include <span>
#include <utility>

#include "stmg/sparse.hpp"

namespace stmg {

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = true;
};

/// Envelope (skyline) Cholesky factorization of an SPD CSR matrix; fill
/// stays within the row envelope, which is a plain band for the
/// lexicographically ordered tensor-product discretizations used here.
class SkylineCholesky {
public:
    explicit SkylineCholesky(const SparseMatrix& a);

    int size() const { return n_; }
    Vector solve(std::span<const double> rhs) const;

private:
    int n_ = 0;
    std::vector<int> first_;
    std::vector<size_t> offset_; // row i occupies [offset_[i], offset_[i+1])
    std::vector<double> val_;

    double entry(int i, int j) const { return val_[offset_[i] + (j - first_[i])]; }
    double& entry(int i, int j) { return val_[offset_[i] + (j - first_[i])]; }
};

enum class SpdMethod { cholesky, cg };

/// K_x + gamma M_x, symmetric positive definite for gamma > 0.
struct ShiftedOperator {
    std::shared_ptr<const SparseMatrix> stiffness;
    std::shared_ptr<const SparseMatrix> mass;
    double shift = 0.0;

    int n() const { return stiffness ? stiffness->rows() : 0; }
    SparseMatrix to_csr() const;
};

ShiftedOperator make_shifted_operator(std::shared_ptr<const SparseMatrix> stiffness,
                                      std::shared_ptr<const SparseMatrix> mass, double shift);

/// Reusable solver handle for one shifted operator.
class SpdSolver {
public:
    SpdSolver(ShiftedOperator op, SpdMethod method, double tol = 1e-12, int max_iter = 10000);

    std::pair<Vector, SolveReport> solve(std::span<const double> rhs) const;
    std::pair<Vector, SolveReport> solve(std::span<const double> rhs, double tol) const;
    const ShiftedOperator& op() const { return op_; }

private:
    ShiftedOperator op_;
    SparseMatrix a_;
    SpdMethod method_;
    double tol_;
    int max_iter_;
    std::shared_ptr<const SkylineCholesky> chol_;
};

std::pair<Vector, SolveReport> spd_solve(const ShiftedOperator& op, std::span<const double> rhs,
                                         double tol, SpdMethod method);

/// Jacobi-preconditioned conjugate gradients; throws DefinitenessError on
/// negative curvature.
std::pair<Vector, SolveReport> cg_solve(const SparseMatrix& a, std::span<const double> rhs,
                                        double tol, int max_iter);

/// The 2N_x × 2N_x block operator arising from a complex shift (beta1 ==
/// beta2 == Im(lambda), Theorem-2 form) or from a normalized real-Schur
/// block (beta1*beta2 < 0, Theorem-3 rescaled form).
struct BlockSaddleOperator {
    std::shared_ptr<const SparseMatrix> stiffness; // K_x
    std::shared_ptr<const SparseMatrix> mass;      // M_x
    double alpha = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    std::shared_ptr<const SparseMatrix> shifted;   // K_x + alpha M_x

    int n() const { return stiffness ? stiffness->rows() : 0; }
    bool symmetric_beta() const { return beta1 == beta2; }

    /// y = Abar * w for the symmetric rewritten system (unknown (x, -y)).
    void apply_symmetric(std::span<const double> w, std::span<double> y) const;
};

BlockSaddleOperator make_block_saddle(std::shared_ptr<const SparseMatrix> stiffness,
                                      std::shared_ptr<const SparseMatrix> mass, double alpha,
                                      double beta1, double beta2);

enum class PrecVariant { diag_thm2, rschur_thm3 };

/// Block-diagonal preconditioner built from one factorization of
/// K_x + (alpha + s) M_x, s = |beta| or sqrt(|beta1 beta2|); both blocks
/// reuse the same factor, the Theorem-3 variant adds the |beta2|, |beta1|
/// block scalings.
struct BlockDiagPreconditioner {
    std::shared_ptr<const SkylineCholesky> factor;
    double scale_top = 1.0;
    double scale_bottom = 1.0;
    double shift_s = 0.0;

    void apply(std::span<const double> r, std::span<double> z) const;
};

BlockDiagPreconditioner make_preconditioner(const BlockSaddleOperator& op, PrecVariant variant);

/// Preconditioned MinRes for the saddle system; rhs and solution are (f; g)
/// stacked, length 2 N_x, in the natural (unflipped) unknowns. With
/// beta1 == beta2 == beta the operator stands for the complex solve
/// (K_x + (alpha + i beta) M_x)(x + i y) = f + i g through the sign-flip
/// rewrite; with beta1 beta2 < 0 it is the natural real-Schur block system
/// [[Kc, beta1 M], [beta2 M, Kc]] (x; y) = (f; g), rescaled to the
/// symmetric Theorem-3 form internally.
std::pair<Vector, SolveReport> minres_block_solve(const BlockSaddleOperator& op,
                                                  const BlockDiagPreconditioner& prec,
                                                  std::span<const double> rhs, double tol,
                                                  int max_iter = 500);

} // namespace stmg
