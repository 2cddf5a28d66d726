#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

#include "stmg/assembly.hpp"
#include "stmg/denselin.hpp"
#include "stmg/spatial_solvers.hpp"
#include "test_support.hpp"

using namespace stmg;

namespace {

std::shared_ptr<const SparseMatrix> shared_sparse(const DenseMatrix& d) {
    return std::make_shared<const SparseMatrix>(from_dense(d));
}

// Residual of the system the solver contracts to solve: the complex real
// form [[Kc, -b M], [b M, Kc]] when beta1 == beta2 == b (sign-flip rewrite),
// the natural block system [[Kc, b1 M], [b2 M, Kc]] otherwise.
double natural_residual(const BlockSaddleOperator& op, const Vector& sol, const Vector& rhs) {
    const int m = op.n();
    const double b1 = op.symmetric_beta() ? -op.beta1 : op.beta1;
    const double b2 = op.symmetric_beta() ? op.beta1 : op.beta2;
    Vector r(rhs);
    Vector tmp(m);
    auto x = std::span<const double>(sol).subspan(0, m);
    auto y = std::span<const double>(sol).subspan(m, m);
    op.shifted->matvec(x, tmp);
    for (int i = 0; i < m; ++i) r[i] -= tmp[i];
    op.mass->matvec(y, tmp);
    for (int i = 0; i < m; ++i) r[i] -= b1 * tmp[i];
    op.mass->matvec(x, tmp);
    for (int i = 0; i < m; ++i) r[m + i] -= b2 * tmp[i];
    op.shifted->matvec(y, tmp);
    for (int i = 0; i < m; ++i) r[m + i] -= tmp[i];
    return norm2(r) / std::max(1e-300, norm2(rhs));
}

// Dense symmetric forms of Abar and P for eigenvalue window checks.
std::pair<DenseMatrix, DenseMatrix> dense_saddle_pair(const DenseMatrix& k, const DenseMatrix& m,
                                                      double alpha, double b1, double b2) {
    const int n = k.rows();
    DenseMatrix kc = k;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) kc(i, j) += alpha * m(i, j);
    DenseMatrix abar(2 * n, 2 * n), p(2 * n, 2 * n);
    const double s = std::sqrt(std::abs(b1 * b2));
    if (b1 == b2) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                abar(i, j) = kc(i, j);
                abar(i, n + j) = b1 * m(i, j);
                abar(n + i, j) = b1 * m(i, j);
                abar(n + i, n + j) = -kc(i, j);
                p(i, j) = kc(i, j) + s * m(i, j);
                p(n + i, n + j) = kc(i, j) + s * m(i, j);
            }
    } else {
        const double ab1 = std::abs(b1), ab2 = std::abs(b2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                abar(i, j) = ab2 * kc(i, j);
                abar(i, n + j) = -b1 * ab2 * m(i, j);
                abar(n + i, j) = ab1 * b2 * m(i, j);
                abar(n + i, n + j) = -ab1 * kc(i, j);
                p(i, j) = ab2 * (kc(i, j) + s * m(i, j));
                p(n + i, n + j) = ab1 * (kc(i, j) + s * m(i, j));
            }
    }
    return {std::move(abar), std::move(p)};
}

} // namespace

TEST_CASE("skyline Cholesky matches the dense factorization") {
    std::mt19937_64 rng(61);
    for (int n : {1, 3, 10, 25}) {
        const DenseMatrix spd = test::random_spd(n, rng);
        const SparseMatrix a = from_dense(spd);
        const Vector b = test::random_vector(n, rng);
        const Vector x = SkylineCholesky(a).solve(b);
        const Vector xd = DenseCholesky(spd).solve(b);
        REQUIRE(test::rel_diff(x, xd) <= 1e-11);
    }
    DenseMatrix indef(2, 2);
    indef(0, 0) = 1.0;
    indef(1, 1) = -1.0;
    CHECK_THROWS_AS(SkylineCholesky(from_dense(indef)), DefinitenessError);
}

TEST_CASE("spd_solve: trivial, scalar, CG vs dense oracle") {
    // the two-element hat case: M = [1/3], K = [4]
    TensorBasis basis = make_interval_basis(1, 2, 0.0, 1.0);
    SpaceMatrices sm = assemble_space(basis);
    auto mass = std::make_shared<const SparseMatrix>(sm.mass);
    auto stiff = std::make_shared<const SparseMatrix>(sm.stiffness);
    ShiftedOperator op = make_shifted_operator(stiff, mass, 1.0);

    auto [zero, rep0] = spd_solve(op, Vector{0.0}, 1e-12, SpdMethod::cholesky);
    CHECK(zero[0] == 0.0);
    CHECK(rep0.iterations == 0);

    auto [one, rep1] = spd_solve(op, Vector{13.0 / 3.0}, 1e-12, SpdMethod::cholesky);
    CHECK(one[0] == doctest::Approx(1.0).epsilon(1e-13));

    std::mt19937_64 rng(67);
    for (int n : {10, 30, 50}) {
        const DenseMatrix kd = test::random_spd(n, rng);
        const DenseMatrix md = test::random_spd(n, rng);
        ShiftedOperator sop = make_shifted_operator(shared_sparse(kd), shared_sparse(md), 0.7);
        const Vector b = test::random_vector(n, rng);
        auto [xcg, repcg] = spd_solve(sop, b, 1e-12, SpdMethod::cg);
        DenseMatrix dense = kd;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dense(i, j) += 0.7 * md(i, j);
        const Vector xd = DenseCholesky(dense).solve(b);
        REQUIRE(test::rel_diff(xcg, xd) <= 1e-9);
        CHECK(repcg.converged);
    }
    // negative curvature detection
    DenseMatrix neg(2, 2);
    neg(0, 0) = 1.0;
    neg(1, 1) = -2.0;
    CHECK_THROWS_AS(
        cg_solve(from_dense(neg), Vector{1.0, 1.0}, 1e-10, 50), DefinitenessError);
}

TEST_CASE("theorem-2 scalar anchor: eigenvalues of P^-1 Abar") {
    DenseMatrix k(1, 1), m(1, 1);
    k(0, 0) = 1.0;
    m(0, 0) = 1.0;
    auto [abar, p] = dense_saddle_pair(k, m, 1.0, 1.0, 1.0);
    CHECK(abar(0, 0) == 2.0);
    CHECK(abar(0, 1) == 1.0);
    CHECK(abar(1, 1) == -2.0);
    CHECK(p(0, 0) == 3.0);
    const auto lam = generalized_sym_eigenvalues(abar, p);
    REQUIRE(lam.size() == 2);
    CHECK(lam[0] == doctest::Approx(-std::sqrt(5.0) / 3.0).epsilon(1e-12));
    CHECK(lam[1] == doctest::Approx(std::sqrt(5.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("theorem-3 scalar anchor: shift and scalings") {
    DenseMatrix k(1, 1), m(1, 1);
    k(0, 0) = 1.0;
    m(0, 0) = 1.0;
    BlockSaddleOperator op = make_block_saddle(shared_sparse(k), shared_sparse(m), 1.0, 2.0, -2.0);
    BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::rschur_thm3);
    CHECK(prec.shift_s == doctest::Approx(2.0));
    // P = diag(|b2| (K + (1+2) M), |b1| (...)) = diag(8, 8): applying P^-1 to
    // (1, 1) must give (1/8, 1/8)
    Vector z(2);
    prec.apply(Vector{1.0, 1.0}, z);
    CHECK(z[0] == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
    CHECK(z[1] == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
    auto [abar, p] = dense_saddle_pair(k, m, 1.0, 2.0, -2.0);
    for (double lam : generalized_sym_eigenvalues(abar, p)) {
        CHECK(std::abs(lam) >= 1.0 / std::sqrt(2.0) - 1e-10);
        CHECK(std::abs(lam) <= 1.0 + 1e-10);
    }
    CHECK_THROWS_AS(make_preconditioner(
                        make_block_saddle(shared_sparse(k), shared_sparse(m), -1.0, 1.0, -1.0),
                        PrecVariant::rschur_thm3),
                    AdmissibilityError);
}

TEST_CASE("condition-number windows for both preconditioner variants") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> alpha_dist(-2.0, 2.0);
    std::uniform_real_distribution<double> beta_dist(-1.5, 1.5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 39);
        const DenseMatrix kd = test::random_spd(n, rng);
        const DenseMatrix md = test::random_spd(n, rng);
        const double alpha = std::pow(10.0, alpha_dist(rng));
        // Theorem 3: opposite signs
        const double b1 = std::pow(10.0, beta_dist(rng));
        const double b2 = -std::pow(10.0, beta_dist(rng));
        {
            auto [abar, p] = dense_saddle_pair(kd, md, alpha, b1, b2);
            for (double lam : generalized_sym_eigenvalues(abar, p)) {
                REQUIRE(std::abs(lam) >= 1.0 / std::sqrt(2.0) - 1e-8);
                REQUIRE(std::abs(lam) <= 1.0 + 1e-8);
            }
        }
        // Theorem 2 / Remark 8: symmetric beta, same window
        const double beta = beta_dist(rng);
        {
            auto [abar, p] = dense_saddle_pair(kd, md, alpha, beta, beta);
            for (double lam : generalized_sym_eigenvalues(abar, p)) {
                REQUIRE(std::abs(lam) >= 1.0 / std::sqrt(2.0) - 1e-8);
                REQUIRE(std::abs(lam) <= 1.0 + 1e-8);
            }
        }
    }
}

TEST_CASE("block MinRes: correctness, degenerate edge, robustness") {
    std::mt19937_64 rng(73);
    const int n = 24;
    const DenseMatrix kd = test::random_spd(n, rng);
    const DenseMatrix md = test::random_spd(n, rng);
    auto ks = shared_sparse(kd);
    auto ms = shared_sparse(md);

    // beta = 0 edge: identical to two shifted SPD solves
    {
        BlockSaddleOperator op = make_block_saddle(ks, ms, 1.3, 0.0, 0.0);
        BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::diag_thm2);
        const Vector rhs = test::random_vector(2 * n, rng);
        auto [sol, rep] = minres_block_solve(op, prec, rhs, 1e-12);
        CHECK(rep.iterations <= 2);
        ShiftedOperator sop = make_shifted_operator(ks, ms, 1.3);
        auto [x, repx] = spd_solve(sop, std::span<const double>(rhs).subspan(0, n), 1e-12,
                                   SpdMethod::cholesky);
        auto [y, repy] = spd_solve(sop, std::span<const double>(rhs).subspan(n, n), 1e-12,
                                   SpdMethod::cholesky);
        for (int i = 0; i < n; ++i) {
            REQUIRE(sol[i] == doctest::Approx(x[i]).epsilon(1e-12));
            REQUIRE(sol[n + i] == doctest::Approx(y[i]).epsilon(1e-12));
        }
    }

    // Theorem-2 form: complex shifted solve recombines correctly
    {
        const double alpha = 0.8, beta = 2.4;
        BlockSaddleOperator op = make_block_saddle(ks, ms, alpha, beta, beta);
        BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::diag_thm2);
        const Vector rhs = test::random_vector(2 * n, rng);
        const double tol = 1e-10;
        auto [sol, rep] = minres_block_solve(op, prec, rhs, tol);
        CHECK(rep.converged);
        // ||(K + lambda M) z - h|| <= 10 tol ||h||, complex recombination
        REQUIRE(natural_residual(op, sol, rhs) <= 10.0 * tol);
        // reported residual is the recomputed true preconditioned residual
        CHECK(rep.rel_residual <= tol);
    }

    // Scaling robustness: jointly scaling (alpha, beta) with the matched
    // preconditioner shift never degrades the count by more than 2 (it can
    // improve it: small shifts cluster the preconditioned spectrum at +-1).
    {
        const double alpha = 1.1, b1 = 0.9, b2 = -1.7;
        int its_ref = 0;
        for (double scale : {1.0, 1e-2, 1e2}) {
            BlockSaddleOperator op =
                make_block_saddle(ks, ms, alpha * scale, b1 * scale, b2 * scale);
            BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::rschur_thm3);
            std::mt19937_64 rng2(101);
            const Vector rhs = test::random_vector(2 * n, rng2);
            auto [sol, rep] = minres_block_solve(op, prec, rhs, 1e-10);
            CHECK(rep.converged);
            REQUIRE(natural_residual(op, sol, rhs) <= 1e-8);
            if (scale == 1.0) its_ref = rep.iterations;
            else CHECK(rep.iterations <= its_ref + 2);
            CHECK(rep.iterations <= 30);
        }
    }

    // one-sided degenerate block (beta2 = 0): staggered two-solve path
    {
        BlockSaddleOperator op = make_block_saddle(ks, ms, 0.6, 1.2, 0.0);
        BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::rschur_thm3);
        const Vector rhs = test::random_vector(2 * n, rng);
        auto [sol, rep] = minres_block_solve(op, prec, rhs, 1e-12);
        REQUIRE(natural_residual(op, sol, rhs) <= 1e-11);
    }

    // iteration cap raises a convergence error carrying the report
    {
        BlockSaddleOperator op = make_block_saddle(ks, ms, 0.5, 3.0, 3.0);
        BlockDiagPreconditioner prec = make_preconditioner(op, PrecVariant::diag_thm2);
        const Vector rhs = test::random_vector(2 * n, rng);
        CHECK_THROWS_AS(minres_block_solve(op, prec, rhs, 1e-14, 3), ConvergenceError);
    }
}
