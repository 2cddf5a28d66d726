#include "stmg/spatial_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stmg/errors.hpp"

namespace stmg {

SkylineCholesky::SkylineCholesky(const SparseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("SkylineCholesky: matrix not square");
    n_ = a.rows();
    first_.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
        first_[i] = i;
        if (a.row_ptr()[i] < a.row_ptr()[i + 1])
            first_[i] = std::min(i, a.col_idx()[a.row_ptr()[i]]);
    }
    offset_.assign(n_ + 1, 0);
    for (int i = 0; i < n_; ++i) offset_[i + 1] = offset_[i] + (i - first_[i] + 1);
    val_.assign(offset_[n_], 0.0);
    for (int i = 0; i < n_; ++i)
        for (int k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const int j = a.col_idx()[k];
            if (j <= i) entry(i, j) = a.values()[k];
        }
    // Row-oriented factorization; fill never leaves the envelope.
    for (int i = 0; i < n_; ++i) {
        for (int j = first_[i]; j < i; ++j) {
            double s = entry(i, j);
            const int k0 = std::max(first_[i], first_[j]);
            for (int k = k0; k < j; ++k) s -= entry(i, k) * entry(j, k);
            entry(i, j) = s / entry(j, j);
        }
        double s = entry(i, i);
        for (int k = first_[i]; k < i; ++k) s -= entry(i, k) * entry(i, k);
        if (s <= 0.0)
            throw DefinitenessError("SkylineCholesky: non-positive pivot at row " + std::to_string(i));
        entry(i, i) = std::sqrt(s);
    }
}

Vector SkylineCholesky::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw DimensionError("SkylineCholesky::solve: size mismatch");
    Vector x(rhs.begin(), rhs.end());
    for (int i = 0; i < n_; ++i) {
        double s = x[i];
        for (int k = first_[i]; k < i; ++k) s -= entry(i, k) * x[k];
        x[i] = s / entry(i, i);
    }
    for (int i = n_ - 1; i >= 0; --i) {
        x[i] /= entry(i, i);
        const double xi = x[i];
        for (int k = first_[i]; k < i; ++k) x[k] -= entry(i, k) * xi;
    }
    return x;
}

SparseMatrix ShiftedOperator::to_csr() const {
    return sparse_add(*stiffness, *mass, 1.0, shift);
}

ShiftedOperator make_shifted_operator(std::shared_ptr<const SparseMatrix> stiffness,
                                      std::shared_ptr<const SparseMatrix> mass, double shift) {
    if (!stiffness || !mass) throw ParameterError("make_shifted_operator: null operand");
    if (stiffness->rows() != mass->rows() || stiffness->cols() != mass->cols())
        throw DimensionError("make_shifted_operator: shape mismatch");
    return {std::move(stiffness), std::move(mass), shift};
}

SpdSolver::SpdSolver(ShiftedOperator op, SpdMethod method, double tol, int max_iter)
    : op_(std::move(op)), a_(op_.to_csr()), method_(method), tol_(tol), max_iter_(max_iter) {
    if (method_ == SpdMethod::cholesky && a_.rows() > 0)
        chol_ = std::make_shared<const SkylineCholesky>(a_);
}

std::pair<Vector, SolveReport> SpdSolver::solve(std::span<const double> rhs) const {
    return solve(rhs, tol_);
}

std::pair<Vector, SolveReport> SpdSolver::solve(std::span<const double> rhs, double tol) const {
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) return {Vector(rhs.size(), 0.0), SolveReport{0, 0.0, true}};
    if (method_ == SpdMethod::cholesky) {
        Vector x = chol_->solve(rhs);
        Vector r(rhs.begin(), rhs.end());
        a_.matvec_add(x, r, -1.0);
        return {std::move(x), SolveReport{1, norm2(r) / bnorm, true}};
    }
    return cg_solve(a_, rhs, tol, max_iter_);
}

std::pair<Vector, SolveReport> spd_solve(const ShiftedOperator& op, std::span<const double> rhs,
                                         double tol, SpdMethod method) {
    return SpdSolver(op, method, tol).solve(rhs);
}

std::pair<Vector, SolveReport> cg_solve(const SparseMatrix& a, std::span<const double> rhs,
                                        double tol, int max_iter) {
    const int n = a.rows();
    if (static_cast<int>(rhs.size()) != n) throw DimensionError("cg_solve: size mismatch");
    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) return {Vector(n, 0.0), SolveReport{0, 0.0, true}};

    Vector diag(n, 1.0);
    for (int i = 0; i < n; ++i) {
        const double d = a.at(i, i);
        if (d <= 0.0) throw DefinitenessError("cg_solve: non-positive diagonal");
        diag[i] = 1.0 / d;
    }
    Vector x(n, 0.0), r(rhs.begin(), rhs.end()), z(n), p(n), ap(n);
    for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    p = z;
    double rz = dot(r, z);
    int it = 0;
    while (it < max_iter) {
        ++it;
        a.matvec(p, ap);
        const double pap = dot(p, ap);
        if (pap <= 0.0) throw DefinitenessError("cg_solve: negative curvature direction");
        const double alpha = rz / pap;
        axpy(alpha, p, x);
        axpy(-alpha, ap, r);
        if (norm2(r) <= tol * bnorm) break;
        for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    Vector rtrue(rhs.begin(), rhs.end());
    a.matvec_add(x, rtrue, -1.0);
    const double rel = norm2(rtrue) / bnorm;
    if (rel > tol)
        throw ConvergenceError("cg_solve: no convergence in " + std::to_string(max_iter) +
                                   " iterations",
                               it, rel);
    return {std::move(x), SolveReport{it, rel, true}};
}

BlockSaddleOperator make_block_saddle(std::shared_ptr<const SparseMatrix> stiffness,
                                      std::shared_ptr<const SparseMatrix> mass, double alpha,
                                      double beta1, double beta2) {
    BlockSaddleOperator op;
    op.stiffness = std::move(stiffness);
    op.mass = std::move(mass);
    op.alpha = alpha;
    op.beta1 = beta1;
    op.beta2 = beta2;
    op.shifted = std::make_shared<const SparseMatrix>(sparse_add(*op.stiffness, *op.mass, 1.0, alpha));
    return op;
}

void BlockSaddleOperator::apply_symmetric(std::span<const double> w, std::span<double> y) const {
    const int m = n();
    auto u = w.subspan(0, m), v = w.subspan(m, m);
    auto yt = y.subspan(0, m), yb = y.subspan(m, m);
    if (symmetric_beta()) {
        // [[Kc, b M], [b M, -Kc]]
        const double b = beta1;
        shifted->matvec(u, yt);
        mass->matvec_add(v, yt, b);
        mass->matvec(u, yb);
        scale(b, yb);
        shifted->matvec_add(v, yb, -1.0);
    } else {
        // [[|b2| Kc, -b1|b2| M], [-b1|b2| M, -|b1| Kc]] with -b1|b2| = |b1| b2.
        const double ab1 = std::abs(beta1), ab2 = std::abs(beta2);
        const double off = -beta1 * ab2;
        shifted->matvec(u, yt);
        scale(ab2, yt);
        mass->matvec_add(v, yt, off);
        mass->matvec(u, yb);
        scale(off, yb);
        shifted->matvec_add(v, yb, -ab1);
    }
}

BlockDiagPreconditioner make_preconditioner(const BlockSaddleOperator& op, PrecVariant variant) {
    if (!(op.alpha > 0.0))
        throw AdmissibilityError("make_preconditioner: alpha must be positive");
    BlockDiagPreconditioner prec;
    if (variant == PrecVariant::diag_thm2) {
        if (!op.symmetric_beta())
            throw ParameterError("make_preconditioner: diag_thm2 requires beta1 == beta2");
        prec.shift_s = std::abs(op.beta1);
    } else {
        if (op.beta1 * op.beta2 > 0.0)
            throw ParameterError("make_preconditioner: rschur_thm3 requires beta1*beta2 <= 0");
        prec.shift_s = std::sqrt(std::abs(op.beta1 * op.beta2));
        // Zero betas only reach the decoupled direct path, which bypasses
        // the block scalings.
        prec.scale_top = (op.beta2 != 0.0) ? std::abs(op.beta2) : 1.0;
        prec.scale_bottom = (op.beta1 != 0.0) ? std::abs(op.beta1) : 1.0;
    }
    const SparseMatrix p = sparse_add(*op.stiffness, *op.mass, 1.0, op.alpha + prec.shift_s);
    prec.factor = std::make_shared<const SkylineCholesky>(p);
    return prec;
}

void BlockDiagPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    const int m = factor->size();
    const Vector zt = factor->solve(r.subspan(0, m));
    const Vector zb = factor->solve(r.subspan(m, m));
    for (int i = 0; i < m; ++i) z[i] = zt[i] / scale_top;
    for (int i = 0; i < m; ++i) z[m + i] = zb[i] / scale_bottom;
}

namespace {

// Direct path for beta1*beta2 == 0: the block system decouples into (at most)
// two shifted SPD solves against the preconditioner factor (whose shift is
// exactly alpha in that case).
std::pair<Vector, SolveReport> degenerate_block_solve(const BlockSaddleOperator& op,
                                                      const BlockDiagPreconditioner& prec,
                                                      std::span<const double> rhs) {
    const int m = op.n();
    auto f = rhs.subspan(0, m), g = rhs.subspan(m, m);
    Vector sol(2 * m, 0.0);
    auto x = std::span<double>(sol).subspan(0, m);
    auto y = std::span<double>(sol).subspan(m, m);
    int solves = 0;
    if (op.beta1 == 0.0) {
        const Vector xs = prec.factor->solve(f);
        std::copy(xs.begin(), xs.end(), x.begin());
        ++solves;
        Vector g2(g.begin(), g.end());
        if (op.beta2 != 0.0) op.mass->matvec_add(xs, g2, -op.beta2);
        const Vector ys = prec.factor->solve(g2);
        std::copy(ys.begin(), ys.end(), y.begin());
        ++solves;
    } else { // beta2 == 0
        const Vector ys = prec.factor->solve(g);
        std::copy(ys.begin(), ys.end(), y.begin());
        ++solves;
        Vector f2(f.begin(), f.end());
        op.mass->matvec_add(ys, f2, -op.beta1);
        const Vector xs = prec.factor->solve(f2);
        std::copy(xs.begin(), xs.end(), x.begin());
        ++solves;
    }
    // True residual of the natural system.
    Vector r(rhs.begin(), rhs.end());
    {
        Vector tmp(m);
        op.shifted->matvec(x, tmp);
        for (int i = 0; i < m; ++i) r[i] -= tmp[i];
        op.mass->matvec(y, tmp);
        for (int i = 0; i < m; ++i) r[i] -= op.beta1 * tmp[i];
        op.mass->matvec(x, tmp);
        for (int i = 0; i < m; ++i) r[m + i] -= op.beta2 * tmp[i];
        op.shifted->matvec(y, tmp);
        for (int i = 0; i < m; ++i) r[m + i] -= tmp[i];
    }
    const double bnorm = norm2(rhs);
    return {std::move(sol), SolveReport{solves, bnorm > 0 ? norm2(r) / bnorm : 0.0, true}};
}

} // namespace

std::pair<Vector, SolveReport> minres_block_solve(const BlockSaddleOperator& op,
                                                  const BlockDiagPreconditioner& prec,
                                                  std::span<const double> rhs, double tol,
                                                  int max_iter) {
    const int m = op.n();
    if (static_cast<int>(rhs.size()) != 2 * m)
        throw DimensionError("minres_block_solve: rhs must have length 2 N_x");
    if (!(op.alpha > 0.0)) throw AdmissibilityError("minres_block_solve: alpha must be positive");

    if (op.beta1 == 0.0 || op.beta2 == 0.0) return degenerate_block_solve(op, prec, rhs);

    // Symmetric right-hand side; unknown is (x, -y).
    const int n2 = 2 * m;
    Vector b(rhs.begin(), rhs.end());
    if (!op.symmetric_beta()) {
        const double ab1 = std::abs(op.beta1), ab2 = std::abs(op.beta2);
        for (int i = 0; i < m; ++i) b[i] *= ab2;
        for (int i = 0; i < m; ++i) b[m + i] *= ab1;
    }

    Vector x(n2, 0.0);
    Vector z(n2);
    prec.apply(b, z);
    const double phi0sq = dot(b, z);
    if (phi0sq < 0.0) throw BreakdownError("minres_block_solve: preconditioner not positive");
    const double norm_b = std::sqrt(phi0sq);
    SolveReport report;
    if (norm_b == 0.0) {
        return {std::move(x), report};
    }

    int total_it = 0;
    bool done = false;
    Vector r1(n2), r2(n2), v(n2), y(n2), w(n2, 0.0), w1(n2, 0.0), w2(n2, 0.0), tmp(n2);
    while (!done) {
        // (Re)start the Lanczos recurrence from the current iterate.
        Vector r(b);
        op.apply_symmetric(x, tmp);
        axpy(-1.0, tmp, r);
        prec.apply(r, z);
        double betasq = dot(r, z);
        if (betasq < 0.0) throw BreakdownError("minres_block_solve: indefinite preconditioner");
        double beta = std::sqrt(betasq);
        if (beta <= tol * norm_b) {
            report.converged = true;
            break;
        }
        r1 = r;
        r2 = r;
        y = z;
        double oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta, cs = -1.0, sn = 0.0;
        std::fill(w.begin(), w.end(), 0.0);
        std::fill(w1.begin(), w1.end(), 0.0);
        std::fill(w2.begin(), w2.end(), 0.0);
        int since_restart = 0;
        double working_tol = tol;
        while (true) {
            if (total_it >= max_iter)
                throw ConvergenceError("minres_block_solve: iteration cap reached", total_it,
                                       phibar / norm_b);
            ++total_it;
            ++since_restart;
            for (int i = 0; i < n2; ++i) v[i] = y[i] / beta;
            op.apply_symmetric(v, y);
            if (since_restart >= 2) axpy(-beta / oldb, r1, y);
            const double alfa = dot(v, y);
            axpy(-alfa / beta, r2, y);
            r1 = r2;
            r2 = y;
            prec.apply(r2, y);
            oldb = beta;
            betasq = dot(r2, y);
            if (betasq < 0.0) throw BreakdownError("minres_block_solve: Lanczos breakdown");
            beta = std::sqrt(betasq);
            const double oldeps = epsln;
            const double delta = cs * dbar + sn * alfa;
            const double gbar = sn * dbar - cs * alfa;
            epsln = sn * beta;
            dbar = -cs * beta;
            double gamma = std::hypot(gbar, beta);
            if (gamma == 0.0) throw BreakdownError("minres_block_solve: zero Givens denominator");
            cs = gbar / gamma;
            sn = beta / gamma;
            const double phi = cs * phibar;
            phibar = sn * phibar;
            w1 = w2;
            w2 = w;
            for (int i = 0; i < n2; ++i) w[i] = (v[i] - oldeps * w1[i] - delta * w2[i]) / gamma;
            axpy(phi, w, x);
            const bool estimate_done = std::abs(phibar) <= working_tol * norm_b;
            // True-residual guard: recompute at the estimated convergence
            // point and every 25 iterations.
            if (estimate_done || since_restart % 25 == 0) {
                Vector rt(b);
                op.apply_symmetric(x, tmp);
                axpy(-1.0, tmp, rt);
                prec.apply(rt, z);
                const double true_norm = std::sqrt(std::max(0.0, dot(rt, z)));
                if (true_norm <= tol * norm_b) {
                    report.converged = true;
                    done = true;
                    break;
                }
                if (estimate_done) {
                    // optimistic estimate: keep the recurrence going and
                    // require a further drop before re-checking
                    working_tol *= 0.25;
                } else if (true_norm > 10.0 * std::max(phibar, 1e-300)) {
                    break; // gross drift: restart the Lanczos process
                }
            }
        }
        if (done) break;
    }

    // Undo the sign flip: unknown was (x, -y).
    Vector sol(n2);
    for (int i = 0; i < m; ++i) sol[i] = x[i];
    for (int i = 0; i < m; ++i) sol[m + i] = -x[m + i];

    Vector rt(b);
    op.apply_symmetric(x, tmp);
    axpy(-1.0, tmp, rt);
    prec.apply(rt, z);
    report.iterations = total_it;
    report.rel_residual = std::sqrt(std::max(0.0, dot(rt, z))) / norm_b;
    return {std::move(sol), report};
}

} // namespace stmg
