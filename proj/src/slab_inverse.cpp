#include "stmg/slab_inverse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "stmg/errors.hpp"

namespace stmg {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Direct: return "direct";
        case Strategy::Diag: return "diag";
        case Strategy::CSchur: return "cschur";
        case Strategy::RSchur: return "rschur";
    }
    return "?";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "direct") return Strategy::Direct;
    if (name == "diag") return Strategy::Diag;
    if (name == "cschur") return Strategy::CSchur;
    if (name == "rschur") return Strategy::RSchur;
    throw ParameterError("unknown strategy: " + name);
}

namespace {

std::string cplx_str(Cplx z) {
    return std::to_string(z.re) + (z.im >= 0 ? "+" : "") + std::to_string(z.im) + "i";
}

void check_positive_real_parts(const std::vector<Cplx>& lambdas) {
    for (const Cplx& l : lambdas) {
        if (!(l.re > 0.0))
            throw AdmissibilityError(
                "slab inverse: generalized eigenvalue " + cplx_str(l) +
                " has non-positive real part; use a smaller theta");
    }
}

// Shared factorization cache keyed by the total shift of K_x + shift M_x.
struct FactorCache {
    std::map<double, std::shared_ptr<const SkylineCholesky>> factors;
    const SlabOperator* op;
    int count = 0;

    std::shared_ptr<const SkylineCholesky> get(double shift) {
        auto it = factors.find(shift);
        if (it != factors.end()) return it->second;
        SparseMatrix a = sparse_add(*op->K_x, *op->M_x, 1.0, shift);
        auto f = std::make_shared<const SkylineCholesky>(a);
        factors.emplace(shift, f);
        ++count;
        return f;
    }
};

} // namespace

SlabInverse SlabInverse::build(const SlabOperator& op, Strategy strategy, double inner_tol,
                               SlabInverseOptions options) {
    SlabInverse inv;
    inv.strategy_ = strategy;
    inv.n_t_ = op.n_t();
    inv.n_x_ = op.n_x();
    inv.inner_tol_ = inner_tol;
    inv.op_ = op;
    if (inv.n_t_ == 0 || inv.n_x_ == 0) return inv;

    // Admissibility: v'M_t v > 0 (Lemma-4 condition on theta).
    const double min_sym = min_symmetric_eigenvalue(op.M_t);
    if (!(min_sym > 0.0))
        throw AdmissibilityError(
            "slab inverse: M_t is indefinite (min symmetric-part eigenvalue " +
            std::to_string(min_sym) + "); theta is too large for this basis");

    if (strategy == Strategy::Direct) {
        inv.direct_ = std::make_shared<const BandLu>(materialize_slab(op));
        return inv;
    }

    TimeDecomposition::Kind kind = TimeDecomposition::Kind::Diag;
    if (strategy == Strategy::CSchur) kind = TimeDecomposition::Kind::ComplexSchur;
    if (strategy == Strategy::RSchur) kind = TimeDecomposition::Kind::RealSchur;
    inv.decomposition_ = decompose_time(op.K_t, op.M_t, kind);
    const std::vector<Cplx> lambdas = inv.decomposition_.eigenvalue_list();
    check_positive_real_parts(lambdas);

    if (strategy == Strategy::Diag) {
        const double cond = cond_2norm(inv.decomposition_.x.real_embedding());
        if (cond > options.cond_cap)
            throw ConditioningError("slab inverse: cond(X) = " + std::to_string(cond) +
                                    " exceeds the cap " + std::to_string(options.cond_cap) +
                                    "; use the cschur or rschur strategy instead");
    }

    FactorCache cache;
    cache.op = &inv.op_;
    auto make_spd = [&](double lambda_re) {
        auto solver = std::make_shared<SpdSolver>(
            make_shifted_operator(inv.op_.K_x, inv.op_.M_x, lambda_re), options.spd_method,
            inner_tol);
        return solver;
    };
    auto make_saddle = [&](double alpha, double b1, double b2, PrecVariant variant) {
        auto saddle = std::make_shared<const BlockSaddleOperator>(
            make_block_saddle(inv.op_.K_x, inv.op_.M_x, alpha, b1, b2));
        auto prec = std::make_shared<BlockDiagPreconditioner>();
        const double s = (variant == PrecVariant::diag_thm2) ? std::abs(b1)
                                                             : std::sqrt(std::abs(b1 * b2));
        prec->shift_s = s;
        prec->scale_top = (variant == PrecVariant::rschur_thm3 && b2 != 0.0) ? std::abs(b2) : 1.0;
        prec->scale_bottom = (variant == PrecVariant::rschur_thm3 && b1 != 0.0) ? std::abs(b1) : 1.0;
        prec->factor = cache.get(alpha + s);
        return std::pair(saddle, std::shared_ptr<const BlockDiagPreconditioner>(prec));
    };

    // Cholesky-backed SPD stages share factorizations through the same cache.
    std::map<double, std::shared_ptr<const SpdSolver>> spd_cache;
    auto get_spd = [&](double shift) {
        auto it = spd_cache.find(shift);
        if (it != spd_cache.end()) return it->second;
        std::shared_ptr<const SpdSolver> s = make_spd(shift);
        if (options.spd_method == SpdMethod::cholesky) ++cache.count;
        spd_cache.emplace(shift, s);
        return s;
    };

    if (strategy == Strategy::Diag || strategy == Strategy::CSchur) {
        inv.stage_.resize(inv.n_t_);
        for (int i = 0; i < inv.n_t_; ++i) {
            const Cplx l = lambdas[i];
            StageSolver& st = inv.stage_[i];
            if (strategy == Strategy::Diag && i > 0 && lambdas[i - 1].im > 0.0 &&
                l.im == -lambdas[i - 1].im && l.re == lambdas[i - 1].re) {
                st.partner = i - 1; // conjugate pair: solve once, conjugate
                st.is_complex = true;
                continue;
            }
            if (l.im == 0.0) {
                st.spd = get_spd(l.re);
            } else {
                st.is_complex = true;
                auto [saddle, prec] = make_saddle(l.re, l.im, l.im, PrecVariant::diag_thm2);
                st.saddle = saddle;
                st.prec = prec;
            }
        }
    } else { // RSchur
        for (const SchurBlock& b : inv.decomposition_.blocks) {
            StageSolver st;
            if (b.size == 1) {
                st.spd = get_spd(inv.decomposition_.tr(b.start, b.start));
            } else {
                const double alpha = inv.decomposition_.tr(b.start, b.start);
                const double b1 = inv.decomposition_.tr(b.start, b.start + 1);
                const double b2 = inv.decomposition_.tr(b.start + 1, b.start);
                if (b1 * b2 >= 0.0)
                    throw FallbackError("slab inverse: degenerate 2x2 block at index " +
                                        std::to_string(b.start) + " (beta1*beta2 >= 0)");
                st.is_complex = true;
                auto [saddle, prec] = make_saddle(alpha, b1, b2, PrecVariant::rschur_thm3);
                st.saddle = saddle;
                st.prec = prec;
            }
            inv.stage_.push_back(std::move(st));
        }
    }
    inv.n_factorizations_ = cache.count;
    return inv;
}

Vector SlabInverse::apply(std::span<const double> f, ApplyStats* stats) const {
    if (static_cast<int>(f.size()) != n_t_ * n_x_)
        throw DimensionError("SlabInverse::apply: length mismatch");
    if (n_t_ == 0 || n_x_ == 0) return {};
    switch (strategy_) {
        case Strategy::Direct: return apply_direct(f, stats);
        case Strategy::Diag: return apply_diag(f, stats);
        case Strategy::CSchur: return apply_cschur(f, stats);
        case Strategy::RSchur: return apply_rschur(f, stats);
    }
    throw Error("SlabInverse::apply: bad strategy");
}

Vector SlabInverse::apply_direct(std::span<const double> f, ApplyStats* stats) const {
    if (stats) *stats = ApplyStats{1, 0, 0, 0};
    return direct_->solve(f);
}

namespace {

// g_i = sum_j Y(i,j) f_j where f_j are the real spatial slices of f.
void transform_complex(const ComplexMatrix& y, std::span<const double> f, int nx,
                       std::vector<Vector>& out_re, std::vector<Vector>& out_im) {
    const int nt = y.rows();
    out_re.assign(nt, Vector(nx, 0.0));
    out_im.assign(nt, Vector(nx, 0.0));
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nt; ++j) {
            const Cplx c = y(i, j);
            auto fj = f.subspan(static_cast<size_t>(j) * nx, nx);
            if (c.re != 0.0) axpy(c.re, fj, out_re[i]);
            if (c.im != 0.0) axpy(c.im, fj, out_im[i]);
        }
    }
}

void transform_real(const DenseMatrix& y, std::span<const double> f, int nx,
                    std::vector<Vector>& out) {
    const int nt = y.rows();
    out.assign(nt, Vector(nx, 0.0));
    for (int i = 0; i < nt; ++i)
        for (int j = 0; j < nt; ++j) {
            const double c = y(i, j);
            if (c != 0.0) axpy(c, f.subspan(static_cast<size_t>(j) * nx, nx), out[i]);
        }
}

} // namespace

Vector SlabInverse::apply_diag(std::span<const double> f, ApplyStats* stats) const {
    ApplyStats st;
    st.stages = n_t_;
    std::vector<Vector> gre, gim;
    transform_complex(decomposition_.y, f, n_x_, gre, gim);

    std::vector<Vector> wre(n_t_), wim(n_t_);
    for (int i = 0; i < n_t_; ++i) {
        const StageSolver& sv = stage_[i];
        if (sv.partner >= 0) {
            wre[i] = wre[sv.partner];
            wim[i] = wim[sv.partner];
            scale(-1.0, wim[i]);
            continue;
        }
        if (!sv.is_complex) {
            auto [xr, rep1] = sv.spd->solve(gre[i], inner_tol_);
            auto [xi, rep2] = sv.spd->solve(gim[i], inner_tol_);
            st.spd_solves += 2;
            wre[i] = std::move(xr);
            wim[i] = std::move(xi);
        } else {
            Vector rhs(2 * n_x_);
            std::copy(gre[i].begin(), gre[i].end(), rhs.begin());
            std::copy(gim[i].begin(), gim[i].end(), rhs.begin() + n_x_);
            auto [sol, rep] = minres_block_solve(*sv.saddle, *sv.prec, rhs, inner_tol_);
            ++st.minres_solves;
            st.minres_iterations_max = std::max(st.minres_iterations_max, rep.iterations);
            wre[i].assign(sol.begin(), sol.begin() + n_x_);
            wim[i].assign(sol.begin() + n_x_, sol.end());
        }
    }

    // u = (X ⊗ I) w; conjugate-pair symmetry makes the result real.
    Vector u(static_cast<size_t>(n_t_) * n_x_, 0.0);
    Vector uim(static_cast<size_t>(n_t_) * n_x_, 0.0);
    for (int i = 0; i < n_t_; ++i) {
        auto out = std::span<double>(u).subspan(static_cast<size_t>(i) * n_x_, n_x_);
        auto outi = std::span<double>(uim).subspan(static_cast<size_t>(i) * n_x_, n_x_);
        for (int j = 0; j < n_t_; ++j) {
            const Cplx c = decomposition_.x(i, j);
            if (c.re != 0.0) axpy(c.re, wre[j], out);
            if (c.im != 0.0) axpy(-c.im, wim[j], out);
            if (c.im != 0.0) axpy(c.im, wre[j], outi);
            if (c.re != 0.0) axpy(c.re, wim[j], outi);
        }
    }
    const double nrm = norm2(u), nim = norm2(uim);
    if (nim > 1e-9 * std::max(1e-300, nrm))
        throw Error("apply_diag: imaginary residue " + std::to_string(nim / std::max(1e-300, nrm)));
    if (stats) *stats = st;
    return u;
}

Vector SlabInverse::apply_cschur(std::span<const double> f, ApplyStats* stats) const {
    ApplyStats st;
    st.stages = n_t_;
    std::vector<Vector> gre, gim;
    transform_complex(decomposition_.y, f, n_x_, gre, gim);
    const ComplexMatrix& t = decomposition_.t;

    std::vector<Vector> wre(n_t_), wim(n_t_), mre(n_t_), mim(n_t_);
    Vector rhs_re(n_x_), rhs_im(n_x_);
    for (int i = n_t_ - 1; i >= 0; --i) {
        rhs_re = gre[i];
        rhs_im = gim[i];
        for (int j = i + 1; j < n_t_; ++j) {
            const Cplx c = t(i, j);
            if (c.re == 0.0 && c.im == 0.0) continue;
            // rhs -= c * (M_x w_j) in split arithmetic.
            axpy(-c.re, mre[j], rhs_re);
            axpy(c.im, mim[j], rhs_re);
            axpy(-c.re, mim[j], rhs_im);
            axpy(-c.im, mre[j], rhs_im);
        }
        const StageSolver& sv = stage_[i];
        if (!sv.is_complex) {
            auto [xr, rep1] = sv.spd->solve(rhs_re, inner_tol_);
            auto [xi, rep2] = sv.spd->solve(rhs_im, inner_tol_);
            st.spd_solves += 2;
            wre[i] = std::move(xr);
            wim[i] = std::move(xi);
        } else {
            Vector rhs(2 * n_x_);
            std::copy(rhs_re.begin(), rhs_re.end(), rhs.begin());
            std::copy(rhs_im.begin(), rhs_im.end(), rhs.begin() + n_x_);
            auto [sol, rep] = minres_block_solve(*sv.saddle, *sv.prec, rhs, inner_tol_);
            ++st.minres_solves;
            st.minres_iterations_max = std::max(st.minres_iterations_max, rep.iterations);
            wre[i].assign(sol.begin(), sol.begin() + n_x_);
            wim[i].assign(sol.begin() + n_x_, sol.end());
        }
        mre[i] = op_.M_x->apply(wre[i]);
        mim[i] = op_.M_x->apply(wim[i]);
    }

    Vector u(static_cast<size_t>(n_t_) * n_x_, 0.0);
    Vector uim(static_cast<size_t>(n_t_) * n_x_, 0.0);
    const ComplexMatrix& x = decomposition_.x;
    for (int i = 0; i < n_t_; ++i) {
        auto out = std::span<double>(u).subspan(static_cast<size_t>(i) * n_x_, n_x_);
        auto outi = std::span<double>(uim).subspan(static_cast<size_t>(i) * n_x_, n_x_);
        for (int j = 0; j < n_t_; ++j) {
            const Cplx c = x(i, j);
            if (c.re != 0.0) axpy(c.re, wre[j], out);
            if (c.im != 0.0) axpy(-c.im, wim[j], out);
            if (c.im != 0.0) axpy(c.im, wre[j], outi);
            if (c.re != 0.0) axpy(c.re, wim[j], outi);
        }
    }
    const double nrm = norm2(u), nim = norm2(uim);
    const double gate = std::max(1e-9, 10.0 * inner_tol_);
    if (nim > gate * std::max(1e-300, nrm))
        throw Error("apply_cschur: imaginary residue " + std::to_string(nim / std::max(1e-300, nrm)));
    if (stats) *stats = st;
    return u;
}

Vector SlabInverse::apply_rschur(std::span<const double> f, ApplyStats* stats) const {
    ApplyStats st;
    st.stages = static_cast<int>(stage_.size());
    std::vector<Vector> g;
    transform_real(decomposition_.yr, f, n_x_, g);
    const DenseMatrix& t = decomposition_.tr;

    std::vector<Vector> w(n_t_), m(n_t_);
    const auto& blocks = decomposition_.blocks;
    Vector rhs(n_x_), rhs2(n_x_);
    for (int bi = static_cast<int>(blocks.size()) - 1; bi >= 0; --bi) {
        const SchurBlock& blk = blocks[bi];
        const StageSolver& sv = stage_[bi];
        const int k = blk.start;
        const int after = k + blk.size;
        rhs = g[k];
        for (int j = after; j < n_t_; ++j)
            if (t(k, j) != 0.0) axpy(-t(k, j), m[j], rhs);
        if (blk.size == 1) {
            auto [xk, rep] = sv.spd->solve(rhs, inner_tol_);
            ++st.spd_solves;
            w[k] = std::move(xk);
            m[k] = op_.M_x->apply(w[k]);
        } else {
            rhs2 = g[k + 1];
            for (int j = after; j < n_t_; ++j)
                if (t(k + 1, j) != 0.0) axpy(-t(k + 1, j), m[j], rhs2);
            Vector stacked(2 * n_x_);
            std::copy(rhs.begin(), rhs.end(), stacked.begin());
            std::copy(rhs2.begin(), rhs2.end(), stacked.begin() + n_x_);
            auto [sol, rep] = minres_block_solve(*sv.saddle, *sv.prec, stacked, inner_tol_);
            ++st.minres_solves;
            st.minres_iterations_max = std::max(st.minres_iterations_max, rep.iterations);
            w[k].assign(sol.begin(), sol.begin() + n_x_);
            w[k + 1].assign(sol.begin() + n_x_, sol.end());
            m[k] = op_.M_x->apply(w[k]);
            m[k + 1] = op_.M_x->apply(w[k + 1]);
        }
    }

    Vector u(static_cast<size_t>(n_t_) * n_x_, 0.0);
    const DenseMatrix& q = decomposition_.qr;
    for (int i = 0; i < n_t_; ++i) {
        auto out = std::span<double>(u).subspan(static_cast<size_t>(i) * n_x_, n_x_);
        for (int j = 0; j < n_t_; ++j)
            if (q(i, j) != 0.0) axpy(q(i, j), w[j], out);
    }
    if (stats) *stats = st;
    return u;
}

} // namespace stmg
