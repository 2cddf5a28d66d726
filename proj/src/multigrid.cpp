#include "stmg/multigrid.hpp"

#include <chrono>
#include <cmath>

#include "stmg/errors.hpp"
#include "stmg/parallel.hpp"

namespace stmg {

namespace {

SplineBasis coarsen_dim(const SplineBasis& fine) {
    const auto bp = fine.knot_vector().breakpoints();
    const int nel = static_cast<int>(bp.size()) - 1;
    if (nel % 2 != 0) throw ScheduleError("space coarsening needs an even element count");
    std::vector<double> coarse_bp;
    for (size_t i = 0; i < bp.size(); i += 2) coarse_bp.push_back(bp[i]);
    const int p = fine.degree();
    std::vector<double> knots;
    for (int i = 0; i <= p; ++i) knots.push_back(coarse_bp.front());
    for (size_t i = 1; i + 1 < coarse_bp.size(); ++i) knots.push_back(coarse_bp[i]);
    for (int i = 0; i <= p; ++i) knots.push_back(coarse_bp.back());
    return SplineBasis(KnotVector(p, std::move(knots)));
}

SparseMatrix interior_embedding(const SplineBasis& coarse, const SplineBasis& fine) {
    const SparseMatrix full = knot_insertion_matrix(coarse, fine);
    return sparse_submatrix(full, 1, full.rows() - 1, 1, full.cols() - 1);
}

} // namespace

MGHierarchy MGHierarchy::build(const SpaceTimeConfig& fine_cfg, const MgOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    MGHierarchy h;
    h.opt_ = opt;
    h.levels_.push_back({SpaceTimeSystem::build(fine_cfg), {}, Coarsening::time, {}, {}, {}});

    Coarsening prefer = Coarsening::time;
    while (h.levels_.back().sys.total_dofs() > opt.coarse_dof_cap) {
        Level& fine = h.levels_.back();
        const SpaceTimeSystem& fsys = fine.sys;
        const int slabs = fsys.num_slabs();
        const bool time_ok = slabs > 1;
        bool space_ok = true;
        for (const auto& dim : fsys.slab(0).space->dims)
            space_ok = space_ok && dim.num_elements() > opt.min_space_elements &&
                       dim.num_elements() % 2 == 0;
        Coarsening how;
        if (prefer == Coarsening::time && time_ok) how = Coarsening::time;
        else if (prefer == Coarsening::space && space_ok) how = Coarsening::space;
        else if (time_ok) how = Coarsening::time;
        else if (space_ok) how = Coarsening::space;
        else break;
        prefer = (how == Coarsening::time) ? Coarsening::space : Coarsening::time;

        if (how == Coarsening::time) {
            if (slabs % 2 != 0) throw ScheduleError("time coarsening needs an even slab count");
            std::vector<SplineBasis> coarse_times;
            fine.how = Coarsening::time;
            fine.time_embed.clear();
            for (int k = 0; k < slabs / 2; ++k) {
                const SplineBasis& left = fsys.slab(2 * k).time;
                const SplineBasis& right = fsys.slab(2 * k + 1).time;
                SplineBasis merged = merge_slab_bases(left, right);
                const SparseMatrix e =
                    knot_insertion_matrix(merged, broken_pair_basis(left, right));
                fine.time_embed.push_back(e.to_dense());
                coarse_times.push_back(std::move(merged));
            }
            SpaceTimeSystem coarse = SpaceTimeSystem::from_bases(
                std::move(coarse_times), fsys.slab(0).space, fsys.theta());
            h.levels_.push_back({std::move(coarse), {}, Coarsening::time, {}, {}, {}});
        } else {
            fine.how = Coarsening::space;
            const TensorBasis& fspace = *fsys.slab(0).space;
            auto coarse_space = std::make_shared<TensorBasis>();
            coarse_space->dirichlet = fspace.dirichlet;
            std::vector<SparseMatrix> factors;
            for (const auto& dim : fspace.dims) {
                SplineBasis cdim = coarsen_dim(dim);
                factors.push_back(interior_embedding(cdim, dim));
                coarse_space->dims.push_back(std::move(cdim));
            }
            fine.space_embed =
                (factors.size() == 1) ? factors[0] : sparse_kron(factors[0], factors[1]);
            fine.space_embed_t = fine.space_embed.transposed();
            std::vector<SplineBasis> times;
            for (int n = 0; n < slabs; ++n) times.push_back(fsys.slab(n).time);
            SpaceTimeSystem coarse =
                SpaceTimeSystem::from_bases(std::move(times), std::move(coarse_space), fsys.theta());
            h.levels_.push_back({std::move(coarse), {}, Coarsening::time, {}, {}, {}});
        }
    }

    // Smoother data on all levels but the coarsest; exact solver there.
    for (size_t l = 0; l + 1 < h.levels_.size(); ++l) {
        Level& level = h.levels_[l];
        const int slabs = level.sys.num_slabs();
        level.smoother.reserve(slabs);
        for (int n = 0; n < slabs; ++n)
            level.smoother.push_back(SlabInverse::build(level.sys.slab(n).op, opt.smoother.strategy,
                                                        opt.smoother.inner_tol));
    }
    h.coarse_solver_ = std::make_unique<SequentialSolver>(h.levels_.back().sys);
    h.setup_seconds_ =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return h;
}

void MGHierarchy::smooth(int level, Field& u, const Field& f, int sweeps) const {
    const Level& lv = levels_[level];
    for (int s = 0; s < sweeps; ++s) {
        const Field r = lv.sys.residual(f, u);
        parallel_for(lv.sys.num_slabs(), opt_.jobs, [&](int n) {
            const Vector d = lv.smoother[n].apply(r[n]);
            axpy(opt_.smoother.omega, d, u[n]);
        });
    }
}

Field MGHierarchy::restrict_residual(int level, const Field& r) const {
    const Level& lv = levels_[level];
    const SpaceTimeSystem& coarse = levels_[level + 1].sys;
    Field out(coarse.num_slabs());
    if (lv.how == Coarsening::time) {
        const int nx = lv.sys.slab(0).op.n_x();
        for (int k = 0; k < coarse.num_slabs(); ++k) {
            const DenseMatrix& e = lv.time_embed[k];
            const int nt1 = lv.sys.slab(2 * k).op.n_t();
            const int ntc = e.cols();
            out[k].assign(static_cast<size_t>(ntc) * nx, 0.0);
            for (int itf = 0; itf < e.rows(); ++itf) {
                const Vector& src = (itf < nt1) ? r[2 * k] : r[2 * k + 1];
                const int row = (itf < nt1) ? itf : itf - nt1;
                auto slice = std::span<const double>(src).subspan(static_cast<size_t>(row) * nx, nx);
                for (int jt = 0; jt < ntc; ++jt) {
                    const double w = e(itf, jt);
                    if (w != 0.0)
                        axpy(w, slice, std::span<double>(out[k]).subspan(static_cast<size_t>(jt) * nx, nx));
                }
            }
        }
    } else {
        for (int n = 0; n < coarse.num_slabs(); ++n) {
            const int nt = lv.sys.slab(n).op.n_t();
            const int nxf = lv.sys.slab(n).op.n_x();
            const int nxc = coarse.slab(n).op.n_x();
            out[n].assign(static_cast<size_t>(nt) * nxc, 0.0);
            for (int it = 0; it < nt; ++it) {
                auto src = std::span<const double>(r[n]).subspan(static_cast<size_t>(it) * nxf, nxf);
                auto dst = std::span<double>(out[n]).subspan(static_cast<size_t>(it) * nxc, nxc);
                lv.space_embed_t.matvec(src, dst);
            }
        }
    }
    return out;
}

Field MGHierarchy::prolong(int level, const Field& coarse_field) const {
    const Level& lv = levels_[level];
    const SpaceTimeSystem& coarse = levels_[level + 1].sys;
    Field out(lv.sys.num_slabs());
    if (lv.how == Coarsening::time) {
        const int nx = lv.sys.slab(0).op.n_x();
        for (int k = 0; k < coarse.num_slabs(); ++k) {
            const DenseMatrix& e = lv.time_embed[k];
            const int nt1 = lv.sys.slab(2 * k).op.n_t();
            const int nt2 = lv.sys.slab(2 * k + 1).op.n_t();
            out[2 * k].assign(static_cast<size_t>(nt1) * nx, 0.0);
            out[2 * k + 1].assign(static_cast<size_t>(nt2) * nx, 0.0);
            for (int itf = 0; itf < e.rows(); ++itf) {
                Vector& dst_vec = (itf < nt1) ? out[2 * k] : out[2 * k + 1];
                const int row = (itf < nt1) ? itf : itf - nt1;
                auto dst = std::span<double>(dst_vec).subspan(static_cast<size_t>(row) * nx, nx);
                for (int jt = 0; jt < e.cols(); ++jt) {
                    const double w = e(itf, jt);
                    if (w != 0.0)
                        axpy(w,
                             std::span<const double>(coarse_field[k])
                                 .subspan(static_cast<size_t>(jt) * nx, nx),
                             dst);
                }
            }
        }
    } else {
        for (int n = 0; n < lv.sys.num_slabs(); ++n) {
            const int nt = lv.sys.slab(n).op.n_t();
            const int nxf = lv.sys.slab(n).op.n_x();
            const int nxc = coarse.slab(n).op.n_x();
            out[n].assign(static_cast<size_t>(nt) * nxf, 0.0);
            for (int it = 0; it < nt; ++it) {
                auto src = std::span<const double>(coarse_field[n])
                               .subspan(static_cast<size_t>(it) * nxc, nxc);
                auto dst = std::span<double>(out[n]).subspan(static_cast<size_t>(it) * nxf, nxf);
                lv.space_embed.matvec(src, dst);
            }
        }
    }
    return out;
}

void MGHierarchy::v_cycle(int level, Field& u, const Field& f) const {
    if (level == num_levels() - 1) {
        u = coarse_solver_->solve(f);
        return;
    }
    smooth(level, u, f, opt_.smoother.pre_sweeps);
    const Field r = levels_[level].sys.residual(f, u);
    const Field rc = restrict_residual(level, r);
    Field ec = field_zeros_like(rc);
    v_cycle(level + 1, ec, rc);
    const Field corr = prolong(level, ec);
    field_axpy(1.0, corr, u);
    smooth(level, u, f, opt_.smoother.post_sweeps);
}

MGHierarchy::Report MGHierarchy::solve(Field& u, const Field& f, double tol, int max_cycles) const {
    Report rep;
    const double f0 = field_norm(f);
    if (f0 == 0.0) {
        u = field_zeros_like(f);
        rep.converged = true;
        return rep;
    }
    u = field_zeros_like(f);
    for (int it = 1; it <= max_cycles; ++it) {
        v_cycle(0, u, f);
        rep.iterations = it;
        rep.rel_residual = field_norm(levels_[0].sys.residual(f, u)) / f0;
        if (rep.rel_residual <= tol) {
            rep.converged = true;
            break;
        }
    }
    return rep;
}

std::pair<Field, SolveReport> gmres_solve(const SpaceTimeSystem& sys, const Preconditioner& prec,
                                          const Field& f, double tol, int restart, int max_iter) {
    const double fnorm = field_norm(f);
    Field x = field_zeros_like(f);
    SolveReport report;
    if (fnorm == 0.0) return {std::move(x), report};

    auto apply_prec = [&](const Field& v) { return prec ? prec(v) : v; };

    int total_it = 0;
    double last_restart_res = std::numeric_limits<double>::infinity();
    while (total_it < max_iter) {
        Field r = sys.residual(f, x);
        double beta = field_norm(r);
        if (beta <= tol * fnorm) {
            report.converged = true;
            break;
        }
        if (beta >= last_restart_res)
            throw StagnationError("gmres_solve: no residual decrease over a restart window");
        last_restart_res = beta;

        const int m = restart;
        std::vector<Field> v;
        std::vector<Field> z;
        v.reserve(m + 1);
        z.reserve(m);
        for (auto& vn : r) scale(1.0 / beta, vn);
        v.push_back(std::move(r));
        DenseMatrix hess(m + 1, m);
        Vector g(m + 1, 0.0), cs(m, 0.0), sn(m, 0.0);
        g[0] = beta;
        int j = 0;
        bool inner_done = false;
        for (; j < m && total_it < max_iter; ++j) {
            ++total_it;
            z.push_back(apply_prec(v[j]));
            Field w = sys.global_matvec(z[j]);
            for (int i = 0; i <= j; ++i) {
                const double hij = field_dot(w, v[i]);
                hess(i, j) = hij;
                field_axpy(-hij, v[i], w);
            }
            const double hn = field_norm(w);
            hess(j + 1, j) = hn;
            // Givens update of column j.
            for (int i = 0; i < j; ++i) {
                const double t1 = cs[i] * hess(i, j) + sn[i] * hess(i + 1, j);
                const double t2 = -sn[i] * hess(i, j) + cs[i] * hess(i + 1, j);
                hess(i, j) = t1;
                hess(i + 1, j) = t2;
            }
            const double denom = std::hypot(hess(j, j), hess(j + 1, j));
            if (denom == 0.0) throw BreakdownError("gmres_solve: zero Hessenberg column");
            cs[j] = hess(j, j) / denom;
            sn[j] = hess(j + 1, j) / denom;
            hess(j, j) = denom;
            hess(j + 1, j) = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            if (std::abs(g[j + 1]) <= tol * fnorm) {
                ++j;
                inner_done = true;
                break;
            }
            if (hn == 0.0) { ++j; inner_done = true; break; }
            Field vn = std::move(w);
            for (auto& comp : vn) scale(1.0 / hn, comp);
            v.push_back(std::move(vn));
        }
        // Solve the small triangular system and update x.
        Vector y(j, 0.0);
        for (int i = j - 1; i >= 0; --i) {
            double s = g[i];
            for (int k = i + 1; k < j; ++k) s -= hess(i, k) * y[k];
            y[i] = s / hess(i, i);
        }
        for (int i = 0; i < j; ++i) field_axpy(y[i], z[i], x);
        (void)inner_done;
    }
    Field r = sys.residual(f, x);
    report.rel_residual = field_norm(r) / fnorm;
    report.iterations = total_it;
    report.converged = report.rel_residual <= tol;
    if (!report.converged && total_it >= max_iter)
        throw ConvergenceError("gmres_solve: iteration cap reached", total_it, report.rel_residual);
    return {std::move(x), report};
}

} // namespace stmg
