// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failures. Runs the full study grids, so expect a few minutes.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stmg/denselin.hpp"
#include "stmg/experiments.hpp"
#include "stmg/multigrid.hpp"
#include "stmg/slab_inverse.hpp"
#include "stmg/spacetime_system.hpp"
#include "test_support.hpp"

using namespace stmg;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        ok = false;
        if (!detail.empty()) detail += "; ";
        detail += msg;
    }
    void expect(bool cond, const std::string& msg) {
        if (!cond) fail(msg);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
Check criterion_oracle_equivalence() {
    Check c;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int p : {1, 2, 3, 4}) {
        for (double theta : {0.01, 0.1}) {
            for (int nel_t : {2, 4, 8}) {
                TensorBasis space = make_interval_basis(p, 24, 0.0, 1.0); // N_x <= 27
                SplineBasis time = SplineBasis::make_uniform(p, nel_t, 0.0, 0.1);
                SlabOperator op = make_slab_operator(space, time, theta);
                const Vector v = test::random_vector(op.size(), rng);
                const Vector f = slab_matvec(op, v);
                const Vector ref = SlabInverse::build(op, Strategy::Direct, 1e-14).apply(f);
                for (Strategy s : {Strategy::Diag, Strategy::CSchur, Strategy::RSchur}) {
                    const Vector u = SlabInverse::build(op, s, 1e-12).apply(f);
                    const double rel = test::rel_diff(u, ref);
                    worst = std::max(worst, rel);
                    c.expect(rel <= 1e-7, std::string(strategy_name(s)) + " p=" +
                                              std::to_string(p) + " theta=" + fmt(theta) +
                                              " nel_t=" + std::to_string(nel_t) +
                                              " rel=" + fmt(rel));
                }
            }
        }
    }
    c.detail = "worst relative deviation from apply_direct " + fmt(worst) +
               (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 2
Check criterion_theorem3_bound() {
    Check c;
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> expo(-2.0, 2.0);
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 39);
        const DenseMatrix kd = test::random_spd(n, rng);
        const DenseMatrix md = test::random_spd(n, rng);
        const double alpha = std::pow(10.0, expo(rng));
        const double b1 = std::pow(10.0, expo(rng));
        const double b2 = -std::pow(10.0, expo(rng));
        DenseMatrix kc = kd;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) kc(i, j) += alpha * md(i, j);
        const double s = std::sqrt(std::abs(b1 * b2));
        const double ab1 = std::abs(b1), ab2 = std::abs(b2);
        DenseMatrix abar(2 * n, 2 * n), pmat(2 * n, 2 * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                abar(i, j) = ab2 * kc(i, j);
                abar(i, n + j) = -b1 * ab2 * md(i, j);
                abar(n + i, j) = ab1 * b2 * md(i, j);
                abar(n + i, n + j) = -ab1 * kc(i, j);
                pmat(i, j) = ab2 * (kc(i, j) + s * md(i, j));
                pmat(n + i, n + j) = ab1 * (kc(i, j) + s * md(i, j));
            }
        for (double lam : generalized_sym_eigenvalues(abar, pmat)) {
            lo = std::min(lo, std::abs(lam));
            hi = std::max(hi, std::abs(lam));
        }
    }
    c.expect(lo >= 1.0 / std::sqrt(2.0) - 1e-8, "|lambda|_min = " + fmt(lo));
    c.expect(hi <= 1.0 + 1e-8, "|lambda|_max = " + fmt(hi));
    c.detail = "|lambda| in [" + fmt(lo) + ", " + fmt(hi) + "], window [0.7071, 1]" +
               (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 3
Check criterion_minres_robustness() {
    Check c;
    ExperimentConfig cfg = ExperimentConfig::defaults_for("minres");
    cfg.jobs = 4;
    const ResultTable t = run_minres(cfg);
    std::map<std::pair<int64_t, int64_t>, std::map<std::string, int64_t>> cells;
    int64_t overall = 0;
    for (size_t r = 0; r < t.rows().size(); ++r) {
        const int row = static_cast<int>(r);
        c.expect(std::get<std::string>(t.at(row, "status")) == "ok", "cell error");
        const int64_t its = std::get<int64_t>(t.at(row, "max_iterations"));
        overall = std::max(overall, its);
        c.expect(its <= 30, "max iterations " + std::to_string(its) + " > 30");
        cells[{std::get<int64_t>(t.at(row, "p")), std::get<int64_t>(t.at(row, "refinement"))}]
             [std::get<std::string>(t.at(row, "variant"))] = its;
    }
    for (const auto& [key, variants] : cells) {
        const int64_t cs = variants.at("cschur");
        const int64_t rs = variants.at("rschur");
        c.expect(rs <= cs + 2, "p=" + std::to_string(key.first) + " ref=" +
                                   std::to_string(key.second) + ": rschur " + std::to_string(rs) +
                                   " > cschur " + std::to_string(cs) + " + 2");
    }
    c.detail = "max MinRes iterations over the grid: " + std::to_string(overall) +
               (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 4
// Paper values of Table 3 as printed; '*' marks an indefinite M_t.
const std::map<int, std::map<double, std::vector<std::string>>> kPaperMinEig = {
    {2, {{0.0, {"1.5", "2.4", "3.2", "3.8", "4.3", "4.7", "5.0"}},
         {0.01, {"1.6", "2.5", "3.2", "3.6", "4.0", "4.4", "4.9"}},
         {0.1, {"2.5", "2.9", "3.2", "3.6", "4.0", "4.5", "5.2"}},
         {1.0, {"4.1", "4.5", "4.7", "*", "*", "*", "*"}},
         {10.0, {"4.6", "5.2", "5.2", "*", "*", "*", "*"}}}},
    {4, {{0.0, {"0.2", "0.5", "0.9", "1.5", "2.1", "2.7", "3.4"}},
         {0.01, {"0.7", "0.7", "1.1", "1.6", "2.2", "2.8", "3.3"}},
         {0.1, {"4.8", "2.9", "2.7", "3.0", "3.4", "3.6", "4.1"}},
         {1.0, {"12.4", "12.0", "9.2", "*", "*", "*", "*"}},
         {10.0, {"6.7", "11.8", "*", "*", "*", "*", "*"}}}},
    {6, {{0.0, {"0.01", "0.03", "0.06", "0.1", "0.1", "0.2", "0.2"}},
         {0.01, {"1.9", "1.0", "0.8", "0.7", "0.6", "0.6", "0.6"}},
         {0.1, {"18.6", "9.9", "7.4", "6.0", "5.1", "4.5", "4.0"}},
         {1.0, {"34.2", "35.1", "33.8", "*", "*", "*", "*"}},
         {10.0, {"11.4", "17.4", "*", "*", "*", "*", "*"}}}},
    {8, {{0.0, {"0.0008", "0.002", "0.004", "0.006", "0.009", "0.01", "0.02"}},
         {0.01, {"7.7", "4.0", "3.0", "2.5", "2.0", "1.8", "1.6"}},
         {0.1, {"34.8", "33.8", "29.5", "23.8", "20.0", "17.2", "15.1"}},
         {1.0, {"34.8", "34.4", "34.5", "*", "*", "*", "*"}},
         {10.0, {"29.0", "32.2", "*", "*", "*", "*", "*"}}}},
};

int significant_digits(const std::string& s) {
    int digits = 0;
    bool leading = true;
    for (char ch : s) {
        if (ch == '-' || ch == '.') continue;
        if (ch == '0' && leading) continue;
        leading = false;
        ++digits;
    }
    return digits;
}

Check criterion_table3() {
    Check c;
    ExperimentConfig cfg = ExperimentConfig::defaults_for("mineig");
    cfg.jobs = 4;
    const ResultTable t = run_mineig(cfg);
    int compared = 0;
    double worst_rel = 0.0;
    for (size_t r = 0; r < t.rows().size(); ++r) {
        const int row = static_cast<int>(r);
        const double theta = ResultTable::as_double(t.at(row, "theta"));
        const int p = static_cast<int>(std::get<int64_t>(t.at(row, "p")));
        const int ref = static_cast<int>(std::get<int64_t>(t.at(row, "refinement")));
        const bool star = std::get<int64_t>(t.at(row, "star")) != 0;
        const std::string cell_id =
            "theta=" + fmt(theta) + " p=" + std::to_string(p) + " ref=" + std::to_string(ref);
        c.expect(std::get<std::string>(t.at(row, "status")) == "ok", cell_id + " errored");

        if (theta == 0.01)
            c.expect(!star && ResultTable::as_double(t.at(row, "min_re")) > 0.0,
                     cell_id + ": expected a positive real part");
        if (ref >= 4 && theta == 1.0 && p >= 4) c.expect(star, cell_id + ": expected *");
        if (ref >= 4 && theta == 10.0 && p >= 3) c.expect(star, cell_id + ": expected *");

        const std::string paper = kPaperMinEig.at(ref).at(theta).at(p - 1);
        if (paper == "*") {
            c.expect(star, cell_id + ": paper has *, we computed a number");
            continue;
        }
        c.expect(!star, cell_id + ": paper has a number, we flagged *");
        if (star) continue;
        // +-15% where the paper prints at least two significant digits
        if (significant_digits(paper) >= 2) {
            const double expect = std::stod(paper);
            const double got = ResultTable::as_double(t.at(row, "min_re"));
            const double rel = std::abs(got - expect) / std::abs(expect);
            worst_rel = std::max(worst_rel, rel);
            ++compared;
            c.expect(rel <= 0.15, cell_id + ": " + fmt(got) + " vs paper " + paper);
        }
    }
    c.detail = std::to_string(compared) + " numeric cells compared at +-15%, worst " +
               fmt(worst_rel) + (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 5
Check criterion_condx_trend() {
    Check c;
    ExperimentConfig cfg = ExperimentConfig::defaults_for("condx");
    cfg.jobs = 4;
    const ResultTable t = run_condx(cfg);
    std::map<std::pair<int64_t, int64_t>, double> grid;
    for (size_t r = 0; r < t.rows().size(); ++r) {
        const int row = static_cast<int>(r);
        c.expect(std::get<std::string>(t.at(row, "status")) == "ok", "cell error");
        grid[{std::get<int64_t>(t.at(row, "p")), std::get<int64_t>(t.at(row, "nt_minus_p"))}] =
            ResultTable::as_double(t.at(row, "cond_x"));
    }
    const double anchor = grid.at({2, 2});
    c.expect(anchor >= 6.4 && anchor <= 640.0,
             "cond(X)(p=2, nt-p=2) = " + fmt(anchor) + " not within 10x of 64");
    c.expect(grid.at({3, 64}) > 1e6, "cond(X)(p=3, nt-p=64) = " + fmt(grid.at({3, 64})));
    const std::vector<int64_t> ps = {2, 3, 4, 5, 6, 7, 8};
    const std::vector<int64_t> nels = {2, 4, 8, 16, 32, 64, 128};
    for (int64_t p : ps)
        for (size_t k = 0; k + 1 < nels.size(); ++k)
            c.expect(grid.at({p, nels[k]}) < grid.at({p, nels[k + 1]}),
                     "row p=" + std::to_string(p) + " not increasing at nt-p=" +
                         std::to_string(nels[k + 1]));
    for (int64_t nel : nels)
        for (size_t k = 0; k + 1 < ps.size(); ++k)
            c.expect(grid.at({ps[k], nel}) < grid.at({ps[k + 1], nel}),
                     "column nt-p=" + std::to_string(nel) + " not increasing at p=" +
                         std::to_string(ps[k + 1]));
    c.detail = "anchor cell " + fmt(anchor) + " (paper 64), grid strictly monotone" +
               (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 6
Check criterion_multigrid() {
    Check c;
    ExperimentConfig cfg = ExperimentConfig::defaults_for("mg");
    cfg.jobs = 4;
    const ResultTable t = run_mg(cfg);
    std::map<std::string, std::vector<int64_t>> its;
    std::map<std::string, double> solve_total, setup_largest;
    int64_t worst = 0;
    for (size_t r = 0; r < t.rows().size(); ++r) {
        const int row = static_cast<int>(r);
        const std::string strategy = std::get<std::string>(t.at(row, "strategy"));
        c.expect(std::get<std::string>(t.at(row, "status")) == "ok", strategy + " cell error");
        c.expect(std::get<int64_t>(t.at(row, "converged")) == 1, strategy + " did not converge");
        const int64_t it = std::get<int64_t>(t.at(row, "iterations"));
        worst = std::max(worst, it);
        c.expect(it <= 12, strategy + " row " +
                               std::to_string(std::get<int64_t>(t.at(row, "row"))) + ": " +
                               std::to_string(it) + " iterations > 12");
        its[strategy].push_back(it);
        solve_total[strategy] += ResultTable::as_double(t.at(row, "solve_seconds"));
        if (std::get<int64_t>(t.at(row, "row")) == 2)
            setup_largest[strategy] = ResultTable::as_double(t.at(row, "setup_seconds"));
    }
    for (const auto& [strategy, counts] : its) {
        int64_t lo = counts[0], hi = counts[0];
        for (int64_t v : counts) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        c.expect(hi - lo <= 2, strategy + ": iteration spread " + std::to_string(hi - lo) + " > 2");
    }
    c.expect(solve_total["rschur"] <= solve_total["cschur"],
             "rschur solve time " + fmt(solve_total["rschur"]) + " > cschur " +
                 fmt(solve_total["cschur"]));
    for (const std::string s : {"diag", "cschur", "rschur"})
        c.expect(setup_largest[s] <= 0.5 * setup_largest["direct"],
                 s + " setup " + fmt(setup_largest[s]) + " > 0.5 * direct " +
                     fmt(setup_largest["direct"]));
    c.detail = "max V-cycles " + std::to_string(worst) +
               " (target 7, cap 12); rschur/cschur solve " + fmt(solve_total["rschur"]) + "/" +
               fmt(solve_total["cschur"]) + "s" + (c.ok ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------- criterion 7
Check criterion_convergence_order() {
    Check c;
    ExperimentConfig cfg = ExperimentConfig::defaults_for("convergence");
    const ResultTable t = run_convergence(cfg);
    std::map<int64_t, double> finest_order;
    std::map<int64_t, double> last_err;
    for (size_t r = 0; r < t.rows().size(); ++r) {
        const int row = static_cast<int>(r);
        const int64_t p = std::get<int64_t>(t.at(row, "p"));
        const double err = ResultTable::as_double(t.at(row, "dg_error"));
        if (last_err.count(p))
            c.expect(err < last_err[p], "p=" + std::to_string(p) + ": error not decreasing");
        last_err[p] = err;
        const auto& order_cell = t.at(row, "observed_order");
        if (!std::holds_alternative<std::string>(order_cell))
            finest_order[p] = ResultTable::as_double(order_cell);
    }
    for (const auto& [p, order] : finest_order) {
        c.expect(order >= p - 0.25 && order <= p + 0.35,
                 "p=" + std::to_string(p) + ": finest order " + fmt(order));
        c.detail += (c.detail.empty() ? "orders: " : ", ") + std::string("p=") +
                    std::to_string(p) + " -> " + fmt(order);
    }
    return c;
}

// ---------------------------------------------------------------- criterion 8
Check criterion_structural_suite() {
    Check c;
    std::mt19937_64 rng(99);

    // Lemma 4: quadratic-form identity and positivity inside the theta window
    for (int p : {1, 2, 3, 4}) {
        SplineBasis b = SplineBasis::make_uniform(p, 6, 0.0, 1.0);
        auto [m1, k1] = assemble_mass_stiffness_1d(b);
        const auto va = b.eval_all(0.0);
        const auto vb = b.eval_all(1.0);
        const double h = b.element_size();
        const double theta = 0.9 * 2.0 / estimate_trace_constant_sq(b);
        const TimeMatrices tm = assemble_time(b, theta);
        const TimeMatrices tm0 = assemble_time(b, 0.0);
        for (int k = 0; k < 1000; ++k) {
            Vector v = test::random_vector(b.num_basis(), rng);
            scale(1.0 / norm2(v), v);
            c.expect(dot(v, matvec(tm.M_t, v)) > 0.0, "Lemma 4: v'M v <= 0");
            c.expect(dot(v, matvec(tm.K_t, v)) > 0.0, "Lemma 4: v'K v <= 0");
            double v0 = 0.0, v1 = 0.0;
            for (int i = 0; i < b.num_basis(); ++i) {
                v0 += v[i] * va[i];
                v1 += v[i] * vb[i];
            }
            const double quad0 = dot(v, matvec(tm0.K_t, v));
            c.expect(std::abs(quad0 - 0.5 * (v0 * v0 + v1 * v1)) <= 1e-12,
                     "theta=0 boundary identity violated");
        }
    }

    // partition of unity
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int p : {1, 2, 3, 4, 5}) {
        SplineBasis b = SplineBasis::make_uniform(p, 7, 0.0, 1.0);
        std::vector<double> vals;
        for (int k = 0; k < 1000; ++k) {
            b.eval_nonzero(unit(rng), 0, vals);
            double s = 0.0;
            for (double v : vals) s += v;
            c.expect(std::abs(s - 1.0) <= 1e-12, "partition of unity violated");
        }
    }

    // decomposition reconstruction residuals
    for (int p : {1, 2, 3}) {
        for (double theta : {0.01, 0.1}) {
            const SplineBasis b = SplineBasis::make_uniform(p, 4, 0.0, 0.1);
            const TimeMatrices tm = assemble_time(b, theta);
            const int n = b.num_basis();
            DenseLu lum(tm.M_t);
            const DenseMatrix cm = lum.solve(tm.K_t);
            const double cnorm = cm.frobenius_norm();
            TimeDecomposition diag = decompose_time(tm.K_t, tm.M_t, TimeDecomposition::Kind::Diag);
            {
                ComplexMatrix xd(n, n);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) xd(i, j) = diag.x(i, j) * diag.diag[j];
                ComplexMatrix rec = cmatmul(xd, ComplexLu(diag.x).inverse());
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) rec(i, j) -= Cplx(cm(i, j));
                c.expect(rec.frobenius_norm() <= 1e-9 * cnorm, "diag reconstruction residual");
            }
            TimeDecomposition cs =
                decompose_time(tm.K_t, tm.M_t, TimeDecomposition::Kind::ComplexSchur);
            {
                ComplexMatrix qhq = cmatmul(cs.x.adjoint(), cs.x);
                for (int i = 0; i < n; ++i) qhq(i, i) -= Cplx(1.0);
                c.expect(qhq.frobenius_norm() <= 1e-12, "complex Schur unitarity");
                ComplexMatrix rec = cmatmul(cs.x, cmatmul(cs.t, cs.x.adjoint()));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) rec(i, j) -= Cplx(cm(i, j));
                c.expect(rec.frobenius_norm() <= 1e-10 * cnorm, "complex Schur reconstruction");
            }
            TimeDecomposition rs =
                decompose_time(tm.K_t, tm.M_t, TimeDecomposition::Kind::RealSchur);
            {
                DenseMatrix rec = matmul(rs.qr, matmul(rs.tr, rs.qr.transposed()));
                rec -= cm;
                c.expect(rec.frobenius_norm() <= 1e-10 * cnorm, "real Schur reconstruction");
            }
            // alpha formula and c = -theta h d
            GeneralizedEig ge = generalized_eig(tm.K_t, tm.M_t);
            const double scale_re = tm.K_t.frobenius_norm() / tm.M_t.frobenius_norm();
            for (const auto& pr : ge.pairs) {
                Vector x(n), y(n);
                for (int r = 0; r < n; ++r) {
                    x[r] = pr.vec[r].re;
                    y[r] = pr.vec[r].im;
                }
                const double a = dot(x, matvec(tm.K_t, x)) + dot(y, matvec(tm.K_t, y));
                const double bq = dot(x, matvec(tm.M_t, x)) + dot(y, matvec(tm.M_t, y));
                const double cq = dot(x, matvec(tm.M_t, y)) - dot(y, matvec(tm.M_t, x));
                const double dq = dot(x, matvec(tm.K_t, y)) - dot(y, matvec(tm.K_t, x));
                c.expect(std::abs((a * bq + cq * dq) / (bq * bq + cq * cq) - pr.lambda.re) <=
                             1e-9 * scale_re,
                         "alpha formula mismatch");
                c.expect(std::abs(cq + theta * b.element_size() * dq) <=
                             1e-10 * std::max(1.0, std::abs(cq)),
                         "c = -theta h d violated");
            }
        }
    }

    // smoother fixed point and transfer adjointness
    {
        SpaceTimeConfig scfg;
        scfg.dim = 1;
        scfg.p_space = scfg.p_time = 2;
        scfg.n_el_space = 8;
        scfg.n_el_time = 4;
        scfg.n_slabs = 4;
        scfg.theta = 0.01;
        scfg.slab_length = 0.1;
        MgOptions opt;
        opt.coarse_dof_cap = 64;
        opt.smoother.strategy = Strategy::RSchur;
        opt.smoother.inner_tol = 1e-12;
        MGHierarchy h = MGHierarchy::build(scfg, opt);
        const SpaceTimeSystem& sys = h.system(0);
        const ManufacturedSolution exact = smooth_decay_solution(1);
        const Field f = sys.assemble_rhs(exact.rhs, exact.initial);
        const Field ustar = SequentialSolver(sys).solve(f);
        Field u = ustar;
        h.smooth(0, u, f, 2);
        Field diff = u;
        field_axpy(-1.0, ustar, diff);
        c.expect(field_norm(diff) <= 1e-8 * field_norm(ustar), "smoother fixed point violated");

        for (int l = 0; l + 1 < h.num_levels(); ++l) {
            Field cc(h.system(l + 1).num_slabs());
            for (int s = 0; s < h.system(l + 1).num_slabs(); ++s)
                cc[s] = test::random_vector(h.system(l + 1).slab(s).op.size(), rng);
            Field rr(h.system(l).num_slabs());
            for (int s = 0; s < h.system(l).num_slabs(); ++s)
                rr[s] = test::random_vector(h.system(l).slab(s).op.size(), rng);
            const double lhs = field_dot(h.prolong(l, cc), rr);
            const double rhs = field_dot(cc, h.restrict_residual(l, rr));
            c.expect(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)),
                     "transfer adjointness violated");
        }
    }
    if (c.ok) c.detail = "Lemma 4, partition of unity, reconstructions, alpha/c=-theta h d, smoother fixed point, adjointness";
    return c;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    const std::vector<Entry> criteria = {
        {1, "slab-inverse oracle equivalence (Diag/CSchur/RSchur vs direct, 1e-7)",
         criterion_oracle_equivalence},
        {2, "Theorem 3 condition bound (|lambda| in [1/sqrt(2), 1] on 50 random instances)",
         criterion_theorem3_bound},
        {3, "MinRes robustness (Table 4 band, <= 30 iterations)", criterion_minres_robustness},
        {4, "Table 3 reproduction (positivity, * pattern, +-15%)", criterion_table3},
        {5, "Table 2 trend (anchor within 10x, monotone growth)", criterion_condx_trend},
        {6, "multigrid iteration counts (Table 5, <= 12 V-cycles)", criterion_multigrid},
        {7, "dG convergence orders (h^p for p = 2, 3)", criterion_convergence_order},
        {8, "structural property suite", criterion_structural_suite},
    };
    int failures = 0;
    for (const Entry& e : criteria) {
        Check result;
        try {
            result = e.run();
        } catch (const std::exception& ex) {
            result.ok = false;
            result.detail = std::string("exception: ") + ex.what();
        }
        std::printf("%s criterion %d: %s%s%s\n", result.ok ? "PASS" : "FAIL", e.id, e.name,
                    result.detail.empty() ? "" : " -- ", result.detail.c_str());
        std::fflush(stdout);
        if (!result.ok) ++failures;
    }
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
