#include "stmg/assembly.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace stmg {

TensorBasis make_interval_basis(int degree, int n_elements, double a, double b, bool dirichlet) {
    if (!(a < b)) throw GeometryError("make_interval_basis: degenerate interval");
    TensorBasis tb;
    tb.dims.push_back(SplineBasis::make_uniform(degree, n_elements, a, b));
    tb.dirichlet = dirichlet;
    return tb;
}

TensorBasis make_box_basis(int degree, const std::vector<int>& n_elements,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           bool dirichlet) {
    if (n_elements.empty() || n_elements.size() > 2 || lo.size() != n_elements.size() ||
        hi.size() != n_elements.size())
        throw ParameterError("make_box_basis: need 1 or 2 matching dimension specs");
    TensorBasis tb;
    tb.dirichlet = dirichlet;
    for (size_t d = 0; d < n_elements.size(); ++d) {
        if (!(lo[d] < hi[d])) throw GeometryError("make_box_basis: degenerate box");
        tb.dims.push_back(SplineBasis::make_uniform(degree, n_elements[d], lo[d], hi[d]));
    }
    return tb;
}

std::pair<SparseMatrix, SparseMatrix> assemble_mass_stiffness_1d(const SplineBasis& basis) {
    const int n = basis.num_basis();
    const int p = basis.degree();
    SparseBuilder mb(n, n), kb(n, n);
    const QuadratureRule quad = QuadratureRule::for_basis(basis);
    std::vector<double> v, d;
    for (const auto& span : quad.spans()) {
        for (size_t g = 0; g < span.points.size(); ++g) {
            const double x = span.points[g], w = span.weights[g];
            const int first = basis.eval_nonzero(x, 0, v);
            basis.eval_nonzero(x, 1, d);
            for (int a = 0; a <= p; ++a) {
                for (int b = 0; b <= p; ++b) {
                    // product first: (v[a]*v[b])*w is bitwise symmetric in (a,b)
                    mb.add(first + a, first + b, (v[a] * v[b]) * w);
                    kb.add(first + a, first + b, (d[a] * d[b]) * w);
                }
            }
        }
    }
    return {mb.finalize(), kb.finalize()};
}

namespace {

SparseMatrix interior_slice(const SparseMatrix& m, bool dirichlet) {
    if (!dirichlet) return m;
    const int n = m.rows();
    if (n <= 2) return sparse_submatrix(m, 0, 0, 0, 0);
    return sparse_submatrix(m, 1, n - 1, 1, n - 1);
}

} // namespace

SpaceMatrices assemble_space(const TensorBasis& basis) {
    std::vector<SparseMatrix> mass1d, stiff1d;
    for (const auto& dim : basis.dims) {
        auto [m, k] = assemble_mass_stiffness_1d(dim);
        mass1d.push_back(interior_slice(m, basis.dirichlet));
        stiff1d.push_back(interior_slice(k, basis.dirichlet));
    }
    if (basis.dim() == 1) return {mass1d[0], stiff1d[0]};
    SparseMatrix mass = sparse_kron(mass1d[0], mass1d[1]);
    SparseMatrix stiff = sparse_add(sparse_kron(stiff1d[0], mass1d[1]),
                                    sparse_kron(mass1d[0], stiff1d[1]));
    return {std::move(mass), std::move(stiff)};
}

TimeMatrices assemble_time(const SplineBasis& basis, double theta) {
    if (theta < 0.0) throw ParameterError("assemble_time: theta must be >= 0");
    const int n = basis.num_basis();
    const int p = basis.degree();
    const double h = basis.element_size();
    DenseMatrix K(n, n), M(n, n);
    const QuadratureRule quad = QuadratureRule::for_basis(basis);
    std::vector<double> v, d;
    for (const auto& span : quad.spans()) {
        for (size_t g = 0; g < span.points.size(); ++g) {
            const double t = span.points[g], w = span.weights[g];
            const int first = basis.eval_nonzero(t, 0, v);
            basis.eval_nonzero(t, 1, d);
            for (int a = 0; a <= p; ++a) {
                const double test = v[a] + theta * h * d[a];
                for (int b = 0; b <= p; ++b) {
                    K(first + a, first + b) += w * d[b] * test;
                    M(first + a, first + b) += w * v[b] * test;
                }
            }
        }
    }
    std::vector<double> v0;
    const int first0 = basis.eval_nonzero(basis.a(), 0, v0);
    for (int a = 0; a <= p; ++a)
        for (int b = 0; b <= p; ++b)
            K(first0 + a, first0 + b) += v0[a] * v0[b];
    return {std::move(K), std::move(M)};
}

double estimate_trace_constant_sq(const SplineBasis& time_basis) {
    // max_v |v(t0)|² / (h⁻¹‖v‖²) = h·(M⁻¹)₁₁ with M the plain mass matrix
    // (open knots: v(t0) equals the first coefficient).
    TimeMatrices tm = assemble_time(time_basis, 0.0);
    DenseLu lu(tm.M_t);
    Vector e1(time_basis.num_basis(), 0.0);
    e1[0] = 1.0;
    const Vector col = lu.solve(e1);
    return time_basis.element_size() * col[0];
}

namespace {

SparseMatrix coupling_mass_1d(const SplineBasis& prev, const SplineBasis& next) {
    const auto bp_prev = prev.knot_vector().breakpoints();
    const auto bp_next = next.knot_vector().breakpoints();
    std::vector<double> bp(bp_prev);
    bp.insert(bp.end(), bp_next.begin(), bp_next.end());
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());

    const int q = std::max(prev.degree(), next.degree()) + 1;
    auto [gx, gw] = QuadratureRule::gauss_legendre(q);
    SparseBuilder builder(next.num_basis(), prev.num_basis());
    std::vector<double> vp, vn;
    for (size_t s = 0; s + 1 < bp.size(); ++s) {
        const double x0 = bp[s], x1 = bp[s + 1];
        if (x1 <= x0) continue;
        for (int g = 0; g < q; ++g) {
            const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx[g];
            const double w = 0.5 * (x1 - x0) * gw[g];
            const int fp = prev.eval_nonzero(x, 0, vp);
            const int fn = next.eval_nonzero(x, 0, vn);
            for (size_t a = 0; a < vn.size(); ++a)
                for (size_t b = 0; b < vp.size(); ++b)
                    builder.add(fn + static_cast<int>(a), fp + static_cast<int>(b),
                                (vn[a] * vp[b]) * w);
        }
    }
    return builder.finalize();
}

} // namespace

Coupling assemble_coupling(const SplineBasis& time_prev, const SplineBasis& time_next,
                           const TensorBasis& space_prev, const TensorBasis& space_next,
                           double t_interface) {
    const double tol = 1e-12 * std::max(1.0, std::abs(t_interface));
    if (std::abs(time_prev.b() - t_interface) > tol || std::abs(time_next.a() - t_interface) > tol)
        throw InterfaceError("assemble_coupling: slabs do not share the interface time");
    if (space_prev.dim() != space_next.dim())
        throw InterfaceError("assemble_coupling: spatial dimension mismatch");

    const std::vector<double> wn = time_next.eval_all(time_next.a());
    const std::vector<double> wp = time_prev.eval_all(time_prev.b());
    DenseMatrix nt(time_next.num_basis(), time_prev.num_basis());
    for (int i = 0; i < nt.rows(); ++i)
        for (int k = 0; k < nt.cols(); ++k) nt(i, k) = wn[i] * wp[k];

    std::vector<SparseMatrix> factors;
    for (int d = 0; d < space_prev.dim(); ++d) {
        SparseMatrix full = coupling_mass_1d(space_prev.dims[d], space_next.dims[d]);
        if (space_prev.dirichlet != space_next.dirichlet)
            throw InterfaceError("assemble_coupling: boundary condition mismatch");
        if (space_prev.dirichlet) {
            const int nr = full.rows(), nc = full.cols();
            full = (nr <= 2 || nc <= 2) ? sparse_submatrix(full, 0, 0, 0, 0)
                                        : sparse_submatrix(full, 1, nr - 1, 1, nc - 1);
        }
        factors.push_back(std::move(full));
    }
    SparseMatrix mt = (factors.size() == 1) ? factors[0] : sparse_kron(factors[0], factors[1]);
    return {std::move(nt), std::make_shared<const SparseMatrix>(std::move(mt)), wn, wp};
}

SlabOperator make_slab_operator(const TensorBasis& space, const SplineBasis& time, double theta) {
    SpaceMatrices sm = assemble_space(space);
    TimeMatrices tm = assemble_time(time, theta);
    SlabOperator op;
    op.K_t = std::move(tm.K_t);
    op.M_t = std::move(tm.M_t);
    op.M_x = std::make_shared<const SparseMatrix>(std::move(sm.mass));
    op.K_x = std::make_shared<const SparseMatrix>(std::move(sm.stiffness));
    op.theta = theta;
    op.h_t = time.element_size();
    return op;
}

Vector slab_matvec(const SlabOperator& op, std::span<const double> v) {
    const int nt = op.n_t(), nx = op.n_x();
    if (static_cast<int>(v.size()) != nt * nx) throw DimensionError("slab_matvec: length mismatch");
    // Columns of the N_x × N_t view, premultiplied by the spatial factors.
    DenseMatrix mw(nt, nx), kw(nt, nx);
    for (int jt = 0; jt < nt; ++jt) {
        auto col = v.subspan(static_cast<size_t>(jt) * nx, nx);
        op.M_x->matvec(col, mw.row(jt));
        op.K_x->matvec(col, kw.row(jt));
    }
    Vector y(static_cast<size_t>(nt) * nx, 0.0);
    for (int it = 0; it < nt; ++it) {
        auto out = std::span<double>(y).subspan(static_cast<size_t>(it) * nx, nx);
        for (int jt = 0; jt < nt; ++jt) {
            const double kt = op.K_t(it, jt), mt = op.M_t(it, jt);
            if (kt != 0.0) axpy(kt, mw.row(jt), out);
            if (mt != 0.0) axpy(mt, kw.row(jt), out);
        }
    }
    return y;
}

SparseMatrix materialize_slab(const SlabOperator& op) {
    return sparse_add(sparse_kron(from_dense(op.K_t), *op.M_x),
                      sparse_kron(from_dense(op.M_t), *op.K_x));
}

namespace {

// Iterate tensor quadrature points of a 1- or 2-dimensional spatial basis.
template <typename F>
void for_each_space_point(const TensorBasis& space, F&& fn) {
    std::vector<QuadratureRule> rules;
    for (const auto& dim : space.dims) rules.push_back(QuadratureRule::for_basis(dim));
    std::vector<double> v0, v1;
    if (space.dim() == 1) {
        for (const auto& sp : rules[0].spans())
            for (size_t g = 0; g < sp.points.size(); ++g) {
                const double x = sp.points[g];
                const int first = space.dims[0].eval_nonzero(x, 0, v0);
                std::array<double, 2> xp{x, 0.0};
                fn(std::span<const double>(xp.data(), 1), sp.weights[g], first, v0, 0, v1);
            }
    } else {
        for (const auto& s0 : rules[0].spans())
            for (size_t g0 = 0; g0 < s0.points.size(); ++g0) {
                const double x0 = s0.points[g0];
                const int f0 = space.dims[0].eval_nonzero(x0, 0, v0);
                for (const auto& s1 : rules[1].spans())
                    for (size_t g1 = 0; g1 < s1.points.size(); ++g1) {
                        const double x1 = s1.points[g1];
                        const int f1 = space.dims[1].eval_nonzero(x1, 0, v1);
                        std::array<double, 2> xp{x0, x1};
                        fn(std::span<const double>(xp.data(), 2),
                           s0.weights[g0] * s1.weights[g1], f0, v0, f1, v1);
                    }
            }
    }
}

// Interior dof index of the tensor function (g0, g1); -1 if eliminated.
int interior_index(const TensorBasis& space, int g0, int g1) {
    if (!space.dirichlet) {
        return (space.dim() == 1) ? g0 : g0 * space.dims[1].num_basis() + g1;
    }
    const int n0 = space.dims[0].num_basis();
    if (g0 < 1 || g0 > n0 - 2) return -1;
    if (space.dim() == 1) return g0 - 1;
    const int n1 = space.dims[1].num_basis();
    if (g1 < 1 || g1 > n1 - 2) return -1;
    return (g0 - 1) * (n1 - 2) + (g1 - 1);
}

} // namespace

Vector assemble_spatial_load(const TensorBasis& space, const SpatialFn& g) {
    Vector load(space.num_dofs(), 0.0);
    for_each_space_point(space, [&](std::span<const double> x, double w, int f0,
                                    const std::vector<double>& v0, int f1,
                                    const std::vector<double>& v1) {
        const double gv = g(x);
        if (gv == 0.0) return;
        if (space.dim() == 1) {
            for (size_t a = 0; a < v0.size(); ++a) {
                const int idx = interior_index(space, f0 + static_cast<int>(a), 0);
                if (idx >= 0) load[idx] += w * gv * v0[a];
            }
        } else {
            for (size_t a = 0; a < v0.size(); ++a)
                for (size_t b = 0; b < v1.size(); ++b) {
                    const int idx = interior_index(space, f0 + static_cast<int>(a),
                                                   f1 + static_cast<int>(b));
                    if (idx >= 0) load[idx] += w * gv * v0[a] * v1[b];
                }
        }
    });
    return load;
}

Vector assemble_slab_load(const TensorBasis& space, const SplineBasis& time, double theta,
                          const SpaceTimeFn& f) {
    const int nx = space.num_dofs();
    const int nt = time.num_basis();
    const double h = time.element_size();
    Vector load(static_cast<size_t>(nt) * nx, 0.0);
    const QuadratureRule tq = QuadratureRule::for_basis(time);
    std::vector<double> tv, td;
    for (const auto& tspan : tq.spans()) {
        for (size_t tg = 0; tg < tspan.points.size(); ++tg) {
            const double t = tspan.points[tg], tw = tspan.weights[tg];
            const int tfirst = time.eval_nonzero(t, 0, tv);
            time.eval_nonzero(t, 1, td);
            for_each_space_point(space, [&](std::span<const double> x, double sw, int f0,
                                            const std::vector<double>& v0, int f1,
                                            const std::vector<double>& v1) {
                const double fv = f(x, t);
                if (fv == 0.0) return;
                const double base = tw * sw * fv;
                for (size_t a = 0; a < tv.size(); ++a) {
                    const double wt = base * (tv[a] + theta * h * td[a]);
                    if (wt == 0.0) continue;
                    const int it = tfirst + static_cast<int>(a);
                    if (space.dim() == 1) {
                        for (size_t b = 0; b < v0.size(); ++b) {
                            const int ix = interior_index(space, f0 + static_cast<int>(b), 0);
                            if (ix >= 0) load[slab_index(it, ix, nx)] += wt * v0[b];
                        }
                    } else {
                        for (size_t b = 0; b < v0.size(); ++b)
                            for (size_t c = 0; c < v1.size(); ++c) {
                                const int ix = interior_index(space, f0 + static_cast<int>(b),
                                                              f1 + static_cast<int>(c));
                                if (ix >= 0)
                                    load[slab_index(it, ix, nx)] += wt * v0[b] * v1[c];
                            }
                    }
                }
            });
        }
    }
    return load;
}

void add_initial_trace(const TensorBasis& space, const SplineBasis& time, const SpatialFn& u0,
                       std::span<double> load) {
    const int nx = space.num_dofs();
    const Vector lx = assemble_spatial_load(space, u0);
    const std::vector<double> tv = time.eval_all(time.a());
    for (int it = 0; it < time.num_basis(); ++it) {
        if (tv[it] == 0.0) continue;
        for (int ix = 0; ix < nx; ++ix) load[slab_index(it, ix, nx)] += tv[it] * lx[ix];
    }
}

} // namespace stmg
