#include "stmg/spacetime_system.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "stmg/errors.hpp"

namespace stmg {

static_assert(std::endian::native == std::endian::little,
              "solution export assumes a little-endian host");

double field_norm(const Field& f) {
    double s = 0.0;
    for (const Vector& v : f) s += dot(v, v);
    return std::sqrt(s);
}

double field_dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (size_t n = 0; n < a.size(); ++n) s += dot(a[n], b[n]);
    return s;
}

void field_axpy(double alpha, const Field& x, Field& y) {
    for (size_t n = 0; n < x.size(); ++n) axpy(alpha, x[n], y[n]);
}

Field field_zeros_like(const Field& f) {
    Field z(f.size());
    for (size_t n = 0; n < f.size(); ++n) z[n].assign(f[n].size(), 0.0);
    return z;
}

ManufacturedSolution smooth_decay_solution(int dim) {
    const double pi = M_PI;
    ManufacturedSolution s;
    if (dim == 1) {
        s.value = [pi](std::span<const double> x, double t) { return std::sin(pi * x[0]) * std::exp(-t); };
        s.dt = [pi](std::span<const double> x, double t) { return -std::sin(pi * x[0]) * std::exp(-t); };
        s.grad = [pi](std::span<const double> x, double t, std::span<double> g) {
            g[0] = pi * std::cos(pi * x[0]) * std::exp(-t);
        };
        s.rhs = [pi](std::span<const double> x, double t) {
            return (pi * pi - 1.0) * std::sin(pi * x[0]) * std::exp(-t);
        };
        s.initial = [pi](std::span<const double> x) { return std::sin(pi * x[0]); };
    } else {
        s.value = [pi](std::span<const double> x, double t) {
            return std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::exp(-t);
        };
        s.dt = [pi](std::span<const double> x, double t) {
            return -std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::exp(-t);
        };
        s.grad = [pi](std::span<const double> x, double t, std::span<double> g) {
            g[0] = pi * std::cos(pi * x[0]) * std::sin(pi * x[1]) * std::exp(-t);
            g[1] = pi * std::sin(pi * x[0]) * std::cos(pi * x[1]) * std::exp(-t);
        };
        s.rhs = [pi](std::span<const double> x, double t) {
            return (2.0 * pi * pi - 1.0) * std::sin(pi * x[0]) * std::sin(pi * x[1]) * std::exp(-t);
        };
        s.initial = [pi](std::span<const double> x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
    }
    return s;
}

ManufacturedSolution steady_quadratic_solution(int dim) {
    ManufacturedSolution s;
    if (dim == 1) {
        s.value = [](std::span<const double> x, double) { return x[0] * (1.0 - x[0]); };
        s.dt = [](std::span<const double>, double) { return 0.0; };
        s.grad = [](std::span<const double> x, double, std::span<double> g) { g[0] = 1.0 - 2.0 * x[0]; };
        s.rhs = [](std::span<const double>, double) { return 2.0; };
        s.initial = [](std::span<const double> x) { return x[0] * (1.0 - x[0]); };
    } else {
        s.value = [](std::span<const double> x, double) {
            return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
        };
        s.dt = [](std::span<const double>, double) { return 0.0; };
        s.grad = [](std::span<const double> x, double, std::span<double> g) {
            g[0] = (1.0 - 2.0 * x[0]) * x[1] * (1.0 - x[1]);
            g[1] = x[0] * (1.0 - x[0]) * (1.0 - 2.0 * x[1]);
        };
        s.rhs = [](std::span<const double> x, double) {
            return 2.0 * x[1] * (1.0 - x[1]) + 2.0 * x[0] * (1.0 - x[0]);
        };
        s.initial = [](std::span<const double> x) {
            return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
        };
    }
    return s;
}

SpaceTimeSystem SpaceTimeSystem::build(const SpaceTimeConfig& cfg) {
    if (cfg.n_slabs < 1) throw ParameterError("SpaceTimeSystem: need at least one slab");
    std::vector<int> nel(cfg.dim, cfg.n_el_space);
    std::vector<double> lo(cfg.dim, cfg.space_lo), hi(cfg.dim, cfg.space_hi);
    auto space = std::make_shared<const TensorBasis>(make_box_basis(cfg.p_space, nel, lo, hi));
    std::vector<SplineBasis> times;
    times.reserve(cfg.n_slabs);
    for (int n = 0; n < cfg.n_slabs; ++n) {
        const double a = cfg.t0 + n * cfg.slab_length;
        const double b = cfg.t0 + (n + 1) * cfg.slab_length;
        times.push_back(SplineBasis::make_uniform(cfg.p_time, cfg.n_el_time, a, b));
    }
    return from_bases(std::move(times), std::move(space), cfg.theta);
}

SpaceTimeSystem SpaceTimeSystem::from_bases(std::vector<SplineBasis> time_bases,
                                            std::shared_ptr<const TensorBasis> space,
                                            double theta) {
    SpaceTimeSystem sys;
    sys.theta_ = theta;
    SpaceMatrices sm = assemble_space(*space);
    auto mass = std::make_shared<const SparseMatrix>(std::move(sm.mass));
    auto stiff = std::make_shared<const SparseMatrix>(std::move(sm.stiffness));
    for (size_t n = 0; n < time_bases.size(); ++n) {
        Slab slab{time_bases[n], space, SlabOperator{}};
        TimeMatrices tm = assemble_time(time_bases[n], theta);
        slab.op.K_t = std::move(tm.K_t);
        slab.op.M_t = std::move(tm.M_t);
        slab.op.M_x = mass;
        slab.op.K_x = stiff;
        slab.op.theta = theta;
        slab.op.h_t = time_bases[n].element_size();
        sys.slabs_.push_back(std::move(slab));
    }
    for (size_t n = 1; n < sys.slabs_.size(); ++n) {
        sys.couplings_.push_back(assemble_coupling(sys.slabs_[n - 1].time, sys.slabs_[n].time,
                                                   *space, *space, sys.slabs_[n].time.a()));
    }
    return sys;
}

long SpaceTimeSystem::total_dofs() const {
    long n = 0;
    for (const Slab& s : slabs_) n += s.op.size();
    return n;
}

Field SpaceTimeSystem::assemble_rhs(const SpaceTimeFn& f, const SpatialFn& u0) const {
    Field rhs(slabs_.size());
    for (size_t n = 0; n < slabs_.size(); ++n) {
        rhs[n] = assemble_slab_load(*slabs_[n].space, slabs_[n].time, theta_, f);
        if (n == 0) add_initial_trace(*slabs_[n].space, slabs_[n].time, u0, rhs[n]);
    }
    return rhs;
}

Field SpaceTimeSystem::global_matvec(const Field& u) const {
    if (u.size() != slabs_.size()) throw DimensionError("global_matvec: slab count mismatch");
    Field r(slabs_.size());
    for (size_t n = 0; n < slabs_.size(); ++n) {
        r[n] = slab_matvec(slabs_[n].op, u[n]);
        if (n == 0) continue;
        const Coupling& cpl = couplings_[n - 1];
        // B_n u = (N_t ⊗ M̃) u via the rank-1 trace structure of N_t.
        const int nx = slabs_[n].op.n_x();
        const int nt_prev = slabs_[n - 1].op.n_t();
        const int nt = slabs_[n].op.n_t();
        Vector z(nx, 0.0);
        for (int kt = 0; kt < nt_prev; ++kt) {
            const double w = cpl.trace_prev[kt];
            if (w != 0.0)
                axpy(w, std::span<const double>(u[n - 1]).subspan(static_cast<size_t>(kt) * nx, nx), z);
        }
        const Vector mz = cpl.M_tilde->apply(z);
        for (int it = 0; it < nt; ++it) {
            const double w = cpl.trace_next[it];
            if (w != 0.0)
                axpy(-w, mz, std::span<double>(r[n]).subspan(static_cast<size_t>(it) * nx, nx));
        }
    }
    return r;
}

Field SpaceTimeSystem::residual(const Field& f, const Field& u) const {
    Field r = global_matvec(u);
    for (size_t n = 0; n < r.size(); ++n)
        for (size_t i = 0; i < r[n].size(); ++i) r[n][i] = f[n][i] - r[n][i];
    return r;
}

SequentialSolver::SequentialSolver(const SpaceTimeSystem& sys) : sys_(&sys) {
    for (int n = 0; n < sys.num_slabs(); ++n)
        inverses_.push_back(SlabInverse::build(sys.slab(n).op, Strategy::Direct, 1e-14));
}

Field SequentialSolver::solve(const Field& f) const {
    const SpaceTimeSystem& sys = *sys_;
    Field u(sys.num_slabs());
    for (int n = 0; n < sys.num_slabs(); ++n) {
        Vector rhs = f[n];
        if (n > 0) {
            const Coupling& cpl = sys.coupling(n);
            const int nx = sys.slab(n).op.n_x();
            Vector z(nx, 0.0);
            for (int kt = 0; kt < sys.slab(n - 1).op.n_t(); ++kt) {
                const double w = cpl.trace_prev[kt];
                if (w != 0.0)
                    axpy(w, std::span<const double>(u[n - 1]).subspan(static_cast<size_t>(kt) * nx, nx), z);
            }
            const Vector mz = cpl.M_tilde->apply(z);
            for (int it = 0; it < sys.slab(n).op.n_t(); ++it) {
                const double w = cpl.trace_next[it];
                if (w != 0.0)
                    axpy(w, mz, std::span<double>(rhs).subspan(static_cast<size_t>(it) * nx, nx));
            }
        }
        u[n] = inverses_[n].apply(rhs);
    }
    return u;
}

SlabFunctionEval eval_slab_function(const TensorBasis& space, const SplineBasis& time,
                                    std::span<const double> coeffs, std::span<const double> x,
                                    double t) {
    std::vector<double> tv, td, v0, d0, v1, d1;
    const int tfirst = time.eval_nonzero(t, 0, tv);
    time.eval_nonzero(t, 1, td);
    const int f0 = space.dims[0].eval_nonzero(x[0], 0, v0);
    space.dims[0].eval_nonzero(x[0], 1, d0);
    int f1 = 0;
    if (space.dim() == 2) {
        f1 = space.dims[1].eval_nonzero(x[1], 0, v1);
        space.dims[1].eval_nonzero(x[1], 1, d1);
    }
    const int nx = space.num_dofs();
    const int n1int = (space.dim() == 2) ? space.num_interior(1) : 1;

    SlabFunctionEval out;
    for (size_t a = 0; a < tv.size(); ++a) {
        const int it = tfirst + static_cast<int>(a);
        for (size_t b = 0; b < v0.size(); ++b) {
            const int g0 = f0 + static_cast<int>(b);
            if (space.dirichlet && (g0 < 1 || g0 > space.dims[0].num_basis() - 2)) continue;
            const int i0 = space.dirichlet ? g0 - 1 : g0;
            if (space.dim() == 1) {
                const double c = coeffs[slab_index(it, i0, nx)];
                out.value += c * tv[a] * v0[b];
                out.dt += c * td[a] * v0[b];
                out.grad[0] += c * tv[a] * d0[b];
            } else {
                for (size_t e = 0; e < v1.size(); ++e) {
                    const int g1 = f1 + static_cast<int>(e);
                    if (space.dirichlet && (g1 < 1 || g1 > space.dims[1].num_basis() - 2)) continue;
                    const int i1 = space.dirichlet ? g1 - 1 : g1;
                    const double c = coeffs[slab_index(it, i0 * n1int + i1, nx)];
                    out.value += c * tv[a] * v0[b] * v1[e];
                    out.dt += c * td[a] * v0[b] * v1[e];
                    out.grad[0] += c * tv[a] * d0[b] * v1[e];
                    out.grad[1] += c * tv[a] * v0[b] * d1[e];
                }
            }
        }
    }
    return out;
}

namespace {

// Spatial trace coefficients sum_it c[it,:] psi_it(t*) of a slab function.
Vector trace_coefficients(const Slab& slab, std::span<const double> coeffs, double t) {
    const int nx = slab.op.n_x();
    Vector c(nx, 0.0);
    const std::vector<double> tv = slab.time.eval_all(t);
    for (int it = 0; it < slab.op.n_t(); ++it)
        if (tv[it] != 0.0)
            axpy(tv[it], std::span<const double>(coeffs).subspan(static_cast<size_t>(it) * nx, nx), c);
    return c;
}

// ∫_Ω (u_h[c] - g)² dx with u_h the spatial function of coefficients c.
double trace_l2_error_sq(const TensorBasis& space, const Vector& c, const SpatialFn& g) {
    double acc = 0.0;
    std::vector<QuadratureRule> rules;
    for (const auto& dim : space.dims) rules.push_back(QuadratureRule::for_basis(dim));
    std::vector<double> v0, v1;
    auto interior0 = [&](int gidx) {
        return space.dirichlet ? ((gidx >= 1 && gidx <= space.dims[0].num_basis() - 2) ? gidx - 1 : -1)
                               : gidx;
    };
    if (space.dim() == 1) {
        for (const auto& sp : rules[0].spans())
            for (size_t gq = 0; gq < sp.points.size(); ++gq) {
                const double x = sp.points[gq];
                const int f0 = space.dims[0].eval_nonzero(x, 0, v0);
                double uh = 0.0;
                for (size_t b = 0; b < v0.size(); ++b) {
                    const int i = interior0(f0 + static_cast<int>(b));
                    if (i >= 0) uh += c[i] * v0[b];
                }
                const std::array<double, 1> xp{x};
                const double d = uh - g(std::span<const double>(xp.data(), 1));
                acc += sp.weights[gq] * d * d;
            }
    } else {
        const int n1int = space.num_interior(1);
        auto interior1 = [&](int gidx) {
            return space.dirichlet
                       ? ((gidx >= 1 && gidx <= space.dims[1].num_basis() - 2) ? gidx - 1 : -1)
                       : gidx;
        };
        for (const auto& s0 : rules[0].spans())
            for (size_t g0 = 0; g0 < s0.points.size(); ++g0) {
                const double x0 = s0.points[g0];
                const int f0 = space.dims[0].eval_nonzero(x0, 0, v0);
                for (const auto& s1 : rules[1].spans())
                    for (size_t g1 = 0; g1 < s1.points.size(); ++g1) {
                        const double x1 = s1.points[g1];
                        const int f1 = space.dims[1].eval_nonzero(x1, 0, v1);
                        double uh = 0.0;
                        for (size_t b = 0; b < v0.size(); ++b) {
                            const int i0 = interior0(f0 + static_cast<int>(b));
                            if (i0 < 0) continue;
                            for (size_t e = 0; e < v1.size(); ++e) {
                                const int i1 = interior1(f1 + static_cast<int>(e));
                                if (i1 >= 0) uh += c[i0 * n1int + i1] * v0[b] * v1[e];
                            }
                        }
                        const std::array<double, 2> xp{x0, x1};
                        const double d = uh - g(std::span<const double>(xp.data(), 2));
                        acc += s0.weights[g0] * s1.weights[g1] * d * d;
                    }
            }
    }
    return acc;
}

} // namespace

double dg_error(const SpaceTimeSystem& sys, const Field& u, const ManufacturedSolution& exact) {
    double acc = 0.0;
    std::vector<double> gbuf(2, 0.0);
    for (int n = 0; n < sys.num_slabs(); ++n) {
        const Slab& slab = sys.slab(n);
        const double h = slab.op.h_t;
        const double theta = sys.theta();
        const QuadratureRule tq = QuadratureRule::for_basis(slab.time);
        // Volume terms.
        for (const auto& tspan : tq.spans()) {
            for (size_t tg = 0; tg < tspan.points.size(); ++tg) {
                const double t = tspan.points[tg], tw = tspan.weights[tg];
                std::vector<QuadratureRule> rules;
                for (const auto& dim : slab.space->dims)
                    rules.push_back(QuadratureRule::for_basis(dim));
                auto accumulate_point = [&](std::span<const double> xp, double w) {
                    const SlabFunctionEval e = eval_slab_function(*slab.space, slab.time, u[n], xp, t);
                    exact.grad(xp, t, gbuf);
                    double gerr = 0.0;
                    for (int d = 0; d < slab.space->dim(); ++d) {
                        const double diff = gbuf[d] - e.grad[d];
                        gerr += diff * diff;
                    }
                    const double dterr = exact.dt(xp, t) - e.dt;
                    acc += w * tw * (gerr + theta * h * dterr * dterr);
                };
                if (slab.space->dim() == 1) {
                    for (const auto& sp : rules[0].spans())
                        for (size_t gq = 0; gq < sp.points.size(); ++gq) {
                            const std::array<double, 1> xp{sp.points[gq]};
                            accumulate_point(std::span<const double>(xp.data(), 1), sp.weights[gq]);
                        }
                } else {
                    for (const auto& s0 : rules[0].spans())
                        for (size_t g0 = 0; g0 < s0.points.size(); ++g0)
                            for (const auto& s1 : rules[1].spans())
                                for (size_t g1 = 0; g1 < s1.points.size(); ++g1) {
                                    const std::array<double, 2> xp{s0.points[g0], s1.points[g1]};
                                    accumulate_point(std::span<const double>(xp.data(), 2),
                                                     s0.weights[g0] * s1.weights[g1]);
                                }
                }
            }
        }
        // Jump at the left face: against u0 for the first slab, against the
        // previous slab trace otherwise (the exact solution cancels there).
        const Vector cl = trace_coefficients(slab, u[n], slab.time.a());
        if (n == 0) {
            acc += 0.5 * trace_l2_error_sq(*slab.space, cl, exact.initial);
        } else {
            const Slab& prev = sys.slab(n - 1);
            const Vector cp = trace_coefficients(prev, u[n - 1], prev.time.b());
            Vector diff(cl);
            for (size_t i = 0; i < diff.size(); ++i) diff[i] -= cp[i];
            acc += 0.5 * trace_l2_error_sq(*slab.space, diff,
                                           [](std::span<const double>) { return 0.0; });
        }
        // Final-time trace.
        if (n == sys.num_slabs() - 1) {
            const Vector cr = trace_coefficients(slab, u[n], slab.time.b());
            const double T = slab.time.b();
            acc += 0.5 * trace_l2_error_sq(*slab.space, cr, [&](std::span<const double> x) {
                return exact.value(x, T);
            });
        }
    }
    return std::sqrt(acc);
}

void write_solution(const std::string& path, const SpaceTimeSystem& sys, const Field& u) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_solution: cannot open " + path);
    const char magic[4] = {'S', 'T', 'M', 'G'};
    out.write(magic, 4);
    const uint32_t version = 1;
    const uint32_t nslabs = static_cast<uint32_t>(sys.num_slabs());
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&nslabs), 4);
    for (int n = 0; n < sys.num_slabs(); ++n) {
        const uint32_t nt = static_cast<uint32_t>(sys.slab(n).op.n_t());
        const uint32_t nx = static_cast<uint32_t>(sys.slab(n).op.n_x());
        out.write(reinterpret_cast<const char*>(&nt), 4);
        out.write(reinterpret_cast<const char*>(&nx), 4);
        out.write(reinterpret_cast<const char*>(u[n].data()),
                  static_cast<std::streamsize>(u[n].size() * sizeof(double)));
    }
    if (!out) throw IoError("write_solution: write failed for " + path);

    std::ofstream meta(path + ".meta.txt");
    meta << "format = stmg-solution\n";
    meta << "version = 1\n";
    meta << "endianness = little\n";
    meta << "layout = time-major\n";
    meta << "slabs = " << sys.num_slabs() << "\n";
    for (int n = 0; n < sys.num_slabs(); ++n)
        meta << "slab" << n << " = " << sys.slab(n).op.n_t() << " " << sys.slab(n).op.n_x() << "\n";
}

SolutionData read_solution(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_solution: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "STMG", 4) != 0)
        throw IoError("read_solution: bad magic in " + path);
    uint32_t version = 0, nslabs = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&nslabs), 4);
    if (!in || version != 1) throw IoError("read_solution: unsupported version");
    SolutionData data;
    for (uint32_t n = 0; n < nslabs; ++n) {
        uint32_t nt = 0, nx = 0;
        in.read(reinterpret_cast<char*>(&nt), 4);
        in.read(reinterpret_cast<char*>(&nx), 4);
        Vector v(static_cast<size_t>(nt) * nx);
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw IoError("read_solution: truncated payload");
        data.dims.emplace_back(static_cast<int>(nt), static_cast<int>(nx));
        data.coeffs.push_back(std::move(v));
    }
    return data;
}

} // namespace stmg
