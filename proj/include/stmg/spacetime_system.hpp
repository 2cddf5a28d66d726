#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "stmg/assembly.hpp"
#include "stmg/slab_inverse.hpp"

namespace stmg {

/// One coefficient vector per slab (time-major layout within each slab).
using Field = std::vector<Vector>;

double field_norm(const Field& f);
double field_dot(const Field& a, const Field& b);
void field_axpy(double alpha, const Field& x, Field& y);
Field field_zeros_like(const Field& f);

/// Closed-form solution with hand-written derivatives, used for the
/// right-hand sides and the dG-norm error studies.
struct ManufacturedSolution {
    SpaceTimeFn value;
    SpaceTimeFn dt;
    std::function<void(std::span<const double>, double, std::span<double>)> grad;
    SpaceTimeFn rhs; // f = du/dt - laplace(u)
    SpatialFn initial;
};

ManufacturedSolution smooth_decay_solution(int dim);    // sin(pi x)... * exp(-t)
ManufacturedSolution steady_quadratic_solution(int dim); // x(1-x)..., time independent

struct SpaceTimeConfig {
    int dim = 1;
    int p_space = 3;
    int p_time = 3;
    int n_el_space = 8;
    int n_el_time = 8;
    int n_slabs = 2;
    double theta = 0.01;
    double slab_length = 0.1;
    double t0 = 0.0;
    double space_lo = 0.0;
    double space_hi = 1.0;
};

struct Slab {
    SplineBasis time;
    std::shared_ptr<const TensorBasis> space;
    SlabOperator op;
};

/// The block lower-bidiagonal system L_h u = f over all time slabs.
class SpaceTimeSystem {
public:
    static SpaceTimeSystem build(const SpaceTimeConfig& cfg);
    /// Assembles over explicit bases; used for the coarse multigrid levels.
    static SpaceTimeSystem from_bases(std::vector<SplineBasis> time_bases,
                                      std::shared_ptr<const TensorBasis> space, double theta);

    int num_slabs() const { return static_cast<int>(slabs_.size()); }
    const Slab& slab(int n) const { return slabs_[n]; }
    /// Coupling between slab n-1 and n (n = 1..N-1).
    const Coupling& coupling(int n) const { return couplings_[n - 1]; }
    long total_dofs() const;
    double theta() const { return theta_; }

    Field assemble_rhs(const SpaceTimeFn& f, const SpatialFn& u0) const;
    Field global_matvec(const Field& u) const;
    /// f - L_h u
    Field residual(const Field& f, const Field& u) const;

private:
    std::vector<Slab> slabs_;
    std::vector<Coupling> couplings_;
    double theta_ = 0.0;
};

/// Exact forward substitution through the block bidiagonal structure
/// (classical time stepping); the oracle the multigrid is measured against.
class SequentialSolver {
public:
    explicit SequentialSolver(const SpaceTimeSystem& sys);
    Field solve(const Field& f) const;

private:
    const SpaceTimeSystem* sys_;
    std::vector<SlabInverse> inverses_;
};

/// Pointwise value and derivatives of a discrete slab function.
struct SlabFunctionEval {
    double value = 0.0;
    double dt = 0.0;
    std::array<double, 2> grad{0.0, 0.0};
};
SlabFunctionEval eval_slab_function(const TensorBasis& space, const SplineBasis& time,
                                    std::span<const double> coeffs, std::span<const double> x,
                                    double t);

/// Mesh-dependent dG norm of the error u_exact - u_h:
/// sum over slabs of |grad e|^2 + theta h |dt e|^2, plus the half jump
/// terms at the slab interfaces (initial trace against u0) and the final
/// time trace.
double dg_error(const SpaceTimeSystem& sys, const Field& u, const ManufacturedSolution& exact);

/// Per-slab coefficient export: binary little-endian payload with a
/// plain-text metadata sidecar at <path>.meta.txt.
void write_solution(const std::string& path, const SpaceTimeSystem& sys, const Field& u);

struct SolutionData {
    std::vector<std::pair<int, int>> dims; // (n_t, n_x) per slab
    Field coeffs;
};
SolutionData read_solution(const std::string& path);

} // namespace stmg
