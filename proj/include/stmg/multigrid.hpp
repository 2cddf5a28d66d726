#pragma once

#include <functional>
#include <memory>

#include "stmg/spacetime_system.hpp"

namespace stmg {

struct SmootherConfig {
    double omega = 0.5; // damped block Jacobi
    int pre_sweeps = 2;
    int post_sweeps = 2;
    Strategy strategy = Strategy::RSchur;
    double inner_tol = 1e-4;
};

struct MgOptions {
    SmootherConfig smoother;
    long coarse_dof_cap = 5000;
    int min_space_elements = 2;
    int jobs = 1;
};

enum class Coarsening { time, space };

/// Geometric space-time hierarchy: alternating time (slab merging) and
/// space (knot removal) coarsening, block-Jacobi smoothing with Â⁻¹
/// applied per slab, exact sequential solve on the coarsest level.
class MGHierarchy {
public:
    static MGHierarchy build(const SpaceTimeConfig& fine_cfg, const MgOptions& opt);

    int num_levels() const { return static_cast<int>(levels_.size()); }
    const SpaceTimeSystem& system(int level) const { return levels_[level].sys; }
    Coarsening coarsening(int level) const { return levels_[level].how; }
    const MgOptions& options() const { return opt_; }
    double setup_seconds() const { return setup_seconds_; }

    /// sweeps of u <- u + omega D⁻¹ (f - L u); all slab updates use the
    /// same iterate (Jacobi) and run slab-parallel.
    void smooth(int level, Field& u, const Field& f, int sweeps) const;

    Field restrict_residual(int level, const Field& r) const; // level -> level+1
    Field prolong(int level, const Field& coarse) const;      // level+1 -> level

    void v_cycle(int level, Field& u, const Field& f) const;

    struct Report {
        int iterations = 0;
        double rel_residual = 0.0;
        bool converged = false;
    };
    /// Stand-alone MG iteration from a zero initial guess.
    Report solve(Field& u, const Field& f, double tol, int max_cycles) const;

private:
    struct Level {
        SpaceTimeSystem sys;
        std::vector<SlabInverse> smoother;
        Coarsening how = Coarsening::time;
        std::vector<DenseMatrix> time_embed; // per coarse slab, (nt1+nt2) x nt_c
        SparseMatrix space_embed;            // fine interior x coarse interior
        SparseMatrix space_embed_t;
    };
    std::vector<Level> levels_;
    std::unique_ptr<SequentialSolver> coarse_solver_;
    MgOptions opt_;
    double setup_seconds_ = 0.0;
};

using Preconditioner = std::function<Field(const Field&)>;

/// Right-preconditioned restarted GMRES on the global system.
std::pair<Field, SolveReport> gmres_solve(const SpaceTimeSystem& sys, const Preconditioner& prec,
                                          const Field& f, double tol, int restart = 30,
                                          int max_iter = 200);

} // namespace stmg
