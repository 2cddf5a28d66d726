#pragma once

#include <memory>
#include <span>
#include <vector>

#include "stmg/assembly.hpp"
#include "stmg/denselin.hpp"
#include "stmg/spatial_solvers.hpp"

namespace stmg {

enum class Strategy { Direct, Diag, CSchur, RSchur };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct SlabInverseOptions {
    double cond_cap = 1e8; // Diag refuses construction beyond this cond(X)
    SpdMethod spd_method = SpdMethod::cholesky;
};

/// Work accounting of one apply call.
struct ApplyStats {
    int stages = 0;
    int spd_solves = 0;
    int minres_solves = 0;
    int minres_iterations_max = 0;
};

/// Applies Â⁻¹ for one slab by the configured strategy. Construction
/// checks the admissibility gates (positive M_t, positive real parts of the
/// generalized spectrum, eigenvector conditioning for Diag); apply is
/// immutable and may run concurrently on distinct objects.
class SlabInverse {
public:
    static SlabInverse build(const SlabOperator& op, Strategy strategy, double inner_tol,
                             SlabInverseOptions options = {});

    Vector apply(std::span<const double> f, ApplyStats* stats = nullptr) const;

    Strategy strategy() const { return strategy_; }
    int n_t() const { return n_t_; }
    int n_x() const { return n_x_; }
    double inner_tol() const { return inner_tol_; }
    /// Number of distinct spatial factorizations held.
    int num_spatial_factorizations() const { return n_factorizations_; }
    /// RSchur block structure (empty for the other strategies).
    const std::vector<SchurBlock>& schur_blocks() const { return decomposition_.blocks; }
    std::vector<Cplx> eigenvalues() const { return decomposition_.eigenvalue_list(); }

private:
    SlabInverse() = default;

    Vector apply_direct(std::span<const double> f, ApplyStats* stats) const;
    Vector apply_diag(std::span<const double> f, ApplyStats* stats) const;
    Vector apply_cschur(std::span<const double> f, ApplyStats* stats) const;
    Vector apply_rschur(std::span<const double> f, ApplyStats* stats) const;

    Strategy strategy_ = Strategy::Direct;
    int n_t_ = 0, n_x_ = 0;
    double inner_tol_ = 1e-12;
    SlabOperator op_;
    TimeDecomposition decomposition_;

    std::shared_ptr<const BandLu> direct_;

    // Per-stage solver slots (indexing by time stage / block).
    struct StageSolver {
        bool is_complex = false;
        int partner = -1; // Diag: conjugate of an earlier stage
        std::shared_ptr<const SpdSolver> spd;
        std::shared_ptr<const BlockSaddleOperator> saddle;
        std::shared_ptr<const BlockDiagPreconditioner> prec;
    };
    std::vector<StageSolver> stage_;
    int n_factorizations_ = 0;
};

} // namespace stmg
