#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "stmg/dense.hpp"
#include "stmg/sparse.hpp"
#include "stmg/splines.hpp"

namespace stmg {

using SpatialFn = std::function<double(std::span<const double>)>;
using SpaceTimeFn = std::function<double(std::span<const double>, double)>;

/// Tensor-product spline space over an axis-aligned box (knots live in
/// physical coordinates; the geometry map is affine by construction).
/// With dirichlet set, the first/last basis function of every direction is
/// eliminated from the assembled operators.
struct TensorBasis {
    std::vector<SplineBasis> dims;
    bool dirichlet = true;

    int dim() const { return static_cast<int>(dims.size()); }
    int num_interior(int d) const {
        const int n = dims[d].num_basis();
        return dirichlet ? std::max(0, n - 2) : n;
    }
    int num_dofs() const {
        int n = 1;
        for (int d = 0; d < dim(); ++d) n *= num_interior(d);
        return n;
    }
};

TensorBasis make_interval_basis(int degree, int n_elements, double a, double b,
                                bool dirichlet = true);
TensorBasis make_box_basis(int degree, const std::vector<int>& n_elements,
                           const std::vector<double>& lo, const std::vector<double>& hi,
                           bool dirichlet = true);

/// Mass and stiffness factors of a single direction, no boundary elimination.
std::pair<SparseMatrix, SparseMatrix> assemble_mass_stiffness_1d(const SplineBasis& basis);

/// Spatial mass/stiffness over the interior basis functions of a tensor basis.
struct SpaceMatrices {
    SparseMatrix mass;      // M_x
    SparseMatrix stiffness; // K_x
};
SpaceMatrices assemble_space(const TensorBasis& basis);

/// Time matrices of one slab:
///   K_t[i,j] = ∫ ψ_j' (ψ_i + θ h ψ_i') dt + ψ_j(t0) ψ_i(t0)
///   M_t[i,j] = ∫ ψ_j  (ψ_i + θ h ψ_i') dt
/// with h the time element size of the slab basis.
struct TimeMatrices {
    DenseMatrix K_t;
    DenseMatrix M_t;
};
TimeMatrices assemble_time(const SplineBasis& basis, double theta);

/// Squared constant of the trace inverse inequality |v(t0)|² ≤ C² h⁻¹ ‖v‖²,
/// estimated as the largest Rayleigh quotient (closed form h·(M⁰⁻¹)₁₁).
double estimate_trace_constant_sq(const SplineBasis& time_basis);

/// Off-diagonal coupling B_n = N_t ⊗ M̃_x between two consecutive slabs
/// sharing the interface time. N_t = trace_next · trace_prevᵀ is rank one,
/// which the block applies exploit.
struct Coupling {
    DenseMatrix N_t;                           // (N_t,next × N_t,prev)
    std::shared_ptr<const SparseMatrix> M_tilde; // interior × interior
    Vector trace_next;                          // ψⁿ(t_interface)
    Vector trace_prev;                          // ψⁿ⁻¹(t_interface)
};
Coupling assemble_coupling(const SplineBasis& time_prev, const SplineBasis& time_next,
                           const TensorBasis& space_prev, const TensorBasis& space_next,
                           double t_interface);

/// One slab of A = K_t ⊗ M_x + M_t ⊗ K_x; the Kronecker sum is never formed
/// except through materialize_slab.
struct SlabOperator {
    DenseMatrix K_t;
    DenseMatrix M_t;
    std::shared_ptr<const SparseMatrix> M_x;
    std::shared_ptr<const SparseMatrix> K_x;
    double theta = 0.0;
    double h_t = 0.0;

    int n_t() const { return K_t.rows(); }
    int n_x() const { return M_x ? M_x->rows() : 0; }
    int size() const { return n_t() * n_x(); }
};

SlabOperator make_slab_operator(const TensorBasis& space, const SplineBasis& time, double theta);

/// Coefficient layout of a slab vector: index = i_t · N_x + i_x (time-major,
/// matching the T ⊗ S Kronecker order used throughout).
inline int slab_index(int i_t, int i_x, int n_x) { return i_t * n_x + i_x; }

/// y = (K_t⊗M_x + M_t⊗K_x) v without materializing the operator.
Vector slab_matvec(const SlabOperator& op, std::span<const double> v);

/// Sparse Kronecker-sum form of the slab operator (direct solves, oracles).
SparseMatrix materialize_slab(const SlabOperator& op);

/// Volume term ∫_{Q_n} f · (φ ψ + θ h φ ∂ψ) for every slab basis function.
Vector assemble_slab_load(const TensorBasis& space, const SplineBasis& time, double theta,
                          const SpaceTimeFn& f);

/// Initial-trace term ∫_Ω u0 φ ψ_i(t0⁺), added to the first slab.
void add_initial_trace(const TensorBasis& space, const SplineBasis& time, const SpatialFn& u0,
                       std::span<double> load);

/// Spatial load vector ∫ g φ over interior functions (shared helper).
Vector assemble_spatial_load(const TensorBasis& space, const SpatialFn& g);

} // namespace stmg
