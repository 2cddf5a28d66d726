#pragma once

#include <utility>
#include <vector>

#include "stmg/errors.hpp"

namespace stmg {

class SparseMatrix;

/// Open knot vector: non-decreasing knots on [a,b] whose end knots carry
/// multiplicity exactly degree+1.
class KnotVector {
public:
    /// Internal-use constructor accepting arbitrary (open, non-decreasing) knots.
    /// Public construction goes through open_uniform.
    KnotVector(int degree, std::vector<double> knots);

    static KnotVector open_uniform(int degree, int n_elements, double a, double b);

    int degree() const { return degree_; }
    int num_basis() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    double a() const { return knots_.front(); }
    double b() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }
    double knot(int i) const { return knots_[i]; }

    /// Distinct breakpoints (ascending).
    std::vector<double> breakpoints() const;

    /// Index i with knots[i] <= x < knots[i+1] (last nonempty span is closed).
    int find_span(double x) const;

    bool same_interval(const KnotVector& other, double tol = 0.0) const;

private:
    int degree_;
    std::vector<double> knots_;
};

/// Univariate B-spline basis over an open knot vector, evaluated with the
/// Cox-de Boor recursion.
class SplineBasis {
public:
    explicit SplineBasis(KnotVector kv) : kv_(std::move(kv)) {}

    static SplineBasis make_uniform(int degree, int n_elements, double a, double b);

    const KnotVector& knot_vector() const { return kv_; }
    int degree() const { return kv_.degree(); }
    int num_basis() const { return kv_.num_basis(); }
    double a() const { return kv_.a(); }
    double b() const { return kv_.b(); }
    int num_elements() const { return static_cast<int>(kv_.breakpoints().size()) - 1; }
    /// Size of the first positive-length knot span; elements are uniform in all
    /// public constructions.
    double element_size() const;

    /// Values (deriv_order 0) or first derivatives (deriv_order 1) of the
    /// degree+1 basis functions that are nonzero at x. Returns the index of
    /// the first one; out is resized to degree+1.
    int eval_nonzero(double x, int deriv_order, std::vector<double>& out) const;

    /// Convenience variant returning (first_index, values).
    std::pair<int, std::vector<double>> eval_nonzero(double x, int deriv_order = 0) const;

    /// Dense vector of all basis values (or derivatives) at x; handy for the
    /// small time-direction bases.
    std::vector<double> eval_all(double x, int deriv_order = 0) const;

private:
    KnotVector kv_;
};

/// Gauss-Legendre quadrature over the knot spans of a basis.
class QuadratureRule {
public:
    struct SpanRule {
        int span_index;            // knot-vector span
        std::vector<double> points;
        std::vector<double> weights;
    };

    /// q-point Gauss rule per nonempty span; q defaults to degree+1.
    static QuadratureRule for_basis(const SplineBasis& basis, int q = 0);

    /// Nodes/weights of the q-point Gauss-Legendre rule on [-1,1].
    static std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int q);

    const std::vector<SpanRule>& spans() const { return spans_; }

private:
    std::vector<SpanRule> spans_;
};

/// Coefficient embedding E with fine_coeffs = E * coarse_coeffs leaving the
/// represented spline unchanged. Requires the fine knots to be a superset of
/// the coarse knots (same degree and interval); rows of E sum to 1.
SparseMatrix knot_insertion_matrix(const SplineBasis& coarse, const SplineBasis& fine);

/// Coarse basis over the union of two consecutive slabs, built from every
/// other breakpoint of the fine pair so that knots nest bitwise.
SplineBasis merge_slab_bases(const SplineBasis& left, const SplineBasis& right);

/// Knot vector of the broken (discontinuous at the shared breakpoint) space
/// spanned by the two slab bases jointly: left knots followed by right knots
/// with the duplicated interface end-knots collapsed to multiplicity p+1.
SplineBasis broken_pair_basis(const SplineBasis& left, const SplineBasis& right);

} // namespace stmg
