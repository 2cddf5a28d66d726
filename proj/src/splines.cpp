#include "stmg/splines.hpp"

#include <algorithm>
#include <cmath>

#include "stmg/sparse.hpp"

namespace stmg {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 0) throw ParameterError("KnotVector: negative degree");
    const int len = static_cast<int>(knots_.size());
    if (len < 2 * (degree_ + 1)) throw ParameterError("KnotVector: too few knots");
    for (int i = 0; i + 1 < len; ++i)
        if (knots_[i] > knots_[i + 1]) throw ParameterError("KnotVector: knots not non-decreasing");
    for (int i = 0; i <= degree_; ++i) {
        if (knots_[i] != knots_.front() || knots_[len - 1 - i] != knots_.back())
            throw ParameterError("KnotVector: end knots must have multiplicity degree+1");
    }
    if (knots_[degree_ + 1] == knots_.front() || knots_[len - degree_ - 2] == knots_.back())
        throw ParameterError("KnotVector: end knot multiplicity exceeds degree+1");
    if (knots_.front() >= knots_.back()) throw ParameterError("KnotVector: empty interval");
}

KnotVector KnotVector::open_uniform(int degree, int n_elements, double a, double b) {
    if (degree < 1) throw ParameterError("open_uniform: degree must be >= 1");
    if (n_elements < 1) throw ParameterError("open_uniform: need at least one element");
    if (!(a < b)) throw ParameterError("open_uniform: need a < b");
    std::vector<double> knots;
    knots.reserve(n_elements + 2 * degree + 1);
    const double h = (b - a) / n_elements;
    for (int i = 0; i <= degree; ++i) knots.push_back(a);
    for (int k = 1; k < n_elements; ++k) knots.push_back(a + k * h);
    for (int i = 0; i <= degree; ++i) knots.push_back(b);
    return KnotVector(degree, std::move(knots));
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> bp;
    for (double k : knots_)
        if (bp.empty() || k != bp.back()) bp.push_back(k);
    return bp;
}

int KnotVector::find_span(double x) const {
    if (x < a() || x > b()) throw DomainError("find_span: point outside knot interval");
    const int n = num_basis();
    if (x >= knots_[n]) {
        int s = n - 1;
        while (s > degree_ && knots_[s] == knots_[s + 1]) --s;
        return s;
    }
    int lo = degree_, hi = n; // span index in [degree, n-1]
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (x < knots_[mid]) hi = mid; else lo = mid;
    }
    return lo;
}

bool KnotVector::same_interval(const KnotVector& other, double tol) const {
    return std::abs(a() - other.a()) <= tol && std::abs(b() - other.b()) <= tol;
}

SplineBasis SplineBasis::make_uniform(int degree, int n_elements, double a, double b) {
    return SplineBasis(KnotVector::open_uniform(degree, n_elements, a, b));
}

double SplineBasis::element_size() const {
    const auto& k = kv_.knots();
    for (size_t i = 0; i + 1 < k.size(); ++i)
        if (k[i + 1] > k[i]) return k[i + 1] - k[i];
    return 0.0;
}

int SplineBasis::eval_nonzero(double x, int deriv_order, std::vector<double>& out) const {
    if (deriv_order < 0 || deriv_order > 1) throw ParameterError("eval_nonzero: deriv_order must be 0 or 1");
    const int p = kv_.degree();
    const int span = kv_.find_span(x);
    const auto& U = kv_.knots();
    out.assign(p + 1, 0.0);

    if (deriv_order == 0) {
        // Cox-de Boor triangular scheme for the p+1 nonzero functions.
        std::vector<double> left(p + 1), right(p + 1);
        out[0] = 1.0;
        for (int j = 1; j <= p; ++j) {
            left[j] = x - U[span + 1 - j];
            right[j] = U[span + j] - x;
            double saved = 0.0;
            for (int r = 0; r < j; ++r) {
                const double temp = out[r] / (right[r + 1] + left[j - r]);
                out[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            out[j] = saved;
        }
    } else {
        // First derivative from the degree p-1 basis on the same span:
        // N'_{i,p} = p/(U[i+p]-U[i]) N_{i,p-1} - p/(U[i+p+1]-U[i+1]) N_{i+1,p-1}.
        std::vector<double> lower(p, 0.0);
        if (p >= 1) {
            std::vector<double> left(p), right(p);
            lower[0] = 1.0;
            for (int j = 1; j <= p - 1; ++j) {
                left[j] = x - U[span + 1 - j];
                right[j] = U[span + j] - x;
                double saved = 0.0;
                for (int r = 0; r < j; ++r) {
                    const double temp = lower[r] / (right[r + 1] + left[j - r]);
                    lower[r] = saved + right[r + 1] * temp;
                    saved = left[j - r] * temp;
                }
                lower[j] = saved;
            }
        }
        // lower[k] = N_{span-p+1+k, p-1}(x), k = 0..p-1
        const int first = span - p;
        for (int k = 0; k <= p; ++k) {
            const int i = first + k;
            double v = 0.0;
            const double d1 = U[i + p] - U[i];
            if (d1 > 0.0 && k >= 1) v += p / d1 * lower[k - 1];
            const double d2 = U[i + p + 1] - U[i + 1];
            if (d2 > 0.0 && k <= p - 1) v -= p / d2 * lower[k];
            out[k] = v;
        }
    }
    return span - p;
}

std::pair<int, std::vector<double>> SplineBasis::eval_nonzero(double x, int deriv_order) const {
    std::vector<double> vals;
    const int first = eval_nonzero(x, deriv_order, vals);
    return {first, std::move(vals)};
}

std::vector<double> SplineBasis::eval_all(double x, int deriv_order) const {
    std::vector<double> vals;
    const int first = eval_nonzero(x, deriv_order, vals);
    std::vector<double> full(num_basis(), 0.0);
    for (size_t k = 0; k < vals.size(); ++k) full[first + k] = vals[k];
    return full;
}

std::pair<std::vector<double>, std::vector<double>> QuadratureRule::gauss_legendre(int q) {
    if (q < 1) throw ParameterError("gauss_legendre: need q >= 1");
    std::vector<double> x(q), w(q);
    for (int i = 0; i < q; ++i) {
        // Newton iteration from the Chebyshev initial guess.
        double t = std::cos(M_PI * (i + 0.75) / (q + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < q; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            pp = q * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[q - 1 - i] = t;
        w[q - 1 - i] = 2.0 / ((1.0 - t * t) * pp * pp);
    }
    return {x, w};
}

QuadratureRule QuadratureRule::for_basis(const SplineBasis& basis, int q) {
    if (q <= 0) q = basis.degree() + 1;
    auto [gx, gw] = gauss_legendre(q);
    QuadratureRule rule;
    const auto& U = basis.knot_vector().knots();
    const int n = basis.num_basis();
    for (int s = basis.degree(); s < n; ++s) {
        const double x0 = U[s], x1 = U[s + 1];
        if (x1 <= x0) continue;
        SpanRule sr;
        sr.span_index = s;
        sr.points.resize(q);
        sr.weights.resize(q);
        for (int i = 0; i < q; ++i) {
            sr.points[i] = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx[i];
            sr.weights[i] = 0.5 * (x1 - x0) * gw[i];
        }
        rule.spans_.push_back(std::move(sr));
    }
    return rule;
}

namespace {

// Single-knot Boehm insertion matrix: (n+1) x n for a basis with n functions.
// Row sums are 1 by construction (convex combinations).
void boehm_insert(std::vector<double>& U, int p, double u,
                  std::vector<std::vector<std::pair<int, double>>>& rows_out) {
    const int n = static_cast<int>(U.size()) - p - 1;
    // span k with U[k] <= u < U[k+1]
    int k = static_cast<int>(std::upper_bound(U.begin(), U.end(), u) - U.begin()) - 1;
    if (k >= n) k = n - 1;
    rows_out.assign(n + 1, {});
    for (int i = 0; i <= n; ++i) {
        if (i <= k - p) {
            rows_out[i] = {{i, 1.0}};
        } else if (i <= k) {
            const double denom = U[i + p] - U[i];
            const double a = (denom > 0.0) ? (u - U[i]) / denom : 0.0;
            rows_out[i] = {{i - 1, 1.0 - a}, {i, a}};
        } else {
            rows_out[i] = {{i - 1, 1.0}};
        }
    }
    U.insert(U.begin() + (k + 1), u);
}

} // namespace

SparseMatrix knot_insertion_matrix(const SplineBasis& coarse, const SplineBasis& fine) {
    if (coarse.degree() != fine.degree())
        throw NestingError("knot_insertion_matrix: degree mismatch");
    if (!coarse.knot_vector().same_interval(fine.knot_vector()))
        throw NestingError("knot_insertion_matrix: interval mismatch");

    // Knots to insert = multiset difference fine \ coarse.
    const auto& cu = coarse.knot_vector().knots();
    const auto& fu = fine.knot_vector().knots();
    std::vector<double> to_insert;
    size_t ic = 0;
    for (double f : fu) {
        if (ic < cu.size() && cu[ic] == f) { ++ic; continue; }
        to_insert.push_back(f);
    }
    if (ic != cu.size())
        throw NestingError("knot_insertion_matrix: fine knots are not a superset of coarse knots");

    const int nc = coarse.num_basis();
    // Dense accumulation of the insertion product; sizes here are small.
    std::vector<std::vector<double>> e(nc);
    for (int i = 0; i < nc; ++i) { e[i].assign(nc, 0.0); e[i][i] = 1.0; }
    std::vector<double> work = cu;
    const int p = coarse.degree();
    std::vector<std::vector<std::pair<int, double>>> rows;
    for (double u : to_insert) {
        boehm_insert(work, p, u, rows);
        std::vector<std::vector<double>> enew(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) {
            enew[i].assign(nc, 0.0);
            for (auto [j, v] : rows[i])
                for (int c = 0; c < nc; ++c) enew[i][c] += v * e[j][c];
        }
        e = std::move(enew);
    }
    if (work != fu) throw NestingError("knot_insertion_matrix: refinement mismatch");

    SparseBuilder builder(static_cast<int>(e.size()), nc);
    for (size_t i = 0; i < e.size(); ++i)
        for (int j = 0; j < nc; ++j)
            if (e[i][j] != 0.0) builder.add(static_cast<int>(i), j, e[i][j]);
    return builder.finalize();
}

SplineBasis merge_slab_bases(const SplineBasis& left, const SplineBasis& right) {
    if (left.degree() != right.degree()) throw ScheduleError("merge_slab_bases: degree mismatch");
    if (left.b() != right.a()) throw InterfaceError("merge_slab_bases: slabs not adjacent");
    const auto bl = left.knot_vector().breakpoints();
    const auto br = right.knot_vector().breakpoints();
    std::vector<double> all(bl);
    all.insert(all.end(), br.begin() + 1, br.end());
    if ((all.size() - 1) % 2 != 0) throw ScheduleError("merge_slab_bases: odd combined element count");
    const int p = left.degree();
    std::vector<double> knots;
    for (int i = 0; i <= p; ++i) knots.push_back(all.front());
    for (size_t i = 2; i + 1 < all.size(); i += 2) knots.push_back(all[i]);
    for (int i = 0; i <= p; ++i) knots.push_back(all.back());
    return SplineBasis(KnotVector(p, std::move(knots)));
}

SplineBasis broken_pair_basis(const SplineBasis& left, const SplineBasis& right) {
    if (left.degree() != right.degree()) throw ScheduleError("broken_pair_basis: degree mismatch");
    if (left.b() != right.a()) throw InterfaceError("broken_pair_basis: slabs not adjacent");
    const auto& kl = left.knot_vector().knots();
    const auto& kr = right.knot_vector().knots();
    std::vector<double> knots(kl);
    knots.insert(knots.end(), kr.begin() + left.degree() + 1, kr.end());
    return SplineBasis(KnotVector(left.degree(), std::move(knots)));
}

} // namespace stmg
