#include "stmg/denselin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stmg/errors.hpp"

namespace stmg {

namespace {

constexpr double kDeflateEps = 1e-14; // |h(k,k-1)| <= eps (|h(k,k)| + |h(k+1,k+1)|)

// Householder reduction to upper Hessenberg form; q accumulates the
// orthogonal similarity (a = q h qᵀ).
void hessenberg_reduce(DenseMatrix& h, DenseMatrix* q) {
    const int n = h.rows();
    std::vector<double> v(n);
    for (int k = 0; k + 2 < n; ++k) {
        double norm = 0.0;
        for (int i = k + 1; i < n; ++i) norm += h(i, k) * h(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) continue;
        const double alpha = (h(k + 1, k) >= 0.0) ? -norm : norm;
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
            if (i == k + 1) v[i] -= alpha;
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0.0) continue;
        const double tau = 2.0 / vnorm2;
        // Left: h = P h on rows k+1..n-1.
        for (int j = k; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * h(i, j);
            s *= tau;
            for (int i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        // Right: h = h P on cols k+1..n-1.
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= tau;
            for (int j = k + 1; j < n; ++j) h(i, j) -= s * v[j];
        }
        if (q) {
            for (int i = 0; i < n; ++i) {
                double s = 0.0;
                for (int j = k + 1; j < n; ++j) s += (*q)(i, j) * v[j];
                s *= tau;
                for (int j = k + 1; j < n; ++j) (*q)(i, j) -= s * v[j];
            }
        }
        h(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Reflector for a 3-vector (or 2-vector with z unused).
struct Reflector {
    double v0, v1, v2, tau;
    bool active;
};

Reflector make_reflector(double x, double y, double z, bool three) {
    Reflector r{0, 0, 0, 0, false};
    const double norm = three ? std::sqrt(x * x + y * y + z * z) : std::sqrt(x * x + y * y);
    if (norm == 0.0) return r;
    const double alpha = (x >= 0.0) ? -norm : norm;
    r.v0 = x - alpha;
    r.v1 = y;
    r.v2 = three ? z : 0.0;
    const double vnorm2 = r.v0 * r.v0 + r.v1 * r.v1 + r.v2 * r.v2;
    if (vnorm2 == 0.0) return r;
    r.tau = 2.0 / vnorm2;
    r.active = true;
    return r;
}

// Apply reflector to rows r0..r0+len-1 over columns [c0, c1).
void apply_left(DenseMatrix& h, const Reflector& r, int r0, int len, int c0, int c1) {
    if (!r.active) return;
    for (int j = c0; j < c1; ++j) {
        double s = r.v0 * h(r0, j) + r.v1 * h(r0 + 1, j);
        if (len == 3) s += r.v2 * h(r0 + 2, j);
        s *= r.tau;
        h(r0, j) -= r.v0 * s;
        h(r0 + 1, j) -= r.v1 * s;
        if (len == 3) h(r0 + 2, j) -= r.v2 * s;
    }
}

// Apply reflector to columns c0..c0+len-1 over rows [r0, r1).
void apply_right(DenseMatrix& h, const Reflector& r, int c0, int len, int r0, int r1) {
    if (!r.active) return;
    for (int i = r0; i < r1; ++i) {
        double s = r.v0 * h(i, c0) + r.v1 * h(i, c0 + 1);
        if (len == 3) s += r.v2 * h(i, c0 + 2);
        s *= r.tau;
        h(i, c0) -= r.v0 * s;
        h(i, c0 + 1) -= r.v1 * s;
        if (len == 3) h(i, c0 + 2) -= r.v2 * s;
    }
}

// Orthogonal similarity with the 2x2 rotation [[cs, -sn], [sn, cs]] on
// rows/cols (k, k+1) of t (full width) and the columns of q.
void apply_rotation(DenseMatrix& t, DenseMatrix* q, int k, double cs, double sn) {
    const int n = t.rows();
    for (int j = 0; j < n; ++j) {
        const double a = t(k, j), b = t(k + 1, j);
        t(k, j) = cs * a + sn * b;
        t(k + 1, j) = -sn * a + cs * b;
    }
    for (int i = 0; i < n; ++i) {
        const double a = t(i, k), b = t(i, k + 1);
        t(i, k) = cs * a + sn * b;
        t(i, k + 1) = -sn * a + cs * b;
    }
    if (q) {
        for (int i = 0; i < q->rows(); ++i) {
            const double a = (*q)(i, k), b = (*q)(i, k + 1);
            (*q)(i, k) = cs * a + sn * b;
            (*q)(i, k + 1) = -sn * a + cs * b;
        }
    }
}

// Eigenvalues of [[a, b], [c, d]].
std::pair<Cplx, Cplx> eig_2x2(double a, double b, double c, double d) {
    const double tr = a + d;
    const double det = a * d - b * c;
    const double disc = 0.25 * (a - d) * (a - d) + b * c;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        double l1 = 0.5 * tr + ((tr >= 0.0) ? root : -root);
        double l2 = (l1 != 0.0) ? det / l1 : 0.5 * tr - ((tr >= 0.0) ? root : -root);
        return {Cplx(l1), Cplx(l2)};
    }
    const double mu = std::sqrt(-disc);
    return {Cplx(0.5 * tr, mu), Cplx(0.5 * tr, -mu)};
}

// Rotate a real-eigenvalue 2x2 block at (k, k+1) to upper triangular form.
void split_real_2x2(DenseMatrix& t, DenseMatrix* q, int k) {
    const double a = t(k, k), b = t(k, k + 1), c = t(k + 1, k), d = t(k + 1, k + 1);
    if (c == 0.0) return;
    auto [l1, l2] = eig_2x2(a, b, c, d);
    const double lam = l1.re; // larger magnitude root from eig_2x2
    // Eigenvector from the better conditioned row.
    double v0, v1;
    if (std::abs(b) + std::abs(lam - a) >= std::abs(lam - d) + std::abs(c)) {
        v0 = b;
        v1 = lam - a;
    } else {
        v0 = lam - d;
        v1 = c;
    }
    const double r = std::hypot(v0, v1);
    if (r == 0.0) return;
    apply_rotation(t, q, k, v0 / r, v1 / r);
    t(k + 1, k) = 0.0;
}

void francis_iteration(DenseMatrix& h, DenseMatrix* q) {
    const int n = h.rows();
    const int budget = 30 * std::max(1, n);
    int total_iter = 0;
    int m = n - 1;
    int iter_this_block = 0;
    while (m >= 1) {
        // Deflation scan from the bottom of the active block.
        int l = m;
        while (l > 0) {
            const double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (std::abs(h(l, l - 1)) <= kDeflateEps * (s == 0.0 ? 1.0 : s)) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == m) { --m; iter_this_block = 0; continue; }
        if (l == m - 1) { m -= 2; iter_this_block = 0; continue; }

        ++total_iter;
        ++iter_this_block;
        if (total_iter > budget)
            throw ConvergenceError("real_schur: Francis QR did not converge within " +
                                       std::to_string(budget) + " sweeps",
                                   total_iter, std::abs(h(m, m - 1)));

        double shift_sum, shift_prod;
        if (iter_this_block % 10 == 0) {
            // Exceptional shift after stagnation.
            const double s = std::abs(h(m, m - 1)) + std::abs(h(m - 1, m - 2));
            shift_sum = 2.0 * (h(m, m) + 0.75 * s);
            const double ex = h(m, m) + 0.75 * s;
            shift_prod = ex * ex - 0.4375 * s * s;
        } else {
            shift_sum = h(m - 1, m - 1) + h(m, m);
            shift_prod = h(m - 1, m - 1) * h(m, m) - h(m - 1, m) * h(m, m - 1);
        }

        // First column of (H - aI)(H - bI) restricted to the window.
        double x = h(l, l) * h(l, l) + h(l, l + 1) * h(l + 1, l) - shift_sum * h(l, l) + shift_prod;
        double y = h(l + 1, l) * (h(l, l) + h(l + 1, l + 1) - shift_sum);
        double z = h(l + 2, l + 1) * h(l + 1, l);

        for (int k = l; k <= m - 2; ++k) {
            const bool three = true;
            Reflector r = make_reflector(x, y, z, three);
            const int c0 = std::max(l, k - 1);
            apply_left(h, r, k, 3, c0, n);
            apply_right(h, r, k, 3, 0, std::min(m, k + 3) + 1);
            if (q) apply_right(*q, r, k, 3, 0, n);
            x = h(k + 1, k);
            y = h(k + 2, k);
            z = (k + 3 <= m) ? h(k + 3, k) : 0.0;
            // Restore the Hessenberg zeros behind the bulge.
            if (k > l) {
                h(k + 1, k - 1) = 0.0;
                h(k + 2, k - 1) = 0.0;
            }
        }
        // Final 2-vector reflector zeroing h(m, m-2).
        Reflector r = make_reflector(x, y, 0.0, false);
        apply_left(h, r, m - 1, 2, std::max(l, m - 2), n);
        apply_right(h, r, m - 1, 2, 0, m + 1);
        if (q) apply_right(*q, r, m - 1, 2, 0, n);
        if (m - 2 >= l) h(m, m - 2) = 0.0;
    }
    // Clean the strictly-lower part outside the quasi-diagonal.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j + 1 < i; ++j) h(i, j) = 0.0;
}

std::vector<SchurBlock> detect_blocks(DenseMatrix& t, DenseMatrix* q, bool split_reals) {
    const int n = t.rows();
    std::vector<SchurBlock> blocks;
    int k = 0;
    while (k < n) {
        if (k + 1 < n && t(k + 1, k) != 0.0) {
            const auto [l1, l2] = eig_2x2(t(k, k), t(k, k + 1), t(k + 1, k), t(k + 1, k + 1));
            if (l1.im == 0.0 && split_reals) {
                // rotate the real-eigenvalue pair to triangular form so the
                // diagonal carries the eigenvalues
                split_real_2x2(t, q, k);
                blocks.push_back({k, 1});
                blocks.push_back({k + 1, 1});
            } else {
                blocks.push_back({k, 2});
            }
            k += 2;
        } else {
            blocks.push_back({k, 1});
            k += 1;
        }
    }
    return blocks;
}

} // namespace

std::vector<Cplx> RealSchurResult::eigenvalues() const {
    std::vector<Cplx> vals;
    vals.reserve(t.rows());
    for (const SchurBlock& b : blocks) {
        if (b.size == 1) {
            vals.emplace_back(t(b.start, b.start));
        } else {
            auto [l1, l2] = eig_2x2(t(b.start, b.start), t(b.start, b.start + 1),
                                    t(b.start + 1, b.start), t(b.start + 1, b.start + 1));
            vals.push_back(l1);
            vals.push_back(l2);
        }
    }
    return vals;
}

RealSchurResult real_schur(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("real_schur: matrix not square");
    RealSchurResult out;
    out.t = a;
    out.q = DenseMatrix::identity(a.rows());
    if (a.rows() > 1) {
        hessenberg_reduce(out.t, &out.q);
        francis_iteration(out.t, &out.q);
    }
    out.blocks = detect_blocks(out.t, &out.q, /*split_reals=*/true);
    return out;
}

std::vector<Cplx> eigenvalues(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("eigenvalues: matrix not square");
    DenseMatrix t = a;
    if (a.rows() > 1) {
        hessenberg_reduce(t, nullptr);
        francis_iteration(t, nullptr);
    }
    std::vector<SchurBlock> blocks = detect_blocks(t, nullptr, /*split_reals=*/false);
    std::vector<Cplx> vals;
    for (const SchurBlock& b : blocks) {
        if (b.size == 1) {
            vals.emplace_back(t(b.start, b.start));
        } else {
            auto [l1, l2] = eig_2x2(t(b.start, b.start), t(b.start, b.start + 1),
                                    t(b.start + 1, b.start), t(b.start + 1, b.start + 1));
            vals.push_back(l1);
            vals.push_back(l2);
        }
    }
    return vals;
}

void normalize_2x2(DenseMatrix& t, DenseMatrix& q, int k) {
    const double a = t(k, k), b = t(k, k + 1), c = t(k + 1, k), d = t(k + 1, k + 1);
    const double disc = 0.25 * (a - d) * (a - d) + b * c;
    if (disc >= 0.0)
        throw ParameterError("normalize_2x2: block has real eigenvalues");
    if (a != d) {
        // apply_rotation realizes B' = Mᵀ B M with M = [[cs, -sn], [sn, cs]];
        // equal diagonals need cos(2θ)(a-d) + sin(2θ)(b+c) = 0.
        const double angle = 0.5 * std::atan2(d - a, b + c);
        apply_rotation(t, &q, k, std::cos(angle), std::sin(angle));
    }
    const double alpha = 0.5 * (t(k, k) + t(k + 1, k + 1));
    t(k, k) = alpha;
    t(k + 1, k + 1) = alpha;
}

ComplexSchurResult complex_schur(const DenseMatrix& a) {
    RealSchurResult rs = real_schur(a);
    for (const SchurBlock& b : rs.blocks)
        if (b.size == 2) normalize_2x2(rs.t, rs.q, b.start);

    ComplexSchurResult out;
    out.q = ComplexMatrix::from_real(rs.q);
    out.t = ComplexMatrix::from_real(rs.t);
    const int n = a.rows();
    for (const SchurBlock& b : rs.blocks) {
        if (b.size != 2) continue;
        const int k = b.start;
        const double alpha = rs.t(k, k);
        const double beta1 = rs.t(k, k + 1), beta2 = rs.t(k + 1, k);
        const double mu = std::sqrt(-beta1 * beta2);
        const double s = std::sqrt(beta1 * beta1 + mu * mu);
        // Unitary [v w] with v the eigenvector of [[alpha,beta1],[beta2,alpha]]
        // for alpha + i*mu.
        const Cplx g00(beta1 / s, 0.0), g01(0.0, mu / s);
        const Cplx g10(0.0, mu / s), g11(beta1 / s, 0.0);
        // Rows k,k+1 <- Gᴴ rows; note Gᴴ = [[conj g00, conj g10], [conj g01, conj g11]].
        for (int j = 0; j < n; ++j) {
            const Cplx r0 = out.t(k, j), r1 = out.t(k + 1, j);
            out.t(k, j) = conj(g00) * r0 + conj(g10) * r1;
            out.t(k + 1, j) = conj(g01) * r0 + conj(g11) * r1;
        }
        // Cols k,k+1 <- cols · G.
        for (int i = 0; i < n; ++i) {
            const Cplx c0 = out.t(i, k), c1 = out.t(i, k + 1);
            out.t(i, k) = c0 * g00 + c1 * g10;
            out.t(i, k + 1) = c0 * g01 + c1 * g11;
            const Cplx q0 = out.q(i, k), q1 = out.q(i, k + 1);
            out.q(i, k) = q0 * g00 + q1 * g10;
            out.q(i, k + 1) = q0 * g01 + q1 * g11;
        }
        out.t(k + 1, k) = Cplx();
        out.t(k, k) = Cplx(alpha, mu);
        out.t(k + 1, k + 1) = Cplx(alpha, -mu);
    }
    return out;
}

Cplx GeneralizedEig::min_real_part() const {
    Cplx best = pairs.empty() ? Cplx() : pairs[0].lambda;
    for (const EigenPair& p : pairs)
        if (p.lambda.re < best.re) best = p.lambda;
    return best;
}

GeneralizedEig generalized_eig(const DenseMatrix& k_t, const DenseMatrix& m_t) {
    if (k_t.rows() != k_t.cols() || m_t.rows() != m_t.cols() || k_t.rows() != m_t.rows())
        throw DimensionError("generalized_eig: shape mismatch");
    DenseLu lum(m_t);
    if (lum.min_pivot_ratio() < 1e-14)
        throw SingularityError("generalized_eig: M_t numerically singular");
    const DenseMatrix c = lum.solve(k_t); // M⁻¹K
    ComplexSchurResult cs = complex_schur(c);

    const int n = c.rows();
    const double tnorm = cs.t.frobenius_norm();
    const double smin = std::max(1e-300, 1e-15 * tnorm);

    GeneralizedEig out;
    out.x = ComplexMatrix(n, n);
    out.pairs.resize(n);
    CVector w(n), z(n);
    for (int i = 0; i < n; ++i) {
        const Cplx lambda = cs.t(i, i);
        if (i > 0 && cs.t(i - 1, i - 1).im > 0.0 && lambda.im < 0.0 &&
            std::abs(cs.t(i - 1, i - 1).re - lambda.re) == 0.0 &&
            cs.t(i - 1, i - 1).im == -lambda.im) {
            // Conjugate partner: reuse the previous eigenvector, conjugated.
            for (int r = 0; r < n; ++r) out.x(r, i) = conj(out.x(r, i - 1));
            out.pairs[i].lambda = lambda;
            out.pairs[i].vec.resize(n);
            for (int r = 0; r < n; ++r) out.pairs[i].vec[r] = out.x(r, i);
            continue;
        }
        // Back substitution on (T - lambda I) w = 0 with w[i] = 1.
        std::fill(w.begin(), w.end(), Cplx());
        w[i] = Cplx(1.0);
        for (int j = i - 1; j >= 0; --j) {
            Cplx s;
            for (int k = j + 1; k <= i; ++k) s += cs.t(j, k) * w[k];
            Cplx den = cs.t(j, j) - lambda;
            if (cabs(den) < smin) den = Cplx(smin, 0.0);
            w[j] = -s / den;
        }
        // z = Q w, normalized.
        for (int r = 0; r < n; ++r) {
            Cplx s;
            for (int k = 0; k <= i; ++k) s += cs.q(r, k) * w[k];
            z[r] = s;
        }
        const double nz = cnorm2(z);
        const double inv = (nz > 0.0) ? 1.0 / nz : 1.0;
        for (int r = 0; r < n; ++r) out.x(r, i) = inv * z[r];
        out.pairs[i].lambda = lambda;
        out.pairs[i].vec.resize(n);
        for (int r = 0; r < n; ++r) out.pairs[i].vec[r] = out.x(r, i);
    }
    return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
    // One-sided Jacobi on the columns of a (or aᵀ when wide).
    DenseMatrix m = (a.rows() >= a.cols()) ? a : a.transposed();
    const int rows = m.rows(), cols = m.cols();
    bool rotated = true;
    for (int sweep = 0; sweep < 60 && rotated; ++sweep) {
        rotated = false;
        for (int i = 0; i < cols - 1; ++i) {
            for (int j = i + 1; j < cols; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                for (int r = 0; r < rows; ++r) {
                    aii += m(r, i) * m(r, i);
                    ajj += m(r, j) * m(r, j);
                    aij += m(r, i) * m(r, j);
                }
                if (std::abs(aij) <= 1e-15 * std::sqrt(aii * ajj)) continue;
                rotated = true;
                const double tau = (ajj - aii) / (2.0 * aij);
                const double t = ((tau >= 0.0) ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                for (int r = 0; r < rows; ++r) {
                    const double vi = m(r, i), vj = m(r, j);
                    m(r, i) = cs * vi - sn * vj;
                    m(r, j) = sn * vi + cs * vj;
                }
            }
        }
    }
    std::vector<double> sigma(cols);
    for (int i = 0; i < cols; ++i) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += m(r, i) * m(r, i);
        sigma[i] = std::sqrt(s);
    }
    std::sort(sigma.rbegin(), sigma.rend());
    return sigma;
}

double cond_2norm(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionError("cond_2norm: matrix not square");
    const std::vector<double> sigma = singular_values(a);
    if (sigma.empty()) return 1.0;
    if (sigma.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sigma.front() / sigma.back();
}

std::vector<double> generalized_sym_eigenvalues(const DenseMatrix& a, const DenseMatrix& b_spd) {
    DenseCholesky chol(b_spd);
    const int n = a.rows();
    // C = L⁻¹ A L⁻ᵀ, symmetric.
    DenseMatrix c(n, n);
    Vector col(n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = a(i, j);
        const Vector w = chol.forward(col);
        for (int i = 0; i < n; ++i) c(i, j) = w[i];
    }
    // Right-multiply by L⁻ᵀ: rows solved against L.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) col[j] = c(i, j);
        const Vector w = chol.forward(col);
        for (int j = 0; j < n; ++j) c(i, j) = w[j];
    }
    // Symmetrize against roundoff before the QR iteration.
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = c(j, i) = v;
        }
    std::vector<Cplx> vals = eigenvalues(c);
    std::vector<double> out(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) out[i] = vals[i].re;
    std::sort(out.begin(), out.end());
    return out;
}

double min_symmetric_eigenvalue(const DenseMatrix& a) {
    const int n = a.rows();
    DenseMatrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    const std::vector<Cplx> vals = eigenvalues(s);
    double mn = std::numeric_limits<double>::infinity();
    for (const Cplx& v : vals) mn = std::min(mn, v.re);
    return mn;
}

std::vector<Cplx> TimeDecomposition::eigenvalue_list() const {
    std::vector<Cplx> vals;
    switch (kind) {
        case Kind::Diag:
            vals = diag;
            break;
        case Kind::ComplexSchur:
            for (int i = 0; i < t.rows(); ++i) vals.push_back(t(i, i));
            break;
        case Kind::RealSchur:
            for (const SchurBlock& b : blocks) {
                if (b.size == 1) {
                    vals.emplace_back(tr(b.start, b.start));
                } else {
                    const double alpha = tr(b.start, b.start);
                    const double mu = std::sqrt(-tr(b.start, b.start + 1) * tr(b.start + 1, b.start));
                    vals.emplace_back(alpha, mu);
                    vals.emplace_back(alpha, -mu);
                }
            }
            break;
    }
    return vals;
}

TimeDecomposition decompose_time(const DenseMatrix& k_t, const DenseMatrix& m_t,
                                 TimeDecomposition::Kind kind) {
    TimeDecomposition out;
    out.kind = kind;
    DenseLu lum(m_t);
    if (lum.min_pivot_ratio() < 1e-14)
        throw SingularityError("decompose_time: M_t numerically singular");
    switch (kind) {
        case TimeDecomposition::Kind::Diag: {
            GeneralizedEig ge = generalized_eig(k_t, m_t);
            out.x = ge.x;
            out.diag.reserve(ge.pairs.size());
            for (const EigenPair& p : ge.pairs) out.diag.push_back(p.lambda);
            // Y = (M_t X)⁻¹.
            ComplexMatrix mx = cmatmul(ComplexMatrix::from_real(m_t), out.x);
            out.y = ComplexLu(std::move(mx)).inverse();
            break;
        }
        case TimeDecomposition::Kind::ComplexSchur: {
            const DenseMatrix c = lum.solve(k_t);
            ComplexSchurResult cs = complex_schur(c);
            out.x = cs.q;
            out.t = cs.t;
            // Y = Qᴴ M_t⁻¹ = (M_tᵀ⁻¹ conj(Q))ᵀ.
            const DenseMatrix wre = lum.solve_transposed(cs.q.real_part());
            const DenseMatrix wim = lum.solve_transposed(cs.q.imag_part());
            const int n = c.rows();
            out.y = ComplexMatrix(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) out.y(i, j) = Cplx(wre(j, i), -wim(j, i));
            break;
        }
        case TimeDecomposition::Kind::RealSchur: {
            const DenseMatrix c = lum.solve(k_t);
            RealSchurResult rs = real_schur(c);
            for (const SchurBlock& b : rs.blocks)
                if (b.size == 2) normalize_2x2(rs.t, rs.q, b.start);
            out.qr = rs.q;
            out.tr = rs.t;
            out.blocks = rs.blocks;
            // Y = Qᵀ M_t⁻¹ = (M_tᵀ⁻¹ Q)ᵀ.
            out.yr = lum.solve_transposed(rs.q).transposed();
            break;
        }
    }
    return out;
}

} // namespace stmg
