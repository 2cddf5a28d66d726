#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stmg/sparse.hpp"
#include "stmg/splines.hpp"

using namespace stmg;

TEST_CASE("open uniform knot vectors") {
    SplineBasis b = SplineBasis::make_uniform(1, 1, 0.0, 1.0);
    CHECK(b.num_basis() == 2);
    CHECK(b.knot_vector().knots() == std::vector<double>{0.0, 0.0, 1.0, 1.0});

    SplineBasis b4 = SplineBasis::make_uniform(1, 4, 0.0, 1.0);
    CHECK(b4.num_basis() == 5);
    const auto bp = b4.knot_vector().breakpoints();
    REQUIRE(bp.size() == 5);
    for (size_t i = 0; i + 1 < bp.size(); ++i) CHECK(bp[i + 1] - bp[i] == doctest::Approx(0.25));

    CHECK(SplineBasis::make_uniform(3, 8, 0.0, 1.0).num_basis() == 11);

    CHECK_THROWS_AS(SplineBasis::make_uniform(0, 4, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(SplineBasis::make_uniform(2, 0, 0.0, 1.0), ParameterError);
    CHECK_THROWS_AS(SplineBasis::make_uniform(2, 4, 1.0, 1.0), ParameterError);
}

TEST_CASE("hat function evaluation") {
    SplineBasis b = SplineBasis::make_uniform(1, 2, 0.0, 1.0);
    auto [first, vals] = b.eval_nonzero(0.25);
    CHECK(first == 0);
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == doctest::Approx(0.5));
    CHECK(vals[1] == doctest::Approx(0.5));

    CHECK_THROWS_AS(b.eval_nonzero(-0.1), DomainError);
    CHECK_THROWS_AS(b.eval_nonzero(1.1), DomainError);
}

TEST_CASE("continuity across knots (degree 2)") {
    SplineBasis b = SplineBasis::make_uniform(2, 4, 0.0, 1.0);
    const double knot = 0.5, eps = 1e-9;
    const auto left = b.eval_all(knot - eps);
    const auto right = b.eval_all(knot + eps);
    for (int i = 0; i < b.num_basis(); ++i)
        CHECK(left[i] == doctest::Approx(right[i]).epsilon(1e-6));
}

TEST_CASE("partition of unity at 1000 random points") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> vals;
    for (int p : {1, 2, 3, 4, 5}) {
        for (int nel : {1, 2, 5, 8}) {
            SplineBasis b = SplineBasis::make_uniform(p, nel, 0.0, 1.0);
            for (int k = 0; k < 1000; ++k) {
                const double x = dist(rng);
                b.eval_nonzero(x, 0, vals);
                double sum = 0.0;
                for (double v : vals) {
                    CHECK(v >= 0.0);
                    sum += v;
                }
                REQUIRE(std::abs(sum - 1.0) <= 1e-12);
            }
        }
    }
}

TEST_CASE("derivatives sum to zero and match finite differences") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    for (int p : {1, 2, 3, 4}) {
        SplineBasis b = SplineBasis::make_uniform(p, 6, 0.0, 1.0);
        std::vector<double> d;
        for (int k = 0; k < 50; ++k) {
            const double x = dist(rng);
            b.eval_nonzero(x, 1, d);
            double sum = 0.0;
            for (double v : d) sum += v;
            CHECK(std::abs(sum) <= 1e-10);
        }
        // central differences on interior points away from knots
        const double h = 1e-6;
        for (int k = 0; k < 20; ++k) {
            const double x = dist(rng);
            const auto fm = b.eval_all(x - h);
            const auto fp = b.eval_all(x + h);
            const auto dd = b.eval_all(x, 1);
            for (int i = 0; i < b.num_basis(); ++i) {
                const double fd = (fp[i] - fm[i]) / (2 * h);
                if (std::abs(dd[i]) > 1e-3)
                    CHECK(std::abs(fd - dd[i]) / std::abs(dd[i]) <= 1e-6);
            }
        }
    }
}

TEST_CASE("gauss rules: weights sum to span length, exact for polynomials") {
    for (int p : {1, 2, 3, 5}) {
        SplineBasis b = SplineBasis::make_uniform(p, 3, 0.0, 2.0);
        QuadratureRule rule = QuadratureRule::for_basis(b);
        const auto& knots = b.knot_vector().knots();
        double total = 0.0;
        for (const auto& sp : rule.spans()) {
            double wsum = 0.0;
            for (double w : sp.weights) {
                CHECK(w > 0.0);
                wsum += w;
            }
            CHECK(wsum == doctest::Approx(knots[sp.span_index + 1] - knots[sp.span_index]));
            total += wsum;
        }
        CHECK(total == doctest::Approx(2.0));
        // q = p+1 points are exact through degree 2(p+1)-1 = 2p+1
        for (int deg = 0; deg <= 2 * p + 1; ++deg) {
            double integral = 0.0;
            for (const auto& sp : rule.spans())
                for (size_t g = 0; g < sp.points.size(); ++g)
                    integral += sp.weights[g] * std::pow(sp.points[g], deg);
            CHECK(integral == doctest::Approx(std::pow(2.0, deg + 1) / (deg + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("knot insertion: identity, hat refinement, function preservation") {
    SplineBasis c1 = SplineBasis::make_uniform(2, 4, 0.0, 1.0);
    SparseMatrix id = knot_insertion_matrix(c1, c1);
    CHECK(id.rows() == c1.num_basis());
    for (int i = 0; i < id.rows(); ++i)
        for (int j = 0; j < id.cols(); ++j)
            CHECK(id.at(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

    SplineBasis h1 = SplineBasis::make_uniform(1, 1, 0.0, 1.0);
    SplineBasis h2 = SplineBasis::make_uniform(1, 2, 0.0, 1.0);
    SparseMatrix e = knot_insertion_matrix(h1, h2);
    REQUIRE(e.rows() == 3);
    REQUIRE(e.cols() == 2);
    CHECK(e.at(0, 0) == doctest::Approx(1.0));
    CHECK(e.at(1, 0) == doctest::Approx(0.5));
    CHECK(e.at(1, 1) == doctest::Approx(0.5));
    CHECK(e.at(2, 1) == doctest::Approx(1.0));

    // p=3, 4 -> 8 elements: the represented function is unchanged.
    SplineBasis c = SplineBasis::make_uniform(3, 4, 0.0, 1.0);
    SplineBasis f = SplineBasis::make_uniform(3, 8, 0.0, 1.0);
    SparseMatrix ins = knot_insertion_matrix(c, f);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector coarse(c.num_basis());
    for (double& v : coarse) v = dist(rng);
    const Vector fine = ins.apply(coarse);
    for (int k = 0; k <= 200; ++k) {
        const double x = k / 200.0;
        const auto vc = c.eval_all(x);
        const auto vf = f.eval_all(x);
        double uc = 0.0, uf = 0.0;
        for (int i = 0; i < c.num_basis(); ++i) uc += coarse[i] * vc[i];
        for (int i = 0; i < f.num_basis(); ++i) uf += fine[i] * vf[i];
        REQUIRE(std::abs(uc - uf) <= 1e-13);
    }
    // rows sum to one
    for (int i = 0; i < ins.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < ins.cols(); ++j) s += ins.at(i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }

    SplineBasis other = SplineBasis::make_uniform(3, 3, 0.0, 1.0);
    CHECK_THROWS_AS(knot_insertion_matrix(c, other), NestingError);
    SplineBasis wrong_deg = SplineBasis::make_uniform(2, 8, 0.0, 1.0);
    CHECK_THROWS_AS(knot_insertion_matrix(c, wrong_deg), NestingError);
}

TEST_CASE("slab merge and broken pair bases") {
    SplineBasis left = SplineBasis::make_uniform(3, 4, 0.0, 0.1);
    SplineBasis right = SplineBasis::make_uniform(3, 4, 0.1, 0.2);
    SplineBasis merged = merge_slab_bases(left, right);
    CHECK(merged.num_elements() == 4);
    CHECK(merged.a() == 0.0);
    CHECK(merged.b() == 0.2);

    SplineBasis broken = broken_pair_basis(left, right);
    CHECK(broken.num_basis() == left.num_basis() + right.num_basis());

    // the merged space embeds exactly into the broken space
    SparseMatrix e = knot_insertion_matrix(merged, broken);
    CHECK(e.rows() == broken.num_basis());
    CHECK(e.cols() == merged.num_basis());

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector cm(merged.num_basis());
    for (double& v : cm) v = dist(rng);
    const Vector cb = e.apply(cm);
    // split coefficients evaluate to the same function on each half
    for (int k = 1; k < 100; ++k) {
        const double t = 0.2 * k / 100.0;
        const SplineBasis& half = (t < 0.1) ? left : right;
        const int off = (t < 0.1) ? 0 : left.num_basis();
        const auto vm = merged.eval_all(t);
        const auto vh = half.eval_all(t);
        double um = 0.0, uh = 0.0;
        for (int i = 0; i < merged.num_basis(); ++i) um += cm[i] * vm[i];
        for (int i = 0; i < half.num_basis(); ++i) uh += cb[off + i] * vh[i];
        REQUIRE(std::abs(um - uh) <= 1e-12);
    }
}
