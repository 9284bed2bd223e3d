#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "strata/bundles.hpp"
#include "strata/gap.hpp"

using namespace strata;

namespace {

Eigen::VectorXcd vec(std::initializer_list<cplx> v) {
    Eigen::VectorXcd out(v.size());
    int i = 0;
    for (auto x : v) out(i++) = x;
    return out;
}

Subspace span1(const Eigen::VectorXcd& v) { return Subspace::span(v); }

Subspace random_subspace(std::mt19937& rng, int n) {
    std::uniform_int_distribution<int> dim(0, n);
    std::normal_distribution<double> g;
    int k = dim(rng);
    if (k == 0) return Subspace::zero(n);
    Eigen::MatrixXcd v(n, k);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < k; ++c) v(r, c) = cplx(g(rng), g(rng));
    return Subspace::span(v);
}

}  // namespace

TEST_CASE("gap distance on the listed examples") {
    auto e1 = span1(vec({1, 0})), e2 = span1(vec({0, 1}));
    CHECK(gap_distance(e1, e1) == doctest::Approx(0).epsilon(1e-12));
    CHECK(std::abs(gap_distance(e1, e2) - 1) < 1e-12);
    CHECK(std::abs(gap_distance(e1, span1(vec({1, 1}))) - 1 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("gap distance is a metric bounded by one") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = random_subspace(rng, 5), b = random_subspace(rng, 5), c = random_subspace(rng, 5);
        double ab = gap_distance(a, b), ba = gap_distance(b, a);
        CHECK(ab >= 0);
        CHECK(std::abs(ab - ba) < 1e-10);
        CHECK(gap_distance(a, a) < 1e-10);
        CHECK(ab <= gap_distance(a, c) + gap_distance(c, b) + 1e-10);
        CHECK(ab <= 1 + 1e-10);
        if (ab < 1 - 1e-10) CHECK(a.dim() == b.dim());
    }
}

TEST_CASE("numerical kernels") {
    Eigen::MatrixXcd n(2, 2);
    n << 0, 1, 0, 0;
    CHECK(gap_distance(kernel_subspace(n), span1(vec({1, 0}))) < 1e-12);
    CHECK(kernel_subspace(Eigen::MatrixXcd::Zero(2, 2)).dim() == 2);
    Eigen::MatrixXcd ones = Eigen::MatrixXcd::Ones(2, 2);
    CHECK(gap_distance(kernel_subspace(ones), span1(vec({1, -1}))) < 1e-12);
}

TEST_CASE("generalized eigenspaces") {
    Eigen::MatrixXcd j(2, 2);
    j << 3, 1, 0, 3;
    CHECK(generalized_eigenspace(j, 3).dim() == 2);
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = 2;
    CHECK(gap_distance(generalized_eigenspace(d, 1), span1(vec({1, 0}))) < 1e-12);

    // kernel of (A(z) - z^2)^2 for the first counterexample is the plane
    // (z - z^2)^2 v1 + (z - z^2) v2 + z v3 = 0
    auto fam = fx::counterexample1();
    double z = 0.1;
    auto A = fam.eval({z});
    auto g = generalized_eigenspace(A, z * z);
    REQUIRE(g.dim() == 2);
    double a = (z - z * z) * (z - z * z), b = z - z * z, c = z;
    Eigen::MatrixXcd plane(3, 2);
    plane << b, c, -a, 0, 0, -a;
    CHECK(gap_distance(g, Subspace::span(plane)) < 1e-8);
}

TEST_CASE("intertwiner dimension") {
    CHECK(intertwiner_dimension(Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Identity(2, 2)) == 4);
    Eigen::MatrixXcd j(2, 2);
    j << 0, 1, 0, 0;
    CHECK(intertwiner_dimension(j, j) == 2);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2), b = Eigen::MatrixXcd::Zero(2, 2);
    a(0, 0) = 1;
    a(1, 1) = 2;
    b(0, 0) = 3;
    b(1, 1) = 4;
    CHECK(intertwiner_dimension(a, b) == 0);

    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXcd m(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = cplx(g(rng), g(rng));
        CHECK(intertwiner_dimension(m, m) == 4);
    }
}

TEST_CASE("kernel sheaf values on a line") {
    using fx::Q;
    auto x = fx::var(1, 0), o = fx::cst(1, 1), n = fx::zero(1);
    auto v = kernel_sheaf_value_1d({{x, n}, {n, o}}, Q(0));
    CHECK(v.dim() == 0);
    v = kernel_sheaf_value_1d({{x, n}, {n, n}}, Q(0));
    CHECK(gap_distance(v, span1(vec({0, 1}))) < 1e-12);

    // (A - 0)^3 of the 3x3 example on the line (t, c t)
    for (long c : {1L, 2L, -3L}) {
        auto t = fx::var(1, 0), ct = t * Q(c), z = fx::zero(1);
        std::vector<std::vector<fx::PQ>> a = {{t, z, ct}, {z, t, ct}, {z, z, z}};
        auto cube = a;
        for (int pw = 1; pw < 3; ++pw) {
            std::vector<std::vector<fx::PQ>> next(3, std::vector<fx::PQ>(3, z));
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) next[i][j] += cube[i][k] * a[k][j];
            cube = next;
        }
        auto s = kernel_sheaf_value_1d(cube, Q(0));
        CHECK(gap_distance(s, span1(vec({double(-c), double(-c), 1}))) < 1e-12);
    }
}

TEST_CASE("kernel sheaf value sits inside the pointwise kernel") {
    using fx::Q;
    auto x = fx::var(1, 0), o = fx::cst(1, 1), z = fx::zero(1);
    std::vector<std::vector<fx::PQ>> t = {{x, x * x}, {z, x}};
    auto s = kernel_sheaf_value_1d(t, Q(0));
    auto k = kernel_subspace(Eigen::MatrixXcd::Zero(2, 2));
    // projector ordering: P_s P_k = P_s
    CHECK((s.projector() * k.projector() - s.projector()).norm() < 1e-12);
    // constant kernel dimension near 1 gives equality
    std::vector<std::vector<fx::PQ>> u = {{x, x}, {o, o}};
    auto su = kernel_sheaf_value_1d(u, Q(1));
    Eigen::MatrixXcd u1(2, 2);
    u1 << 1, 1, 1, 1;
    CHECK(gap_distance(su, kernel_subspace(u1)) < 1e-12);
}

TEST_CASE("limits along paths") {
    auto cex1 = fx::counterexample1();
    auto paths1 = default_paths(1);
    auto r = limit_along_path(cex1, 0, {0.0}, paths1[0], dyadic_samples(1, 8));
    REQUIRE(r.limit);
    CHECK(gap_distance(*r.limit, span1(vec({1, 0, 0}))) < 1e-8);

    auto fam = fx::three_by_three();
    using fx::Q;
    auto t = fx::var(1, 0), z = fx::zero(1);
    Path diag{"diagonal", {t, t}}, ray{"ray1", {t, z}};
    auto rd = limit_along_path(fam, 1, {0.0, 0.0}, diag, dyadic_samples(1, 8));
    auto rr = limit_along_path(fam, 1, {0.0, 0.0}, ray, dyadic_samples(1, 8));
    REQUIRE(rd.limit);
    REQUIRE(rr.limit);
    CHECK(gap_distance(*rd.limit, span1(vec({-1, -1, 1}))) < 1e-8);
    CHECK(gap_distance(*rr.limit, span1(vec({0, 0, 1}))) < 1e-8);
    CHECK(gap_distance(*rd.limit, *rr.limit) > 0.5);

    // numerical limit agrees with the exact sheaf value on the same line
    auto exact = exact_limit_along_path(fam, 1, {Q(0), Q(0)}, diag);
    CHECK(gap_distance(exact, *rd.limit) < 1e-8);
}

TEST_CASE("jordanizability reports") {
    ReportConfig cfg;
    auto r1 = jordanizability_report(fx::counterexample1(), {0.0}, cfg);
    CHECK(r1.cond1);
    CHECK(r1.cond2);
    CHECK_FALSE(r1.cond3);
    CHECK_FALSE(r1.verdict);

    auto r2 = jordanizability_report(fx::counterexample2(), {0.0}, cfg);
    CHECK_FALSE(r2.cond1);
    CHECK_FALSE(r2.verdict);

    auto r3 = jordanizability_report(fx::three_by_three(), {0.0, 0.0}, cfg);
    CHECK_FALSE(r3.cond2);
    CHECK_FALSE(r3.verdict);

    auto r4 = jordanizability_report(fx::three_by_three(), {0.0, 1.0}, cfg);
    CHECK(r4.cond2);
    CHECK_FALSE(r4.cond3);
    CHECK_FALSE(r4.verdict);

    CHECK(jordanizability_report(fx::counterexample1(), {0.3}, cfg).verdict);
    CHECK(jordanizability_report(fx::counterexample2(), {0.2}, cfg).verdict);
    CHECK(jordanizability_report(fx::three_by_three(), {0.5, 0.25}, cfg).verdict);
    for (double x : {-0.5, 0.0, 0.7}) {
        auto r = jordanizability_report(fx::single_bundle(), {x}, cfg);
        CHECK(r.verdict);
        int total = 0;
        for (const auto& b : r.branches)
            if (b.limit) total += b.limit->dim();
        CHECK(total == 3);
    }
}
