#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "strata/appendix.hpp"

using namespace strata;
using fx::Q;

namespace {

// The three forms evaluated on alpha = t^A etc. (unit amplitudes): each is a
// single power of t times the returned coefficient.
std::array<mpq_class, 3> monomial_residual(const MonomialFamily& f, const mpq_class& c) {
    mpq_class A = f.zero[0] ? 0 : mpq_class(f.exps[0]);
    mpq_class B = f.zero[1] ? 0 : mpq_class(f.exps[1]);
    mpq_class G = f.zero[2] ? 0 : mpq_class(f.exps[2]);
    mpq_class a = f.zero[0] ? 0 : 1, b = f.zero[1] ? 0 : 1, g = f.zero[2] ? 0 : 1;
    return {a * b * ((1 - c) * A - B), a * g * ((1 + c) * A - G), b * g * ((1 + c) * B - (1 - c) * G)};
}

std::vector<double> grid(double t0, double t1, int steps) {
    std::vector<double> g;
    for (int k = 0; k <= steps; ++k) g.push_back(t0 + (t1 - t0) * k / steps);
    return g;
}

}  // namespace

TEST_CASE("Pfaffian residual") {
    ConstMatrix<Q> A0 = {{Q(1), Q(0)}, {Q(0), Q(2)}}, B0 = {{Q(0), Q(3)}, {fx::rat(1, 2), Q(0)}};
    std::vector<Q> c = {Q(0)};
    SeriesMatrix<Q> K(2, 1, c, 4);
    auto r0 = malgrange_pfaffian_residual(A0, B0, K, 3);
    CHECK(r0.max_abs() == 0);
    CHECK(r0.A(0, 0).coeffs == fx::cst(1, 1));
    CHECK(r0.A(0, 1).coeffs == fx::cst(1, 0));

    ConstMatrix<Q> Z = {{Q(0), Q(0)}, {Q(0), Q(0)}};
    auto t = fx::var(1, 0);
    SeriesMatrix<Q> Kd(2, 1, c, 4);
    Kd(0, 0).coeffs = t + t * t;
    Kd(1, 1).coeffs = t * Q(3);
    CHECK(malgrange_pfaffian_residual(A0, Z, Kd, 3).max_abs() == 0);

    SeriesMatrix<Q> Ko(2, 1, c, 4);
    Ko(0, 1).coeffs = t;
    auto r = malgrange_pfaffian_residual(A0, Z, Ko, 3);
    // [A0 + K, dK] with K = t e12: [diag(1,2), e12] = -e12
    CHECK(r.omega[0](0, 1).coeffs == fx::cst(1, -1));
    CHECK(r.max_abs() > 0);

    SeriesMatrix<Q> bad(2, 1, c, 4);
    bad(0, 0).coeffs = fx::cst(1, 1);
    CHECK_THROWS_AS(malgrange_pfaffian_residual(A0, Z, bad, 3), Error);
}

TEST_CASE("integral curves of the three-form system") {
    auto r = nonversal_curve(Q(1), Q(1), Q(1), Q(2), grid(0, 1, 10));
    CHECK(r.max_residual <= 1e-10);
    for (const auto& e : r.exact) CHECK(e == Q(0));
    auto z = nonversal_curve(Q(0), Q(0), Q(0), fx::rat(-3, 7), grid(0, 1, 10));
    CHECK(z.max_residual == 0);
    auto p = nonversal_curve(Q(1), Q(1), Q(1), Q(2), grid(0, 1, 10), Q(1) - Q(2) + fx::rat(1, 10));
    CHECK(p.exact[0] != Q(0));
    CHECK(p.max_residual > 1e-3);

    std::mt19937 rng(17);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    for (int trial = 0; trial < 30; ++trial) {
        Q a = fx::rat(num(rng), den(rng)), b = fx::rat(num(rng), den(rng)), g = fx::rat(num(rng), den(rng));
        Q c(fx::rat(num(rng), den(rng)).re, fx::rat(num(rng), den(rng)).re);
        auto rr = nonversal_curve(a, b, g, c, grid(-0.5, 0.5, 6));
        for (const auto& e : rr.exact) CHECK(e == Q(0));
        CHECK(rr.max_residual <= 1e-6);
    }
}

TEST_CASE("monomial families for rational c") {
    auto half = rational_c_families(1, 2);
    REQUIRE(half.size() == 1);
    CHECK(half[0].exps[0] == 2);
    CHECK(half[0].exps[1] == 1);
    CHECK(half[0].exps[2] == 3);
    auto m2 = rational_c_families(-2, 1);
    REQUIRE(m2.size() == 1);
    CHECK(m2[0].exps[0] == 1);
    CHECK(m2[0].exps[1] == 3);
    CHECK(m2[0].zero[2]);
    auto p2 = rational_c_families(2, 1);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].exps[0] == 1);
    CHECK(p2[0].zero[1]);
    CHECK(p2[0].exps[2] == 3);

    for (long q = 1; q <= 9; ++q)
        for (long p = -25; p <= 25; ++p) {
            if (std::gcd(p, q) != 1 || p == q || p == -q) continue;
            auto fams = rational_c_families(p, q);
            bool even_case = -q < p && p < q && (p + q) % 2 == 0;
            CHECK(fams.size() == (even_case ? 2u : 1u));
            for (const auto& f : fams) {
                CHECK(f.verified);
                auto res = monomial_residual(f, mpq_class(p, q));
                for (const auto& v : res) CHECK(v == 0);
                for (const auto& v : f.residual) CHECK(v == Q(0));
            }
        }
    CHECK_THROWS_AS(rational_c_families(1, 1), Error);
    CHECK_THROWS_AS(rational_c_families(-1, 1), Error);
    CHECK_THROWS_AS(rational_c_families(2, 4), Error);
}

TEST_CASE("coordinate axis lines") {
    auto ax = coordinate_axis_lines(fx::rat(1, 3));
    REQUIRE(ax.lines.size() == 3);
    for (const auto& l : ax.lines) {
        CHECK(l.verified);
        for (const auto& v : monomial_residual(l, mpq_class(1, 3))) CHECK(v == 0);
    }
    CHECK(ax.tangent_determinant != Q(0));
}

TEST_CASE("2x2 classification") {
    std::vector<Q> x0 = {Q(0)};
    auto x = fx::var(1, 0), z = fx::zero(1);
    auto g = x, m = -x;
    Q kappa = fx::rat(3, 2);
    auto l = (m - g) * (m - g) * kappa;
    auto c1 = classify_2x2(g, z, l, m, x0);
    CHECK(c1.type == DeformationType::TypeI);
    REQUIRE(c1.kappa);
    CHECK(*c1.kappa == kappa);
    CHECK(type1_witness_defect(g, m, kappa) == 0);

    CHECK(classify_2x2(g, z, z, g, x0).type == DeformationType::TypeII);
    CHECK(classify_2x2(g, x, z, g, x0).type == DeformationType::TypeIII);
    // l not a multiple of (m - g)^2
    CHECK(classify_2x2(g, z, x * x * x, m, x0).type == DeformationType::NotIntegrable);
    // h nonzero with g != m violates (g - m) dh = 0
    CHECK(classify_2x2(g, x, z, m, x0).type == DeformationType::NotIntegrable);
    // g = m, h = 0, l != 0 satisfies the identities but fits none of the types
    CHECK(classify_2x2(g, z, x * x, g, x0).type == DeformationType::Unclassified);

    // two variables
    std::vector<Q> y0 = {Q(0), Q(0)};
    auto u = fx::var(2, 0), v = fx::var(2, 1);
    auto g2 = u + v, m2 = u - v;
    auto l2 = (m2 - g2) * (m2 - g2) * fx::rat(-2);
    auto c2 = classify_2x2(g2, fx::zero(2), l2, m2, y0);
    CHECK(c2.type == DeformationType::TypeI);
    CHECK(type1_witness_defect(g2, m2, fx::rat(-2)) == 0);
}
