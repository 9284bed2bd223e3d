#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "strata/darboux.hpp"
#include "strata/gauge.hpp"

using namespace strata;
using fx::Q;

namespace {

bool jets_equal(const SeriesMatrix<Q>& a, const SeriesMatrix<Q>& b) {
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            if (!(a(i, j).coeffs == b(i, j).coeffs)) return false;
    return true;
}

InitialValue<Q> zero_value(int n) { return InitialValue<Q>(n, std::vector<Q>(n)); }

}  // namespace

TEST_CASE("residuals of simple jets") {
    auto p = fx::n2_regular_problem();
    SeriesMatrix<Q> zero(2, 2, p.x0, 3);
    CHECK(de_residual(p, zero, 2).max_abs() == 0);

    auto q = p;
    q.b = {Q(0), Q(0)};
    auto ones = fx::constant_matrix(2, 2, q.x0, 3, {{Q(0), Q(1)}, {Q(1), Q(0)}});
    auto r = de_residual(q, ones, 2);
    CHECK(r.de2.at(0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(de_residual(p, zero, 3), Error);
}

TEST_CASE("n = 2 jet equals the closed-form Taylor series") {
    auto p = fx::n2_regular_problem();
    InitialValue<Q> F0 = {{Q(0), fx::rat(3)}, {fx::rat(-2, 3), Q(0)}};
    const int K = 6;
    auto res = de_solve_jet(p, F0, K);
    CHECK(res.feasible);
    CHECK(res.residual.max_abs() == 0);
    for (int k = 0; k < 2; ++k) {
        int h = 1 - k;
        mpq_class e = p.b[h].re - p.b[k].re - 1;
        mpq_class c = p.x0[h].re - p.x0[k].re;
        for (int a = 0; a <= K; ++a)
            for (int bq = 0; a + bq <= K; ++bq) {
                // a = power of y_h, bq = power of y_k
                std::vector<int> exps(2);
                exps[h] = a;
                exps[k] = bq;
                Q expect(fx::closed_form_coeff(F0[k][h].re, e, c, a, bq));
                CHECK(res.jet(k, h).coeff(Monomial(exps)) == expect);
            }
    }
    CHECK(jets_equal(res.jet, de_oracle_solve(p, F0, K)));
}

TEST_CASE("zero initial value gives the zero jet") {
    std::mt19937 rng(3);
    auto p = fx::random_problem(rng, 3, 2, true);
    auto res = de_solve_jet(p, zero_value(3), 4);
    CHECK(res.feasible);
    for (const auto& e : res.jet.entries) CHECK(e.coeffs.is_zero());
    CHECK(jets_equal(de_oracle_solve(p, zero_value(3), 4), res.jet));
}

TEST_CASE("infeasible coalescent initial value is flagged, not thrown") {
    DEProblem<Q> p;
    p.d = 2;
    p.n = 2;
    p.x0 = {Q(0), Q(0)};
    p.f = {fx::var(2, 0), fx::var(2, 1)};
    p.b = {Q(0), Q(0)};
    InitialValue<Q> F0 = {{Q(0), Q(1)}, {Q(1), Q(0)}};
    CHECK(base_constraint_residual(p, F0) > 0);
    auto res = de_solve_jet(p, F0, 3);
    CHECK_FALSE(res.feasible);
    CHECK_FALSE(res.base_constraint_ok);
    CHECK(res.residual.max_abs() > 0);
}

TEST_CASE("n = 3 coalescent instance agrees with the oracle") {
    auto p = fx::n3_coalescent_problem();
    auto F0 = fx::n3_coalescent_initial_value(p);
    CHECK(base_constraint_residual(p, F0) == 0);
    auto res = de_solve_jet(p, F0, 4);
    CHECK(res.feasible);
    CHECK(res.residual.max_abs() == 0);
    CHECK(jets_equal(res.jet, de_oracle_solve(p, F0, 4)));
}

TEST_CASE("random feasible instances: jet, oracle and residual") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 2 + trial % 2, d = 1 + trial % 3;
        bool coalesce = n == 3 && trial % 4 == 1;
        if (coalesce && d < 2) d = 2;
        auto p = fx::random_problem(rng, n, d, coalesce);
        auto F0 = fx::feasible_initial_value(p, rng);
        CAPTURE(trial);
        auto res = de_solve_jet(p, F0, 3);
        CHECK(res.feasible);
        CHECK(res.residual.max_abs() == 0);
        CHECK(jets_equal(res.jet, de_oracle_solve(p, F0, 3)));
    }
}

TEST_CASE("resonance and genericity errors") {
    auto p = fx::n3_coalescent_problem();
    p.b = {Q(0), Q(2), Q(0)};
    try {
        de_solve_jet(p, zero_value(3), 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "resonant");
    }
    DEProblem<Q> g;
    g.d = 1;
    g.n = 2;
    g.x0 = {Q(0)};
    g.f = {fx::var(1, 0), fx::var(1, 0) + fx::cst(1, 1)};
    g.b = {Q(0), Q(0)};
    try {
        g.validate();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "genericity");
    }
}

TEST_CASE("floating mode matches exact mode") {
    auto p = fx::n2_regular_problem();
    InitialValue<Q> F0 = {{Q(0), fx::rat(1, 2)}, {fx::rat(2), Q(0)}};
    auto exact = de_solve_jet(p, F0, 4);
    DEProblem<cplx> pf;
    pf.d = p.d;
    pf.n = p.n;
    for (const auto& x : p.x0) pf.x0.push_back(to_cplx(x));
    for (const auto& f : p.f) pf.f.push_back(to_float(f));
    for (const auto& b : p.b) pf.b.push_back(to_cplx(b));
    InitialValue<cplx> Ff(2, std::vector<cplx>(2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Ff[i][j] = to_cplx(F0[i][j]);
    auto flt = de_solve_jet(pf, Ff, 4);
    CHECK(flt.feasible);
    CHECK(flt.residual.max_abs() < 1e-9);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [m, c] : exact.jet(i, j).coeffs.terms())
                CHECK(std::abs(flt.jet(i, j).coeff(m) - to_cplx(c)) < 1e-10);
}

TEST_CASE("pulling back a jet in the spectrum coordinates solves the problem in x") {
    // Gamma solves the system for f_i = u_i; L = Gamma(sigma(x)) must solve it
    // for the nonlinear f themselves.
    DEProblem<Q> u;
    u.d = 2;
    u.n = 2;
    auto x1 = fx::var(2, 0), x2 = fx::var(2, 1);
    std::vector<fx::PQ> f = {x1 + x1 * x2 * fx::rat(1, 2), x2 + x1 * x1};
    std::vector<Q> x0 = {fx::rat(1, 2), fx::rat(-1)};
    u.x0 = {f[0].eval(x0), f[1].eval(x0)};
    u.f = {x1, x2};
    u.b = {Q(0), fx::rat(1, 3)};
    InitialValue<Q> F0 = {{Q(0), fx::rat(2)}, {fx::rat(-1, 2), Q(0)}};
    const int K = 4;
    auto gamma = de_solve_jet(u, F0, K);
    REQUIRE(gamma.feasible);
    std::vector<TruncatedSeries<Q>> fs;
    for (const auto& fi : f) fs.push_back(series_from_poly(fi, x0, K));
    auto L = pullback_by_spectrum(gamma.jet, fs);

    DEProblem<Q> px;
    px.d = 2;
    px.n = 2;
    px.x0 = x0;
    px.f = f;
    px.b = u.b;
    px.validate();
    CHECK(de_residual(px, L, K - 1).max_abs() == 0);
    auto direct = de_solve_jet(px, F0, K);
    CHECK(jets_equal(direct.jet, L));
}
