#pragma once

// Shared data for the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "strata/darboux.hpp"
#include "strata/gap.hpp"
#include "strata/gauge.hpp"

namespace fx {

using strata::cplx;
using strata::MatrixFamily;
using strata::Poly;
using strata::qcomplex;
using Q = qcomplex;
using PQ = Poly<Q>;

inline Q rat(long p, long q = 1) {
    mpq_class r(p, q);
    r.canonicalize();
    return Q(r);
}

inline PQ var(int d, int i) { return PQ::variable(d, i); }
inline PQ cst(int d, const Q& c) { return PQ::constant(d, c); }
inline PQ zero(int d) { return PQ(d); }

inline MatrixFamily family(int d, std::vector<std::vector<PQ>> entries, std::vector<strata::Branch> branches) {
    MatrixFamily f;
    f.d = d;
    f.n = int(entries.size());
    f.entries = std::move(entries);
    f.branches = std::move(branches);
    f.validate();
    return f;
}

// A(z) = [[z,1,0],[0,z^2,z],[0,0,z^2]]
inline MatrixFamily counterexample1() {
    auto z = var(1, 0), o = cst(1, 1), n = zero(1), z2 = z * z;
    return family(1, {{z, o, n}, {n, z2, z}, {n, n, z2}}, {{z, 1}, {z2, 2}});
}

// A(z) = [[z,1,0,0],[0,-z,0,0],[0,0,1+z,z],[0,0,0,1+z]]
inline MatrixFamily counterexample2() {
    auto z = var(1, 0), o = cst(1, 1), n = zero(1);
    return family(1, {{z, o, n, n}, {n, -z, n, n}, {n, n, o + z, z}, {n, n, n, o + z}},
                  {{z, 1}, {-z, 1}, {o + z, 2}});
}

// A(x) = [[x1,0,x2],[0,x1,x2],[0,0,0]]
inline MatrixFamily three_by_three() {
    auto x1 = var(2, 0), x2 = var(2, 1), n = zero(2);
    return family(2, {{x1, n, x2}, {n, x1, x2}, {n, n, n}}, {{x1, 2}, {n, 1}});
}

// Stays in a single bundle: a 2x2 Jordan block at x and a simple eigenvalue x+1.
inline MatrixFamily single_bundle() {
    auto x = var(1, 0), o = cst(1, 1), n = zero(1);
    return family(1, {{x, o, n}, {n, x, n}, {n, n, x + o}}, {{x, 2}, {x + o, 1}});
}

// n = 2, f = (x1, x2), x0 = (0, 1), b = (0, 1/2).
inline strata::DEProblem<Q> n2_regular_problem() {
    strata::DEProblem<Q> p;
    p.d = 2;
    p.n = 2;
    p.x0 = {rat(0), rat(1)};
    p.f = {var(2, 0), var(2, 1)};
    p.b = {rat(0), rat(1, 2)};
    p.validate();
    return p;
}

// Generalized binomial coefficient, computed independently of the library.
inline mpq_class gbinom(const mpq_class& a, int k) {
    mpq_class r = 1;
    for (int i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
    return r;
}

// Taylor coefficient of y_h^p y_k^q in F0 ((f_h - f_k)(x)/(f_h - f_k)(x0))^e for
// f = coordinates: with c = x0_h - x0_k and u = y_h - y_k the series is
// sum_j C(e, j) (u/c)^j.
inline mpq_class closed_form_coeff(const mpq_class& F0, const mpq_class& e, const mpq_class& c, int p, int q) {
    mpz_class choose;
    mpz_bin_uiui(choose.get_mpz_t(), p + q, q);
    mpq_class cj = 1;
    for (int i = 0; i < p + q; ++i) cj *= c;
    mpq_class sign = (q % 2) ? -1 : 1;
    return F0 * gbinom(e, p + q) * mpq_class(choose) * sign / cj;
}

// Off-diagonal initial value satisfying the base constraint
//   (b_h - b_k - 1) F_kh = sum_l (f_l - phi) F_kl F_lh
// at a coalescent pair (0, 1) of an n = 3 problem whose third value differs.
inline strata::InitialValue<Q> feasible_initial_value(const strata::DEProblem<Q>& p, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    strata::InitialValue<Q> F(p.n, std::vector<Q>(p.n));
    for (int k = 0; k < p.n; ++k)
        for (int h = 0; h < p.n; ++h)
            if (k != h) F[k][h] = rat(num(rng), den(rng));
    std::vector<Q> v(p.n);
    for (int i = 0; i < p.n; ++i) v[i] = p.f[i].eval(p.x0);
    for (int k = 0; k < p.n; ++k)
        for (int h = 0; h < p.n; ++h) {
            if (k == h || v[k] != v[h]) continue;
            Q s;
            for (int l = 0; l < p.n; ++l)
                if (v[l] != v[k]) s += (v[l] - v[k]) * F[k][l] * F[l][h];
            F[k][h] = s / (p.b[h] - p.b[k] - Q(1));
        }
    return F;
}

// Random rational problem with n <= 3, d <= 3. With coalesce set, f_0 and f_1
// agree at x0 (n = 3 only) and b_1 - b_0 is a non-integer.
inline strata::DEProblem<Q> random_problem(std::mt19937& rng, int n, int d, bool coalesce) {
    std::uniform_int_distribution<int> small(-3, 3), den(2, 5);
    for (;;) {
        strata::DEProblem<Q> p;
        p.n = n;
        p.d = d;
        for (int c = 0; c < d; ++c) p.x0.push_back(rat(small(rng), 2));
        for (int i = 0; i < n; ++i) {
            PQ f = cst(d, rat(small(rng)));
            for (int c = 0; c < d; ++c) f += var(d, c) * rat(small(rng));
            // one quadratic term keeps the spectrum map nonlinear
            f += var(d, i % d) * var(d, (i + 1) % d) * rat(small(rng), 2);
            p.f.push_back(f);
        }
        for (int i = 0; i < n; ++i) p.b.push_back(rat(small(rng), den(rng)));
        if (coalesce) {
            p.f[1] += cst(d, p.f[0].eval(p.x0) - p.f[1].eval(p.x0));
            mpq_class diff = p.b[1].re - p.b[0].re;
            if (diff.get_den() == 1) continue;
            if (p.f[2].eval(p.x0) == p.f[0].eval(p.x0)) continue;
        } else {
            bool distinct = true;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    if (p.f[i].eval(p.x0) == p.f[j].eval(p.x0)) distinct = false;
            if (!distinct) continue;
        }
        try {
            p.validate();
        } catch (const strata::Error&) {
            continue;
        }
        return p;
    }
}

// n = 3 problem with f = coordinates, coalescent at (0, 0, 1).
inline strata::DEProblem<Q> n3_coalescent_problem() {
    strata::DEProblem<Q> p;
    p.d = 3;
    p.n = 3;
    p.x0 = {rat(0), rat(0), rat(1)};
    p.f = {var(3, 0), var(3, 1), var(3, 2)};
    p.b = {rat(1, 3), rat(0), rat(1, 2)};
    p.validate();
    return p;
}

inline strata::InitialValue<Q> n3_coalescent_initial_value(const strata::DEProblem<Q>& p) {
    strata::InitialValue<Q> G = {{rat(0), rat(0), rat(2)}, {rat(0), rat(0), rat(1, 3)}, {rat(-1), rat(4), rat(0)}};
    G[0][1] = G[0][2] * G[2][1] / (p.b[1] - p.b[0] - Q(1));
    G[1][0] = G[1][2] * G[2][0] / (p.b[0] - p.b[1] - Q(1));
    return G;
}

// Connection whose L is the DE jet of the coalescent n = 3 problem.
inline strata::FramedConnection<Q> de_connection(int K) {
    auto p = n3_coalescent_problem();
    auto jet = strata::de_solve_jet(p, n3_coalescent_initial_value(p), K);
    return strata::build_connection(p.f, p.b, jet.jet);
}

// Same construction at a regular center.
inline strata::FramedConnection<Q> de_connection_regular(int K) {
    strata::DEProblem<Q> p;
    p.d = 2;
    p.n = 3;
    p.x0 = {rat(0), rat(1)};
    p.f = {var(2, 0), var(2, 1), var(2, 0) + var(2, 1) + cst(2, rat(2))};
    p.b = {rat(0), rat(1, 3), rat(-1, 2)};
    p.validate();
    strata::InitialValue<Q> F0 = {{rat(0), rat(1), rat(-2)}, {rat(3), rat(0), rat(1, 2)}, {rat(1), rat(-1), rat(0)}};
    auto jet = strata::de_solve_jet(p, F0, K);
    return strata::build_connection(p.f, p.b, jet.jet);
}

inline strata::SeriesMatrix<Q> constant_matrix(int n, int d, const std::vector<Q>& center, int K,
                                               const std::vector<std::vector<Q>>& m) {
    strata::SeriesMatrix<Q> s(n, d, center, K);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m[i][j] != Q(0)) s(i, j).coeffs.add_term(strata::Monomial(), m[i][j]);
    return s;
}

}  // namespace fx
