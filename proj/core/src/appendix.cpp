#include "strata/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace strata {

namespace {

template <class S>
bool near_zero(const S& s, double tol) {
    if constexpr (scalar_traits<S>::exact) return is_zero(s);
    else return std::abs(s) < tol;
}

template <class S>
SeriesMatrix<S> constant_matrix(const ConstMatrix<S>& m, int d, const std::vector<S>& center, int K) {
    const int n = int(m.size());
    SeriesMatrix<S> r(n, d, center, K);
    for (int i = 0; i < n; ++i) {
        if (int(m[i].size()) != n) throw Error("shape", "matrix must be square");
        for (int j = 0; j < n; ++j) r(i, j).coeffs.add_term(Monomial(), m[i][j]);
    }
    return r;
}

Poly<qcomplex> power_of_t(const mpz_class& e) {
    if (e < 0 || e > 255) throw Error("invalid_argument", "exponent out of range");
    Poly<qcomplex> p(1);
    p.add_term(Monomial::var(0, int(e.get_si())), qcomplex(1));
    return p;
}

MonomialFamily make_family(std::string name, std::array<mpz_class, 3> exps, std::array<bool, 3> zero, const qcomplex& c) {
    MonomialFamily f{std::move(name), exps, zero, {}, false};
    std::array<Poly<qcomplex>, 3> fn;
    for (int i = 0; i < 3; ++i) fn[i] = zero[i] ? Poly<qcomplex>(1) : power_of_t(exps[i]);
    const qcomplex one(1);
    const Poly<qcomplex>&al = fn[0], &be = fn[1], &ga = fn[2];
    std::array<Poly<qcomplex>, 3> w = {
        be.mul(al.diff(0)) * (one - c) - al.mul(be.diff(0)),
        ga.mul(al.diff(0)) * (one + c) - al.mul(ga.diff(0)),
        ga.mul(be.diff(0)) * (one + c) - be.mul(ga.diff(0)) * (one - c),
    };
    f.verified = true;
    for (int i = 0; i < 3; ++i) {
        f.residual[i] = w[i].is_zero() ? qcomplex(0) : w[i].terms().rbegin()->second;
        if (!w[i].is_zero()) f.verified = false;
    }
    return f;
}

}  // namespace

template <class S>
double PfaffianReport<S>::max_abs() const {
    double m = 0;
    for (double v : per_degree) m = std::max(m, v);
    return m;
}

template <class S>
PfaffianReport<S> malgrange_pfaffian_residual(const ConstMatrix<S>& A0, const ConstMatrix<S>& B0,
                                              const SeriesMatrix<S>& K, int order) {
    const int n = K.n, d = K.vars();
    if (int(A0.size()) != n || int(B0.size()) != n) throw Error("shape", "A0, B0 and K sizes differ");
    if (order < 0) throw Error("invalid_argument", "order must be non-negative");
    if (K.K() < order + 1) throw Error("degree_shortfall", "jet degree must be at least order + 1");
    for (const auto& e : K.entries)
        if (!is_zero(e.value_at_center())) throw Error("invalid_input", "K must vanish at the center");
    PfaffianReport<S> r;
    const auto a0 = constant_matrix(A0, d, K.center(), K.K());
    const auto b0 = constant_matrix(B0, d, K.center(), K.K());
    r.A = a0 + K + commutator(K, b0);
    r.per_degree.assign(order + 1, 0.0);
    for (int c = 0; c < d; ++c) {
        r.omega.push_back(commutator(r.A, diff(K, c)));
        for (const auto& e : r.omega.back().entries)
            for (const auto& [m, v] : e.coeffs.terms()) {
                if (m.degree() > order) break;
                r.per_degree[m.degree()] = std::max(r.per_degree[m.degree()], magnitude(v));
            }
    }
    return r;
}

std::array<qcomplex, 3> curve_residual_coefficients(const ExponentCurve& cv, const qcomplex& c) {
    const qcomplex one(1);
    return {cv.alpha0 * cv.beta0 * ((one - c) * cv.a - cv.b), cv.alpha0 * cv.gamma0 * ((one + c) * cv.a - cv.g),
            cv.beta0 * cv.gamma0 * ((one + c) * cv.b - (one - c) * cv.g)};
}

CurveReport nonversal_curve(const qcomplex& alpha0, const qcomplex& beta0, const qcomplex& gamma0, const qcomplex& c,
                            const std::vector<double>& tgrid, std::optional<qcomplex> beta_exponent) {
    const qcomplex one(1);
    ExponentCurve cv{alpha0, beta0, gamma0, one, beta_exponent ? *beta_exponent : one - c, one + c};
    CurveReport r;
    r.exact = curve_residual_coefficients(cv, c);
    const cplx cc = to_cplx(c), a0 = to_cplx(alpha0), b0 = to_cplx(beta0), g0 = to_cplx(gamma0);
    const cplx ea = to_cplx(cv.a), eb = to_cplx(cv.b), eg = to_cplx(cv.g);
    for (double t : tgrid) {
        cplx al = a0 * std::exp(ea * t), be = b0 * std::exp(eb * t), ga = g0 * std::exp(eg * t);
        cplx dal = ea * al, dbe = eb * be, dga = eg * ga;
        std::array<double, 3> res = {std::abs((1.0 - cc) * be * dal - al * dbe), std::abs((1.0 + cc) * ga * dal - al * dga),
                                     std::abs((1.0 + cc) * ga * dbe - (1.0 - cc) * be * dga)};
        r.t.push_back(t);
        r.point.push_back({al, be, ga});
        r.residual.push_back(res);
        for (double v : res) r.max_residual = std::max(r.max_residual, v);
    }
    return r;
}

std::vector<MonomialFamily> rational_c_families(long p, long q) {
    if (q <= 0) throw Error("invalid_argument", "q must be positive");
    if (std::gcd(p, q) != 1) throw Error("invalid_argument", "p and q must be coprime");
    if (p == q || p == -q) throw Error("invalid_argument", "c = 1 and c = -1 are outside this case analysis");
    const qcomplex c(mpq_class(p, q));
    const mpz_class P(p), Q(q);
    std::vector<MonomialFamily> out;
    if (p < -q) {
        out.push_back(make_family("c<-1", {Q, Q - P, mpz_class(0)}, {false, false, true}, c));
    } else if (p < q) {
        out.push_back(make_family("-1<c<1", {Q, Q - P, P + Q}, {false, false, false}, c));
        if ((p + q) % 2 == 0)
            out.push_back(
                make_family("-1<c<1, p+q even", {mpz_class(0), (Q - P) / 2, (P + Q) / 2}, {true, false, false}, c));
    } else {
        out.push_back(make_family("c>1", {Q, mpz_class(0), P + Q}, {false, true, false}, c));
    }
    return out;
}

AxisLines coordinate_axis_lines(const qcomplex& c) {
    AxisLines r;
    const mpz_class one(1), zero(0);
    r.lines.push_back(make_family("alpha axis", {one, zero, zero}, {false, true, true}, c));
    r.lines.push_back(make_family("beta axis", {zero, one, zero}, {true, false, true}, c));
    r.lines.push_back(make_family("gamma axis", {zero, zero, one}, {true, true, false}, c));
    // Tangent vectors at t = 0 are the unit vectors: rows of the identity.
    std::array<std::array<qcomplex, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[i][j] = (!r.lines[i].zero[j] && r.lines[i].exps[j] == 1) ? qcomplex(1) : qcomplex(0);
    r.tangent_determinant = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                            m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                            m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return r;
}

std::string to_string(DeformationType t) {
    switch (t) {
        case DeformationType::TypeI: return "TypeI";
        case DeformationType::TypeII: return "TypeII";
        case DeformationType::TypeIII: return "TypeIII";
        case DeformationType::NotIntegrable: return "NotIntegrable";
        case DeformationType::Unclassified: return "Unclassified";
    }
    return "?";
}

template <class S>
Classification2x2<S> classify_2x2(const Poly<S>& g, const Poly<S>& h, const Poly<S>& l, const Poly<S>& m,
                                  const std::vector<S>& x0, double tol) {
    const int d = g.vars();
    if (h.vars() != d || l.vars() != d || m.vars() != d || int(x0.size()) != d)
        throw Error("shape", "g, h, l, m must share the variable count");
    for (const auto* p : {&g, &h, &l, &m})
        if (!near_zero(p->eval(x0), tol)) throw Error("invalid_input", "g, h, l, m must vanish at the base point");

    auto is_zero_poly = [&](const Poly<S>& p) { return max_magnitude(p) <= (scalar_traits<S>::exact ? 0.0 : tol); };
    Classification2x2<S> out;
    const Poly<S> u = m - g;
    const S two = scalar_traits<S>::from_int(2);
    for (int c = 0; c < d; ++c) {
        out.identity_residual = std::max(out.identity_residual, max_magnitude(l.mul(h.diff(c))));
        out.identity_residual = std::max(out.identity_residual, max_magnitude((g - m).mul(h.diff(c))));
        out.identity_residual = std::max(out.identity_residual, max_magnitude(u.mul(l.diff(c)) - l.mul(u.diff(c)) * two));
    }
    const bool identities = scalar_traits<S>::exact ? out.identity_residual == 0 : out.identity_residual <= tol;
    if (!identities) {
        out.type = DeformationType::NotIntegrable;
        out.note = "the three defining identities fail";
        return out;
    }
    if (!is_zero_poly(h)) {
        if (is_zero_poly(l) && is_zero_poly(u)) out.type = DeformationType::TypeIII;
        else out.note = "h is nonzero but l or g - m is not";
        return out;
    }
    if (is_zero_poly(u)) {
        if (is_zero_poly(l)) {
            out.type = DeformationType::TypeII;
        } else {
            out.type = DeformationType::Unclassified;
            out.note = "g = m and h = 0 with l nonzero: the identities hold but none of the three types applies";
        }
        return out;
    }
    // l = kappa (m - g)^2, kappa read off the leading monomial.
    const Poly<S> u2 = u.mul(u);
    const auto& [lead, lc] = *u2.terms().rbegin();
    S kappa = l.coeff(lead) / lc;
    if (!is_zero_poly(l - u2 * kappa)) {
        out.type = DeformationType::NotIntegrable;
        out.note = "l is not a constant multiple of (m - g)^2";
        return out;
    }
    out.type = DeformationType::TypeI;
    out.kappa = kappa;
    return out;
}

template <class S>
double type1_witness_defect(const Poly<S>& g, const Poly<S>& m, const S& kappa) {
    const int d = g.vars();
    const S two = scalar_traits<S>::from_int(2);
    const Poly<S> u = m - g;
    const Poly<S> one = Poly<S>::constant(d, scalar_traits<S>::from_int(1));
    const Poly<S> zero(d);
    // M = [[1,0],[e,1]], M^-1 = [[1,0],[-e,1]] with e = 2 kappa (g - m).
    const Poly<S> e = (g - m) * (two * kappa);
    using M2 = std::array<std::array<Poly<S>, 2>, 2>;
    auto mul = [](const M2& a, const M2& b) {
        M2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r[i][j] = a[i][0].mul(b[0][j]) + a[i][1].mul(b[1][j]);
        return r;
    };
    const M2 M = {{{one, zero}, {e, one}}};
    const M2 Minv = {{{one, zero}, {-e, one}}};
    const M2 A = {{{g, zero}, {u.mul(u) * (two * kappa), m}}};
    double defect = 0;
    auto conj = mul(mul(Minv, A), M);
    defect = std::max({defect, max_magnitude(conj[0][1]), max_magnitude(conj[1][0])});
    for (int c = 0; c < d; ++c) {
        const M2 C = {{{g.diff(c), zero}, {u.mul(u).diff(c) * kappa, m.diff(c)}}};
        auto cc = mul(mul(Minv, C), M);
        defect = std::max({defect, max_magnitude(cc[0][1]), max_magnitude(cc[1][0])});
    }
    return defect;
}

template struct PfaffianReport<cplx>;
template struct PfaffianReport<qcomplex>;
template PfaffianReport<cplx> malgrange_pfaffian_residual(const ConstMatrix<cplx>&, const ConstMatrix<cplx>&,
                                                          const SeriesMatrix<cplx>&, int);
template PfaffianReport<qcomplex> malgrange_pfaffian_residual(const ConstMatrix<qcomplex>&, const ConstMatrix<qcomplex>&,
                                                              const SeriesMatrix<qcomplex>&, int);
template Classification2x2<cplx> classify_2x2(const Poly<cplx>&, const Poly<cplx>&, const Poly<cplx>&, const Poly<cplx>&,
                                              const std::vector<cplx>&, double);
template Classification2x2<qcomplex> classify_2x2(const Poly<qcomplex>&, const Poly<qcomplex>&, const Poly<qcomplex>&,
                                                  const Poly<qcomplex>&, const std::vector<qcomplex>&, double);
template double type1_witness_defect(const Poly<cplx>&, const Poly<cplx>&, const cplx&);
template double type1_witness_defect(const Poly<qcomplex>&, const Poly<qcomplex>&, const qcomplex&);

}  // namespace strata
