#pragma once

#include <algorithm>
#include <vector>

#include "strata/poly.hpp"

namespace strata {

// Power series in y = x - center truncated at total degree K. Coefficients of
// degree above `reliable` are carried along but are not trustworthy (they come
// from differentiating a truncated series).
template <class S>
struct TruncatedSeries {
    Poly<S> coeffs;
    std::vector<S> center;
    int K = 0;
    int reliable = 0;

    TruncatedSeries() = default;
    TruncatedSeries(int d, std::vector<S> c, int k)
        : coeffs(d), center(std::move(c)), K(k), reliable(k) {
        if (int(center.size()) != d) throw Error("dimension", "center has wrong length");
        if (k < 0) throw Error("order", "truncation order must be non-negative");
    }

    int vars() const { return coeffs.vars(); }
    S coeff(const Monomial& m) const { return coeffs.coeff(m); }
    S value_at_center() const { return coeffs.constant_term(); }

    // Evaluate the truncated polynomial at a point x (not y).
    S eval(const std::vector<S>& x) const {
        std::vector<S> y(x.size());
        for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] - center[i];
        return coeffs.eval(y);
    }

    bool same_frame(const TruncatedSeries& o) const {
        return vars() == o.vars() && K == o.K && center == o.center;
    }
};

template <class S>
void require_same_frame(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
    if (!a.same_frame(b)) throw Error("series_mismatch", "series have different d, center or truncation order");
}

// Series of a polynomial given in the ambient coordinates x.
template <class S>
TruncatedSeries<S> series_from_poly(const Poly<S>& p, const std::vector<S>& center, int K) {
    TruncatedSeries<S> s(p.vars(), center, K);
    s.coeffs = p.shifted(center).truncated(K);
    return s;
}

template <class S>
TruncatedSeries<S> series_constant(int d, const std::vector<S>& center, int K, const S& c) {
    TruncatedSeries<S> s(d, center, K);
    s.coeffs.add_term(Monomial(), c);
    return s;
}

template <class S>
TruncatedSeries<S> series_add(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
    require_same_frame(a, b);
    TruncatedSeries<S> r = a;
    r.coeffs += b.coeffs;
    r.reliable = std::min(a.reliable, b.reliable);
    return r;
}

template <class S>
TruncatedSeries<S> series_sub(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
    require_same_frame(a, b);
    TruncatedSeries<S> r = a;
    r.coeffs -= b.coeffs;
    r.reliable = std::min(a.reliable, b.reliable);
    return r;
}

template <class S>
TruncatedSeries<S> series_scale(const TruncatedSeries<S>& a, const S& s) {
    TruncatedSeries<S> r = a;
    r.coeffs *= s;
    return r;
}

template <class S>
TruncatedSeries<S> series_mul(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b) {
    require_same_frame(a, b);
    TruncatedSeries<S> r(a.vars(), a.center, a.K);
    r.coeffs = a.coeffs.mul(b.coeffs, a.K);
    // A product is only as good as its worse factor, shifted by the other's valuation.
    int va = a.coeffs.low_degree(), vb = b.coeffs.low_degree();
    if (va < 0 || vb < 0) {
        r.reliable = a.K;
    } else {
        r.reliable = std::min({a.K, a.reliable + vb, b.reliable + va});
    }
    return r;
}

template <class S>
TruncatedSeries<S> series_diff(const TruncatedSeries<S>& a, int i) {
    if (i < 0 || i >= a.vars()) throw Error("dimension", "derivative index out of range");
    TruncatedSeries<S> r = a;
    r.coeffs = a.coeffs.diff(i);
    r.reliable = std::min(a.reliable, a.K) - 1;
    return r;
}

template <class S>
TruncatedSeries<S> series_invert(const TruncatedSeries<S>& a) {
    S c0 = a.value_at_center();
    if (scalar_traits<S>::is_zero(c0)) throw Error("not_invertible", "series is not invertible at center");
    S inv0 = scalar_traits<S>::from_int(1) / c0;
    // a = c0 (1 + t) with t(0) = 0, so 1/a = inv0 * sum_j (-t)^j.
    Poly<S> t = a.coeffs * inv0;
    t.set(Monomial(), S{});
    Poly<S> neg_t = -t;
    Poly<S> acc = Poly<S>::constant(a.vars(), scalar_traits<S>::from_int(1));
    Poly<S> power = acc;
    for (int j = 1; j <= a.K && !power.is_zero(); ++j) {
        power = power.mul(neg_t, a.K);
        acc += power;
    }
    TruncatedSeries<S> r(a.vars(), a.center, a.K);
    r.coeffs = acc * inv0;
    r.reliable = a.reliable;
    return r;
}

template <class S>
double max_coeff_magnitude(const TruncatedSeries<S>& a, int max_deg) {
    double m = 0;
    for (const auto& [mono, c] : a.coeffs.terms()) {
        if (mono.degree() > max_deg) break;
        m = std::max(m, magnitude(c));
    }
    return m;
}

// Square matrix of series sharing one frame, stored row-major.
template <class S>
struct SeriesMatrix {
    int n = 0;
    std::vector<TruncatedSeries<S>> entries;

    SeriesMatrix() = default;
    SeriesMatrix(int n_, int d, const std::vector<S>& center, int K)
        : n(n_), entries(size_t(n_) * n_, TruncatedSeries<S>(d, center, K)) {}

    TruncatedSeries<S>& operator()(int i, int j) { return entries[size_t(i) * n + j]; }
    const TruncatedSeries<S>& operator()(int i, int j) const { return entries[size_t(i) * n + j]; }

    int vars() const { return entries.empty() ? 0 : entries[0].vars(); }
    int K() const { return entries.empty() ? 0 : entries[0].K; }
    const std::vector<S>& center() const { return entries.at(0).center; }

    SeriesMatrix zero_like() const { return SeriesMatrix(n, vars(), center(), K()); }

    static SeriesMatrix identity(int n, int d, const std::vector<S>& center, int K) {
        SeriesMatrix m(n, d, center, K);
        for (int i = 0; i < n; ++i) m(i, i).coeffs.add_term(Monomial(), scalar_traits<S>::from_int(1));
        return m;
    }
};

template <class S>
SeriesMatrix<S> operator+(const SeriesMatrix<S>& a, const SeriesMatrix<S>& b) {
    SeriesMatrix<S> r = a;
    for (size_t k = 0; k < r.entries.size(); ++k) r.entries[k] = series_add(a.entries[k], b.entries[k]);
    return r;
}

template <class S>
SeriesMatrix<S> operator-(const SeriesMatrix<S>& a, const SeriesMatrix<S>& b) {
    SeriesMatrix<S> r = a;
    for (size_t k = 0; k < r.entries.size(); ++k) r.entries[k] = series_sub(a.entries[k], b.entries[k]);
    return r;
}

template <class S>
SeriesMatrix<S> scale(const SeriesMatrix<S>& a, const S& s) {
    SeriesMatrix<S> r = a;
    for (auto& e : r.entries) e = series_scale(e, s);
    return r;
}

template <class S>
SeriesMatrix<S> operator*(const SeriesMatrix<S>& a, const SeriesMatrix<S>& b) {
    if (a.n != b.n) throw Error("dimension", "matrix sizes differ");
    SeriesMatrix<S> r = a.zero_like();
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            auto& out = r(i, j);
            int rel = out.K;
            for (int k = 0; k < a.n; ++k) {
                if (a(i, k).coeffs.is_zero() || b(k, j).coeffs.is_zero()) continue;
                auto p = series_mul(a(i, k), b(k, j));
                out.coeffs += p.coeffs;
                rel = std::min(rel, p.reliable);
            }
            out.reliable = rel;
        }
    return r;
}

template <class S>
SeriesMatrix<S> commutator(const SeriesMatrix<S>& a, const SeriesMatrix<S>& b) {
    return a * b - b * a;
}

template <class S>
SeriesMatrix<S> diff(const SeriesMatrix<S>& a, int i) {
    SeriesMatrix<S> r = a;
    for (auto& e : r.entries) e = series_diff(e, i);
    return r;
}

template <class S>
int reliable_degree(const SeriesMatrix<S>& a) {
    int r = a.K();
    for (const auto& e : a.entries) r = std::min(r, e.reliable);
    return r;
}

template <class S>
double max_coeff_magnitude(const SeriesMatrix<S>& a, int max_deg) {
    double m = 0;
    for (const auto& e : a.entries) m = std::max(m, max_coeff_magnitude(e, max_deg));
    return m;
}

}  // namespace strata
