#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "strata/monomial.hpp"
#include "strata/scalar.hpp"

namespace strata {

// Sparse multivariate polynomial over S in a fixed number of variables.
template <class S>
class Poly {
public:
    using Terms = std::map<Monomial, S>;

    Poly() = default;
    explicit Poly(int d) : d_(d) {
        if (d < 0 || d > kMaxVars) throw Error("dimension", "variable count out of range");
    }

    static Poly constant(int d, const S& c) {
        Poly p(d);
        p.add_term(Monomial(), c);
        return p;
    }
    static Poly variable(int d, int i) {
        Poly p(d);
        p.add_term(Monomial::var(i), scalar_traits<S>::from_int(1));
        return p;
    }

    int vars() const { return d_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    S coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? S{} : it->second;
    }
    S constant_term() const { return coeff(Monomial()); }

    void add_term(const Monomial& m, const S& c) {
        if (scalar_traits<S>::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (scalar_traits<S>::is_zero(it->second)) terms_.erase(it);
        }
    }
    void set(const Monomial& m, const S& c) {
        if (scalar_traits<S>::is_zero(c)) terms_.erase(m);
        else terms_[m] = c;
    }

    int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }
    int low_degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree(); }

    Poly truncated(int max_deg) const {
        Poly r(d_);
        for (const auto& [m, c] : terms_) {
            if (m.degree() > max_deg) break;
            r.terms_.emplace_hint(r.terms_.end(), m, c);
        }
        return r;
    }

    // Homogeneous part of the given degree.
    Poly part(int deg) const {
        Poly r(d_);
        for (const auto& [m, c] : terms_)
            if (m.degree() == deg) r.terms_.emplace_hint(r.terms_.end(), m, c);
        return r;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    Poly& operator+=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        check(o);
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    Poly& operator*=(const S& s) {
        if (scalar_traits<S>::is_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const S& s) { return a *= s; }
    friend Poly operator*(const S& s, Poly a) { return a *= s; }

    // Product keeping only terms of total degree <= max_deg (negative: keep all).
    Poly mul(const Poly& o, int max_deg = -1) const {
        check(o);
        Poly r(d_);
        for (const auto& [ma, ca] : terms_) {
            if (max_deg >= 0 && ma.degree() > max_deg) break;
            for (const auto& [mb, cb] : o.terms_) {
                if (max_deg >= 0 && ma.degree() + mb.degree() > max_deg) break;
                r.add_term(ma + mb, ca * cb);
            }
        }
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) { return a.mul(b); }

    Poly diff(int i) const {
        Poly r(d_);
        for (const auto& [m, c] : terms_) {
            int e = m[i];
            if (e == 0) continue;
            r.add_term(m.with(i, e - 1), c * scalar_traits<S>::from_int(e));
        }
        return r;
    }

    S eval(const std::vector<S>& x) const {
        S acc{};
        for (const auto& [m, c] : terms_) {
            S t = c;
            for (int i = 0; i < d_; ++i)
                for (int k = 0; k < m[i]; ++k) t *= x[i];
            acc += t;
        }
        return acc;
    }

    // The polynomial q(y) = p(c + y).
    Poly shifted(const std::vector<S>& c) const {
        Poly r(d_);
        for (const auto& [m, coef] : terms_) {
            Poly term = Poly::constant(d_, coef);
            for (int i = 0; i < d_; ++i) {
                int e = m[i];
                if (e == 0) continue;
                // (c_i + y_i)^e
                Poly f(d_);
                S cp = scalar_traits<S>::from_int(1);
                std::vector<S> powers(e + 1);
                powers[0] = cp;
                for (int k = 1; k <= e; ++k) powers[k] = powers[k - 1] * c[i];
                for (int t = 0; t <= e; ++t) {
                    mpz_class b;
                    mpz_bin_uiui(b.get_mpz_t(), e, t);
                    f.add_term(Monomial::var(i, t),
                               powers[e - t] * scalar_traits<S>::from_rational(mpq_class(b)));
                }
                term = term.mul(f);
            }
            r += term;
        }
        return r;
    }

    bool operator==(const Poly& o) const { return d_ == o.d_ && terms_ == o.terms_; }

private:
    void check(const Poly& o) const {
        if (o.d_ != d_) throw Error("dimension", "polynomials have different variable counts");
    }

    int d_ = 0;
    Terms terms_;
};

template <class T, class S, class F>
Poly<T> map_coeffs(const Poly<S>& p, F f) {
    Poly<T> r(p.vars());
    for (const auto& [m, c] : p.terms()) r.add_term(m, f(c));
    return r;
}

inline Poly<cplx> to_float(const Poly<qcomplex>& p) {
    return map_coeffs<cplx>(p, [](const qcomplex& z) { return to_cplx(z); });
}

template <class S>
Poly<S> embed(const Poly<qcomplex>& p) {
    if constexpr (scalar_traits<S>::exact) return p;
    else return to_float(p);
}

template <class S>
S embed_scalar(const qcomplex& z) {
    if constexpr (scalar_traits<S>::exact) return z;
    else return to_cplx(z);
}

template <class S>
double max_magnitude(const Poly<S>& p) {
    double m = 0;
    for (const auto& [mono, c] : p.terms()) m = std::max(m, magnitude(c));
    return m;
}

}  // namespace strata
