#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace strata {

// Error carrying a short machine-readable code next to the message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

using cplx = std::complex<double>;

// Complex number with exact rational parts.
struct qcomplex {
    mpq_class re{0}, im{0};

    qcomplex() = default;
    qcomplex(long v) : re(v), im(0) {}
    qcomplex(mpq_class r) : re(std::move(r)), im(0) {}
    qcomplex(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

    qcomplex& operator+=(const qcomplex& o) { re += o.re; im += o.im; return *this; }
    qcomplex& operator-=(const qcomplex& o) { re -= o.re; im -= o.im; return *this; }
    qcomplex& operator*=(const qcomplex& o) {
        if (im == 0 && o.im == 0) {
            re *= o.re;
            return *this;
        }
        mpq_class r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    qcomplex& operator/=(const qcomplex& o) {
        if (o.re == 0 && o.im == 0) throw Error("division_by_zero", "exact division by zero");
        if (o.im == 0) {
            re /= o.re;
            im /= o.re;
            return *this;
        }
        mpq_class den = o.re * o.re + o.im * o.im;
        mpq_class r = (re * o.re + im * o.im) / den;
        im = (im * o.re - re * o.im) / den;
        re = std::move(r);
        return *this;
    }
    qcomplex operator-() const { return {-re, -im}; }
    friend qcomplex operator+(qcomplex a, const qcomplex& b) { return a += b; }
    friend qcomplex operator-(qcomplex a, const qcomplex& b) { return a -= b; }
    friend qcomplex operator*(qcomplex a, const qcomplex& b) { return a *= b; }
    friend qcomplex operator/(qcomplex a, const qcomplex& b) { return a /= b; }
    friend bool operator==(const qcomplex& a, const qcomplex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const qcomplex& a, const qcomplex& b) { return !(a == b); }
};

std::string to_string(const mpq_class& q);
mpq_class parse_rational(const std::string& s);
std::string to_string(const qcomplex& z);

// Per-scalar helpers used by the templated series code.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
    static constexpr bool exact = false;
    static cplx from_rational(const mpq_class& q) { return {q.get_d(), 0.0}; }
    static cplx from_int(long v) { return {double(v), 0.0}; }
    static double magnitude(const cplx& z) { return std::abs(z); }
    static bool is_zero(const cplx& z) { return z == cplx(0.0, 0.0); }
    static cplx to_cplx(const cplx& z) { return z; }
    static cplx conj(const cplx& z) { return std::conj(z); }
};

template <>
struct scalar_traits<qcomplex> {
    static constexpr bool exact = true;
    static qcomplex from_rational(const mpq_class& q) { return {q, 0}; }
    static qcomplex from_int(long v) { return qcomplex(v); }
    static double magnitude(const qcomplex& z) { return std::hypot(z.re.get_d(), z.im.get_d()); }
    static bool is_zero(const qcomplex& z) { return z.re == 0 && z.im == 0; }
    static cplx to_cplx(const qcomplex& z) { return {z.re.get_d(), z.im.get_d()}; }
    static qcomplex conj(const qcomplex& z) { return {z.re, -z.im}; }
};

template <class S>
bool is_zero(const S& s) { return scalar_traits<S>::is_zero(s); }

template <class S>
double magnitude(const S& s) { return scalar_traits<S>::magnitude(s); }

template <class S>
cplx to_cplx(const S& s) { return scalar_traits<S>::to_cplx(s); }

// Generalized binomial coefficient C(a, k) for a rational a.
mpq_class binomial(const mpq_class& a, unsigned k);

}  // namespace strata
