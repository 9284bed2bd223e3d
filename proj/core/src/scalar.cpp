#include "strata/scalar.hpp"

#include <algorithm>

#include "strata/monomial.hpp"

namespace strata {

std::string to_string(const mpq_class& q) {
    return q.get_str();
}

mpq_class parse_rational(const std::string& s) {
    mpq_class q;
    if (s.empty() || q.set_str(s, 10) != 0) throw Error("parse", "not a rational number: " + s);
    if (q.get_den() == 0) throw Error("parse", "zero denominator: " + s);
    q.canonicalize();
    return q;
}

std::string to_string(const qcomplex& z) {
    if (z.im == 0) return to_string(z.re);
    return to_string(z.re) + (z.im < 0 ? "-" : "+") + to_string(abs(z.im)) + "i";
}

mpq_class binomial(const mpq_class& a, unsigned k) {
    mpq_class r = 1;
    for (unsigned j = 0; j < k; ++j) {
        r *= a - mpq_class(j);
        r /= mpq_class(j + 1);
    }
    return r;
}

namespace {

void fill(int d, int var, int remaining, std::vector<int>& e, std::vector<Monomial>& out) {
    if (var == d - 1) {
        e[var] = remaining;
        out.emplace_back(e);
        return;
    }
    for (int k = 0; k <= remaining; ++k) {
        e[var] = k;
        fill(d, var + 1, remaining - k, e, out);
    }
    e[var] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int d, int k) {
    std::vector<Monomial> out;
    if (d == 0) {
        if (k == 0) out.emplace_back();
        return out;
    }
    std::vector<int> e(d, 0);
    fill(d, 0, k, e, out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace strata
