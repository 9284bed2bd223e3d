#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "strata/series.hpp"

using namespace strata;
using fx::Q;

namespace {

TruncatedSeries<Q> ser(const fx::PQ& p, int K) { return series_from_poly(p, std::vector<Q>(p.vars(), Q(0)), K); }

TruncatedSeries<Q> random_series(std::mt19937& rng, int d, int K) {
    std::uniform_int_distribution<int> c(-3, 3);
    TruncatedSeries<Q> s(d, std::vector<Q>(d, Q(0)), K);
    for (int k = 0; k <= K; ++k)
        for (const auto& m : monomials_of_degree(d, k))
            if (int v = c(rng)) s.coeffs.add_term(m, fx::rat(v, 2));
    return s;
}

}  // namespace

TEST_CASE("products truncate at K") {
    auto x = fx::var(2, 0), y = fx::var(2, 1), one = fx::cst(2, 1);
    CHECK(series_mul(ser(one + x, 2), ser(one - x, 2)).coeffs == one - x * x);
    CHECK(series_mul(ser(x, 1), ser(x, 1)).coeffs.is_zero());
    auto s = ser(one + x + y, 2);
    CHECK(series_mul(s, s).coeffs == one + x * Q(2) + y * Q(2) + x * x + x * y * Q(2) + y * y);
    auto other = TruncatedSeries<Q>(2, {Q(1), Q(0)}, 2);
    CHECK_THROWS_AS(series_mul(s, other), Error);
}

TEST_CASE("derivatives") {
    auto x = fx::var(2, 0), y = fx::var(2, 1), three = fx::cst(2, 3);
    CHECK(series_diff(ser(x * x * y, 4), 0).coeffs == x * y * Q(2));
    CHECK(series_diff(ser(x * x, 4), 1).coeffs.is_zero());
    CHECK(series_diff(ser(three + x * Q(2) + x * x, 4), 0).coeffs == fx::cst(2, 2) + x * Q(2));
    CHECK(series_diff(ser(x, 4), 0).reliable == 3);
}

TEST_CASE("inversion") {
    auto x = fx::var(1, 0), one = fx::cst(1, 1);
    CHECK(series_invert(ser(one - x, 3)).coeffs == one + x + x * x + x * x * x);
    CHECK(series_invert(ser(fx::cst(1, 2), 3)).coeffs == fx::cst(1, fx::rat(1, 2)));
    CHECK_THROWS_AS(series_invert(ser(x, 3)), Error);
}

TEST_CASE("ring axioms, inverse and Leibniz rule on random series") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        int d = 1 + trial % 3, K = 4;
        auto a = random_series(rng, d, K), b = random_series(rng, d, K), c = random_series(rng, d, K);
        CHECK(series_mul(series_mul(a, b), c).coeffs == series_mul(a, series_mul(b, c)).coeffs);
        CHECK(series_mul(a, series_add(b, c)).coeffs == series_add(series_mul(a, b), series_mul(a, c)).coeffs);
        a.coeffs.set(Monomial(), Q(1));
        CHECK(series_mul(a, series_invert(a)).coeffs == fx::cst(d, 1));
        for (int i = 0; i < d; ++i) {
            auto lhs = series_diff(series_mul(a, b), i);
            auto rhs = series_add(series_mul(series_diff(a, i), b), series_mul(a, series_diff(b, i)));
            CHECK(lhs.coeffs.truncated(K - 1) == rhs.coeffs.truncated(K - 1));
        }
    }
}

TEST_CASE("recentering a polynomial") {
    auto x = fx::var(1, 0);
    auto s = series_from_poly(x * x, {Q(2)}, 3);
    // x^2 = 4 + 4y + y^2 with y = x - 2
    CHECK(s.coeffs == fx::cst(1, 4) + x * Q(4) + x * x);
    CHECK(s.eval({Q(3)}) == Q(9));
}
