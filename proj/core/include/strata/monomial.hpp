#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "strata/scalar.hpp"

namespace strata {

inline constexpr int kMaxVars = 8;

// Exponent vector packed one byte per variable, variable 0 in the top byte so
// that comparing the packed word is lexicographic comparison. Ordering is
// graded: total degree first.
class Monomial {
public:
    Monomial() = default;

    explicit Monomial(const std::vector<int>& exps) {
        if (exps.size() > size_t(kMaxVars)) throw Error("dimension", "at most 8 variables are supported");
        for (size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] < 0 || exps[i] > 255) throw Error("exponent", "exponent out of range");
            packed_ |= std::uint64_t(exps[i]) << shift(int(i));
            deg_ += exps[i];
        }
    }

    static Monomial var(int i, int power = 1) {
        Monomial m;
        m.packed_ = std::uint64_t(power) << shift(i);
        m.deg_ = power;
        return m;
    }

    int operator[](int i) const { return int((packed_ >> shift(i)) & 0xff); }
    int degree() const { return deg_; }

    std::vector<int> exps(int d) const {
        std::vector<int> e(d);
        for (int i = 0; i < d; ++i) e[i] = (*this)[i];
        return e;
    }

    // Caller guarantees no byte overflows.
    Monomial operator+(const Monomial& o) const {
        Monomial m;
        m.packed_ = packed_ + o.packed_;
        m.deg_ = deg_ + o.deg_;
        return m;
    }

    bool divides(const Monomial& o) const {
        for (int i = 0; i < kMaxVars; ++i)
            if ((*this)[i] > o[i]) return false;
        return true;
    }

    // Assumes divides(o).
    Monomial complement_in(const Monomial& o) const {
        Monomial m;
        m.packed_ = o.packed_ - packed_;
        m.deg_ = o.deg_ - deg_;
        return m;
    }

    Monomial with(int i, int power) const {
        Monomial m = *this;
        m.packed_ &= ~(std::uint64_t(0xff) << shift(i));
        m.packed_ |= std::uint64_t(power) << shift(i);
        m.deg_ += power - (*this)[i];
        return m;
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.packed_ == b.packed_; }
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        if (a.deg_ != b.deg_) return a.deg_ <=> b.deg_;
        return a.packed_ <=> b.packed_;
    }

private:
    static int shift(int i) { return 8 * (kMaxVars - 1 - i); }

    std::uint64_t packed_ = 0;
    int deg_ = 0;
};

// All monomials in d variables of total degree exactly k, in ascending order.
std::vector<Monomial> monomials_of_degree(int d, int k);

}  // namespace strata
