#include "strata/partitions.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "strata/scalar.hpp"

namespace strata {

int weight(const Partition& p) {
    return std::accumulate(p.begin(), p.end(), 0);
}

bool is_partition(const Partition& p) {
    if (p.empty()) return false;
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0) return false;
        if (i > 0 && p[i] > p[i - 1]) return false;
    }
    return true;
}

int SegreSymbol::size() const {
    int n = 0;
    for (const auto& p : parts) n += weight(p);
    return n;
}

namespace {

bool canonical_before(const Partition& a, const Partition& b) {
    int wa = weight(a), wb = weight(b);
    if (wa != wb) return wa > wb;
    return a > b;
}

}  // namespace

void canonicalize(SegreSymbol& s) {
    std::sort(s.parts.begin(), s.parts.end(), canonical_before);
}

SegreSymbol make_symbol(std::vector<Partition> parts) {
    if (parts.empty()) throw Error("invalid_symbol", "a symbol needs at least one partition");
    for (auto& p : parts) {
        std::sort(p.begin(), p.end(), std::greater<>());
        if (!is_partition(p)) throw Error("invalid_symbol", "member is not a partition of a positive integer");
    }
    SegreSymbol s{std::move(parts)};
    canonicalize(s);
    return s;
}

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 0) throw Error("invalid_argument", "n must be non-negative");
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        for (int k = std::min(remaining, max_part); k >= 1; --k) {
            cur.push_back(k);
            rec(remaining - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

std::vector<SegreSymbol> enumerate_double_partitions(int n) {
    if (n < 1) throw Error("invalid_argument", "n must be positive");
    // All partitions of weight <= n in canonical order; a symbol is a
    // non-decreasing index sequence into this list.
    std::vector<Partition> pool;
    for (int m = n; m >= 1; --m)
        for (auto& p : enumerate_partitions(m)) pool.push_back(std::move(p));
    std::vector<SegreSymbol> out;
    std::vector<Partition> cur;
    std::function<void(int, size_t)> rec = [&](int remaining, size_t start) {
        if (remaining == 0) {
            out.push_back(SegreSymbol{cur});
            return;
        }
        for (size_t i = start; i < pool.size(); ++i) {
            int w = weight(pool[i]);
            if (w > remaining) continue;
            cur.push_back(pool[i]);
            rec(remaining - w, i);
            cur.pop_back();
        }
    };
    rec(n, 0);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<mpz_class> fold_partition_counts(int r, int n) {
    if (r < 1 || n < 0) throw Error("invalid_argument", "need r >= 1 and n >= 0");
    // Exponents of the previous level; level 0 has exponent 1 for every m.
    std::vector<mpz_class> prev(n + 1, 1);
    std::vector<mpz_class> cur;
    for (int level = 1; level <= r; ++level) {
        cur.assign(n + 1, 0);
        cur[0] = 1;
        for (int m = 1; m <= n; ++m) {
            const mpz_class& e = prev[m];
            if (e == 0) continue;
            // Multiply by (1 - z^m)^(-e) = sum_j C(e + j - 1, j) z^(m j).
            std::vector<mpz_class> coef(n / m + 1);
            coef[0] = 1;
            for (int j = 1; j <= n / m; ++j) coef[j] = coef[j - 1] * (e + j - 1) / j;
            std::vector<mpz_class> next(n + 1, 0);
            for (int i = 0; i <= n; ++i) {
                if (cur[i] == 0) continue;
                for (int j = 0; i + m * j <= n; ++j) next[i + m * j] += cur[i] * coef[j];
            }
            cur = std::move(next);
        }
        prev = cur;
    }
    return cur;
}

mpz_class count_double_partitions_sigma(int n) {
    if (n < 0) throw Error("invalid_argument", "n must be non-negative");
    auto p = fold_partition_counts(1, n);
    std::vector<mpz_class> sigma(n + 1, 0);
    for (int d = 1; d <= n; ++d)
        for (int k = d; k <= n; k += d) sigma[k] += d * p[d];
    std::vector<mpz_class> q(n + 1, 0);
    q[0] = 1;
    for (int m = 1; m <= n; ++m) {
        mpz_class acc = 0;
        for (int k = 1; k <= m; ++k) acc += sigma[k] * q[m - k];
        if (acc % m != 0) throw Error("internal", "divisor-sum recursion produced a non-integer");
        q[m] = acc / m;
    }
    return q[n];
}

mpz_class count_fold_partitions(int r, int n) {
    mpz_class v = fold_partition_counts(r, n).at(n);
    if (r == 2 && v != count_double_partitions_sigma(n))
        throw Error("internal", "generating product and divisor-sum recursion disagree");
    return v;
}

Partition conjugate(const Partition& p) {
    Partition c;
    if (p.empty()) return c;
    for (int row = 1; row <= p.front(); ++row) {
        int len = 0;
        for (int x : p) len += x >= row;
        c.push_back(len);
    }
    return c;
}

SegreSymbol conjugate_symbol(const SegreSymbol& s) {
    SegreSymbol r;
    for (const auto& p : s.parts) r.parts.push_back(conjugate(p));
    canonicalize(r);
    return r;
}

Partition forgetful(const SegreSymbol& s) {
    Partition out;
    for (const auto& p : s.parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::string to_string(const Partition& p) {
    std::string s = "{";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(p[i]);
    }
    return s + "}";
}

std::string to_string(const SegreSymbol& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.parts.size(); ++i) {
        if (i) out += ";";
        out += to_string(s.parts[i]);
    }
    return out + "}";
}

}  // namespace strata
