#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace strata {

// Non-increasing list of positive parts.
using Partition = std::vector<int>;

// Multiset of partitions (one per eigenvalue), kept in canonical order:
// weight descending, then lexicographically descending.
struct SegreSymbol {
    std::vector<Partition> parts;

    int size() const;
    friend bool operator==(const SegreSymbol&, const SegreSymbol&) = default;
    friend auto operator<=>(const SegreSymbol& a, const SegreSymbol& b) { return a.parts <=> b.parts; }
};

int weight(const Partition& p);
bool is_partition(const Partition& p);

// Sorts the members canonically and validates them.
SegreSymbol make_symbol(std::vector<Partition> parts);
void canonicalize(SegreSymbol& s);

std::vector<Partition> enumerate_partitions(int n);
std::vector<SegreSymbol> enumerate_double_partitions(int n);

// Number of r-fold partitions of n (r = 1 gives p(n)), from the generating
// product prod_m (1 - z^m)^(-p(r-1, m)).
mpz_class count_fold_partitions(int r, int n);
std::vector<mpz_class> fold_partition_counts(int r, int n);

// p(2, n) from the divisor-sum recursion.
mpz_class count_double_partitions_sigma(int n);

Partition conjugate(const Partition& p);
SegreSymbol conjugate_symbol(const SegreSymbol& s);

// Multiunion of all fine parts.
Partition forgetful(const SegreSymbol& s);

std::string to_string(const Partition& p);
std::string to_string(const SegreSymbol& s);

}  // namespace strata
