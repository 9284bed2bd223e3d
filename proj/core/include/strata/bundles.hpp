#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "strata/partitions.hpp"
#include "strata/scalar.hpp"

namespace strata {

struct BundleDescriptor {
    SegreSymbol symbol;
    int n = 0;
    int codim = 0;
    int dim = 0;
    bool regular = false;
    bool diagonalizable = false;
};

BundleDescriptor describe(const SegreSymbol& s);

struct Moves {
    std::vector<SegreSymbol> type1;  // merge two eigenvalues
    std::vector<SegreSymbol> type2;  // move one box inside one Ferrers diagram
};

Moves elementary_moves(const SegreSymbol& s);

// Box moves on a single partition that lower it by one step in dominance order.
std::vector<Partition> box_moves(const Partition& p);

// True when bundle a lies in the closure of bundle b.
bool closure_leq(const SegreSymbol& a, const SegreSymbol& b);

struct HasseDiagram {
    int n = 0;
    std::vector<SegreSymbol> vertices;
    std::vector<int> dims;
    // (lower, upper) vertex indices: lower is obtained from upper by one move.
    std::vector<std::pair<int, int>> edges;

    int index_of(const SegreSymbol& s) const;
};

HasseDiagram hasse_diagram(int n, bool transitive_reduction = false);

// Label in the alpha^2 beta gamma style, one Greek letter per eigenvalue.
std::string mu_string(const SegreSymbol& s);
std::string to_dot(const HasseDiagram& h);

struct MatrixClassification {
    SegreSymbol symbol;
    std::vector<cplx> eigenvalues;  // one per cluster, same order as symbol.parts
    bool ill_conditioned = false;   // two clusters closer than 10 tol
};

MatrixClassification classify_matrix(const Eigen::MatrixXcd& a, double tol = 1e-8);

// Rank from singular values above tol times the largest one.
int numerical_rank(const Eigen::MatrixXcd& m, double tol);

}  // namespace strata
