#pragma once

#include <string>
#include <vector>

#include "strata/series.hpp"

namespace strata {

// Generalized Darboux-Egoroff system for an off-diagonal matrix F(x):
//   DE1: D_j(h,k) d_i F_kh - D_i(h,k) d_j F_kh
//          = sum_l [D_i(l,k) D_j(h,l) - D_j(l,k) D_i(h,l)] F_kl F_lh
//   DE2: (f_h - f_k) d_i F_kh = (b_h - b_k - 1) D_i(h,k) F_kh
//          + sum_l [D_i(l,k)(f_h - f_l) - (f_l - f_k) D_i(h,l)] F_kl F_lh
// with D_i(h,k) = d_i f_h - d_i f_k.
template <class S>
struct DEProblem {
    int d = 0;
    int n = 0;
    std::vector<S> x0;
    std::vector<Poly<S>> f;  // in the ambient coordinates x
    std::vector<S> b;

    // Checks sizes and the distinct-gradient condition.
    void validate() const;
};

struct DEResidualReport {
    int order = 0;
    std::vector<double> de1;  // max coefficient magnitude per total degree
    std::vector<double> de2;
    double max_abs() const;
};

template <class S>
DEResidualReport de_residual(const DEProblem<S>& p, const SeriesMatrix<S>& jet, int order);

// Off-diagonal constant matrix, row-major n x n.
template <class S>
using InitialValue = std::vector<std::vector<S>>;

template <class S>
struct DESolveResult {
    SeriesMatrix<S> jet;
    bool feasible = false;
    bool base_constraint_ok = true;
    DEResidualReport residual;
    std::vector<std::string> warnings;
};

// Taylor jet of degree K from the initial value, following the uniqueness
// proof: direct solve at separated pairs, pivot-direction solve and the small
// W systems at coalescent pairs.
template <class S>
DESolveResult<S> de_solve_jet(const DEProblem<S>& p, const InitialValue<S>& F0, int K, double tol = 1e-9);

// Independent solve: all coefficient equations of one degree at once.
template <class S>
SeriesMatrix<S> de_oracle_solve(const DEProblem<S>& p, const InitialValue<S>& F0, int K);

// Max magnitude of the degree-0 DE2 relation at coalescent pairs.
template <class S>
double base_constraint_residual(const DEProblem<S>& p, const InitialValue<S>& F0);

}  // namespace strata
