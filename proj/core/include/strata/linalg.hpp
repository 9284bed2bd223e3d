#pragma once

#include <optional>
#include <vector>

#include "strata/scalar.hpp"

namespace strata {

// Row echelon machinery over an exact field F. `zero` decides exact zeros.
template <class F, class IsZero>
struct Echelon {
    std::vector<std::vector<F>> rows;  // reduced rows
    std::vector<int> pivots;           // pivot column of each row

    // Reduced row echelon form of a (rows x cols) matrix.
    static Echelon reduce(std::vector<std::vector<F>> m, int cols, IsZero zero) {
        Echelon e;
        int r = 0;
        const int nrows = int(m.size());
        for (int c = 0; c < cols && r < nrows; ++c) {
            int piv = -1;
            for (int i = r; i < nrows; ++i)
                if (!zero(m[i][c])) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(m[r], m[piv]);
            F inv = F(1) / m[r][c];
            for (int k = c; k < cols; ++k) m[r][k] = m[r][k] * inv;
            for (int i = 0; i < nrows; ++i) {
                if (i == r || zero(m[i][c])) continue;
                F f = m[i][c];
                for (int k = c; k < cols; ++k) m[i][k] = m[i][k] - f * m[r][k];
            }
            e.pivots.push_back(c);
            ++r;
        }
        m.resize(r);
        e.rows = std::move(m);
        return e;
    }
};

// Basis of the right kernel of a (rows x cols) matrix.
template <class F, class IsZero>
std::vector<std::vector<F>> nullspace(const std::vector<std::vector<F>>& m, int cols, IsZero zero) {
    auto e = Echelon<F, IsZero>::reduce(m, cols, zero);
    std::vector<char> is_pivot(cols, 0);
    for (int p : e.pivots) is_pivot[p] = 1;
    std::vector<std::vector<F>> basis;
    for (int f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<F> v(cols, F(0));
        v[f] = F(1);
        for (size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = F(0) - e.rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

struct ExactSolve {
    std::vector<qcomplex> x;
    int rank = 0;
    bool consistent = true;
    bool unique = false;
};

// Solves A x = b exactly; A is given row-wise with `cols` unknowns.
ExactSolve solve_exact(const std::vector<std::vector<qcomplex>>& a, const std::vector<qcomplex>& b, int cols);

}  // namespace strata
