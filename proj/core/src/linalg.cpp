#include "strata/linalg.hpp"

namespace strata {

ExactSolve solve_exact(const std::vector<std::vector<qcomplex>>& a, const std::vector<qcomplex>& b, int cols) {
    auto zero = [](const qcomplex& z) { return is_zero(z); };
    std::vector<std::vector<qcomplex>> aug = a;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    auto e = Echelon<qcomplex, decltype(zero)>::reduce(std::move(aug), cols + 1, zero);
    ExactSolve s;
    s.x.assign(cols, qcomplex(0));
    for (size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == cols) {
            s.consistent = false;
            continue;
        }
        s.x[e.pivots[r]] = e.rows[r][cols];
        ++s.rank;
    }
    s.unique = s.consistent && s.rank == cols;
    return s;
}

}  // namespace strata
