#include "strata/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>

#include "strata/linalg.hpp"

namespace strata {

double DEResidualReport::max_abs() const {
    double m = 0;
    for (double v : de1) m = std::max(m, v);
    for (double v : de2) m = std::max(m, v);
    return m;
}

template <class S>
void DEProblem<S>::validate() const {
    if (d < 1 || d > kMaxVars) throw Error("invalid_problem", "d out of range");
    if (n < 2) throw Error("invalid_problem", "n must be at least 2");
    if (int(x0.size()) != d) throw Error("invalid_problem", "x0 has wrong length");
    if (int(f.size()) != n || int(b.size()) != n) throw Error("invalid_problem", "f and b need n entries");
    for (const auto& p : f)
        if (p.vars() != d) throw Error("invalid_problem", "f_i has wrong variable count");
    for (int k = 0; k < n; ++k)
        for (int h = k + 1; h < n; ++h) {
            bool distinct = false;
            for (int i = 0; i < d; ++i)
                if (!is_zero(f[h].diff(i).eval(x0) - f[k].diff(i).eval(x0))) distinct = true;
            if (!distinct)
                throw Error("genericity", "genericity violated: gradients of f_" + std::to_string(k + 1) + " and f_" +
                                              std::to_string(h + 1) + " agree at x0");
        }
}

namespace {

template <class S>
S from_int(long v) {
    return scalar_traits<S>::from_int(v);
}

// Residuals of both equation families for a jet, as polynomials in y = x - x0.
template <class S>
class DESystem {
public:
    explicit DESystem(const DEProblem<S>& p) : n(p.n), d(p.d), b(p.b) {
        p.validate();
        for (int k = 0; k < n; ++k) {
            fy.push_back(p.f[k].shifted(p.x0));
            std::vector<Poly<S>> g;
            for (int i = 0; i < d; ++i) g.push_back(fy[k].diff(i));
            grad.push_back(std::move(g));
        }
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) pairs.push_back({i, j});
        // Coefficients of the quadratic terms.
        c1.resize(size_t(n) * n * n * pairs.size());
        c2.resize(size_t(n) * n * n * d);
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h)
                for (int l = 0; l < n; ++l) {
                    if (k == h || l == k || l == h) continue;
                    for (size_t q = 0; q < pairs.size(); ++q) {
                        auto [i, j] = pairs[q];
                        c1[idx3(k, h, l) * pairs.size() + q] = D(i, l, k) * D(j, h, l) - D(j, l, k) * D(i, h, l);
                    }
                    for (int i = 0; i < d; ++i)
                        c2[idx3(k, h, l) * d + i] = D(i, l, k) * (fy[h] - fy[l]) - (fy[l] - fy[k]) * D(i, h, l);
                }
    }

    // d_i f_h - d_i f_k
    Poly<S> D(int i, int h, int k) const { return grad[h][i] - grad[k][i]; }
    S dgrad(int k, int h, int i) const { return D(i, h, k).constant_term(); }
    S delta0(int k, int h) const { return (fy[h] - fy[k]).constant_term(); }
    S kappa(int k, int h) const { return b[h] - b[k] - from_int<S>(1); }

    size_t idx3(int k, int h, int l) const { return (size_t(k) * n + h) * n + l; }
    size_t de1_index(int k, int h, size_t q) const { return (size_t(k) * n + h) * pairs.size() + q; }
    size_t de2_index(int k, int h, int i) const { return (size_t(k) * n + h) * d + i; }
    size_t pair_index(int i, int j) const {
        for (size_t q = 0; q < pairs.size(); ++q)
            if (pairs[q].first == i && pairs[q].second == j) return q;
        throw Error("internal", "bad index pair");
    }

    struct Eval {
        std::vector<Poly<S>> de1, de2;
    };

    // F holds n*n polynomials in y; residual terms above max_deg are dropped.
    Eval evaluate(const std::vector<Poly<S>>& F, int max_deg, bool want1, bool want2) const {
        Eval ev;
        ev.de1.assign(size_t(n) * n * pairs.size(), Poly<S>(d));
        ev.de2.assign(size_t(n) * n * d, Poly<S>(d));
        std::vector<Poly<S>> prod(size_t(n) * n * n, Poly<S>(d));
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int h = 0; h < n; ++h) {
                    if (k == h || l == k || l == h) continue;
                    prod[idx3(k, h, l)] = F[k * n + l].mul(F[l * n + h], max_deg);
                }
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) {
                if (k == h) continue;
                const Poly<S>& fkh = F[k * n + h];
                std::vector<Poly<S>> dF;
                for (int i = 0; i < d; ++i) dF.push_back(fkh.diff(i).truncated(max_deg));
                if (want1)
                    for (size_t q = 0; q < pairs.size(); ++q) {
                        auto [i, j] = pairs[q];
                        Poly<S> r = D(j, h, k).mul(dF[i], max_deg) - D(i, h, k).mul(dF[j], max_deg);
                        for (int l = 0; l < n; ++l) {
                            if (l == k || l == h) continue;
                            r -= c1[idx3(k, h, l) * pairs.size() + q].mul(prod[idx3(k, h, l)], max_deg);
                        }
                        ev.de1[de1_index(k, h, q)] = std::move(r);
                    }
                if (want2) {
                    Poly<S> delta = fy[h] - fy[k];
                    for (int i = 0; i < d; ++i) {
                        Poly<S> r = delta.mul(dF[i], max_deg) - D(i, h, k).mul(fkh, max_deg) * kappa(k, h);
                        for (int l = 0; l < n; ++l) {
                            if (l == k || l == h) continue;
                            r -= c2[idx3(k, h, l) * d + i].mul(prod[idx3(k, h, l)], max_deg);
                        }
                        ev.de2[de2_index(k, h, i)] = std::move(r);
                    }
                }
            }
        return ev;
    }

    // Coefficient of y^beta in DE1 for the ordered direction pair (i, j), i != j.
    S de1_coeff(const Eval& ev, int k, int h, int i, int j, const Monomial& beta) const {
        if (i < j) return ev.de1[de1_index(k, h, pair_index(i, j))].coeff(beta);
        return -ev.de1[de1_index(k, h, pair_index(j, i))].coeff(beta);
    }

    int n, d;
    std::vector<S> b;
    std::vector<Poly<S>> fy;
    std::vector<std::vector<Poly<S>>> grad;
    std::vector<std::pair<int, int>> pairs;
    std::vector<Poly<S>> c1, c2;
};

template <class S>
bool near_zero(const S& s, double tol) {
    if constexpr (scalar_traits<S>::exact) return is_zero(s);
    else return std::abs(s) < tol;
}

constexpr double kRouteTol = 1e-10;

template <class S>
std::vector<Poly<S>> initial_polys(const DEProblem<S>& p, const InitialValue<S>& F0) {
    const int n = p.n;
    if (int(F0.size()) != n) throw Error("invalid_problem", "F0 must be n x n");
    std::vector<Poly<S>> F(size_t(n) * n, Poly<S>(p.d));
    for (int k = 0; k < n; ++k) {
        if (int(F0[k].size()) != n) throw Error("invalid_problem", "F0 must be n x n");
        if (!is_zero(F0[k][k])) throw Error("invalid_problem", "F0 must have zero diagonal");
        for (int h = 0; h < n; ++h)
            if (k != h) F[k * n + h] = Poly<S>::constant(p.d, F0[k][h]);
    }
    return F;
}

template <class S>
SeriesMatrix<S> to_jet(const DEProblem<S>& p, const std::vector<Poly<S>>& F, int K) {
    SeriesMatrix<S> jet(p.n, p.d, p.x0, K);
    for (int k = 0; k < p.n; ++k)
        for (int h = 0; h < p.n; ++h) jet(k, h).coeffs = F[k * p.n + h].truncated(K);
    return jet;
}

template <class S>
DEResidualReport report_from(const DESystem<S>& sys, const std::vector<Poly<S>>& F, int order) {
    auto ev = sys.evaluate(F, order, true, true);
    DEResidualReport rep;
    rep.order = order;
    rep.de1.assign(order + 1, 0.0);
    rep.de2.assign(order + 1, 0.0);
    for (const auto& r : ev.de1)
        for (const auto& [m, c] : r.terms()) rep.de1[m.degree()] = std::max(rep.de1[m.degree()], magnitude(c));
    for (const auto& r : ev.de2)
        for (const auto& [m, c] : r.terms()) rep.de2[m.degree()] = std::max(rep.de2[m.degree()], magnitude(c));
    return rep;
}

template <class S>
bool integer_nonzero(const S& s) {
    if constexpr (scalar_traits<S>::exact) return s.im == 0 && s.re.get_den() == 1 && s.re != 0;
    else return std::abs(s.imag()) < 1e-12 && std::abs(s.real() - std::round(s.real())) < 1e-12 && std::abs(s.real()) > 0.5;
}

// Solves a small dense square system; returns false when singular.
template <class S>
bool solve_square(const std::vector<std::vector<S>>& a, const std::vector<S>& rhs, std::vector<S>& x) {
    const int n = int(rhs.size());
    if constexpr (scalar_traits<S>::exact) {
        auto s = solve_exact(a, rhs, n);
        if (!s.unique) return false;
        x = s.x;
        return true;
    } else {
        Eigen::MatrixXcd m(n, n);
        Eigen::VectorXcd v(n);
        for (int i = 0; i < n; ++i) {
            v(i) = rhs[i];
            for (int j = 0; j < n; ++j) m(i, j) = a[i][j];
        }
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
        lu.setThreshold(1e-12);
        if (!lu.isInvertible()) return false;
        Eigen::VectorXcd sol = lu.solve(v);
        x.assign(sol.data(), sol.data() + n);
        return true;
    }
}

}  // namespace

template <class S>
DEResidualReport de_residual(const DEProblem<S>& p, const SeriesMatrix<S>& jet, int order) {
    if (order < 0) throw Error("invalid_argument", "order must be non-negative");
    if (jet.n != p.n || jet.vars() != p.d) throw Error("dimension", "jet does not match the problem");
    if (jet.K() < order + 1) throw Error("degree_shortfall", "jet degree must be at least order + 1");
    if (jet.center() != p.x0) throw Error("dimension", "jet is not centered at x0");
    DESystem<S> sys(p);
    std::vector<Poly<S>> F;
    for (int k = 0; k < p.n; ++k)
        for (int h = 0; h < p.n; ++h) {
            if (k == h && !jet(k, h).coeffs.is_zero()) throw Error("invalid_problem", "jet diagonal must vanish");
            F.push_back(jet(k, h).coeffs);
        }
    return report_from(sys, F, order);
}

template <class S>
double base_constraint_residual(const DEProblem<S>& p, const InitialValue<S>& F0) {
    DESystem<S> sys(p);
    auto F = initial_polys(p, F0);
    auto ev = sys.evaluate(F, 0, false, true);
    double worst = 0;
    for (int k = 0; k < p.n; ++k)
        for (int h = 0; h < p.n; ++h) {
            if (k == h || !near_zero(sys.delta0(k, h), kRouteTol)) continue;
            for (int i = 0; i < p.d; ++i) worst = std::max(worst, magnitude(ev.de2[sys.de2_index(k, h, i)].constant_term()));
        }
    return worst;
}

template <class S>
DESolveResult<S> de_solve_jet(const DEProblem<S>& p, const InitialValue<S>& F0, int K, double tol) {
    if (K < 0) throw Error("invalid_argument", "order must be non-negative");
    DESystem<S> sys(p);
    const int n = p.n, d = p.d;
    auto F = initial_polys(p, F0);
    DESolveResult<S> res;

    std::vector<char> coal(size_t(n) * n, 0);
    std::vector<int> pivot(size_t(n) * n, 0);
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h) {
            if (k == h) continue;
            S dl = sys.delta0(k, h);
            coal[k * n + h] = near_zero(dl, kRouteTol);
            if constexpr (!scalar_traits<S>::exact)
                if (!coal[k * n + h] && std::abs(dl) < 1e-6)
                    res.warnings.push_back("pair (" + std::to_string(k + 1) + "," + std::to_string(h + 1) +
                                           ") is nearly coalescent; routing is ill-conditioned");
            double best = -1;
            for (int i = 0; i < d; ++i) {
                double v = magnitude(sys.dgrad(k, h, i));
                if (v > best) {
                    best = v;
                    pivot[k * n + h] = i;
                }
            }
            if (best <= 0) throw Error("genericity", "genericity violated: no pivot direction");
            if (coal[k * n + h] && integer_nonzero(p.b[h] - p.b[k]))
                res.warnings.push_back("partial non-resonance fails at pair (" + std::to_string(k + 1) + "," +
                                       std::to_string(h + 1) + ")");
        }

    double base = base_constraint_residual(p, F0);
    res.base_constraint_ok = scalar_traits<S>::exact ? base == 0 : base <= tol;
    if (!res.base_constraint_ok)
        res.warnings.push_back("initial value violates the base-point constraint at a coalescent pair");

    for (int m = 1; m <= K; ++m) {
        const auto mons = monomials_of_degree(d, m);
        // Separated pairs: DE2 solved directly.
        bool any_sep = false, any_coal = false;
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h)
                if (k != h) (coal[k * n + h] ? any_coal : any_sep) = true;
        if (any_sep) {
            auto ev = sys.evaluate(F, m - 1, false, true);
            for (int k = 0; k < n; ++k)
                for (int h = 0; h < n; ++h) {
                    if (k == h || coal[k * n + h]) continue;
                    S dl = sys.delta0(k, h);
                    for (const auto& alpha : mons) {
                        int i = 0;
                        while (alpha[i] == 0) ++i;
                        Monomial beta = alpha.with(i, alpha[i] - 1);
                        S e = ev.de2[sys.de2_index(k, h, i)].coeff(beta);
                        F[k * n + h].add_term(alpha, -e / (dl * from_int<S>(alpha[i])));
                    }
                }
        }
        if (!any_coal) continue;
        // Coalescent pairs: pivot-direction DE1 and the W systems.
        auto ev = sys.evaluate(F, m, true, true);
        std::vector<std::pair<Monomial, S>> updates;
        for (int k = 0; k < n; ++k)
            for (int h = 0; h < n; ++h) {
                if (k == h || !coal[k * n + h]) continue;
                const int j0 = pivot[k * n + h];
                const S bd = p.b[h] - p.b[k];
                if (near_zero(S(from_int<S>(m + 1) - bd), 1e-12))
                    throw Error("resonant", "resonant: b_h - b_k = " + std::to_string(m + 1) + " at pair (" +
                                                std::to_string(k + 1) + "," + std::to_string(h + 1) + ")");
                updates.clear();
                for (const auto& alpha : mons) {
                    int a0 = -1;
                    for (int a = 0; a < d; ++a)
                        if (alpha[a] > 0 && near_zero(sys.dgrad(k, h, a), kRouteTol)) {
                            a0 = a;
                            break;
                        }
                    if (a0 >= 0) {
                        Monomial beta = alpha.with(a0, alpha[a0] - 1);
                        S e = sys.de1_coeff(ev, k, h, a0, j0, beta);
                        updates.push_back({alpha, -e / (sys.dgrad(k, h, j0) * from_int<S>(alpha[a0]))});
                        continue;
                    }
                    // Unknowns: alpha and alpha - e_a + e_j0 for the other directions a.
                    std::vector<int> others;
                    for (int a = 0; a < d; ++a)
                        if (alpha[a] > 0 && a != j0) others.push_back(a);
                    const int u = int(others.size()) + 1;
                    auto shifted = [&](int a) { return alpha.with(a, alpha[a] - 1).with(j0, alpha[j0] + (a == j0 ? 0 : 1)); };
                    std::map<Monomial, int> uidx{{alpha, 0}};
                    for (int r = 0; r < u - 1; ++r) uidx[shifted(others[r])] = r + 1;
                    std::vector<std::vector<S>> w(u, std::vector<S>(u, S{}));
                    std::vector<S> rhs(u);
                    const S dj0 = sys.dgrad(k, h, j0);
                    for (int r = 0; r < u - 1; ++r) {
                        const int a = others[r];
                        Monomial beta = alpha.with(a, alpha[a] - 1);
                        w[r][0] = dj0 * from_int<S>(alpha[a]);
                        w[r][r + 1] = -sys.dgrad(k, h, a) * from_int<S>(alpha[j0] + 1);
                        rhs[r] = -sys.de1_coeff(ev, k, h, a, j0, beta);
                    }
                    const int istar = alpha[j0] > 0 ? j0 : others.back();
                    Monomial gamma = alpha.with(istar, alpha[istar] - 1);
                    gamma = gamma.with(j0, gamma[j0] + 1);
                    auto& last = w[u - 1];
                    for (int c = 0; c < d; ++c) {
                        if (gamma[c] == 0) continue;
                        Monomial target = alpha.with(c, alpha[c] - 1);
                        target = target.with(j0, target[j0] + 1);
                        if (c == j0) target = alpha;
                        Monomial low = gamma.with(c, gamma[c] - 1);
                        last[uidx.at(target)] += sys.dgrad(k, h, c) * from_int<S>(low[istar] + 1);
                    }
                    last[uidx.at(gamma)] -= sys.kappa(k, h) * sys.dgrad(k, h, istar);
                    rhs[u - 1] = -ev.de2[sys.de2_index(k, h, istar)].coeff(gamma);
                    std::vector<S> x;
                    if (!solve_square(w, rhs, x))
                        throw Error("resonant", "resonant: W system is singular at degree " + std::to_string(m));
                    updates.push_back({alpha, x[0]});
                }
                for (const auto& [mono, v] : updates) F[k * n + h].add_term(mono, v);
            }
    }

    res.jet = to_jet(p, F, K);
    if (K >= 1) {
        res.residual = report_from(sys, F, K - 1);
        double worst = res.residual.max_abs();
        res.feasible = scalar_traits<S>::exact ? worst == 0 : worst <= tol;
    } else {
        res.residual.order = -1;
        res.feasible = res.base_constraint_ok;
    }
    return res;
}

template <class S>
SeriesMatrix<S> de_oracle_solve(const DEProblem<S>& p, const InitialValue<S>& F0, int K) {
    if (K < 0) throw Error("invalid_argument", "order must be non-negative");
    DESystem<S> sys(p);
    const int n = p.n, d = p.d;
    auto F = initial_polys(p, F0);
    std::vector<std::pair<int, int>> slots;
    for (int k = 0; k < n; ++k)
        for (int h = 0; h < n; ++h)
            if (k != h) slots.push_back({k, h});
    std::vector<int> slot_of(size_t(n) * n, -1);
    for (size_t s = 0; s < slots.size(); ++s) slot_of[slots[s].first * n + slots[s].second] = int(s);

    for (int m = 1; m <= K; ++m) {
        const auto mons = monomials_of_degree(d, m);
        const auto prev = monomials_of_degree(d, m - 1);
        std::map<Monomial, int> mon_index;
        for (size_t i = 0; i < mons.size(); ++i) mon_index[mons[i]] = int(i);
        const int cols = int(slots.size() * mons.size());
        auto var = [&](int k, int h, const Monomial& mono) { return slot_of[k * n + h] * int(mons.size()) + mon_index.at(mono); };

        auto ev = sys.evaluate(F, m, true, true);
        std::vector<std::vector<S>> rows;
        std::vector<S> rhs;
        auto emit = [&](std::vector<S> row, const S& constant) {
            bool empty = std::all_of(row.begin(), row.end(), [](const S& s) { return near_zero(s, 1e-300); });
            if (empty) {
                if (!near_zero(constant, 1e-9))
                    throw Error("inconsistent", "no jet with this initial value: equations of degree " +
                                                    std::to_string(m - 1) + " are inconsistent");
                return;
            }
            rows.push_back(std::move(row));
            rhs.push_back(-constant);
        };

        for (auto [k, h] : slots) {
            const bool is_coal = near_zero(sys.delta0(k, h), kRouteTol);
            for (const auto& beta : prev) {
                for (size_t q = 0; q < sys.pairs.size(); ++q) {
                    auto [i, j] = sys.pairs[q];
                    std::vector<S> row(cols, S{});
                    row[var(k, h, beta.with(i, beta[i] + 1))] += sys.dgrad(k, h, j) * from_int<S>(beta[i] + 1);
                    row[var(k, h, beta.with(j, beta[j] + 1))] -= sys.dgrad(k, h, i) * from_int<S>(beta[j] + 1);
                    emit(std::move(row), ev.de1[sys.de1_index(k, h, q)].coeff(beta));
                }
                for (int i = 0; i < d; ++i) {
                    std::vector<S> row(cols, S{});
                    if (!is_coal) row[var(k, h, beta.with(i, beta[i] + 1))] += sys.delta0(k, h) * from_int<S>(beta[i] + 1);
                    emit(std::move(row), ev.de2[sys.de2_index(k, h, i)].coeff(beta));
                }
            }
            if (!is_coal) continue;
            // At a coalescent pair the degree-m DE2 coefficients see the new unknowns.
            for (const auto& gamma : mons)
                for (int i = 0; i < d; ++i) {
                    std::vector<S> row(cols, S{});
                    for (int c = 0; c < d; ++c) {
                        if (gamma[c] == 0) continue;
                        Monomial low = gamma.with(c, gamma[c] - 1);
                        row[var(k, h, low.with(i, low[i] + 1))] += sys.dgrad(k, h, c) * from_int<S>(low[i] + 1);
                    }
                    row[var(k, h, gamma)] -= sys.kappa(k, h) * sys.dgrad(k, h, i);
                    for (int l = 0; l < n; ++l) {
                        if (l == k || l == h) continue;
                        S cq = sys.c2[sys.idx3(k, h, l) * d + i].constant_term();
                        if (is_zero(cq)) continue;
                        row[var(k, l, gamma)] -= cq * F[l * n + h].constant_term();
                        row[var(l, h, gamma)] -= cq * F[k * n + l].constant_term();
                    }
                    emit(std::move(row), ev.de2[sys.de2_index(k, h, i)].coeff(gamma));
                }
        }

        std::vector<S> x;
        if constexpr (scalar_traits<S>::exact) {
            auto s = solve_exact(rows, rhs, cols);
            if (!s.consistent)
                throw Error("inconsistent", "no jet with this initial value: system of degree " + std::to_string(m) +
                                                " is inconsistent");
            if (!s.unique) throw Error("oracle_singular", "oracle system is singular at degree " + std::to_string(m));
            x = s.x;
        } else {
            Eigen::MatrixXcd a(rows.size(), cols);
            Eigen::VectorXcd v(rows.size());
            for (size_t r = 0; r < rows.size(); ++r) {
                v(r) = rhs[r];
                for (int c = 0; c < cols; ++c) a(r, c) = rows[r][c];
            }
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
            cod.setThreshold(1e-12);
            if (cod.rank() < cols) throw Error("oracle_singular", "oracle system is singular at degree " + std::to_string(m));
            Eigen::VectorXcd sol = cod.solve(v);
            x.assign(sol.data(), sol.data() + cols);
        }
        for (auto [k, h] : slots)
            for (const auto& mono : mons) F[k * n + h].add_term(mono, x[var(k, h, mono)]);
    }
    return to_jet(p, F, K);
}

template struct DEProblem<cplx>;
template struct DEProblem<qcomplex>;
template DEResidualReport de_residual(const DEProblem<cplx>&, const SeriesMatrix<cplx>&, int);
template DEResidualReport de_residual(const DEProblem<qcomplex>&, const SeriesMatrix<qcomplex>&, int);
template DESolveResult<cplx> de_solve_jet(const DEProblem<cplx>&, const InitialValue<cplx>&, int, double);
template DESolveResult<qcomplex> de_solve_jet(const DEProblem<qcomplex>&, const InitialValue<qcomplex>&, int, double);
template SeriesMatrix<cplx> de_oracle_solve(const DEProblem<cplx>&, const InitialValue<cplx>&, int);
template SeriesMatrix<qcomplex> de_oracle_solve(const DEProblem<qcomplex>&, const InitialValue<qcomplex>&, int);
template double base_constraint_residual(const DEProblem<cplx>&, const InitialValue<cplx>&);
template double base_constraint_residual(const DEProblem<qcomplex>&, const InitialValue<qcomplex>&);

}  // namespace strata
