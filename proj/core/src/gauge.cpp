#include "strata/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace strata {

namespace {

template <class S>
bool near_zero(const S& s, double tol) {
    if constexpr (scalar_traits<S>::exact) return is_zero(s);
    else return std::abs(s) < tol;
}

template <class S>
S from_int(long v) {
    return scalar_traits<S>::from_int(v);
}

template <class S>
bool integer_nonzero(const S& s) {
    if constexpr (scalar_traits<S>::exact) return s.im == 0 && s.re.get_den() == 1 && s.re != 0;
    else return std::abs(s.imag()) < 1e-12 && std::abs(s.real() - std::round(s.real())) < 1e-12 && std::abs(s.real()) > 0.5;
}

template <class S>
SeriesMatrix<S> constant_diagonal(int n, int d, const std::vector<S>& center, int K, const std::vector<S>& b) {
    SeriesMatrix<S> m(n, d, center, K);
    for (int i = 0; i < n; ++i) m(i, i).coeffs.add_term(Monomial(), b[i]);
    return m;
}

template <class S>
void note_matrix(std::vector<double>& acc, const SeriesMatrix<S>& m, int order) {
    for (const auto& e : m.entries) {
        for (const auto& [mono, c] : e.coeffs.terms()) {
            if (mono.degree() > order) break;
            acc[mono.degree()] = std::max(acc[mono.degree()], magnitude(c));
        }
    }
}

template <class S>
double max_up_to(const SeriesMatrix<S>& m, int deg) {
    return deg < 0 ? 0.0 : max_coeff_magnitude(m, deg);
}

template <class S>
void require_offdiagonal(const SeriesMatrix<S>& L) {
    for (int i = 0; i < L.n; ++i)
        if (!L(i, i).coeffs.is_zero()) throw Error("shape", "L must be off-diagonal");
}

template <class S>
bool same_series(const TruncatedSeries<S>& a, const TruncatedSeries<S>& b, int deg, double tol) {
    Poly<S> diff = a.coeffs - b.coeffs;
    for (const auto& [m, c] : diff.terms()) {
        if (m.degree() > deg) break;
        if (!near_zero(c, tol)) return false;
    }
    return true;
}

template <class S>
bool vanishes(const TruncatedSeries<S>& a, int deg, double tol) {
    for (const auto& [m, c] : a.coeffs.terms()) {
        if (m.degree() > deg) break;
        if (!near_zero(c, tol)) return false;
    }
    return true;
}

}  // namespace

template <class S>
SeriesMatrix<S> diagonal_matrix(const std::vector<TruncatedSeries<S>>& f) {
    if (f.empty()) throw Error("shape", "empty diagonal");
    SeriesMatrix<S> m(int(f.size()), f[0].vars(), f[0].center, f[0].K);
    for (size_t i = 0; i < f.size(); ++i) {
        require_same_frame(f[i], f[0]);
        m(int(i), int(i)) = f[i];
    }
    return m;
}

template <class S>
FramedConnection<S> build_connection(const std::vector<Poly<S>>& f, const std::vector<S>& bdiag, const SeriesMatrix<S>& L) {
    const int n = L.n;
    if (n < 1) throw Error("shape", "empty connection");
    if (int(f.size()) != n || int(bdiag.size()) != n) throw Error("shape", "Delta0, Bdiag and L sizes differ");
    require_offdiagonal(L);
    FramedConnection<S> c;
    c.n = n;
    c.d = L.vars();
    c.center = L.center();
    c.K = L.K();
    c.fpoly = f;
    c.bdiag = bdiag;
    c.L = L;
    for (const auto& p : f) {
        if (p.vars() != c.d) throw Error("shape", "Delta0 entries have the wrong variable count");
        c.f.push_back(series_from_poly(p, c.center, c.K));
    }
    c.delta0 = diagonal_matrix(c.f);
    for (int k = 0; k < c.d; ++k) {
        std::vector<TruncatedSeries<S>> df;
        for (const auto& p : f) df.push_back(series_from_poly(p.diff(k), c.center, c.K));
        c.d_delta0.push_back(diagonal_matrix(df));
    }
    c.B = constant_diagonal(n, c.d, c.center, c.K, bdiag) + commutator(L, c.delta0);
    for (int k = 0; k < c.d; ++k) c.omega.push_back(commutator(c.d_delta0[k], L));
    return c;
}

double IntegrabilityReport::max_abs() const {
    double m = 0;
    for (const auto* v : {&commutator, &flat_b, &wedge, &curvature})
        for (double x : *v) m = std::max(m, x);
    return m;
}

template <class S>
IntegrabilityReport integrability_residual(const SeriesMatrix<S>& delta0, const SeriesMatrix<S>& B,
                                           const std::vector<SeriesMatrix<S>>& w, int order) {
    const int d = delta0.vars();
    if (int(w.size()) != d) throw Error("shape", "one matrix of w per coordinate is required");
    if (B.n != delta0.n) throw Error("shape", "B and Delta0 sizes differ");
    for (const auto& m : w)
        if (m.n != delta0.n) throw Error("shape", "w and Delta0 sizes differ");
    if (order < 0) throw Error("invalid_argument", "order must be non-negative");
    if (delta0.K() < order + 1) throw Error("degree_shortfall", "jets must have degree at least order + 1");
    IntegrabilityReport r;
    r.order = order;
    r.commutator.assign(order + 1, 0.0);
    r.flat_b.assign(order + 1, 0.0);
    r.wedge.assign(order + 1, 0.0);
    r.curvature.assign(order + 1, 0.0);
    std::vector<SeriesMatrix<S>> dd;
    for (int i = 0; i < d; ++i) dd.push_back(diff(delta0, i));
    for (int i = 0; i < d; ++i) {
        note_matrix(r.commutator, commutator(dd[i], B) + commutator(delta0, w[i]), order);
        note_matrix(r.flat_b, diff(B, i) - commutator(B, w[i]), order);
        for (int j = i + 1; j < d; ++j) {
            note_matrix(r.wedge, commutator(dd[i], w[j]) + commutator(w[i], dd[j]), order);
            note_matrix(r.curvature, diff(w[j], i) - diff(w[i], j) + w[i] * w[j] - w[j] * w[i], order);
        }
    }
    return r;
}

template <class S>
DvWitness<S> dv_witness(const SeriesMatrix<S>& delta0, const SeriesMatrix<S>& B, const std::vector<SeriesMatrix<S>>& w,
                        double tol) {
    const int n = delta0.n, d = delta0.vars(), K = delta0.K();
    if (B.n != n || int(w.size()) != d) throw Error("shape", "frame data sizes differ");
    DvWitness<S> out;
    SeriesMatrix<S> L = delta0.zero_like();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            auto g = series_sub(delta0(j, j), delta0(i, i));
            if (!near_zero(g.value_at_center(), tol)) {
                auto lij = series_mul(B(i, j), series_invert(g));
                // w_ij must equal L_ij (d f_i - d f_j); derivatives lose one degree.
                bool ok = true;
                for (int c = 0; c < d && ok; ++c) {
                    auto dfc = series_scale(series_diff(g, c), from_int<S>(-1));
                    ok = same_series(w[c](i, j), series_mul(lij, dfc), K - 1, tol);
                }
                if (!ok) {
                    out.obstructions.push_back({i, j, "w_ij is not a multiple of d f_i - d f_j by B_ij / (f_j - f_i)"});
                    continue;
                }
                L(i, j) = lij;
            } else {
                bool zero = vanishes(B(i, j), K, tol);
                for (int c = 0; c < d; ++c) zero = zero && vanishes(w[c](i, j), K, tol);
                if (!zero)
                    out.obstructions.push_back(
                        {i, j, "f_j - f_i vanishes at the center while B_ij or w_ij does not vanish"});
            }
        }
    if (out.obstructions.empty()) out.L = L;
    return out;
}

template <class S>
GaugeSeries<S> formal_simplify(const FramedConnection<S>& conn, int K, SimplifyMode mode, double tol) {
    if (K < 0) throw Error("invalid_argument", "order must be non-negative");
    const int n = conn.n, d = conn.d;
    std::vector<char> coal(size_t(n) * n, 0);
    std::vector<int> pivot(size_t(n) * n, -1);
    std::map<std::pair<int, int>, TruncatedSeries<S>> inverse;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            auto g = series_sub(conn.f[j], conn.f[i]);
            coal[i * n + j] = near_zero(g.value_at_center(), tol);
            if (!coal[i * n + j]) {
                inverse[{i, j}] = series_invert(g);
                continue;
            }
            if (mode == SimplifyMode::regular)
                throw Error("coalescent_center", "f_" + std::to_string(i + 1) + " and f_" + std::to_string(j + 1) +
                                                     " coincide at the center; use the coalescent mode");
            if (integer_nonzero(S(conn.bdiag[i] - conn.bdiag[j])))
                throw Error("resonant", "resonant: b_" + std::to_string(i + 1) + " - b_" + std::to_string(j + 1) +
                                            " is a nonzero integer at a coalescent pair");
            double best = 0;
            for (int h = 0; h < d; ++h) {
                double v = magnitude(S(conn.d_delta0[h](j, j).value_at_center() - conn.d_delta0[h](i, i).value_at_center()));
                if (v > best) {
                    best = v;
                    pivot[i * n + j] = h;
                }
            }
            if (pivot[i * n + j] < 0 || near_zero(S(conn.d_delta0[pivot[i * n + j]](j, j).value_at_center() -
                                                    conn.d_delta0[pivot[i * n + j]](i, i).value_at_center()),
                                                  tol))
                throw Error("genericity", "genericity violated: gradients of f_" + std::to_string(i + 1) + " and f_" +
                                              std::to_string(j + 1) + " agree at the center");
            const int h = pivot[i * n + j];
            inverse[{i, j}] = series_invert(series_sub(conn.d_delta0[h](j, j), conn.d_delta0[h](i, i)));
        }

    const auto bd = constant_diagonal(n, d, conn.center, conn.K, conn.bdiag);
    std::vector<SeriesMatrix<S>> l_comm(d);  // [L, d_h Delta0], built on demand
    GaugeSeries<S> phi;
    phi.K = K;
    SeriesMatrix<S> prev = SeriesMatrix<S>::identity(n, d, conn.center, conn.K);
    for (int k = 0; k < K; ++k) {
        SeriesMatrix<S> next = prev.zero_like();
        SeriesMatrix<S> x = conn.B * prev - prev * bd + scale(prev, from_int<S>(k));
        std::map<int, SeriesMatrix<S>> derivative_rhs;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (!coal[i * n + j]) {
                    next(i, j) = series_mul(x(i, j), inverse.at({i, j}));
                } else if (k == 0) {
                    next(i, j) = conn.L(i, j);
                } else {
                    const int h = pivot[i * n + j];
                    auto it = derivative_rhs.find(h);
                    if (it == derivative_rhs.end()) {
                        if (l_comm[h].n == 0) l_comm[h] = commutator(conn.L, conn.d_delta0[h]);
                        it = derivative_rhs.emplace(h, l_comm[h] * prev - diff(prev, h)).first;
                    }
                    next(i, j) = series_mul(it->second(i, j), inverse.at({i, j}));
                }
            }
        for (int i = 0; i < n; ++i) {
            TruncatedSeries<S> acc(d, conn.center, conn.K);
            for (int l = 0; l < n; ++l) {
                if (l == i) continue;
                auto t = series_mul(conn.B(i, l), next(l, i));
                acc.coeffs += t.coeffs;
                acc.reliable = std::min(acc.reliable, t.reliable);
            }
            next(i, i) = series_scale(acc, S(from_int<S>(-1) / from_int<S>(k + 1)));
        }
        phi.F.push_back(next);
        prev = std::move(next);
    }
    if (mode == SimplifyMode::coalescent) {
        double defect = coalescent_center_defect(conn, phi, tol);
        bool bad = scalar_traits<S>::exact ? defect != 0 : defect > 1e-8;
        if (bad)
            phi.warnings.push_back("the coalescent-pair relation fails at the center (defect " + std::to_string(defect) +
                                   "); the connection is probably not integrable");
    }
    return phi;
}

template <class S>
double GaugeResidual<S>::max_abs() const {
    double m = dz_max_abs();
    for (double v : dx_max) m = std::max(m, v);
    return m;
}

template <class S>
double GaugeResidual<S>::dz_max_abs() const {
    double m = 0;
    for (double v : dz_max) m = std::max(m, v);
    return m;
}

template <class S>
GaugeResidual<S> gauge_residual(const FramedConnection<S>& conn, const GaugeSeries<S>& phi) {
    const int n = conn.n, d = conn.d, K = phi.K;
    if (int(phi.F.size()) != K) throw Error("shape", "gauge series has the wrong number of terms");
    for (const auto& m : phi.F)
        if (m.n != n || m.vars() != d || m.K() != conn.K || m.center() != conn.center)
            throw Error("series_mismatch", "gauge series frame differs from the connection");
    const auto id = SeriesMatrix<S>::identity(n, d, conn.center, conn.K);
    auto F = [&](int k) -> const SeriesMatrix<S>& { return k == 0 ? id : phi.F[k - 1]; };
    const auto bd = constant_diagonal(n, d, conn.center, conn.K, conn.bdiag);
    GaugeResidual<S> r;
    for (int k = 0; k <= K; ++k) {
        SeriesMatrix<S> dz = scale(commutator(conn.delta0, F(k)), from_int<S>(-1));
        if (k >= 1) {
            const auto& p = F(k - 1);
            dz = dz - scale(p, from_int<S>(k - 1)) - (conn.B * p - p * bd);
        }
        int deg = reliable_degree(dz);
        r.dz_degree.push_back(deg);
        r.dz_max.push_back(max_up_to(dz, deg));
        r.dz.push_back(std::move(dz));

        std::vector<SeriesMatrix<S>> dxk;
        int deg_x = conn.K;
        double mx = 0;
        for (int c = 0; c < d; ++c) {
            SeriesMatrix<S> t = scale(commutator(conn.d_delta0[c], F(k)), from_int<S>(-1));
            if (k >= 1) t = t + diff(F(k - 1), c) + conn.omega[c] * F(k - 1);
            deg_x = std::min(deg_x, reliable_degree(t));
            dxk.push_back(std::move(t));
        }
        for (const auto& t : dxk) mx = std::max(mx, max_up_to(t, deg_x));
        r.dx_degree.push_back(deg_x);
        r.dx_max.push_back(mx);
        r.dx.push_back(std::move(dxk));
    }
    return r;
}

template <class S>
double coalescent_center_defect(const FramedConnection<S>& conn, const GaugeSeries<S>& phi, double tol) {
    const int n = conn.n;
    double worst = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!near_zero(S(conn.f[j].value_at_center() - conn.f[i].value_at_center()), tol)) continue;
            for (int k = 1; k <= phi.K; ++k) {
                const auto& F = phi.F[k - 1];
                if (F(i, j).reliable < 0) continue;
                S v = (conn.bdiag[i] - conn.bdiag[j] + from_int<S>(k)) * F(i, j).value_at_center();
                bool usable = true;
                for (int l = 0; l < n; ++l) {
                    if (l == i) continue;
                    if (F(l, j).reliable < 0) usable = false;
                    v += (conn.f[l].value_at_center() - conn.f[i].value_at_center()) * conn.L(i, l).value_at_center() *
                         F(l, j).value_at_center();
                }
                if (usable) worst = std::max(worst, magnitude(v));
            }
        }
    return worst;
}

template <class S>
SeriesMatrix<S> pullback_by_spectrum(const SeriesMatrix<S>& gamma, const std::vector<TruncatedSeries<S>>& f) {
    const int n = gamma.n;
    if (int(f.size()) != n || gamma.vars() != n) throw Error("shape", "spectrum map needs one function per eigenvalue");
    const int d = f[0].vars(), K = f[0].K;
    const auto& x0 = f[0].center;
    int rel = std::min(K, gamma.K());
    std::vector<std::vector<Poly<S>>> powers(n);
    for (int a = 0; a < n; ++a) {
        require_same_frame(f[a], f[0]);
        rel = std::min(rel, f[a].reliable);
        S diff0 = f[a].value_at_center() - gamma.center()[a];
        if (!near_zero(diff0, 1e-12)) throw Error("shape", "spectrum map does not send the center to the jet center");
        Poly<S> v = f[a].coeffs;
        v.set(Monomial(), S{});
        powers[a].push_back(Poly<S>::constant(d, from_int<S>(1)));
        for (int p = 1; p <= gamma.K(); ++p) powers[a].push_back(powers[a].back().mul(v, K));
    }
    SeriesMatrix<S> out(n, d, x0, K);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Poly<S> acc(d);
            for (const auto& [m, c] : gamma(i, j).coeffs.terms()) {
                if (m.degree() > K) break;
                Poly<S> t = Poly<S>::constant(d, c);
                for (int a = 0; a < n && !t.is_zero(); ++a)
                    if (m[a] > 0) t = t.mul(powers[a][m[a]], K);
                acc += t;
            }
            out(i, j).coeffs = acc;
            out(i, j).reliable = std::min(rel, gamma(i, j).reliable);
        }
    return out;
}

template <class S>
HolconReport holcon_check(const FramedConnection<S>& conn, int i, int j, const std::vector<cplx>& xc, const Path& path,
                          const std::vector<double>& samples) {
    const int n = conn.n;
    if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw Error("invalid_argument", "pair out of range");
    if (int(xc.size()) != conn.d) throw Error("invalid_argument", "coalescence point has the wrong dimension");
    if (samples.size() < 4) throw Error("invalid_argument", "at least four samples are needed");
    std::vector<cplx> center;
    for (const auto& c : conn.center) center.push_back(to_cplx(c));
    auto at = [&](const TruncatedSeries<S>& s, const std::vector<cplx>& x) {
        std::vector<cplx> y(x.size());
        for (size_t a = 0; a < x.size(); ++a) y[a] = x[a] - center[a];
        return map_coeffs<cplx>(s.coeffs, [](const S& v) { return to_cplx(v); }).eval(y);
    };
    cplx gap0 = at(conn.f[i], xc) - at(conn.f[j], xc);
    if (std::abs(gap0) > 1e-9 * std::max(1.0, std::abs(at(conn.f[i], xc))))
        throw Error("invalid_path", "f_i and f_j do not coincide at the path endpoint");
    const cplx bij = to_cplx(conn.bdiag[j]) - to_cplx(conn.bdiag[i]) - 1.0;
    HolconReport r;
    for (double t : samples) {
        auto x = path.at(xc, t);
        std::vector<cplx> fv(n);
        for (int l = 0; l < n; ++l) fv[l] = at(conn.f[l], x);
        cplx gap = fv[i] - fv[j];
        if (std::abs(gap) < 1e-14) throw Error("invalid_path", "f_i = f_j at a sample of the path");
        cplx lhs = bij * at(conn.L(i, j), x);
        for (int l = 0; l < n; ++l) {
            if (l == i) continue;
            lhs -= (fv[l] - fv[i]) * at(conn.L(i, l), x) * at(conn.L(l, j), x);
        }
        r.t.push_back(t);
        r.lhs.push_back(lhs);
        r.ratio.push_back(lhs / gap);
    }
    const size_t m = r.ratio.size();
    double biggest = 0;
    for (size_t a = m - 4; a < m; ++a) {
        biggest = std::max(biggest, std::abs(r.ratio[a]));
        for (size_t b = a + 1; b < m; ++b) r.spread = std::max(r.spread, std::abs(r.ratio[a] - r.ratio[b]));
    }
    r.bounded = r.spread <= 0.1 * std::max(biggest, 1.0);
    return r;
}

#define STRATA_GAUGE_INSTANTIATE(S)                                                                                     \
    template SeriesMatrix<S> diagonal_matrix(const std::vector<TruncatedSeries<S>>&);                                  \
    template FramedConnection<S> build_connection(const std::vector<Poly<S>>&, const std::vector<S>&,                  \
                                                  const SeriesMatrix<S>&);                                              \
    template IntegrabilityReport integrability_residual(const SeriesMatrix<S>&, const SeriesMatrix<S>&,                \
                                                        const std::vector<SeriesMatrix<S>>&, int);                     \
    template DvWitness<S> dv_witness(const SeriesMatrix<S>&, const SeriesMatrix<S>&,                                   \
                                     const std::vector<SeriesMatrix<S>>&, double);                                     \
    template GaugeSeries<S> formal_simplify(const FramedConnection<S>&, int, SimplifyMode, double);                    \
    template struct GaugeResidual<S>;                                                                                   \
    template GaugeResidual<S> gauge_residual(const FramedConnection<S>&, const GaugeSeries<S>&);                       \
    template double coalescent_center_defect(const FramedConnection<S>&, const GaugeSeries<S>&, double);               \
    template SeriesMatrix<S> pullback_by_spectrum(const SeriesMatrix<S>&, const std::vector<TruncatedSeries<S>>&);     \
    template HolconReport holcon_check(const FramedConnection<S>&, int, int, const std::vector<cplx>&, const Path&,    \
                                       const std::vector<double>&);

STRATA_GAUGE_INSTANTIATE(cplx)
STRATA_GAUGE_INSTANTIATE(qcomplex)

}  // namespace strata
