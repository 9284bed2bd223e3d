#include "strata/gap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "strata/linalg.hpp"

namespace strata {

Subspace Subspace::zero(int n) {
    return {n, Eigen::MatrixXcd(n, 0)};
}

Subspace Subspace::span(const Eigen::MatrixXcd& v, double tol) {
    const int n = int(v.rows());
    if (v.cols() == 0) return zero(n);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) r += sv(0) > 0 && sv(i) > tol * sv(0);
    return {n, svd.matrixU().leftCols(r)};
}

double gap_distance(const Subspace& a, const Subspace& b) {
    if (a.n != b.n) throw Error("dimension", "subspaces live in different ambient spaces");
    if (a.n == 0) return 0.0;
    Eigen::MatrixXcd d = a.projector() - b.projector();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d, Eigen::EigenvaluesOnly);
    double m = es.eigenvalues().cwiseAbs().maxCoeff();
    return std::min(m, 1.0);
}

Subspace kernel_subspace(const Eigen::MatrixXcd& m, double tol) {
    const int cols = int(m.cols());
    if (cols == 0) return Subspace::zero(0);
    if (m.rows() == 0) return {cols, Eigen::MatrixXcd::Identity(cols, cols)};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    std::vector<int> keep;
    for (int i = 0; i < cols; ++i) {
        double s = i < sv.size() ? sv(i) : 0.0;
        bool small = smax > 0 ? s < tol * smax : s < tol;
        if (small) keep.push_back(i);
    }
    Eigen::MatrixXcd basis(cols, int(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) basis.col(int(k)) = svd.matrixV().col(keep[k]);
    return {cols, basis};
}

namespace {

Eigen::MatrixXcd shifted_power(const Eigen::MatrixXcd& a, cplx lambda, int power) {
    const int n = int(a.rows());
    Eigen::MatrixXcd s = a - lambda * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 0; k < power; ++k) p = p * s;
    return p;
}

}  // namespace

Subspace generalized_eigenspace(const Eigen::MatrixXcd& a, cplx lambda, double tol) {
    if (a.rows() != a.cols()) throw Error("dimension", "matrix must be square");
    return kernel_subspace(shifted_power(a, lambda, int(a.rows())), tol);
}

Subspace generalized_eigenspace_fixed(const Eigen::MatrixXcd& a, cplx lambda, int dim, int power) {
    const int n = int(a.rows());
    if (dim < 0 || dim > n) throw Error("dimension", "requested dimension out of range");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted_power(a, lambda, power), Eigen::ComputeFullV);
    return {n, svd.matrixV().rightCols(dim)};
}

int intertwiner_dimension(const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& a2, double tol) {
    if (a1.rows() != a1.cols() || a2.rows() != a2.cols()) throw Error("dimension", "matrices must be square");
    const int n1 = int(a1.rows()), n2 = int(a2.rows());
    // Theta is n2 x n1, vectorized column-major.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n1 * n2, n1 * n2);
    for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n2; ++i) {
            const int row = j * n2 + i;
            // (Theta A1)_{ij} = sum_k Theta_{ik} A1_{kj}
            for (int k = 0; k < n1; ++k) m(row, k * n2 + i) += a1(k, j);
            // (A2 Theta)_{ij} = sum_k A2_{ik} Theta_{kj}
            for (int k = 0; k < n2; ++k) m(row, j * n2 + k) -= a2(i, k);
        }
    return kernel_subspace(m, tol).dim();
}

// ---------------------------------------------------------------------------
// Exact univariate polynomials and rational functions over Q(i).

namespace {

struct UPoly {
    std::vector<qcomplex> c;

    void trim() {
        while (!c.empty() && is_zero(c.back())) c.pop_back();
    }
    bool zero() const { return c.empty(); }
    int deg() const { return int(c.size()) - 1; }
    const qcomplex& lead() const { return c.back(); }
    qcomplex at0() const { return c.empty() ? qcomplex(0) : c[0]; }
};

UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.trim();
    return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    UPoly r;
    if (a.zero() || b.zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, qcomplex(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (is_zero(a.c[i])) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

UPoly scaled(UPoly a, const qcomplex& s) {
    for (auto& x : a.c) x *= s;
    a.trim();
    return a;
}

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
    if (b.zero()) throw Error("division_by_zero", "polynomial division by zero");
    r = a;
    q.c.assign(std::max(0, a.deg() - b.deg() + 1), qcomplex(0));
    qcomplex inv = qcomplex(1) / b.lead();
    while (!r.zero() && r.deg() >= b.deg()) {
        int shift = r.deg() - b.deg();
        qcomplex f = r.lead() * inv;
        q.c[shift] = f;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[shift + j] -= f * b.c[j];
        r.trim();
    }
    q.trim();
}

UPoly monic(const UPoly& a) {
    if (a.zero()) return a;
    return scaled(a, qcomplex(1) / a.lead());
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.zero()) {
        UPoly q, r;
        divmod(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

UPoly exact_div(const UPoly& a, const UPoly& b) {
    UPoly q, r;
    divmod(a, b, q, r);
    if (!r.zero()) throw Error("internal", "inexact polynomial division");
    return q;
}

struct RFun {
    UPoly num, den;

    RFun(long v = 0) {
        if (v != 0) num.c = {qcomplex(v)};
        den.c = {qcomplex(1)};
    }
    RFun(UPoly n, UPoly d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    void normalize() {
        if (den.zero()) throw Error("division_by_zero", "rational function with zero denominator");
        if (num.zero()) {
            den.c = {qcomplex(1)};
            return;
        }
        UPoly g = gcd(num, den);
        if (g.deg() > 0) {
            num = exact_div(num, g);
            den = exact_div(den, g);
        }
        qcomplex l = den.lead();
        if (l != qcomplex(1)) {
            qcomplex inv = qcomplex(1) / l;
            num = scaled(num, inv);
            den = scaled(den, inv);
        }
    }
};

RFun operator+(const RFun& a, const RFun& b) { return RFun(a.num * b.den + b.num * a.den, a.den * b.den); }
RFun operator-(const RFun& a, const RFun& b) { return RFun(a.num * b.den - b.num * a.den, a.den * b.den); }
RFun operator*(const RFun& a, const RFun& b) { return RFun(a.num * b.num, a.den * b.den); }
RFun operator/(const RFun& a, const RFun& b) {
    if (b.num.zero()) throw Error("division_by_zero", "rational function division by zero");
    return RFun(a.num * b.den, a.den * b.num);
}

UPoly to_upoly(const Poly<qcomplex>& p, const qcomplex& x0) {
    if (p.vars() != 1) throw Error("dimension", "expected a univariate polynomial");
    UPoly u;
    Poly<qcomplex> s = p.shifted({x0});
    for (const auto& [m, c] : s.terms()) {
        int e = m[0];
        if (int(u.c.size()) <= e) u.c.resize(e + 1, qcomplex(0));
        u.c[e] = c;
    }
    u.trim();
    return u;
}

int valuation(const std::vector<UPoly>& v) {
    int best = -1;
    for (const auto& p : v) {
        if (p.zero()) continue;
        int k = 0;
        while (is_zero(p.c[k])) ++k;
        if (best < 0 || k < best) best = k;
    }
    return best;
}

void drop_low(std::vector<UPoly>& v, int k) {
    if (k <= 0) return;
    for (auto& p : v)
        if (!p.zero()) p.c.erase(p.c.begin(), p.c.begin() + k);
}

}  // namespace

Subspace kernel_sheaf_value_1d(const ExactPolyMatrix& t, const qcomplex& x0) {
    const int rows = int(t.size());
    if (rows == 0) throw Error("dimension", "empty matrix");
    const int cols = int(t[0].size());
    for (const auto& row : t)
        if (int(row.size()) != cols) throw Error("dimension", "ragged matrix");
    // Work in s = x - x0.
    std::vector<std::vector<RFun>> m(rows, std::vector<RFun>(cols));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m[i][j] = RFun(to_upoly(t[i][j], x0), UPoly{{qcomplex(1)}});
    auto rzero = [](const RFun& f) { return f.num.zero(); };
    auto basis = nullspace(m, cols, rzero);
    if (basis.empty()) return Subspace::zero(cols);

    // Clear denominators and strip common powers of s.
    std::vector<std::vector<UPoly>> vecs;
    for (const auto& v : basis) {
        UPoly l{{qcomplex(1)}};
        for (const auto& f : v) l = exact_div(l * f.den, gcd(l, f.den));
        std::vector<UPoly> w;
        for (const auto& f : v) w.push_back(f.num * exact_div(l, f.den));
        drop_low(w, valuation(w));
        vecs.push_back(std::move(w));
    }

    // Saturate at s = 0: while the values are dependent, divide a vanishing
    // combination by s and let it replace one of its members.
    auto qzero = [](const qcomplex& z) { return is_zero(z); };
    for (int guard = 0; guard < 10000; ++guard) {
        const int r = int(vecs.size());
        std::vector<std::vector<qcomplex>> values(cols, std::vector<qcomplex>(r));
        for (int k = 0; k < r; ++k)
            for (int i = 0; i < cols; ++i) values[i][k] = vecs[k][i].at0();
        auto rel = nullspace(values, r, qzero);
        if (rel.empty()) {
            Eigen::MatrixXcd v(cols, r);
            for (int k = 0; k < r; ++k)
                for (int i = 0; i < cols; ++i) v(i, k) = to_cplx(values[i][k]);
            return Subspace::span(v);
        }
        const auto& c = rel.front();
        int j = r - 1;
        while (is_zero(c[j])) --j;
        std::vector<UPoly> w(cols);
        for (int k = 0; k < r; ++k) {
            if (is_zero(c[k])) continue;
            for (int i = 0; i < cols; ++i) w[i] = w[i] + scaled(vecs[k][i], c[k]);
        }
        drop_low(w, valuation(w));
        vecs[j] = std::move(w);
    }
    throw Error("internal", "kernel saturation did not terminate");
}

// ---------------------------------------------------------------------------

void MatrixFamily::validate() const {
    if (d < 1 || d > kMaxVars || n < 1) throw Error("invalid_family", "bad dimensions");
    if (int(entries.size()) != n) throw Error("invalid_family", "entries must be n x n");
    for (const auto& row : entries) {
        if (int(row.size()) != n) throw Error("invalid_family", "entries must be n x n");
        for (const auto& p : row)
            if (p.vars() != d) throw Error("invalid_family", "entry has wrong variable count");
    }
    int total = 0;
    for (const auto& b : branches) {
        if (b.multiplicity < 1) throw Error("invalid_family", "branch multiplicity must be positive");
        if (b.lambda.vars() != d) throw Error("invalid_family", "branch has wrong variable count");
        total += b.multiplicity;
    }
    if (total != n) throw Error("invalid_family", "branch multiplicities must add up to n");
}

Eigen::MatrixXcd MatrixFamily::eval(const std::vector<cplx>& x) const {
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = to_float(entries[i][j]).eval(x);
    return a;
}

cplx MatrixFamily::branch_value(int i, const std::vector<cplx>& x) const {
    return to_float(branches.at(i).lambda).eval(x);
}

std::vector<cplx> Path::at(const std::vector<cplx>& x0, double t) const {
    std::vector<cplx> x = x0;
    for (size_t i = 0; i < offset.size() && i < x.size(); ++i) x[i] += to_float(offset[i]).eval({cplx(t)});
    return x;
}

std::vector<Path> default_paths(int d) {
    std::vector<Path> out;
    auto zero = Poly<qcomplex>(1);
    auto t = Poly<qcomplex>::variable(1, 0);
    for (int c = 0; c < d; ++c) {
        Path p{"ray" + std::to_string(c + 1), std::vector<Poly<qcomplex>>(d, zero)};
        p.offset[c] = t;
        out.push_back(p);
    }
    if (d >= 2) out.push_back({"diagonal", std::vector<Poly<qcomplex>>(d, t)});
    if (d == 1) out.push_back({"imaginary", {t * qcomplex(0, 1)}});
    return out;
}

std::vector<double> dyadic_samples(int first, int last) {
    std::vector<double> s;
    for (int j = first; j <= last; ++j) s.push_back(std::ldexp(1.0, -j));
    return s;
}

namespace {

double min_branch_separation(const MatrixFamily& fam, const std::vector<cplx>& x) {
    double sep = INFINITY;
    for (size_t i = 0; i < fam.branches.size(); ++i)
        for (size_t j = i + 1; j < fam.branches.size(); ++j)
            sep = std::min(sep, std::abs(fam.branch_value(int(i), x) - fam.branch_value(int(j), x)));
    return sep;
}

bool on_coalescence(const MatrixFamily& fam, const std::vector<cplx>& x) {
    return min_branch_separation(fam, x) <= 1e-12;
}

}  // namespace

LimitResult limit_along_path(const MatrixFamily& fam, int branch, const std::vector<cplx>& x0, const Path& path,
                             const std::vector<double>& samples, double tol) {
    fam.validate();
    if (branch < 0 || branch >= int(fam.branches.size())) throw Error("invalid_argument", "branch index out of range");
    if (samples.size() < 3) throw Error("invalid_argument", "need at least three samples");
    const int m = fam.branches[branch].multiplicity;
    LimitResult res;
    std::vector<Subspace> spaces;
    for (double t : samples) {
        auto x = path.at(x0, t);
        if (on_coalescence(fam, x))
            throw Error("coalescence_sample", "sample t=" + std::to_string(t) + " lies on the coalescence locus");
        spaces.push_back(generalized_eigenspace_fixed(fam.eval(x), fam.branch_value(branch, x), m, m));
        res.sample_t.push_back(t);
    }
    for (size_t k = 0; k + 1 < spaces.size(); ++k) res.consecutive_gaps.push_back(gap_distance(spaces[k], spaces[k + 1]));
    const auto& g = res.consecutive_gaps;
    bool cauchy = true;
    for (size_t k = g.size() >= 3 ? g.size() - 3 : 0; k + 1 < g.size(); ++k)
        if (g[k + 1] > 0.75 * g[k] + tol) cauchy = false;
    if (!cauchy) {
        res.note = "consecutive gaps are not decreasing";
        return res;
    }
    // Neville extrapolation of the projectors to t = 0.
    std::vector<Eigen::MatrixXcd> p;
    for (const auto& s : spaces) p.push_back(s.projector());
    const auto& t = res.sample_t;
    const size_t N = p.size();
    for (size_t level = 1; level < N; ++level)
        for (size_t i = 0; i + level < N; ++i) {
            double ti = t[i], tj = t[i + level];
            p[i] = (ti * p[i + 1] - tj * p[i]) / (ti - tj);
        }
    Eigen::MatrixXcd p0 = 0.5 * (p[0] + p[0].adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p0);
    const int n = fam.n;
    const auto& ev = es.eigenvalues();
    bool separated = ev(n - m) > 0.5 && (n - m - 1 < 0 || ev(n - m - 1) < 0.5);
    if (!separated) {
        res.note = "extrapolated projector has no clean rank";
        return res;
    }
    res.limit = Subspace{n, es.eigenvectors().rightCols(m)};
    return res;
}

namespace {

// p(x0 + offset(t)) as a polynomial in t.
Poly<qcomplex> restrict_to_path(const Poly<qcomplex>& p, const std::vector<qcomplex>& x0, const Path& path) {
    const int d = p.vars();
    std::vector<Poly<qcomplex>> coord;
    for (int i = 0; i < d; ++i) coord.push_back(Poly<qcomplex>::constant(1, x0[i]) + path.offset.at(i));
    Poly<qcomplex> out(1);
    for (const auto& [m, c] : p.terms()) {
        Poly<qcomplex> term = Poly<qcomplex>::constant(1, c);
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < m[i]; ++k) term = term * coord[i];
        out += term;
    }
    return out;
}

}  // namespace

Subspace exact_limit_along_path(const MatrixFamily& fam, int branch, const std::vector<qcomplex>& x0,
                                const Path& path) {
    fam.validate();
    const int n = fam.n;
    const int m = fam.branches.at(branch).multiplicity;
    Poly<qcomplex> lam = restrict_to_path(fam.branches[branch].lambda, x0, path);
    ExactPolyMatrix s(n, std::vector<Poly<qcomplex>>(n, Poly<qcomplex>(1)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            s[i][j] = restrict_to_path(fam.entries[i][j], x0, path);
            if (i == j) s[i][j] -= lam;
        }
    ExactPolyMatrix pw = s;
    for (int k = 1; k < m; ++k) {
        ExactPolyMatrix next(n, std::vector<Poly<qcomplex>>(n, Poly<qcomplex>(1)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) next[i][j] += pw[i][l] * s[l][j];
        pw = std::move(next);
    }
    return kernel_sheaf_value_1d(pw, qcomplex(0));
}

Partition segre_at(const Eigen::MatrixXcd& a, cplx mu, int m, double tol) {
    const int n = int(a.rows());
    Eigen::MatrixXcd s = a - mu * Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd pw = Eigen::MatrixXcd::Identity(n, n);
    Partition weyr;
    int prev = 0;
    for (int k = 1; k <= m; ++k) {
        pw = pw * s;
        int ker = kernel_subspace(pw, tol).dim();
        if (ker > m) ker = m;
        if (ker <= prev) break;
        weyr.push_back(ker - prev);
        prev = ker;
        if (ker == m) break;
    }
    if (prev != m || !is_partition(weyr))
        throw Error("ill_conditioned", "rank sequence does not match the multiplicity");
    return conjugate(weyr);
}

JordanizabilityReport jordanizability_report(const MatrixFamily& fam, const std::vector<cplx>& x0,
                                             const ReportConfig& cfg) {
    fam.validate();
    if (int(x0.size()) != fam.d) throw Error("dimension", "base point has wrong length");
    auto paths = cfg.paths.empty() ? default_paths(fam.d) : cfg.paths;
    auto samples = cfg.samples.empty() ? dyadic_samples(1, 8) : cfg.samples;
    const int nb = int(fam.branches.size());
    JordanizabilityReport rep;
    rep.branches.resize(nb);

    std::vector<const Path*> valid;
    for (const auto& p : paths) {
        bool ok = true;
        for (double t : samples)
            if (on_coalescence(fam, p.at(x0, t))) ok = false;
        if (ok) valid.push_back(&p);
        else rep.diagnostics.push_back("path " + p.name + " skipped: it runs inside the coalescence locus");
    }
    if (valid.empty()) throw Error("no_valid_sample", "no path leaves the coalescence locus");

    // Condition 1: per-branch Jordan type off the locus, and its compatibility
    // with the Jordan type of A(x0).
    rep.cond1 = true;
    for (int b = 0; b < nb; ++b) {
        auto& br = rep.branches[b];
        const int m = fam.branches[b].multiplicity;
        bool first = true;
        for (const Path* p : valid)
            for (size_t k = 0; k < std::min<size_t>(3, samples.size()); ++k) {
                auto x = p->at(x0, samples[k]);
                Partition s;
                try {
                    s = segre_at(fam.eval(x), fam.branch_value(b, x), m, cfg.tol);
                } catch (const Error&) {
                    br.segre_constant = false;
                    continue;
                }
                if (first) br.segre = s;
                else if (s != br.segre) br.segre_constant = false;
                first = false;
            }
        if (!br.segre_constant) {
            rep.cond1 = false;
            rep.diagnostics.push_back("branch " + std::to_string(b + 1) + ": Jordan type varies off the locus");
        }
    }
    {
        const Eigen::MatrixXcd a0 = fam.eval(x0);
        std::vector<int> group(nb, -1);
        for (int b = 0; b < nb; ++b) {
            if (group[b] >= 0) continue;
            group[b] = b;
            cplx lb = fam.branch_value(b, x0);
            for (int c = b + 1; c < nb; ++c)
                if (std::abs(fam.branch_value(c, x0) - lb) <= cfg.tol * (1 + std::abs(lb))) group[c] = b;
        }
        for (int b = 0; b < nb; ++b) {
            if (group[b] != b) continue;
            Partition expected;
            int mult = 0;
            for (int c = 0; c < nb; ++c)
                if (group[c] == b) {
                    expected.insert(expected.end(), rep.branches[c].segre.begin(), rep.branches[c].segre.end());
                    mult += fam.branches[c].multiplicity;
                }
            std::sort(expected.begin(), expected.end(), std::greater<>());
            Partition actual;
            try {
                actual = segre_at(a0, fam.branch_value(b, x0), mult, cfg.tol);
            } catch (const Error&) {
            }
            if (actual != expected) {
                rep.cond1 = false;
                rep.diagnostics.push_back("eigenvalue of branch " + std::to_string(b + 1) + " at the base point has Jordan type " +
                                          to_string(actual) + ", expected " + to_string(expected));
            }
        }
    }

    // Condition 2: limits along all valid paths agree.
    rep.cond2 = true;
    std::vector<std::vector<std::optional<Subspace>>> limits(nb);
    for (int b = 0; b < nb; ++b) {
        for (const Path* p : valid) {
            auto lr = limit_along_path(fam, b, x0, *p, samples, cfg.tol);
            if (!lr.limit) rep.diagnostics.push_back("branch " + std::to_string(b + 1) + " along " + p->name + ": " + lr.note);
            limits[b].push_back(lr.limit);
            rep.branches[b].paths_used.push_back(p->name);
        }
        rep.branches[b].limit = limits[b].front();
        for (size_t k = 0; k < limits[b].size(); ++k) {
            if (!limits[b][k]) {
                rep.cond2 = false;
                continue;
            }
            if (k > 0 && limits[b][0] && gap_distance(*limits[b][0], *limits[b][k]) > cfg.limit_tol) {
                rep.cond2 = false;
                rep.diagnostics.push_back("branch " + std::to_string(b + 1) + ": limits along " + valid[0]->name + " and " +
                                          valid[k]->name + " differ");
            }
        }
    }

    // Condition 3: the limits give a direct sum decomposition of C^n.
    rep.cond3 = true;
    int total = 0;
    std::vector<Eigen::MatrixXcd> blocks;
    for (int b = 0; b < nb; ++b) {
        if (!rep.branches[b].limit) {
            rep.cond3 = false;
            continue;
        }
        total += rep.branches[b].limit->dim();
        blocks.push_back(rep.branches[b].limit->basis);
    }
    if (rep.cond3) {
        Eigen::MatrixXcd stacked(fam.n, total);
        int col = 0;
        for (const auto& blk : blocks) {
            stacked.middleCols(col, blk.cols()) = blk;
            col += int(blk.cols());
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
        const auto& sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i) rank += sv(i) > cfg.limit_tol;
        if (total != fam.n || rank != fam.n) {
            rep.cond3 = false;
            rep.diagnostics.push_back("limits span a space of dimension " + std::to_string(rank) + " with total dimension " +
                                      std::to_string(total));
        }
    }
    rep.verdict = rep.cond1 && rep.cond2 && rep.cond3;
    return rep;
}

}  // namespace strata
