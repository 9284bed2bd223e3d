#include "strata/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace strata {

bool json_is_exact(const json& j) {
    switch (j.type()) {
        case json::value_t::number_float: {
            double v = j.get<double>();
            return std::isfinite(v) && v == std::floor(v);
        }
        case json::value_t::array:
        case json::value_t::object:
            for (const auto& e : j)
                if (!json_is_exact(e)) return false;
            return true;
        default: return true;
    }
}

namespace {

mpq_class rational_from_json(const json& j) {
    if (j.is_number_integer()) return mpq_class(mpz_class(j.dump()));
    if (j.is_number_float()) {
        double v = j.get<double>();
        if (!std::isfinite(v)) throw Error("parse", "non-finite number");
        return mpq_class(v);
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
    throw Error("parse", "expected a real number, got " + j.dump());
}

double real_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
    throw Error("parse", "expected a real number, got " + j.dump());
}

json rational_to_json(const mpq_class& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(to_string(q));
}

json real_to_json(double v) {
    if (v == 0) v = 0;  // drop negative zero
    return json(v);
}

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error("parse", std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const auto& v = field(j, key);
    if (!v.is_number_integer()) throw Error("parse", std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

template <class S>
json terms_to_json(const Poly<S>& p) {
    json t = json::array();
    for (const auto& [m, c] : p.terms()) t.push_back({{"exp", m.exps(p.vars())}, {"coef", to_json(c)}});
    return t;
}

template <class S>
Poly<S> terms_from_json(const json& t, int d) {
    if (!t.is_array()) throw Error("parse", "terms must be an array");
    Poly<S> p(d);
    for (const auto& term : t) {
        auto e = field(term, "exp").get<std::vector<int>>();
        if (int(e.size()) != d) throw Error("parse", "exponent vector has the wrong length");
        for (int v : e)
            if (v < 0 || v > 255) throw Error("parse", "exponent out of range");
        p.add_term(Monomial(e), scalar_from_json<S>(field(term, "coef")));
    }
    return p;
}

}  // namespace

template <>
cplx scalar_from_json<cplx>(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw Error("parse", "complex numbers are [re, im]");
        return {real_from_json(j[0]), real_from_json(j[1])};
    }
    if (j.is_object()) return {real_from_json(field(j, "re")), real_from_json(field(j, "im"))};
    return {real_from_json(j), 0.0};
}

template <>
qcomplex scalar_from_json<qcomplex>(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw Error("parse", "complex numbers are [re, im]");
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    }
    if (j.is_object()) return {rational_from_json(field(j, "re")), rational_from_json(field(j, "im"))};
    return {rational_from_json(j), 0};
}

json to_json(const cplx& z) {
    if (z.imag() == 0) return real_to_json(z.real());
    return json::array({real_to_json(z.real()), real_to_json(z.imag())});
}

json to_json(const qcomplex& z) {
    if (z.im == 0) return rational_to_json(z.re);
    return json::array({rational_to_json(z.re), rational_to_json(z.im)});
}

template <class S>
std::vector<S> vector_from_json(const json& j) {
    if (!j.is_array()) throw Error("parse", "expected an array of scalars");
    std::vector<S> v;
    for (const auto& e : j) v.push_back(scalar_from_json<S>(e));
    return v;
}

template <class S>
json vector_to_json(const std::vector<S>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_json(x));
    return a;
}

template <class S>
Poly<S> poly_from_json(const json& j) {
    int d = int_field(j, "vars");
    if (d < 0 || d > kMaxVars) throw Error("parse", "vars out of range");
    return terms_from_json<S>(field(j, "terms"), d);
}

template <class S>
json poly_to_json(const Poly<S>& p) {
    return {{"vars", p.vars()}, {"terms", terms_to_json(p)}};
}

template <class S>
TruncatedSeries<S> series_from_json(const json& j) {
    int d = int_field(j, "vars");
    TruncatedSeries<S> s(d, vector_from_json<S>(field(j, "center")), int_field(j, "K"));
    s.coeffs = terms_from_json<S>(field(j, "terms"), d).truncated(s.K);
    if (j.contains("reliable")) s.reliable = std::min(s.K, int_field(j, "reliable"));
    return s;
}

template <class S>
json series_to_json(const TruncatedSeries<S>& s) {
    return {{"vars", s.vars()},
            {"center", vector_to_json(s.center)},
            {"K", s.K},
            {"reliable", s.reliable},
            {"terms", terms_to_json(s.coeffs)}};
}

template <class S>
SeriesMatrix<S> series_matrix_from_json(const json& j) {
    int n = int_field(j, "n"), d = int_field(j, "vars"), K = int_field(j, "K");
    if (n < 1) throw Error("parse", "n must be positive");
    if (d < 0 || d > kMaxVars) throw Error("parse", "vars out of range");
    if (K < 0) throw Error("parse", "K must be non-negative");
    SeriesMatrix<S> m(n, d, vector_from_json<S>(field(j, "center")), K);
    const auto& e = field(j, "entries");
    if (!e.is_array() || int(e.size()) != n) throw Error("parse", "entries must have n rows");
    for (int r = 0; r < n; ++r) {
        if (!e[r].is_array() || int(e[r].size()) != n) throw Error("parse", "entries must have n columns");
        for (int c = 0; c < n; ++c) m(r, c).coeffs = terms_from_json<S>(e[r][c], d).truncated(K);
    }
    if (j.contains("reliable")) {
        const auto& rel = j.at("reliable");
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c).reliable = std::min(K, rel.at(r).at(c).get<int>());
    }
    return m;
}

template <class S>
json series_matrix_to_json(const SeriesMatrix<S>& m) {
    json entries = json::array(), rel = json::array();
    for (int r = 0; r < m.n; ++r) {
        json row = json::array(), rrow = json::array();
        for (int c = 0; c < m.n; ++c) {
            row.push_back(terms_to_json(m(r, c).coeffs));
            rrow.push_back(m(r, c).reliable);
        }
        entries.push_back(row);
        rel.push_back(rrow);
    }
    return {{"n", m.n},   {"vars", m.vars()},    {"center", vector_to_json(m.center())},
            {"K", m.K()}, {"entries", entries}, {"reliable", rel}};
}

Partition partition_from_json(const json& j) {
    auto p = j.get<std::vector<int>>();
    if (!is_partition(p)) throw Error("parse", "not a partition: " + j.dump());
    return p;
}

SegreSymbol symbol_from_json(const json& j) {
    if (!j.is_array()) throw Error("parse", "a Segre symbol is an array of partitions");
    std::vector<Partition> parts;
    for (const auto& p : j) parts.push_back(partition_from_json(p));
    return make_symbol(parts);
}

json to_json(const SegreSymbol& s) { return json(s.parts); }

Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("parse", "a matrix is a non-empty array of rows");
    const auto rows = j.size(), cols = j[0].size();
    Eigen::MatrixXcd m(rows, cols);
    for (size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw Error("parse", "matrix rows have different lengths");
        for (size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json<cplx>(j[r][c]);
    }
    return m;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(cplx(m(r, c))));
        a.push_back(row);
    }
    return a;
}

json to_json(const Subspace& s) {
    json basis = json::array();
    for (int c = 0; c < s.dim(); ++c) {
        json col = json::array();
        for (int r = 0; r < s.n; ++r) col.push_back(to_json(cplx(s.basis(r, c))));
        basis.push_back(col);
    }
    return {{"n", s.n}, {"dim", s.dim()}, {"basis", basis}};
}

Subspace subspace_from_json(const json& j) {
    int n = int_field(j, "n");
    const auto& b = field(j, "basis");
    if (!b.is_array()) throw Error("parse", "basis must be an array of vectors");
    if (b.empty()) return Subspace::zero(n);
    Eigen::MatrixXcd v(n, b.size());
    for (size_t c = 0; c < b.size(); ++c) {
        if (int(b[c].size()) != n) throw Error("parse", "basis vectors must have length n");
        for (int r = 0; r < n; ++r) v(r, c) = scalar_from_json<cplx>(b[c][r]);
    }
    return Subspace::span(v);
}

MatrixFamily family_from_json(const json& j) {
    MatrixFamily f;
    f.d = int_field(j, "d");
    f.n = int_field(j, "n");
    const auto& e = field(j, "entries");
    for (const auto& row : e) {
        std::vector<Poly<qcomplex>> r;
        for (const auto& p : row) r.push_back(poly_from_json<qcomplex>(p));
        f.entries.push_back(r);
    }
    for (const auto& b : field(j, "branches"))
        f.branches.push_back({poly_from_json<qcomplex>(field(b, "lambda")), int_field(b, "multiplicity")});
    f.validate();
    return f;
}

json to_json(const MatrixFamily& f) {
    json entries = json::array(), branches = json::array();
    for (const auto& row : f.entries) {
        json r = json::array();
        for (const auto& p : row) r.push_back(poly_to_json(p));
        entries.push_back(r);
    }
    for (const auto& b : f.branches) branches.push_back({{"lambda", poly_to_json(b.lambda)}, {"multiplicity", b.multiplicity}});
    return {{"d", f.d}, {"n", f.n}, {"entries", entries}, {"branches", branches}};
}

template <class S>
DEProblem<S> de_problem_from_json(const json& j) {
    DEProblem<S> p;
    p.d = int_field(j, "d");
    p.n = int_field(j, "n");
    p.x0 = vector_from_json<S>(field(j, "x0"));
    for (const auto& f : field(j, "f")) p.f.push_back(poly_from_json<S>(f));
    p.b = vector_from_json<S>(field(j, "b"));
    p.validate();
    return p;
}

template <class S>
json de_problem_to_json(const DEProblem<S>& p) {
    json f = json::array();
    for (const auto& q : p.f) f.push_back(poly_to_json(q));
    return {{"d", p.d}, {"n", p.n}, {"x0", vector_to_json(p.x0)}, {"f", f}, {"b", vector_to_json(p.b)}};
}

template <class S>
InitialValue<S> initial_value_from_json(const json& j) {
    if (!j.is_array()) throw Error("parse", "F0 must be a matrix");
    InitialValue<S> v;
    for (const auto& row : j) v.push_back(vector_from_json<S>(row));
    return v;
}

template <class S>
FramedConnection<S> connection_from_json(const json& j) {
    const int d = int_field(j, "d"), n = int_field(j, "n"), K = int_field(j, "K");
    auto center = vector_from_json<S>(field(j, "center"));
    std::vector<Poly<S>> f;
    for (const auto& p : field(j, "Delta0")) f.push_back(poly_from_json<S>(p));
    auto L = series_matrix_from_json<S>(field(j, "L"));
    if (L.n != n || L.vars() != d || L.K() != K || L.center() != center)
        throw Error("parse", "L does not match d, n, center and K");
    return build_connection(f, vector_from_json<S>(field(j, "Bdiag")), L);
}

template <class S>
json connection_to_json(const FramedConnection<S>& c) {
    json f = json::array(), omega = json::array();
    for (const auto& p : c.fpoly) f.push_back(poly_to_json(p));
    for (const auto& w : c.omega) omega.push_back(series_matrix_to_json(w));
    return {{"d", c.d},
            {"n", c.n},
            {"center", vector_to_json(c.center)},
            {"K", c.K},
            {"Delta0", f},
            {"Bdiag", vector_to_json(c.bdiag)},
            {"L", series_matrix_to_json(c.L)},
            {"derived", {{"B", series_matrix_to_json(c.B)}, {"omega", omega}}}};
}

template <class S>
GaugeSeries<S> gauge_series_from_json(const json& j) {
    GaugeSeries<S> g;
    g.K = int_field(j, "K");
    for (const auto& m : field(j, "F")) g.F.push_back(series_matrix_from_json<S>(m));
    if (int(g.F.size()) != g.K) throw Error("parse", "F must hold K matrices");
    if (j.contains("warnings")) g.warnings = j.at("warnings").get<std::vector<std::string>>();
    return g;
}

template <class S>
json gauge_series_to_json(const GaugeSeries<S>& g) {
    json f = json::array();
    for (const auto& m : g.F) f.push_back(series_matrix_to_json(m));
    return {{"K", g.K}, {"F", f}, {"warnings", g.warnings}};
}

json to_json(const BundleDescriptor& b) {
    return {{"symbol", to_json(b.symbol)},       {"n", b.n},
            {"codim", b.codim},                  {"dim", b.dim},
            {"regular", b.regular},              {"diagonalizable", b.diagonalizable},
            {"label", mu_string(b.symbol)}};
}

json to_json(const HasseDiagram& h) {
    json v = json::array(), e = json::array();
    for (size_t i = 0; i < h.vertices.size(); ++i)
        v.push_back({{"id", i}, {"symbol", to_json(h.vertices[i])}, {"label", mu_string(h.vertices[i])}, {"dim", h.dims[i]}});
    for (auto [lo, hi] : h.edges) e.push_back({lo, hi});
    return {{"n", h.n}, {"vertices", v}, {"edges", e}};
}

json to_json(const MatrixClassification& c) {
    json ev = json::array();
    for (const auto& z : c.eigenvalues) ev.push_back(to_json(z));
    return {{"symbol", to_json(c.symbol)},
            {"label", mu_string(c.symbol)},
            {"eigenvalues", ev},
            {"ill_conditioned", c.ill_conditioned}};
}

json to_json(const LimitResult& r) {
    json j = {{"sample_t", r.sample_t}, {"consecutive_gaps", r.consecutive_gaps}, {"note", r.note}};
    j["limit"] = r.limit ? to_json(*r.limit) : json(nullptr);
    return j;
}

json to_json(const JordanizabilityReport& r) {
    json branches = json::array();
    for (const auto& b : r.branches) {
        json jb = {{"segre", b.segre}, {"segre_constant", b.segre_constant}, {"paths_used", b.paths_used}};
        jb["limit"] = b.limit ? to_json(*b.limit) : json(nullptr);
        branches.push_back(jb);
    }
    return {{"cond1", r.cond1},       {"cond2", r.cond2},       {"cond3", r.cond3},
            {"verdict", r.verdict},   {"branches", branches},   {"diagnostics", r.diagnostics}};
}

json to_json(const DEResidualReport& r) {
    return {{"order", r.order}, {"de1", r.de1}, {"de2", r.de2}, {"max_abs", r.max_abs()}};
}

json to_json(const IntegrabilityReport& r) {
    return {{"order", r.order},
            {"commutator", r.commutator},
            {"flat_B", r.flat_b},
            {"wedge", r.wedge},
            {"curvature", r.curvature},
            {"max_abs", r.max_abs()}};
}

json to_json(const HolconReport& r) {
    json lhs = json::array(), ratio = json::array();
    for (const auto& z : r.lhs) lhs.push_back(to_json(z));
    for (const auto& z : r.ratio) ratio.push_back(to_json(z));
    return {{"t", r.t}, {"lhs", lhs}, {"ratio", ratio}, {"spread", r.spread}, {"bounded", r.bounded}};
}

json to_json(const CurveReport& r) {
    json pts = json::array(), exact = json::array();
    for (const auto& p : r.point) pts.push_back({to_json(p[0]), to_json(p[1]), to_json(p[2])});
    for (const auto& e : r.exact) exact.push_back(to_json(e));
    return {{"t", r.t}, {"points", pts}, {"residual", r.residual}, {"max_residual", r.max_residual},
            {"exact_coefficients", exact}};
}

json to_json(const MonomialFamily& f) {
    json exps = json::array(), res = json::array();
    for (const auto& e : f.exps) exps.push_back(rational_to_json(mpq_class(e)));
    for (const auto& r : f.residual) res.push_back(to_json(r));
    return {{"name", f.name},
            {"alpha_exp", exps[0]},
            {"beta_exp", exps[1]},
            {"gamma_exp", exps[2]},
            {"zero_flags", {f.zero[0], f.zero[1], f.zero[2]}},
            {"residual", res},
            {"verified", f.verified}};
}

template <class S>
json residual_to_json(const GaugeResidual<S>& r) {
    json dz = json::array(), dx = json::array();
    for (size_t k = 0; k < r.dz_max.size(); ++k)
        dz.push_back({{"z_power", -int(k)}, {"max_abs", r.dz_max[k]}, {"jet_degree", r.dz_degree[k]}});
    for (size_t k = 0; k < r.dx_max.size(); ++k)
        dx.push_back({{"z_power", 1 - int(k)}, {"max_abs", r.dx_max[k]}, {"jet_degree", r.dx_degree[k]}});
    return {{"dz", dz}, {"dx", dx}, {"max_abs", r.max_abs()}};
}

template <class S>
json pfaffian_to_json(const PfaffianReport<S>& r) {
    json omega = json::array();
    for (const auto& w : r.omega) omega.push_back(series_matrix_to_json(w));
    return {{"A", series_matrix_to_json(r.A)}, {"omega", omega}, {"per_degree", r.per_degree}, {"max_abs", r.max_abs()}};
}

template <class S>
json classification_to_json(const Classification2x2<S>& c) {
    json j = {{"type", to_string(c.type)}, {"note", c.note}, {"identity_residual", c.identity_residual}};
    j["kappa"] = c.kappa ? to_json(*c.kappa) : json(nullptr);
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw Error("parse", std::string("invalid JSON in ") + path + ": " + e.what());
    }
}

#define STRATA_JSON_INSTANTIATE(S)                                                   \
    template std::vector<S> vector_from_json<S>(const json&);                        \
    template json vector_to_json(const std::vector<S>&);                             \
    template Poly<S> poly_from_json<S>(const json&);                                 \
    template json poly_to_json(const Poly<S>&);                                      \
    template TruncatedSeries<S> series_from_json<S>(const json&);                    \
    template json series_to_json(const TruncatedSeries<S>&);                         \
    template SeriesMatrix<S> series_matrix_from_json<S>(const json&);                \
    template json series_matrix_to_json(const SeriesMatrix<S>&);                     \
    template DEProblem<S> de_problem_from_json<S>(const json&);                      \
    template json de_problem_to_json(const DEProblem<S>&);                           \
    template InitialValue<S> initial_value_from_json<S>(const json&);                \
    template FramedConnection<S> connection_from_json<S>(const json&);               \
    template json connection_to_json(const FramedConnection<S>&);                    \
    template GaugeSeries<S> gauge_series_from_json<S>(const json&);                  \
    template json gauge_series_to_json(const GaugeSeries<S>&);                       \
    template json residual_to_json(const GaugeResidual<S>&);                         \
    template json pfaffian_to_json(const PfaffianReport<S>&);                        \
    template json classification_to_json(const Classification2x2<S>&);

STRATA_JSON_INSTANTIATE(cplx)
STRATA_JSON_INSTANTIATE(qcomplex)

}  // namespace strata
