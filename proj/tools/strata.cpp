#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "strata/appendix.hpp"
#include "strata/bundles.hpp"
#include "strata/darboux.hpp"
#include "strata/gap.hpp"
#include "strata/gauge.hpp"
#include "strata/json_io.hpp"
#include "strata/partitions.hpp"

using namespace strata;

namespace {

struct Options {
    std::string format = "json";
    std::optional<double> tol;
    bool force_float = false;
    bool force_exact = false;
    std::string input, jet, gauge;
    int n = 0, r = 1, order = 4, i = 0, j = 1;
    std::string partition, symbol, symbol_b, mode = "regular", path, point;
    int first = 4, last = 12, steps = 11;
    bool reduce = false;
    long p = 1, q = 2;
    std::string alpha = "1", beta = "1", gamma = "1", c = "2", beta_exp;
    double t0 = 0, t1 = 1;
};

double default_tol(const Options& o, double fallback) {
    if (o.tol) return *o.tol;
    if (const char* env = std::getenv("STRATA_TOL")) {
        char* end = nullptr;
        double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0)) throw Error("invalid_argument", "STRATA_TOL must be a positive number");
        return v;
    }
    return fallback;
}

void emit(const Options& o, const json& j) {
    if (o.format == "dot") throw Error("invalid_argument", "dot output is only available for bundles hasse");
    std::cout << (o.format == "text" ? j.dump(2) : j.dump()) << "\n";
}

bool use_exact(const Options& o, const json& doc) {
    if (o.force_float) return false;
    if (o.force_exact) {
        if (!json_is_exact(doc)) throw Error("invalid_argument", "--exact needs integer or p/q input");
        return true;
    }
    return json_is_exact(doc);
}

// Runs f<qcomplex> or f<cplx> depending on the input.
template <class F>
void dispatch_scalar(const Options& o, const json& doc, F&& f) {
    if (use_exact(o, doc)) f(qcomplex{});
    else f(cplx{});
}

json parse_inline(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw Error("parse", std::string("cannot parse ") + what + ": " + text);
    }
}

Path path_from_json(const json& j) {
    Path p;
    p.name = j.value("name", std::string("custom"));
    for (const auto& e : j.at("offset")) p.offset.push_back(poly_from_json<qcomplex>(e));
    return p;
}

Path pick_path(const Options& o, int d, const json& doc) {
    if (doc.contains("path")) return path_from_json(doc.at("path"));
    auto paths = default_paths(d);
    if (o.path.empty()) return paths.front();
    for (const auto& p : paths)
        if (p.name == o.path) return p;
    throw Error("invalid_argument", "unknown path " + o.path);
}

void require_order(int k) {
    if (k < 0) throw Error("invalid_argument", "order must be non-negative");
}

// partitions

void run_partitions_list(const Options& o) {
    if (o.n < 0) throw Error("invalid_argument", "n must be non-negative");
    json out = json::array();
    if (o.r == 1) {
        for (const auto& p : enumerate_partitions(o.n)) out.push_back(p);
    } else if (o.r == 2) {
        for (const auto& s : enumerate_double_partitions(o.n)) out.push_back(to_json(s));
    } else {
        throw Error("invalid_argument", "list supports r = 1 or r = 2");
    }
    if (o.format == "text") {
        if (o.r == 1)
            for (const auto& p : enumerate_partitions(o.n)) std::cout << to_string(p) << "\n";
        else
            for (const auto& s : enumerate_double_partitions(o.n)) std::cout << to_string(s) << "  " << mu_string(s) << "\n";
        return;
    }
    emit(o, out);
}

void run_partitions_count(const Options& o) {
    if (o.n < 0 || o.r < 1) throw Error("invalid_argument", "need r >= 1 and n >= 0");
    if (o.format == "dot") throw Error("invalid_argument", "dot output is only available for bundles hasse");
    // a bare integer is valid JSON and plain text alike
    std::cout << count_fold_partitions(o.r, o.n).get_str() << "\n";
}

void run_partitions_conjugate(const Options& o) {
    if (!o.symbol.empty()) {
        auto s = conjugate_symbol(symbol_from_json(parse_inline(o.symbol, "symbol")));
        if (o.format == "text") std::cout << to_string(s) << "\n";
        else emit(o, to_json(s));
        return;
    }
    if (o.partition.empty()) throw Error("invalid_argument", "give --partition or --symbol");
    auto p = conjugate(partition_from_json(parse_inline(o.partition, "partition")));
    if (o.format == "text") std::cout << to_string(p) << "\n";
    else emit(o, json(p));
}

// bundles

SegreSymbol required_symbol(const std::string& text) {
    if (text.empty()) throw Error("invalid_argument", "missing symbol");
    return symbol_from_json(parse_inline(text, "symbol"));
}

void run_bundles_describe(const Options& o) { emit(o, to_json(describe(required_symbol(o.symbol)))); }

void run_bundles_moves(const Options& o) {
    auto m = elementary_moves(required_symbol(o.symbol));
    json t1 = json::array(), t2 = json::array();
    for (const auto& s : m.type1) t1.push_back(to_json(s));
    for (const auto& s : m.type2) t2.push_back(to_json(s));
    emit(o, {{"type1", t1}, {"type2", t2}});
}

void run_bundles_closure(const Options& o) {
    auto a = required_symbol(o.symbol), b = required_symbol(o.symbol_b);
    bool leq = closure_leq(a, b);
    if (o.format == "text") std::cout << (leq ? "true" : "false") << "\n";
    else emit(o, {{"a", to_json(a)}, {"b", to_json(b)}, {"leq", leq}});
}

void run_bundles_hasse(const Options& o) {
    if (o.n < 1) throw Error("invalid_argument", "n must be positive");
    auto h = hasse_diagram(o.n, o.reduce);
    if (o.format == "dot") std::cout << to_dot(h);
    else emit(o, to_json(h));
}

void run_bundles_classify(const Options& o) {
    auto doc = read_json_file(o.input);
    const auto& m = doc.is_object() ? doc.at("matrix") : doc;
    emit(o, to_json(classify_matrix(matrix_from_json(m), default_tol(o, 1e-8))));
}

// gap

void run_gap_distance(const Options& o) {
    auto doc = read_json_file(o.input);
    auto a = subspace_from_json(doc.at("a")), b = subspace_from_json(doc.at("b"));
    emit(o, {{"distance", gap_distance(a, b)}});
}

void run_gap_kernel(const Options& o) {
    auto doc = read_json_file(o.input);
    const auto& m = doc.is_object() ? doc.at("matrix") : doc;
    emit(o, to_json(kernel_subspace(matrix_from_json(m), default_tol(o, 1e-8))));
}

void run_gap_report(const Options& o) {
    auto doc = read_json_file(o.input);
    auto fam = family_from_json(doc.at("family"));
    auto x0 = vector_from_json<cplx>(doc.at("x0"));
    ReportConfig cfg;
    cfg.tol = default_tol(o, 1e-8);
    if (doc.contains("paths"))
        for (const auto& p : doc.at("paths")) cfg.paths.push_back(path_from_json(p));
    cfg.samples = dyadic_samples(doc.value("first", 1), doc.value("last", 8));
    emit(o, to_json(jordanizability_report(fam, x0, cfg)));
}

// de

void run_de_residual(const Options& o) {
    require_order(o.order);
    auto doc = read_json_file(o.input);
    auto jet_doc = read_json_file(o.jet);
    json both = {doc, jet_doc};
    dispatch_scalar(o, both, [&](auto tag) {
        using S = decltype(tag);
        auto prob = de_problem_from_json<S>(doc);
        const auto& jj = jet_doc.contains("jet") ? jet_doc.at("jet") : jet_doc;
        emit(o, to_json(de_residual(prob, series_matrix_from_json<S>(jj), o.order)));
    });
}

template <class S>
InitialValue<S> initial_value_of(const json& doc) {
    if (!doc.contains("F0")) throw Error("invalid_argument", "the problem needs an initial value F0");
    return initial_value_from_json<S>(doc.at("F0"));
}

void run_de_solve(const Options& o) {
    require_order(o.order);
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto prob = de_problem_from_json<S>(doc);
        auto res = de_solve_jet(prob, initial_value_of<S>(doc), o.order, default_tol(o, 1e-9));
        emit(o, {{"jet", series_matrix_to_json(res.jet)},
                 {"feasible", res.feasible},
                 {"base_constraint_ok", res.base_constraint_ok},
                 {"residual", to_json(res.residual)},
                 {"warnings", res.warnings}});
    });
}

void run_de_oracle(const Options& o) {
    require_order(o.order);
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto prob = de_problem_from_json<S>(doc);
        emit(o, {{"jet", series_matrix_to_json(de_oracle_solve(prob, initial_value_of<S>(doc), o.order))}});
    });
}

// gauge

void run_gauge_build(const Options& o) {
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto conn = connection_from_json<S>(doc);
        int order = std::max(0, conn.K - 2);
        emit(o, {{"connection", connection_to_json(conn)},
                 {"integrability", to_json(integrability_residual(conn.delta0, conn.B, conn.omega, order))}});
    });
}

void run_gauge_residual(const Options& o) {
    auto doc = read_json_file(o.input);
    auto gdoc = read_json_file(o.gauge);
    json both = {doc, gdoc};
    dispatch_scalar(o, both, [&](auto tag) {
        using S = decltype(tag);
        auto conn = connection_from_json<S>(doc);
        const auto& g = gdoc.contains("gauge") ? gdoc.at("gauge") : gdoc;
        emit(o, residual_to_json(gauge_residual(conn, gauge_series_from_json<S>(g))));
    });
}

void run_gauge_simplify(const Options& o) {
    require_order(o.order);
    SimplifyMode mode;
    if (o.mode == "regular") mode = SimplifyMode::regular;
    else if (o.mode == "coalescent") mode = SimplifyMode::coalescent;
    else throw Error("invalid_argument", "mode must be regular or coalescent");
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto conn = connection_from_json<S>(doc);
        auto phi = formal_simplify(conn, o.order, mode, default_tol(o, 1e-10));
        emit(o, {{"gauge", gauge_series_to_json(phi)}, {"residual", residual_to_json(gauge_residual(conn, phi))}});
    });
}

void run_gauge_witness(const Options& o) {
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto delta0 = series_matrix_from_json<S>(doc.at("Delta0"));
        auto B = series_matrix_from_json<S>(doc.at("B"));
        std::vector<SeriesMatrix<S>> w;
        for (const auto& m : doc.at("omega")) w.push_back(series_matrix_from_json<S>(m));
        auto wit = dv_witness(delta0, B, w, default_tol(o, 1e-9));
        json obs = json::array();
        for (const auto& ob : wit.obstructions) obs.push_back({{"i", ob.i}, {"j", ob.j}, {"reason", ob.reason}});
        json out = {{"obstructions", obs}, {"dv_type", bool(wit.L)}};
        out["L"] = wit.L ? series_matrix_to_json(*wit.L) : json(nullptr);
        emit(o, out);
    });
}

void run_gauge_holcon(const Options& o) {
    auto doc = read_json_file(o.input);
    const auto& cdoc = doc.contains("connection") ? doc.at("connection") : doc;
    dispatch_scalar(o, cdoc, [&](auto tag) {
        using S = decltype(tag);
        auto conn = connection_from_json<S>(cdoc);
        std::vector<cplx> xc;
        if (!o.point.empty()) xc = vector_from_json<cplx>(parse_inline(o.point, "point"));
        else if (doc.contains("xc")) xc = vector_from_json<cplx>(doc.at("xc"));
        else
            for (const auto& c : conn.center) xc.push_back(to_cplx(c));
        auto path = pick_path(o, conn.d, doc);
        emit(o, to_json(holcon_check(conn, o.i, o.j, xc, path, dyadic_samples(o.first, o.last))));
    });
}

// appendix

template <class S>
ConstMatrix<S> const_matrix_from_json(const json& j) {
    ConstMatrix<S> m;
    for (const auto& row : j) m.push_back(vector_from_json<S>(row));
    return m;
}

void run_appendix_pfaffian(const Options& o) {
    require_order(o.order);
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto rep = malgrange_pfaffian_residual(const_matrix_from_json<S>(doc.at("A0")), const_matrix_from_json<S>(doc.at("B0")),
                                               series_matrix_from_json<S>(doc.at("K")), o.order);
        emit(o, pfaffian_to_json(rep));
    });
}

qcomplex scalar_arg(const std::string& s, const char* what) {
    try {
        return scalar_from_json<qcomplex>(parse_inline(s, what));
    } catch (const Error&) {
        return scalar_from_json<qcomplex>(json(s));
    }
}

void run_appendix_curve(const Options& o) {
    if (o.steps < 1) throw Error("invalid_argument", "steps must be positive");
    std::vector<double> grid;
    for (int k = 0; k <= o.steps; ++k) grid.push_back(o.t0 + (o.t1 - o.t0) * k / o.steps);
    std::optional<qcomplex> be;
    if (!o.beta_exp.empty()) be = scalar_arg(o.beta_exp, "beta exponent");
    emit(o, to_json(nonversal_curve(scalar_arg(o.alpha, "alpha"), scalar_arg(o.beta, "beta"), scalar_arg(o.gamma, "gamma"),
                                    scalar_arg(o.c, "c"), grid, be)));
}

void run_appendix_families(const Options& o) {
    json out = json::array();
    for (const auto& f : rational_c_families(o.p, o.q)) out.push_back(to_json(f));
    emit(o, out);
}

void run_appendix_classify(const Options& o) {
    auto doc = read_json_file(o.input);
    dispatch_scalar(o, doc, [&](auto tag) {
        using S = decltype(tag);
        auto c = classify_2x2(poly_from_json<S>(doc.at("g")), poly_from_json<S>(doc.at("h")),
                              poly_from_json<S>(doc.at("l")), poly_from_json<S>(doc.at("m")),
                              vector_from_json<S>(doc.at("x0")), default_tol(o, 1e-9));
        emit(o, classification_to_json(c));
    });
}

void fail(const std::string& code, const std::string& detail) {
    std::cerr << json({{"error", code}, {"detail", detail}}).dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"strata: matrix bundles, gap topology, Darboux-Egoroff jets and formal gauge simplification"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "dot", "text"}));
    app.add_option("--tol", o.tol, "Tolerance (overrides STRATA_TOL)")->check(CLI::PositiveNumber);
    auto* fl = app.add_flag("--float", o.force_float, "Use floating-point arithmetic even for exact input");
    app.add_flag("--exact", o.force_exact, "Require exact rational arithmetic")->excludes(fl);

    std::function<void()> action;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, auto fn) {
        auto* sc = parent->add_subcommand(name, help);
        sc->callback([&action, fn, &o] { action = [fn, &o] { fn(o); }; });
        return sc;
    };
    auto input = [&](CLI::App* sc) { sc->add_option("--input", o.input, "Input JSON file")->required(); };
    auto order = [&](CLI::App* sc) { sc->add_option("--order", o.order, "Jet order K"); };

    auto* parts = app.add_subcommand("partitions", "Integer and multi-partitions")->require_subcommand(1);
    {
        auto* s = leaf(parts, "list", "List partitions (r = 1) or double partitions (r = 2) of n", run_partitions_list);
        s->add_option("--n", o.n)->required();
        s->add_option("--r", o.r);
        s = leaf(parts, "count", "Number of r-fold partitions of n", run_partitions_count);
        s->add_option("--n", o.n)->required();
        s->add_option("--r", o.r);
        s = leaf(parts, "conjugate", "Conjugate partition or symbol", run_partitions_conjugate);
        s->add_option("--partition", o.partition, "e.g. [3,1]");
        s->add_option("--symbol", o.symbol, "e.g. [[2,1],[1]]");
    }

    auto* bund = app.add_subcommand("bundles", "Bundles of matrices and their closure order")->require_subcommand(1);
    {
        auto* s = leaf(bund, "describe", "Dimension and codimension of a bundle", run_bundles_describe);
        s->add_option("--symbol", o.symbol)->required();
        s = leaf(bund, "moves", "Type I and Type II moves from a symbol", run_bundles_moves);
        s->add_option("--symbol", o.symbol)->required();
        s = leaf(bund, "closure", "Whether bundle a lies in the closure of bundle b", run_bundles_closure);
        s->add_option("--a", o.symbol)->required();
        s->add_option("--b", o.symbol_b)->required();
        s = leaf(bund, "hasse", "Closure diagram of all bundles of size n", run_bundles_hasse);
        s->add_option("--n", o.n)->required();
        s->add_flag("--reduce", o.reduce, "Keep only covering relations");
        s = leaf(bund, "classify", "Segre symbol of a numerical matrix", run_bundles_classify);
        input(s);
    }

    auto* gap = app.add_subcommand("gap", "Gap distance and Jordanizability")->require_subcommand(1);
    {
        input(leaf(gap, "distance", "Gap distance between subspaces a and b", run_gap_distance));
        input(leaf(gap, "kernel", "Numerical kernel of a matrix", run_gap_kernel));
        input(leaf(gap, "report", "Jordanizability report for a matrix family", run_gap_report));
    }

    auto* de = app.add_subcommand("de", "Generalized Darboux-Egoroff system")->require_subcommand(1);
    {
        auto* s = leaf(de, "residual", "Residuals of a jet", run_de_residual);
        input(s);
        order(s);
        s->add_option("--jet", o.jet, "Jet JSON file")->required();
        s = leaf(de, "solve", "Taylor jet from an initial value", run_de_solve);
        input(s);
        order(s);
        s = leaf(de, "oracle", "Independent degree-by-degree solve", run_de_oracle);
        input(s);
        order(s);
    }

    auto* gg = app.add_subcommand("gauge", "Framed connections and formal gauge simplification")->require_subcommand(1);
    {
        input(leaf(gg, "build", "Derived connection data and integrability residual", run_gauge_build));
        auto* s = leaf(gg, "residual", "Residual of a gauge series", run_gauge_residual);
        input(s);
        s->add_option("--gauge", o.gauge, "Gauge series JSON file")->required();
        s = leaf(gg, "simplify", "Formal gauge series", run_gauge_simplify);
        input(s);
        order(s);
        s->add_option("--mode", o.mode, "regular or coalescent");
        input(leaf(gg, "witness", "Write B'' and omega'' through a single matrix L", run_gauge_witness));
        s = leaf(gg, "holcon", "Ratio estimate along a path to a coalescence point", run_gauge_holcon);
        input(s);
        s->add_option("--i", o.i);
        s->add_option("--j", o.j);
        s->add_option("--point", o.point, "Coalescence point, JSON array");
        s->add_option("--path", o.path, "ray1, ray2, ..., diagonal");
        s->add_option("--first", o.first, "First dyadic exponent");
        s->add_option("--last", o.last, "Last dyadic exponent");
    }

    auto* ap = app.add_subcommand("appendix", "Model computations")->require_subcommand(1);
    {
        auto* s = leaf(ap, "pfaffian", "Malgrange Pfaffian residual", run_appendix_pfaffian);
        input(s);
        order(s);
        s = leaf(ap, "curve", "Integral curve of the three-form system", run_appendix_curve);
        s->add_option("--alpha", o.alpha);
        s->add_option("--beta", o.beta);
        s->add_option("--gamma", o.gamma);
        s->add_option("--c", o.c);
        s->add_option("--beta-exponent", o.beta_exp);
        s->add_option("--t0", o.t0);
        s->add_option("--t1", o.t1);
        s->add_option("--steps", o.steps);
        s = leaf(ap, "families", "Monomial families for c = p/q", run_appendix_families);
        s->add_option("--p", o.p)->required();
        s->add_option("--q", o.q)->required();
        input(leaf(ap, "classify2x2", "Type of a 2x2 deformation", run_appendix_classify));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help();
        fail("usage", e.what());
        return 2;
    }

    try {
        action();
    } catch (const Error& e) {
        fail(e.code(), e.what());
        return 2;
    } catch (const json::exception& e) {
        fail("parse", e.what());
        return 2;
    } catch (const std::exception& e) {
        fail("internal", e.what());
        return 2;
    }
    return 0;
}
