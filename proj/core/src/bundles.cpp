#include "strata/bundles.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace strata {

BundleDescriptor describe(const SegreSymbol& s) {
    BundleDescriptor d;
    d.symbol = s;
    canonicalize(d.symbol);
    for (const auto& p : d.symbol.parts)
        if (!is_partition(p)) throw Error("invalid_symbol", "member is not a partition");
    d.n = d.symbol.size();
    int weighted = 0;
    d.regular = true;
    d.diagonalizable = true;
    for (const auto& p : d.symbol.parts) {
        for (size_t i = 0; i < p.size(); ++i) weighted += int(2 * i + 1) * p[i];
        if (p.size() != 1) d.regular = false;
        if (p.front() != 1) d.diagonalizable = false;
    }
    d.codim = weighted - int(d.symbol.parts.size());
    d.dim = d.n * d.n - d.codim;
    return d;
}

namespace {

std::optional<Partition> normalized(Partition p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] < 0 || (i > 0 && p[i] > p[i - 1])) return std::nullopt;
    if (p.empty()) return std::nullopt;
    return p;
}

}  // namespace

std::vector<Partition> box_moves(const Partition& p) {
    std::set<Partition> out;
    // One box one column to the right.
    for (size_t c = 0; c < p.size(); ++c) {
        Partition q = p;
        q.push_back(0);
        q[c] -= 1;
        q[c + 1] += 1;
        if (auto r = normalized(q)) out.insert(*r);
    }
    // One box one row down, i.e. a leftward move on the conjugate.
    Partition rho = conjugate(p);
    for (size_t r = 0; r + 1 < rho.size(); ++r) {
        Partition q = rho;
        q[r] += 1;
        q[r + 1] -= 1;
        if (auto n = normalized(q)) out.insert(conjugate(*n));
    }
    out.erase(p);
    return {out.rbegin(), out.rend()};
}

Moves elementary_moves(const SegreSymbol& s) {
    const int dim = describe(s).dim;
    std::set<SegreSymbol> t1, t2;
    const auto& parts = s.parts;
    for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = i + 1; j < parts.size(); ++j) {
            Partition merged(std::max(parts[i].size(), parts[j].size()), 0);
            for (size_t k = 0; k < merged.size(); ++k) {
                if (k < parts[i].size()) merged[k] += parts[i][k];
                if (k < parts[j].size()) merged[k] += parts[j][k];
            }
            std::vector<Partition> rest;
            for (size_t k = 0; k < parts.size(); ++k)
                if (k != i && k != j) rest.push_back(parts[k]);
            rest.push_back(merged);
            t1.insert(make_symbol(rest));
        }
    for (size_t i = 0; i < parts.size(); ++i)
        for (auto& q : box_moves(parts[i])) {
            auto next = parts;
            next[i] = q;
            t2.insert(make_symbol(next));
        }
    Moves m{{t1.rbegin(), t1.rend()}, {t2.rbegin(), t2.rend()}};
    for (const auto* list : {&m.type1, &m.type2})
        for (const auto& t : *list)
            if (describe(t).dim >= dim) throw Error("internal", "a move did not lower the dimension");
    return m;
}

bool closure_leq(const SegreSymbol& a, const SegreSymbol& b) {
    auto da = describe(a), db = describe(b);
    if (da.n != db.n) throw Error("size_mismatch", "symbols have different sizes");
    if (da.symbol == db.symbol) return true;
    if (da.dim >= db.dim) return false;
    std::set<SegreSymbol> seen{db.symbol};
    std::deque<SegreSymbol> queue{db.symbol};
    while (!queue.empty()) {
        SegreSymbol cur = std::move(queue.front());
        queue.pop_front();
        auto moves = elementary_moves(cur);
        for (const auto* list : {&moves.type1, &moves.type2})
            for (const auto& t : *list) {
                if (t == da.symbol) return true;
                if (describe(t).dim <= da.dim) continue;
                if (seen.insert(t).second) queue.push_back(t);
            }
    }
    return false;
}

int HasseDiagram::index_of(const SegreSymbol& s) const {
    SegreSymbol c = s;
    canonicalize(c);
    auto it = std::find(vertices.begin(), vertices.end(), c);
    return it == vertices.end() ? -1 : int(it - vertices.begin());
}

HasseDiagram hasse_diagram(int n, bool transitive_reduction) {
    HasseDiagram h;
    h.n = n;
    h.vertices = enumerate_double_partitions(n);
    std::map<SegreSymbol, int> index;
    for (size_t i = 0; i < h.vertices.size(); ++i) {
        index[h.vertices[i]] = int(i);
        h.dims.push_back(describe(h.vertices[i]).dim);
    }
    std::set<std::pair<int, int>> edges;
    for (size_t i = 0; i < h.vertices.size(); ++i) {
        auto moves = elementary_moves(h.vertices[i]);
        for (const auto* list : {&moves.type1, &moves.type2})
            for (const auto& t : *list) edges.insert({index.at(t), int(i)});
    }
    if (transitive_reduction) {
        const int v = int(h.vertices.size());
        std::vector<std::vector<int>> below(v);
        for (auto [lo, hi] : edges) below[hi].push_back(lo);
        // Drop (lo, hi) when lo is reachable from hi through a longer chain.
        std::set<std::pair<int, int>> kept;
        for (auto [lo, hi] : edges) {
            std::vector<char> seen(v, 0);
            std::vector<int> stack;
            for (int mid : below[hi])
                if (mid != lo) stack.push_back(mid);
            bool longer = false;
            while (!stack.empty() && !longer) {
                int x = stack.back();
                stack.pop_back();
                if (x == lo) longer = true;
                if (seen[x]) continue;
                seen[x] = 1;
                for (int y : below[x]) stack.push_back(y);
            }
            if (!longer) kept.insert({lo, hi});
        }
        edges = std::move(kept);
    }
    h.edges.assign(edges.begin(), edges.end());
    return h;
}

namespace {

const char* const kGreek[] = {"α", "β", "γ", "δ", "ε", "ζ", "η", "θ", "ι", "κ", "λ", "μ",
                              "ν", "ξ", "ο", "π", "ρ", "σ", "τ", "υ", "φ", "χ", "ψ", "ω"};
const char* const kSuperscript[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};

std::string superscript(int k) {
    std::string s;
    for (char c : std::to_string(k)) s += kSuperscript[c - '0'];
    return s;
}

}  // namespace

std::string mu_string(const SegreSymbol& s) {
    SegreSymbol c = s;
    canonicalize(c);
    std::string out;
    for (size_t i = 0; i < c.parts.size(); ++i) {
        std::string letter = i < 24 ? kGreek[i] : "λ" + std::to_string(i + 1);
        for (int part : c.parts[i]) {
            out += letter;
            if (part > 1) out += superscript(part);
        }
    }
    return out;
}

std::string to_dot(const HasseDiagram& h) {
    std::string out = "digraph bundles {\n  rankdir=BT;\n  node [shape=plaintext];\n";
    for (size_t i = 0; i < h.vertices.size(); ++i)
        out += "  v" + std::to_string(i) + " [label=\"" + mu_string(h.vertices[i]) + "\\n" +
               std::to_string(h.dims[i]) + "\"];\n";
    for (auto [lo, hi] : h.edges) out += "  v" + std::to_string(lo) + " -> v" + std::to_string(hi) + ";\n";
    return out + "}\n";
}

int numerical_rank(const Eigen::MatrixXcd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (int i = 0; i < sv.size(); ++i) r += sv(i) > tol * sv(0);
    return r;
}

MatrixClassification classify_matrix(const Eigen::MatrixXcd& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) throw Error("dimension", "matrix must be square and non-empty");
    if (!(tol > 0)) throw Error("invalid_argument", "tolerance must be positive");
    const int n = int(a.rows());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
    // Single-linkage clustering with threshold tol.
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(ev[i] - ev[j]) <= tol) parent[find(i)] = find(j);
    std::map<int, std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters[find(i)].push_back(i);

    MatrixClassification out;
    std::vector<std::vector<int>> members;
    for (auto& [root, idx] : clusters) members.push_back(idx);
    for (size_t p = 0; p < members.size(); ++p)
        for (size_t q = p + 1; q < members.size(); ++q)
            for (int i : members[p])
                for (int j : members[q])
                    if (std::abs(ev[i] - ev[j]) < 10 * tol) out.ill_conditioned = true;

    std::vector<std::pair<Partition, cplx>> found;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& idx : members) {
        cplx mu = 0;
        for (int i : idx) mu += ev[i];
        mu /= double(idx.size());
        const int m = int(idx.size());
        Eigen::MatrixXcd shifted = a - mu * id;
        Eigen::MatrixXcd power = id;
        Partition weyr;
        int prev_kernel = 0;
        for (int k = 1; k <= m; ++k) {
            power = power * shifted;
            int kernel = n - numerical_rank(power, tol);
            if (kernel > m) kernel = m;
            if (kernel <= prev_kernel) break;
            weyr.push_back(kernel - prev_kernel);
            prev_kernel = kernel;
            if (kernel == m) break;
        }
        if (prev_kernel != m || !is_partition(weyr))
            throw Error("ill_conditioned", "rank sequence is inconsistent with the eigenvalue cluster size");
        found.push_back({conjugate(weyr), mu});
    }
    std::vector<Partition> parts;
    for (auto& f : found) parts.push_back(f.first);
    out.symbol = make_symbol(parts);
    // Keep eigenvalues aligned with the canonical member order.
    std::vector<bool> used(found.size(), false);
    for (const auto& p : out.symbol.parts)
        for (size_t k = 0; k < found.size(); ++k)
            if (!used[k] && found[k].first == p) {
                used[k] = true;
                out.eigenvalues.push_back(found[k].second);
                break;
            }
    return out;
}

}  // namespace strata
