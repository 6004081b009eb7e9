#include "fbuild/genpoly.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace fb {

int BipartiteGraph::add_vertex(int c) {
    color.push_back(c);
    adj.emplace_back();
    return size() - 1;
}

void BipartiteGraph::add_edge(int a, int b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
    if (color[a] == 0) edges.emplace_back(a, b);
    else edges.emplace_back(b, a);
}

int BipartiteGraph::edge_id(int a, int b) const {
    if (color[a] != 0) std::swap(a, b);
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].first == a && edges[i].second == b) return static_cast<int>(i);
    return -1;
}

std::vector<int> BipartiteGraph::distances(int src) const {
    std::vector<int> d(size(), -1);
    std::queue<int> q;
    d[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (d[w] < 0) {
                d[w] = d[v] + 1;
                q.push(w);
            }
    }
    return d;
}

const char* to_string(GenPolyError e) {
    switch (e) {
    case GenPolyError::None: return "None";
    case GenPolyError::NotBipartite: return "NotBipartite";
    case GenPolyError::AxiomFail: return "AxiomFail";
    case GenPolyError::ParameterRuleFail: return "ParameterRuleFail";
    case GenPolyError::NotThick: return "NotThick";
    case GenPolyError::UnsupportedParameter: return "UnsupportedParameter";
    case GenPolyError::NoneFound: return "NoneFound";
    case GenPolyError::FormatError: return "FormatError";
    }
    return "?";
}

namespace {

// edge lookup table for fast circuit handling
struct EdgeIndex {
    std::map<std::pair<int, int>, int> id;
    explicit EdgeIndex(const BipartiteGraph& g) {
        for (std::size_t i = 0; i < g.edges.size(); ++i) {
            auto [a, b] = g.edges[i];
            id[{a, b}] = static_cast<int>(i);
            id[{b, a}] = static_cast<int>(i);
        }
    }
    int operator()(int a, int b) const {
        auto it = id.find({a, b});
        return it == id.end() ? -1 : it->second;
    }
};

std::vector<Circuit> enumerate_circuits(const BipartiteGraph& g, int len) {
    std::vector<Circuit> out;
    const int n = g.size();
    std::vector<char> on(n, 0);
    Circuit path;
    // cycles are listed once: smallest vertex first, second vertex below the last
    auto dfs = [&](auto&& self, int v) -> void {
        if (static_cast<int>(path.size()) == len) {
            int start = path[0];
            if (std::find(g.adj[v].begin(), g.adj[v].end(), start) != g.adj[v].end() && path[1] < path.back())
                out.push_back(path);
            return;
        }
        for (int w : g.adj[v]) {
            if (w <= path[0] || on[w]) continue;
            on[w] = 1;
            path.push_back(w);
            self(self, w);
            path.pop_back();
            on[w] = 0;
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        on[s] = 1;
        dfs(dfs, s);
        on[s] = 0;
    }
    return out;
}

int girth(const BipartiteGraph& g) {
    int best = 1 << 30;
    for (int s = 0; s < g.size(); ++s) {
        std::vector<int> d(g.size(), -1), par(g.size(), -1);
        std::queue<int> q;
        d[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : g.adj[v]) {
                if (d[w] < 0) {
                    d[w] = d[v] + 1;
                    par[w] = v;
                    q.push(w);
                } else if (par[v] != w) {
                    best = std::min(best, d[v] + d[w] + 1);
                }
            }
        }
    }
    return best;
}

}  // namespace

std::vector<int> circuit_edges(const BipartiteGraph& g, const Circuit& c) {
    EdgeIndex ei(g);
    std::vector<int> out;
    for (std::size_t j = 0; j < c.size(); ++j) out.push_back(ei(c[j], c[(j + 1) % c.size()]));
    std::sort(out.begin(), out.end());
    return out;
}

int shared_path_length(const BipartiteGraph& g, const Circuit& a, const Circuit& b, bool* is_path) {
    auto ea = circuit_edges(g, a), eb = circuit_edges(g, b);
    std::vector<int> common;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(common));
    if (is_path) {
        // a set of edges of a circuit is a path iff it is a single arc of the cycle
        std::map<int, int> deg;
        for (int e : common) {
            deg[g.edges[e].first]++;
            deg[g.edges[e].second]++;
        }
        int ends = 0;
        for (auto& [v, d] : deg)
            if (d == 1) ++ends;
        *is_path = common.empty() || (ends == 2 && deg.size() == common.size() + 1);
    }
    return static_cast<int>(common.size());
}

VerifyReport verify(const BipartiteGraph& g, int m, bool require_thick) {
    VerifyReport rep;
    auto fail = [&](GenPolyError c, std::string w, std::vector<int> ids = {}) {
        rep.ok = false;
        rep.code = c;
        rep.witness = std::move(w);
        rep.witness_ids = std::move(ids);
        return rep;
    };
    const int n = g.size();
    if (m < 2) return fail(GenPolyError::UnsupportedParameter, "m < 2");
    for (int v = 0; v < n; ++v)
        for (int w : g.adj[v])
            if (g.color[v] == g.color[w]) return fail(GenPolyError::NotBipartite, "edge joins equal colours", {v, w});
    if (n == 0) return fail(GenPolyError::AxiomFail, "empty graph");

    // degree data and the Feit-Higman side rules
    std::array<std::set<int>, 2> degs;
    for (int v = 0; v < n; ++v) degs[g.color[v]].insert(static_cast<int>(g.adj[v].size()));
    int s = degs[0].size() == 1 ? *degs[0].begin() - 1 : -1;
    int t = degs[1].size() == 1 ? *degs[1].begin() - 1 : -1;
    bool every_deg3 = true;
    for (int v = 0; v < n; ++v)
        if (g.adj[v].size() < 3) every_deg3 = false;
    if (every_deg3 && (s < 0 || t < 0)) {
        int c = s < 0 ? 0 : 1;
        for (int v = 0; v < n; ++v)
            if (g.color[v] == c && static_cast<int>(g.adj[v].size()) != *degs[c].begin())
                return fail(GenPolyError::AxiomFail, "vertex-degree anomaly in colour " + std::to_string(c), {v});
    }
    bool thick = every_deg3 && s >= 2 && t >= 2;
    if (thick) {
        if (m != 2 && m != 3 && m != 4 && m != 6 && m != 8)
            return fail(GenPolyError::ParameterRuleFail, "no finite thick generalized " + std::to_string(m) + "-gon");
        if (m % 2 == 1 && s != t)
            return fail(GenPolyError::ParameterRuleFail, "odd m requires s = t, got (" + std::to_string(s) + "," + std::to_string(t) + ")");
        if (m == 8 && s == t)
            return fail(GenPolyError::ParameterRuleFail, "m = 8 requires s != t, got s = t = " + std::to_string(s));
    }
    if (require_thick && !thick) return fail(GenPolyError::NotThick, "some vertex lies in fewer than 3 chambers");

    auto d0 = g.distances(0);
    for (int v = 0; v < n; ++v)
        if (d0[v] < 0) return fail(GenPolyError::AxiomFail, "graph is disconnected", {0, v});

    // prefilter: girth 2m and diameter m
    int diam = 0;
    for (int v = 0; v < n; ++v) {
        auto d = g.distances(v);
        diam = std::max(diam, *std::max_element(d.begin(), d.end()));
    }
    rep.prefilter_ok = girth(g) == 2 * m && diam == m;

    // axiom (1): every two edges on a common 2m-circuit
    auto circuits = enumerate_circuits(g, 2 * m);
    const int E = static_cast<int>(g.edges.size());
    std::vector<std::vector<int>> cedges;
    cedges.reserve(circuits.size());
    for (auto& c : circuits) cedges.push_back(circuit_edges(g, c));
    std::vector<char> covered(static_cast<std::size_t>(E) * E, 0);
    for (auto& ce : cedges)
        for (int a : ce)
            for (int b : ce) covered[a * E + b] = 1;
    for (int a = 0; a < E; ++a)
        for (int b = a; b < E; ++b)
            if (!covered[a * E + b])
                return fail(GenPolyError::AxiomFail, "edges " + std::to_string(a) + " and " + std::to_string(b) +
                                                         " lie on no " + std::to_string(2 * m) + "-circuit", {a, b});

    // axiom (2): circuits sharing an edge are isomorphic fixing the intersection
    std::vector<std::vector<int>> by_edge(E);
    for (std::size_t i = 0; i < cedges.size(); ++i)
        for (int e : cedges[i]) by_edge[e].push_back(static_cast<int>(i));
    const int L = 2 * m;
    std::set<std::pair<int, int>> done;
    for (int e = 0; e < E; ++e)
        for (int i : by_edge[e])
            for (int j : by_edge[e]) {
                if (i >= j || !done.insert({i, j}).second) continue;
                const auto& A = circuits[i];
                const auto& B = circuits[j];
                std::vector<int> posB(n, -1);
                for (int x = 0; x < L; ++x) posB[B[x]] = x;
                std::vector<int> fixed;  // positions in A of shared vertices
                for (int x = 0; x < L; ++x)
                    if (posB[A[x]] >= 0) fixed.push_back(x);
                bool found = false;
                for (int shift = 0; shift < L && !found; ++shift)
                    for (int dir : {1, -1}) {
                        bool okmap = true;
                        for (int x : fixed) {
                            int img = B[((shift + dir * x) % L + L) % L];
                            if (img != A[x]) {
                                okmap = false;
                                break;
                            }
                        }
                        if (okmap) {
                            found = true;
                            break;
                        }
                    }
                if (!found)
                    return fail(GenPolyError::AxiomFail,
                                "circuits " + std::to_string(i) + " and " + std::to_string(j) +
                                    " share an edge but admit no isomorphism fixing their intersection",
                                {i, j});
            }

    if (!rep.prefilter_ok)
        return fail(GenPolyError::AxiomFail, "axioms hold by enumeration but girth/diameter differ from 2m/m");

    rep.ok = true;
    rep.polygon.graph = g;
    rep.polygon.m = m;
    rep.polygon.thick = thick;
    rep.polygon.s = s;
    rep.polygon.t = t;
    rep.polygon.apartments = std::move(circuits);
    return rep;
}

// ---------------------------------------------------------------------------

namespace {
GenPolygon checked(const BipartiteGraph& g, int m) {
    auto r = verify(g, m);
    if (!r.ok) throw GenPolyFailure(r.code, "constructed polygon failed verification: " + r.witness);
    return r.polygon;
}
}  // namespace

GenPolygon construct_digon(int s, int t) {
    if (s < 1 || t < 1) throw GenPolyFailure(GenPolyError::UnsupportedParameter, "digon needs s,t >= 1");
    BipartiteGraph g;
    for (int i = 0; i <= s; ++i) g.add_vertex(0);
    for (int j = 0; j <= t; ++j) g.add_vertex(1);
    for (int i = 0; i <= s; ++i)
        for (int j = 0; j <= t; ++j) g.add_edge(i, s + 1 + j);
    return checked(g, 2);
}

GenPolygon construct_projective(int q) {
    if (q != 2 && q != 3) throw GenPolyFailure(GenPolyError::UnsupportedParameter, "projective plane needs q in {2,3}");
    // normalised nonzero vectors of F_q^3: first nonzero coordinate equal to 1
    std::vector<std::array<int, 3>> pts;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < q; ++c) {
                std::array<int, 3> v{a, b, c};
                int lead = a ? a : (b ? b : c);
                if (lead == 1) pts.push_back(v);
            }
    const int n = static_cast<int>(pts.size());
    BipartiteGraph g;
    for (int i = 0; i < n; ++i) g.add_vertex(0);
    for (int i = 0; i < n; ++i) g.add_vertex(1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int dot = pts[i][0] * pts[j][0] + pts[i][1] * pts[j][1] + pts[i][2] * pts[j][2];
            if (dot % q == 0) g.add_edge(i, n + j);
        }
    return checked(g, 3);
}

GenPolygon construct_quadrangle(int q) {
    if (q != 2) throw GenPolyFailure(GenPolyError::UnsupportedParameter, "quadrangle needs q = 2");
    // points: 2-subsets of {0..5}; lines: partitions of {0..5} into three pairs
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) pairs.emplace_back(a, b);
    std::vector<std::array<int, 3>> matchings;  // indices into pairs
    auto pid = [&](int a, int b) {
        if (a > b) std::swap(a, b);
        return static_cast<int>(std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) - pairs.begin());
    };
    for (int b = 1; b < 6; ++b) {
        std::vector<int> rest;
        for (int x = 1; x < 6; ++x)
            if (x != b) rest.push_back(x);
        // rest has 4 elements; pair rest[0] with each of the others
        for (int c = 1; c < 4; ++c) {
            std::vector<int> r2;
            for (int x = 1; x < 4; ++x)
                if (x != c) r2.push_back(rest[x]);
            matchings.push_back({pid(0, b), pid(rest[0], rest[c]), pid(r2[0], r2[1])});
        }
    }
    BipartiteGraph g;
    for (std::size_t i = 0; i < pairs.size(); ++i) g.add_vertex(0);
    for (std::size_t i = 0; i < matchings.size(); ++i) g.add_vertex(1);
    const int np = static_cast<int>(pairs.size());
    for (std::size_t l = 0; l < matchings.size(); ++l)
        for (int p : matchings[l]) g.add_edge(p, np + static_cast<int>(l));
    return checked(g, 4);
}

GenPolygon construct(const std::string& kind) {
    auto colon = kind.find(':');
    std::string name = kind.substr(0, colon);
    std::vector<int> args;
    if (colon != std::string::npos) {
        std::stringstream ss(kind.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) args.push_back(std::stoi(tok));
    }
    if (name == "digon" && args.size() == 2) return construct_digon(args[0], args[1]);
    if (name == "projective" && args.size() == 1) return construct_projective(args[0]);
    if (name == "quadrangle" && args.size() == 1) return construct_quadrangle(args[0]);
    throw GenPolyFailure(GenPolyError::UnsupportedParameter, "unknown construction '" + kind + "'");
}

std::vector<int> opposite_set(const GenPolygon& L, int v) {
    auto d = L.graph.distances(v);
    std::vector<int> out;
    for (int w = 0; w < L.graph.size(); ++w)
        if (d[w] == L.m) out.push_back(w);
    return out;
}

int common_opposite(const GenPolygon& L, int v1, int v2) {
    if (L.graph.color[v1] != L.graph.color[v2])
        throw GenPolyFailure(GenPolyError::UnsupportedParameter, "common_opposite needs vertices of the same type");
    auto d1 = L.graph.distances(v1), d2 = L.graph.distances(v2);
    for (int w = 0; w < L.graph.size(); ++w)
        if (d1[w] == L.m && d2[w] == L.m) return w;
    throw GenPolyFailure(GenPolyError::NoneFound, "no common opposite vertex");
}

int apartment_opposite_vertex(const GenPolygon& L, const Circuit& A, int type) {
    if (L.m != 3 && L.m != 4)
        throw GenPolyFailure(GenPolyError::UnsupportedParameter, "apartment_opposite_vertex needs m in {3,4}");
    std::vector<std::vector<int>> dist;
    for (int a : A)
        if (L.graph.color[a] == type) dist.push_back(L.graph.distances(a));
    for (int w = 0; w < L.graph.size(); ++w) {
        bool all = true;
        for (auto& d : dist)
            if (d[w] != L.m) {
                all = false;
                break;
            }
        if (all) return w;
    }
    throw GenPolyFailure(GenPolyError::NoneFound, "no vertex opposite the apartment");
}

namespace {

int apartment_with(const GenPolygon& L, int e1, int e2) {
    for (std::size_t i = 0; i < L.apartments.size(); ++i) {
        auto ce = circuit_edges(L.graph, L.apartments[i]);
        if (std::binary_search(ce.begin(), ce.end(), e1) && std::binary_search(ce.begin(), ce.end(), e2))
            return static_cast<int>(i);
    }
    throw GenPolyFailure(GenPolyError::NoneFound, "no apartment through the two chambers");
}

bool same_circuit(const BipartiteGraph& g, const Circuit& a, const Circuit& b) {
    return circuit_edges(g, a) == circuit_edges(g, b);
}

void chain_rec(const GenPolygon& L, const Circuit& A, const Circuit& B, std::vector<Circuit>& out, int depth) {
    if (depth > 4 * L.m + 8) throw GenPolyFailure(GenPolyError::AxiomFail, "apartment chain does not terminate");
    const auto& g = L.graph;
    if (same_circuit(g, A, B)) return;
    auto ea = circuit_edges(g, A), eb = circuit_edges(g, B);
    std::vector<int> common;
    std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(common));
    int e1, e2;
    if (common.empty()) {
        e1 = ea.front();
        e2 = eb.front();
    } else {
        if (static_cast<int>(common.size()) == L.m) {
            out.push_back(B);
            return;
        }
        // endpoints of the shared path
        std::map<int, int> deg;
        for (int e : common) {
            deg[g.edges[e].first]++;
            deg[g.edges[e].second]++;
        }
        std::vector<int> ends;
        for (auto& [v, d] : deg)
            if (d == 1) ends.push_back(v);
        if (ends.size() != 2) throw GenPolyFailure(GenPolyError::AxiomFail, "apartment intersection is not a path");
        auto outside = [&](const std::vector<int>& ce, int v) {
            for (int e : ce)
                if ((g.edges[e].first == v || g.edges[e].second == v) &&
                    !std::binary_search(common.begin(), common.end(), e))
                    return e;
            return -1;
        };
        e1 = outside(ea, ends[0]);
        e2 = outside(eb, ends[1]);
    }
    const Circuit& C = L.apartments[apartment_with(L, e1, e2)];
    chain_rec(L, A, C, out, depth + 1);
    chain_rec(L, C, B, out, depth + 1);
}

}  // namespace

std::vector<Circuit> apartment_chain(const GenPolygon& L, const Circuit& A, const Circuit& B) {
    std::vector<Circuit> out{A};
    chain_rec(L, A, B, out, 0);
    return out;
}

std::string write_exchange(const BipartiteGraph& g) {
    std::ostringstream os;
    std::vector<int> local(g.size());
    int np = 0, nl = 0;
    for (int v = 0; v < g.size(); ++v) {
        local[v] = g.color[v] == 0 ? np++ : nl++;
        os << (g.color[v] == 0 ? "p " : "l ") << local[v] << "\n";
    }
    for (auto [p, l] : g.edges) os << "i " << local[p] << " " << local[l] << "\n";
    return os.str();
}

BipartiteGraph read_exchange(const std::string& text) {
    BipartiteGraph g;
    std::map<long long, int> pts, lines;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto err = [&](const std::string& why) {
        return GenPolyFailure(GenPolyError::FormatError, "line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "p" || tag == "l") {
            long long id;
            if (!(ls >> id)) throw err("missing id");
            auto& tab = tag == "p" ? pts : lines;
            if (tab.count(id)) throw err("duplicate id");
            tab[id] = g.add_vertex(tag == "p" ? 0 : 1);
        } else if (tag == "i") {
            long long a, b;
            if (!(ls >> a >> b)) throw err("incidence needs two ids");
            if (!pts.count(a) || !lines.count(b)) throw err("unknown point or line");
            g.add_edge(pts[a], lines[b]);
        } else {
            throw err("unknown record '" + tag + "'");
        }
    }
    return g;
}

}  // namespace fb
