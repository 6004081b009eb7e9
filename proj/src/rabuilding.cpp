#include "fbuild/rabuilding.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace fb {

std::string colored_str(const ColoredWord& w) {
    if (w.empty()) return "e";
    std::string s;
    for (auto& l : w) s += "(" + std::to_string(l.gen + 1) + "," + std::to_string(l.color) + ")";
    return s;
}

ColoredWord parse_colored(const std::string& s) {
    ColoredWord w;
    std::string t;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || t == "e") return w;
    std::size_t p = 0;
    while (p < t.size()) {
        int g, c;
        char close;
        if (t[p] != '(') throw std::invalid_argument("bad coloured word '" + s + "'");
        std::istringstream is(t.substr(p + 1));
        char comma;
        if (!(is >> g >> comma >> c >> close) || comma != ',' || close != ')' || g < 1 || c < 0)
            throw std::invalid_argument("bad coloured word '" + s + "'");
        w.push_back({g - 1, c});
        p = t.find(')', p) + 1;
    }
    return w;
}

RAGroup::RAGroup(const ChamberSpec& spec) : spec_(spec), cox_(spec.k, spec.m) {
    if (spec.k < 5 || !spec.right_angled())
        throw std::invalid_argument("right-angled building needs k >= 5 and all m = 2");
    if (!spec.thick()) throw std::invalid_argument("right-angled building needs all q >= 2");
}

bool RAGroup::commutes(int a, int b) const {
    const int k = spec_.k;
    return a != b && ((a + 1) % k == b || (b + 1) % k == a);
}

void RAGroup::push(ColoredWord& r, Letter l) const {
    const int mod = spec_.q[l.gen] + 1;
    l.color = ((l.color % mod) + mod) % mod;
    if (l.color == 0) return;
    for (int j = static_cast<int>(r.size()) - 1; j >= 0; --j) {
        if (r[j].gen == l.gen) {
            int c = (r[j].color + l.color) % mod;
            if (c == 0) r.erase(r.begin() + j);
            else r[j].color = c;
            return;
        }
        if (!commutes(r[j].gen, l.gen)) break;
    }
    r.push_back(l);
}

// least linearization of the trace: repeatedly take the smallest letter that can move to the front
ColoredWord RAGroup::lexmin(ColoredWord r) const {
    ColoredWord out;
    out.reserve(r.size());
    while (!r.empty()) {
        int best = -1;
        for (int p = 0; p < static_cast<int>(r.size()); ++p) {
            bool front = true;
            for (int j = 0; j < p && front; ++j) front = commutes(r[j].gen, r[p].gen);
            if (front && (best < 0 || r[p] < r[best])) best = p;
        }
        out.push_back(r[best]);
        r.erase(r.begin() + best);
    }
    return out;
}

ColoredWord RAGroup::normal_form(const ColoredWord& w) const {
    ColoredWord r;
    for (auto l : w) {
        if (l.gen < 0 || l.gen >= spec_.k) throw std::invalid_argument("generator out of range");
        push(r, l);
    }
    return lexmin(std::move(r));
}

ColoredWord RAGroup::multiply(const ColoredWord& a, const ColoredWord& b) const {
    ColoredWord w = a;
    w.insert(w.end(), b.begin(), b.end());
    return normal_form(w);
}

ColoredWord RAGroup::inverse(const ColoredWord& w) const {
    ColoredWord r;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        int mod = spec_.q[it->gen] + 1;
        r.push_back({it->gen, (mod - it->color % mod) % mod});
    }
    return normal_form(r);
}

Word RAGroup::type(const ColoredWord& w) const {
    Word t;
    for (auto& l : normal_form(w)) t.push_back(l.gen);
    return t;
}

ColoredWord RAGroup::strip(const ColoredWord& nf, std::uint32_t gens) const {
    ColoredWord r = nf;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = static_cast<int>(r.size()) - 1; p >= 0; --p) {
            if (!(gens >> r[p].gen & 1u)) continue;
            bool last = true;
            for (int j = p + 1; j < static_cast<int>(r.size()) && last; ++j) last = commutes(r[j].gen, r[p].gen);
            if (last) {
                r.erase(r.begin() + p);
                changed = true;
                break;
            }
        }
    }
    return lexmin(std::move(r));
}

std::string RAGroup::key(const ColoredWord& nf) const {
    std::string s;
    s.reserve(2 * nf.size());
    for (auto& l : nf) {
        s += static_cast<char>(l.gen);
        s += static_cast<char>(l.color);
    }
    return s;
}

// ---------------------------------------------------------------------------

int ApartmentColoring::color_of(const Word& reflection) const {
    auto it = colors.find(word_str(reflection));
    return it == colors.end() ? default_color : it->second;
}

std::string ApartmentColoring::serialize() const {
    std::ostringstream os;
    os << "base=" << colored_str(base) << "\n";
    for (auto& [w, c] : colors) os << w << " " << c << "\n";
    return os.str();
}

ColoredWord apartment_eval(const RAGroup& G, const ApartmentColoring& A, const Word& w) {
    const auto& W = G.coxeter();
    Word r = W.reduce(w);
    ColoredWord out = A.base;
    Word prefix;
    for (int s : r) {
        Word t = W.conjugate(prefix, s);
        out.push_back({s, A.color_of(t)});
        prefix.push_back(s);
    }
    return G.normal_form(out);
}

bool apartment_contains(const RAGroup& G, const ApartmentColoring& A, const ColoredWord& chamber) {
    return apartment_eval(G, A, G.wdist(A.base, chamber)) == G.normal_form(chamber);
}

ApartmentColoring apartment_through(const RAGroup& G, const ColoredWord& C, const ColoredWord& D) {
    ApartmentColoring A;
    A.base = G.normal_form(C);
    auto path = G.multiply(G.inverse(C), D);
    Word prefix;
    for (auto& l : path) {
        A.colors[word_str(G.coxeter().conjugate(prefix, l.gen))] = l.color;
        prefix.push_back(l.gen);
    }
    return A;
}

ColoredWord retraction(const RAGroup& G, const ApartmentColoring& A, const ColoredWord& C, const ColoredWord& D) {
    Word wc = G.wdist(A.base, C);
    if (apartment_eval(G, A, wc) != G.normal_form(C))
        throw std::invalid_argument("retraction centre is not in the apartment");
    Word w = wc;
    auto d = G.wdist(C, D);
    w.insert(w.end(), d.begin(), d.end());
    return apartment_eval(G, A, w);
}

// ---------------------------------------------------------------------------

BuildingBall::BuildingBall(const ChamberSpec& spec, int radius, std::size_t cap)
    : G_(spec), radius_(radius), k_(spec.k) {
    if (radius < 0) throw std::invalid_argument("negative radius");
    words_.push_back({});
    index_[""] = 0;
    for (std::size_t head = 0; head < words_.size(); ++head) {
        if (static_cast<int>(words_[head].size()) >= radius) continue;
        for (int i = 0; i < k_; ++i)
            for (int c = 1; c <= spec.q[i]; ++c) {
                ColoredWord w = words_[head];
                w.push_back({i, c});
                w = G_.normal_form(w);
                auto key = G_.key(w);
                if (index_.count(key)) continue;
                if (words_.size() >= cap)
                    throw ResourceCap("building ball exceeds cap of " + std::to_string(cap) + " chambers");
                index_.emplace(key, static_cast<int>(words_.size()));
                words_.push_back(std::move(w));
            }
    }

    const int n = size();
    cedge_.assign(static_cast<std::size_t>(n) * k_, -1);
    cvert_.assign(static_cast<std::size_t>(n) * k_, -1);
    std::unordered_map<std::string, int> eidx, vidx;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < k_; ++i) {
            int j = (i + 1) % k_;
            std::string ek = std::string(1, static_cast<char>(i)) + G_.key(G_.strip(words_[c], 1u << i));
            auto [eit, enew] = eidx.emplace(ek, static_cast<int>(edges_.size()));
            if (enew) edges_.push_back({i, {}, false});
            edges_[eit->second].chambers.push_back(c);
            cedge_[c * k_ + i] = eit->second;

            std::string vk = std::string(1, static_cast<char>(i)) + G_.key(G_.strip(words_[c], (1u << i) | (1u << j)));
            auto [vit, vnew] = vidx.emplace(vk, static_cast<int>(vertices_.size()));
            if (vnew) vertices_.push_back({i, {}, false});
            vertices_[vit->second].chambers.push_back(c);
            cvert_[c * k_ + i] = vit->second;
        }
    for (auto& e : edges_) e.interior = static_cast<int>(e.chambers.size()) == spec.q[e.type] + 1;
    for (auto& v : vertices_)
        v.interior = static_cast<int>(v.chambers.size()) == (spec.q[v.type] + 1) * (spec.q[(v.type + 1) % k_] + 1);
}

int BuildingBall::find(const ColoredWord& nf) const {
    auto it = index_.find(G_.key(nf));
    return it == index_.end() ? -1 : it->second;
}

std::vector<int> BuildingBall::across(int c, int i) const {
    std::vector<int> out;
    for (int d : edges_[chamber_edge(c, i)].chambers)
        if (d != c) out.push_back(d);
    out.resize(spec().q[i], -1);
    return out;
}

BipartiteGraph BuildingBall::link(int v) const {
    const auto& V = vertices_.at(v);
    const int a = V.type, b = (V.type + 1) % k_;
    BipartiteGraph g;
    std::map<int, int> node;
    auto get = [&](int e, int col) {
        auto it = node.find(e);
        if (it != node.end()) return it->second;
        int id = g.add_vertex(col);
        node[e] = id;
        return id;
    };
    for (int c : V.chambers) g.add_edge(get(chamber_edge(c, a), 0), get(chamber_edge(c, b), 1));
    return g;
}

std::string BuildingBall::export_complex() const {
    std::ostringstream os;
    for (std::size_t v = 0; v < vertices_.size(); ++v)
        os << "v " << v << " " << vertices_[v].type + 1 << " " << (vertices_[v].type + 1) % k_ + 1 << "\n";
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        int i = edges_[e].type;
        int c = edges_[e].chambers.front();
        os << "e " << e << " " << i + 1 << " " << chamber_vertex(c, (i + k_ - 1) % k_) << " " << chamber_vertex(c, i)
           << "\n";
    }
    for (int c = 0; c < size(); ++c) {
        os << "f " << c;
        for (int i = 0; i < k_; ++i) os << " " << chamber_edge(c, i);
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

LabeledComplex parse_complex(const std::string& text) {
    LabeledComplex cx;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    auto err = [&](const std::string& why) {
        return ComplexFormatError("line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            LabeledComplex::V v;
            if (!(ls >> v.id >> v.a >> v.b)) throw err("vertex needs id and two labels");
            cx.vertices.push_back(v);
        } else if (tag == "e") {
            LabeledComplex::E e;
            if (!(ls >> e.id >> e.label >> e.v0 >> e.v1)) throw err("edge needs id, label, two vertices");
            cx.edges.push_back(e);
        } else if (tag == "f") {
            LabeledComplex::F f;
            if (!(ls >> f.id)) throw err("face needs an id");
            long long x;
            while (ls >> x) f.edges.push_back(x);
            if (f.edges.empty()) throw err("face without edges");
            cx.faces.push_back(std::move(f));
        } else {
            throw err("unknown record '" + tag + "'");
        }
        std::string extra;
        if (tag != "f" && ls >> extra) throw err("trailing data");
    }
    return cx;
}

LocalReport verify_building_local(const std::string& complex_text, const ChamberSpec& spec) {
    LabeledComplex cx = parse_complex(complex_text);
    LocalReport rep;
    const int k = spec.k;
    auto viol = [&](const char* kind, long long id, std::string d) { rep.violations.push_back({kind, id, std::move(d)}); };
    auto wrap = [&](int l) { return ((l - 1) % k + k) % k + 1; };

    std::map<long long, int> vpos, epos;
    for (std::size_t i = 0; i < cx.vertices.size(); ++i)
        if (!vpos.emplace(cx.vertices[i].id, static_cast<int>(i)).second)
            throw ComplexFormatError("duplicate vertex id " + std::to_string(cx.vertices[i].id));
    for (std::size_t i = 0; i < cx.edges.size(); ++i) {
        const auto& e = cx.edges[i];
        if (!epos.emplace(e.id, static_cast<int>(i)).second)
            throw ComplexFormatError("duplicate edge id " + std::to_string(e.id));
        if (!vpos.count(e.v0) || !vpos.count(e.v1)) throw ComplexFormatError("edge " + std::to_string(e.id) + " has an unknown vertex");
        if (e.label < 1 || e.label > k) throw ComplexFormatError("edge " + std::to_string(e.id) + " label out of range");
        const auto& a = cx.vertices[vpos[e.v0]];
        const auto& b = cx.vertices[vpos[e.v1]];
        if (a.a != wrap(e.label - 1) || a.b != e.label || b.a != e.label || b.b != wrap(e.label + 1))
            viol("edge", e.id, "endpoint types do not match label " + std::to_string(e.label));
    }

    // (a) faces
    std::vector<std::vector<long long>> faces_of_edge(cx.edges.size());
    std::map<long long, std::vector<std::pair<int, int>>> at_vertex;  // vertex -> (edge pos, edge pos) per face
    for (const auto& f : cx.faces) {
        ++rep.faces;
        for (long long e : f.edges)
            if (!epos.count(e)) throw ComplexFormatError("face " + std::to_string(f.id) + " has an unknown edge");
        bool good = static_cast<int>(f.edges.size()) == k;
        for (int j = 0; good && j < k; ++j) {
            const auto& e = cx.edges[epos[f.edges[j]]];
            const auto& nx = cx.edges[epos[f.edges[(j + 1) % k]]];
            if (e.label != j + 1 || e.v1 != nx.v0) good = false;
        }
        if (!good) {
            viol("face", f.id, "boundary is not labeled 1..k around the chamber");
            continue;
        }
        for (int j = 0; j < k; ++j) {
            int ep = epos[f.edges[j]], np = epos[f.edges[(j + 1) % k]];
            faces_of_edge[ep].push_back(f.id);
            at_vertex[cx.edges[ep].v1].push_back({ep, np});
        }
    }

    // (b) edge multiplicities; an edge in a single face is taken to lie on the boundary
    for (std::size_t i = 0; i < cx.edges.size(); ++i) {
        int nf = static_cast<int>(faces_of_edge[i].size());
        if (nf < 2) continue;
        ++rep.interior_edges;
        int want = spec.q[cx.edges[i].label - 1] + 1;
        if (nf != want)
            viol("edge", cx.edges[i].id,
                 "label " + std::to_string(cx.edges[i].label) + " in " + std::to_string(nf) + " faces, expected " +
                     std::to_string(want));
    }

    // (c) vertex links; interior when every link vertex has degree >= 2
    for (auto& [vid, pairs] : at_vertex) {
        const auto& V = cx.vertices[vpos[vid]];
        int type = V.a - 1;
        BipartiteGraph g;
        std::map<int, int> node;
        auto get = [&](int e, int col) {
            auto it = node.find(e);
            if (it != node.end()) return it->second;
            return node[e] = g.add_vertex(col);
        };
        for (auto [e1, e2] : pairs) g.add_edge(get(e1, 0), get(e2, 1));
        bool interior = true;
        for (int x = 0; x < g.size(); ++x)
            if (g.adj[x].size() < 2) interior = false;
        if (!interior) continue;
        ++rep.interior_vertices;
        int m = spec.m[type];
        auto r = verify(g, m);
        if (!r.ok) {
            viol("vertex", vid, std::string("link is not a generalized ") + std::to_string(m) + "-gon: " + to_string(r.code) + " " + r.witness);
            continue;
        }
        int s = spec.q[type], t = spec.q[(type + 1) % k];
        if (r.polygon.s != s || r.polygon.t != t)
            viol("vertex", vid,
                 "link parameters (" + std::to_string(r.polygon.s) + "," + std::to_string(r.polygon.t) + "), expected (" +
                     std::to_string(s) + "," + std::to_string(t) + ")");
    }
    rep.ok = rep.violations.empty();
    rep.note = "local conditions only; the apartment-exchange axiom is not checked. Edges in one face and vertices "
               "with a link vertex of degree < 2 are treated as boundary.";
    return rep;
}

}  // namespace fb
