#include "fbuild/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fb {

std::string word_str(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int x : w) s += "s" + std::to_string(x + 1);
    return s;
}

Word parse_word(const std::string& text) {
    Word w;
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty() || t == "e") return w;
    if (t.find('s') != std::string::npos) {
        std::size_t p = 0;
        while (p < t.size()) {
            if (t[p] != 's') throw std::invalid_argument("bad word '" + text + "'");
            std::size_t q = p + 1;
            while (q < t.size() && std::isdigit(static_cast<unsigned char>(t[q]))) ++q;
            if (q == p + 1) throw std::invalid_argument("bad word '" + text + "'");
            w.push_back(std::stoi(t.substr(p + 1, q - p - 1)) - 1);
            p = q;
        }
    } else if (t.find(',') != std::string::npos) {
        std::stringstream ss(t);
        std::string tok;
        while (std::getline(ss, tok, ',')) w.push_back(std::stoi(tok) - 1);
    } else {
        for (char c : t) {
            if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad word '" + text + "'");
            w.push_back(c - '1');
        }
    }
    for (int x : w)
        if (x < 0) throw std::invalid_argument("generator indices start at 1");
    return w;
}

// ---------------------------------------------------------------------------

CoxeterGroup::CoxeterGroup(const ChamberSpec& spec) : CoxeterGroup(spec.k, spec.m) {}

CoxeterGroup::CoxeterGroup(int k, std::vector<int> m) : k_(k), m_(std::move(m)) {
    if (k_ < 3 || static_cast<int>(m_.size()) != k_) throw std::invalid_argument("CoxeterGroup: bad rank");
}

int CoxeterGroup::order(int a, int b) const {
    if (a == b) return 1;
    if (b == (a + 1) % k_) return m_[a];
    if (a == (b + 1) % k_) return m_[b];
    return 0;
}

std::vector<CoxeterGroup::Str> CoxeterGroup::braid_class(const Str& w) const {
    std::vector<Str> out{w};
    std::unordered_set<Str> seen{w};
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        const Str cur = out[idx];
        const int n = static_cast<int>(cur.size());
        for (int p = 0; p + 1 < n; ++p) {
            int a = cur[p], b = cur[p + 1];
            if (a == b) continue;
            int mm = order(a, b);
            if (mm == 0 || p + mm > n) continue;
            bool alt = true;
            for (int j = 2; j < mm && alt; ++j) alt = cur[p + j] == (j % 2 ? b : a);
            if (!alt) continue;
            Str nxt = cur;
            for (int j = 0; j < mm; ++j) nxt[p + j] = static_cast<char>(j % 2 ? a : b);
            if (seen.insert(nxt).second) out.push_back(std::move(nxt));
        }
    }
    return out;
}

CoxeterGroup::Str CoxeterGroup::mult_right(const Str& r, int s) const {
    if (r.empty()) return Str(1, static_cast<char>(s));
    if (r.back() == s) return r.substr(0, r.size() - 1);
    // s is a right descent iff some reduced word of r ends in s
    for (const Str& w : braid_class(r))
        if (w.back() == s) return w.substr(0, w.size() - 1);
    return r + static_cast<char>(s);
}

CoxeterGroup::Str CoxeterGroup::canon(const Str& r) const {
    auto cls = braid_class(r);
    return *std::min_element(cls.begin(), cls.end());
}

Word CoxeterGroup::reduce(const Word& w) const {
    Str cur;
    for (int x : w) {
        if (x < 0 || x >= k_) throw std::invalid_argument("generator out of range");
        cur = mult_right(cur, x);
    }
    Str c = canon(cur);
    return Word(c.begin(), c.end());
}

bool CoxeterGroup::is_reduced(const Word& w) const { return static_cast<int>(reduce(w).size()) == static_cast<int>(w.size()); }

bool CoxeterGroup::equal(const Word& a, const Word& b) const { return reduce(a) == reduce(b); }

Word CoxeterGroup::multiply(const Word& a, const Word& b) const {
    Word w = a;
    w.insert(w.end(), b.begin(), b.end());
    return reduce(w);
}

Word CoxeterGroup::inverse(const Word& w) const { return reduce(Word(w.rbegin(), w.rend())); }

std::vector<Word> CoxeterGroup::reduced_words(const Word& reduced) const {
    std::vector<Word> out;
    for (const Str& s : braid_class(Str(reduced.begin(), reduced.end()))) out.emplace_back(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::uint32_t CoxeterGroup::right_descents(const Word& reduced) const {
    std::uint32_t d = 0;
    if (reduced.empty()) return d;
    for (const Str& s : braid_class(Str(reduced.begin(), reduced.end()))) d |= 1u << s.back();
    return d;
}

std::uint32_t CoxeterGroup::left_descents(const Word& reduced) const {
    std::uint32_t d = 0;
    if (reduced.empty()) return d;
    for (const Str& s : braid_class(Str(reduced.begin(), reduced.end()))) d |= 1u << s.front();
    return d;
}

Word CoxeterGroup::conjugate(const Word& u, int s) const {
    Word w = u;
    w.push_back(s);
    w.insert(w.end(), u.rbegin(), u.rend());
    return reduce(w);
}

std::vector<Word> CoxeterGroup::inversions(const Word& w) const {
    Word r = is_reduced(w) ? w : reduce(w);
    std::vector<Word> out;
    Word prefix;
    for (int x : r) {
        out.push_back(conjugate(prefix, x));
        prefix.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {
std::string key_of(const Word& w) { return std::string(w.begin(), w.end()); }
}  // namespace

CoxeterBall::CoxeterBall(const ChamberSpec& spec, int radius, std::size_t cap, bool with_walls)
    : spec_(spec), group_(spec), radius_(radius), k_(spec.k) {
    if (radius < 0) throw std::invalid_argument("negative radius");
    build_group_ball(cap);
    build_cells();
    if (with_walls) build_walls();
}

void CoxeterBall::build_group_ball(std::size_t cap) {
    const int k = k_;
    words_.push_back({});
    len_.push_back(0);
    ldesc_.push_back(0);
    left_.assign(k, -1);

    auto neighbours = [&](int s) {
        std::vector<int> t;
        for (int x = 0; x < k; ++x)
            if (x != s && group_.order(s, x) > 0) t.push_back(x);
        return t;
    };
    // v = s*w; does v also start with the longest element of <s,t>?
    auto chain = [&](int s, int t, int w, int* z) {
        int mm = group_.order(s, t);
        int cur = w;
        for (int step = 1; step < mm; ++step) {
            int x = (step % 2) ? t : s;
            if (!((ldesc_[cur] >> x) & 1u)) return false;
            cur = left_[cur * k + x];
        }
        if (z) *z = cur;
        return true;
    };
    auto descents = [&](int s, int w) {
        std::uint32_t d = 1u << s;
        for (int t : neighbours(s))
            if (chain(s, t, w, nullptr)) d |= 1u << t;
        return d;
    };

    int lo = 0, hi = 1;
    for (int n = 0; n < radius_; ++n) {
        struct Cand {
            Word word;
            int s, w;
            std::uint32_t desc;
        };
        std::vector<Cand> cands;
        for (int w = lo; w < hi; ++w)
            for (int s = 0; s < k; ++s) {
                if ((ldesc_[w] >> s) & 1u) continue;
                std::uint32_t d = descents(s, w);
                if (std::countr_zero(d) != s) continue;
                Word v{s};
                v.insert(v.end(), words_[w].begin(), words_[w].end());
                cands.push_back({std::move(v), s, w, d});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.word < b.word; });
        if (words_.size() + cands.size() > cap)
            throw ResourceCap("coxeter ball exceeds cap of " + std::to_string(cap) + " chambers");
        int base = static_cast<int>(words_.size());
        left_.resize((base + cands.size()) * k, -1);
        for (std::size_t j = 0; j < cands.size(); ++j) {
            int id = base + static_cast<int>(j);
            words_.push_back(cands[j].word);
            len_.push_back(n + 1);
            ldesc_.push_back(cands[j].desc);
            left_[cands[j].w * k + cands[j].s] = id;
            left_[id * k + cands[j].s] = cands[j].w;
        }
        for (int w = lo; w < hi; ++w)
            for (int s = 0; s < k; ++s) {
                if ((ldesc_[w] >> s) & 1u) continue;
                if (left_[w * k + s] >= 0) continue;
                std::uint32_t d = descents(s, w);
                int t = std::countr_zero(d);
                int z = -1;
                chain(s, t, w, &z);
                int mm = group_.order(s, t);
                int y = z;
                for (int j = mm - 1; j >= 1; --j) {
                    int x = (j % 2) ? s : t;  // x_1 = s, x_2 = t, ...
                    y = left_[y * k + x];
                }
                int id = left_[y * k + t];
                left_[w * k + s] = id;
                left_[id * k + s] = w;
            }
        lo = hi;
        hi = static_cast<int>(words_.size());
    }
    for (int c = 0; c < size(); ++c) index_.emplace(key_of(words_[c]), c);

    right_.assign(static_cast<std::size_t>(size()) * k, -1);
    for (int s = 0; s < k; ++s) right_[s] = left_[s];
    for (int c = 1; c < size(); ++c) {
        int a = words_[c][0];
        int w = left_[c * k + a];
        for (int s = 0; s < k; ++s) {
            int x = right_[w * k + s];
            right_[c * k + s] = x < 0 ? -1 : left_[x * k + a];
        }
    }
}

std::uint32_t CoxeterBall::right_desc(int c) const {
    std::uint32_t d = 0;
    for (int s = 0; s < k_; ++s) {
        int r = right(c, s);
        if (r >= 0 && len_[r] < len_[c]) d |= 1u << s;
    }
    return d;
}

int CoxeterBall::find(const Word& canonical) const {
    auto it = index_.find(key_of(canonical));
    return it == index_.end() ? -1 : it->second;
}

int CoxeterBall::find_any(const Word& w) const {
    if (static_cast<int>(w.size()) <= radius_) {
        // walk the right-multiplication table; cheaper than rewriting
        int c = 0;
        for (int x : w) {
            c = right(c, x);
            if (c < 0) break;
        }
        if (c >= 0) return c;
    }
    return find(group_.reduce(w));
}

void CoxeterBall::build_cells() {
    const int k = k_;
    const int n = size();
    cedge_.assign(static_cast<std::size_t>(n) * k, -1);
    cvert_.assign(static_cast<std::size_t>(n) * k, -1);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) {
            int o = right(c, i);
            if (o < 0 || len_[o] > len_[c]) {
                BallEdge e;
                e.label = i;
                e.c0 = c;
                e.c1 = o;
                cedge_[c * k + i] = static_cast<int>(edges_.size());
                edges_.push_back(e);
            } else {
                cedge_[c * k + i] = cedge_[o * k + i];
            }
        }
    std::unordered_map<long long, int> vmap;
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) {
            int j = (i + 1) % k;
            int u = c;
            for (bool moved = true; moved;) {
                moved = false;
                for (int x : {i, j}) {
                    int r = right(u, x);
                    if (r >= 0 && len_[r] < len_[u]) {
                        u = r;
                        moved = true;
                    }
                }
            }
            long long key = static_cast<long long>(u) * k + i;
            auto it = vmap.find(key);
            if (it != vmap.end()) {
                cvert_[c * k + i] = it->second;
                continue;
            }
            BallVertex v;
            v.type = i;
            v.m = spec_.m[i];
            const int mm = v.m;
            v.ring.assign(2 * mm, -1);
            v.ring[0] = u;
            int cur = u;
            for (int step = 1; step <= mm; ++step) {
                cur = cur < 0 ? -1 : right(cur, (step % 2) ? i : j);
                v.ring[step] = cur;
            }
            cur = u;
            for (int step = 1; step < mm; ++step) {
                cur = cur < 0 ? -1 : right(cur, (step % 2) ? j : i);
                v.ring[2 * mm - step] = cur;
            }
            v.interior = std::all_of(v.ring.begin(), v.ring.end(), [](int x) { return x >= 0; });
            v.ring_edges.assign(2 * mm, -1);
            for (int s = 0; s < 2 * mm; ++s) {
                int lab = (s % 2 == 0) ? i : j;
                int a = v.ring[s], b = v.ring[(s + 1) % (2 * mm)];
                if (a >= 0) v.ring_edges[s] = cedge_[a * k + lab];
                else if (b >= 0) v.ring_edges[s] = cedge_[b * k + lab];
            }
            int id = static_cast<int>(vertices_.size());
            vertices_.push_back(std::move(v));
            vmap.emplace(key, id);
            cvert_[c * k + i] = id;
        }
    for (auto& e : edges_) {
        e.v0 = cvert_[e.c0 * k + (e.label + k - 1) % k];
        e.v1 = cvert_[e.c0 * k + e.label];
    }
}

std::vector<int> CoxeterBall::label_components(const ChamberSpec& spec) {
    const int k = spec.k;
    std::vector<int> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < k; ++i)
        if (spec.m[i] == 3) parent[find(i)] = find((i + 1) % k);
    // renumber by smallest label
    std::vector<int> comp(k, -1), rootid(k, -1);
    int next = 0;
    for (int i = 0; i < k; ++i) {
        int r = find(i);
        if (rootid[r] < 0) rootid[r] = next++;
        comp[i] = rootid[r];
    }
    return comp;
}

int wall_type_count(const ChamberSpec& spec) {
    auto c = CoxeterBall::label_components(spec);
    return *std::max_element(c.begin(), c.end()) + 1;
}

void CoxeterBall::build_walls() {
    auto comp = label_components(spec_);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        auto& ed = edges_[e];
        Word r = group_.conjugate(words_[ed.c0], ed.label);
        auto key = key_of(r);
        auto it = wall_index_.find(key);
        int id;
        if (it == wall_index_.end()) {
            id = static_cast<int>(walls_.size());
            Wall w;
            w.reflection = r;
            w.anchor_edge = e;
            w.label = ed.label;
            w.type = comp[ed.label];
            walls_.push_back(std::move(w));
            wall_index_.emplace(key, id);
        } else {
            id = it->second;
        }
        ed.wall = id;
        walls_[id].edges.push_back(e);
    }
}

int CoxeterBall::wall_of_reflection(const Word& canonical) const {
    auto it = wall_index_.find(key_of(canonical));
    return it == wall_index_.end() ? -1 : it->second;
}

std::vector<int> CoxeterBall::inversion_walls(int c) const {
    std::vector<int> out;
    int cur = 0;
    for (int x : words_[c]) {
        out.push_back(edges_[chamber_edge(cur, x)].wall);
        cur = right(cur, x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> CoxeterBall::separating_walls(int a, int b) const {
    auto A = inversion_walls(a), B = inversion_walls(b);
    std::vector<int> out;
    std::set_symmetric_difference(A.begin(), A.end(), B.begin(), B.end(), std::back_inserter(out));
    return out;
}

std::vector<int> CoxeterBall::walk_wall(int e0) const {
    auto step = [&](int e, int v) {
        const auto& V = vertices_[v];
        const int n = static_cast<int>(V.ring_edges.size());
        for (int s = 0; s < n; ++s)
            if (V.ring_edges[s] == e) return V.ring_edges[(s + V.m) % n];
        return -1;
    };
    std::vector<int> fwd, bwd;
    for (int dir = 0; dir < 2; ++dir) {
        int e = e0;
        int v = dir == 0 ? edges_[e0].v1 : edges_[e0].v0;
        auto& out = dir == 0 ? fwd : bwd;
        for (std::size_t guard = 0; guard <= edges_.size(); ++guard) {
            int nx = step(e, v);
            if (nx < 0 || nx == e0) break;
            out.push_back(nx);
            v = edges_[nx].v0 == v ? edges_[nx].v1 : edges_[nx].v0;
            e = nx;
        }
    }
    std::vector<int> line(bwd.rbegin(), bwd.rend());
    line.push_back(e0);
    line.insert(line.end(), fwd.begin(), fwd.end());
    return line;
}

std::string CoxeterBall::export_complex() const {
    std::ostringstream os;
    const int k = k_;
    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
        os << "v " << v << " " << vertices_[v].type + 1 << " " << (vertices_[v].type + 1) % k + 1 << "\n";
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
        os << "e " << e << " " << edges_[e].label + 1 << " " << edges_[e].v0 << " " << edges_[e].v1 << "\n";
    for (int c = 0; c < size(); ++c) {
        os << "f " << c;
        for (int i = 0; i < k; ++i) os << " " << chamber_edge(c, i);
        os << "\n";
    }
    return os.str();
}

WallTypeResult wall_type(const CoxeterBall& ball, int wall) {
    WallTypeResult r;
    const auto& spec = ball.spec();
    const auto& W = ball.walls().at(wall);
    auto comp = CoxeterBall::label_components(spec);
    r.type = comp[W.label];
    int L = static_cast<int>(std::count(comp.begin(), comp.end(), r.type));
    r.period = (L == spec.k && std::all_of(spec.m.begin(), spec.m.end(), [](int x) { return x == 3; })) ? spec.k : 2 * L;
    // vertex pattern repeats every two edges even when the labels are constant
    int need = std::max(r.period, 2);
    auto line = ball.walk_wall(W.anchor_edge);
    const auto& E = ball.edges();
    for (std::size_t j = 0; j < line.size(); ++j) {
        r.labels.push_back(E[line[j]].label);
        if (j + 1 < line.size()) {
            int a = line[j], b = line[j + 1];
            int v = (E[a].v0 == E[b].v0 || E[a].v0 == E[b].v1) ? E[a].v0 : E[a].v1;
            r.vertex_m.push_back(ball.vertices()[v].m);
        }
    }
    std::set<int> seen(r.labels.begin(), r.labels.end());
    if (static_cast<int>(r.labels.size()) < need + 1 || static_cast<int>(seen.size()) < L) {
        r.status = WallTypeStatus::BallTooSmall;
        return r;
    }
    for (std::size_t j = 0; j + r.period < r.labels.size(); ++j)
        if (r.labels[j] != r.labels[j + r.period]) {
            r.status = WallTypeStatus::Inconsistent;
            return r;
        }
    return r;
}

}  // namespace fb
