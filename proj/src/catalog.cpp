#include "fbuild/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <unordered_set>

namespace fb {

RationalAngle defect(const std::vector<RationalAngle>& angles) {
    RationalAngle d(static_cast<std::int64_t>(angles.size()) - 2);
    for (auto& a : angles) d -= a;
    return d;
}

namespace {

RationalAngle min_angle(const ChamberSpec& spec) {
    int mx = *std::max_element(spec.m.begin(), spec.m.end());
    return {1, mx};
}

}  // namespace

int area_cap(const ChamberSpec& spec, int corners) {
    RationalAngle dmax = RationalAngle(corners - 2) - min_angle(spec) * corners;
    if (dmax.sign() <= 0) return 0;
    RationalAngle a0 = area(spec);
    return static_cast<int>((dmax.num() * a0.den()) / (dmax.den() * a0.num()));
}

bool label_meets_odd_vertex(const ChamberSpec& spec, int label) {
    auto comp = CoxeterBall::label_components(spec);
    for (int t = 0; t < spec.k; ++t)
        if (spec.m[t] % 2 == 1 && comp[t] == comp[label]) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Tessellation

namespace {

constexpr double kCell = 1e-3;

long long cell_key(long long ix, long long iy) { return ix * 2654435761LL ^ iy; }

}  // namespace

Tessellation::Tessellation(const ChamberSpec& spec) : spec_(spec), poly_(normal_polygon(spec)), k_(spec.k) {
    chamber_at(identity3());
}

int Tessellation::find_or_add(std::unordered_map<long long, std::vector<int>>& grid, const std::vector<HPoint>& pts,
                              const HPoint& p, bool& added) {
    long long ix = std::llround(p.x1 / kCell), iy = std::llround(p.x2 / kCell);
    const double tol = 1e-7 * p.x0;
    for (long long dx = -1; dx <= 1; ++dx)
        for (long long dy = -1; dy <= 1; ++dy) {
            auto it = grid.find(cell_key(ix + dx, iy + dy));
            if (it == grid.end()) continue;
            for (int id : it->second)
                if (std::abs(pts[id].x1 - p.x1) < tol && std::abs(pts[id].x2 - p.x2) < tol) {
                    added = false;
                    return id;
                }
        }
    int id = static_cast<int>(pts.size());
    grid[cell_key(ix, iy)].push_back(id);
    added = true;
    return id;
}

int Tessellation::chamber_at(const Mat3& M) {
    HPoint p = act(M, HPoint{});
    bool added;
    int id = find_or_add(cgrid_, cpos_, p, added);
    if (added) {
        cpos_.push_back(p);
        mats_.push_back(M);
        nbr_.insert(nbr_.end(), k_, -1);
        vert_.insert(vert_.end(), k_, -1);
        parent_.push_back(-1);
        parent_gen_.push_back(-1);
    }
    return id;
}

int Tessellation::neighbor(int c, int i) {
    int& slot = nbr_[c * k_ + i];
    if (slot >= 0) return slot;
    int before = size();
    int d = chamber_at(mul(mats_[c], poly_.reflections[i]));
    if (size() > before) {
        parent_[d] = c;
        parent_gen_[d] = i;
    }
    nbr_[c * k_ + i] = d;  // slot may be stale after the push_back
    nbr_[d * k_ + i] = c;
    return d;
}

int Tessellation::vertex(int c, int t) {
    int cached = vert_[c * k_ + t];
    if (cached >= 0) return cached;
    HPoint p = act(mats_[c], poly_.vertices[t]);
    bool added;
    int id = find_or_add(vgrid_, vpos_, p, added);
    if (added) {
        vpos_.push_back(p);
        vtype_.push_back(t);
        vchamber_.push_back(c);
    }
    vert_[c * k_ + t] = id;
    return id;
}

const std::vector<int>& Tessellation::ring(int v) {
    auto it = rings_.find(v);
    if (it != rings_.end()) return it->second;
    const int t = vtype_[v], m = spec_.m[t];
    const int i = t, j = (t + 1) % k_;
    std::vector<int> r{vchamber_[v]};
    for (int s = 1; s < 2 * m; ++s) r.push_back(neighbor(r.back(), s % 2 ? j : i));
    return rings_[v] = std::move(r);
}

int Tessellation::edge(int c, int i) {
    int a = vertex(c, (i + k_ - 1) % k_), b = vertex(c, i);
    auto key = std::minmax(a, b);
    auto it = edge_index_.find(key);
    if (it != edge_index_.end()) return it->second;
    int id = static_cast<int>(eends_.size());
    edge_index_[key] = id;
    eends_.push_back(key);
    return id;
}

Word Tessellation::word(int c) const {
    Word w;
    while (parent_[c] >= 0) {
        w.push_back(parent_gen_[c]);
        c = parent_[c];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

// ---------------------------------------------------------------------------
// Canonical form

std::string canonical_form(int n, int k, const std::function<int(int, int)>& nb) {
    std::vector<std::vector<int>> adj(n, std::vector<int>(k));
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) adj[c][i] = nb(c, i);
    std::string best;
    std::vector<int> order(n);
    for (int s = 0; s < n; ++s) {
        std::fill(order.begin(), order.end(), -1);
        std::vector<int> queue{s};
        order[s] = 0;
        std::string code;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            int c = queue[h];
            for (int i = 0; i < k; ++i) {
                int d = adj[c][i];
                if (d < 0) {
                    code += '.';
                    continue;
                }
                if (order[d] < 0) {
                    order[d] = static_cast<int>(queue.size());
                    queue.push_back(d);
                }
                code += std::to_string(order[d]);
                code += ',';
            }
            code += ';';
        }
        if (best.empty() || code < best) best = code;
    }
    return best;
}

bool CatalogEntry::all_even() const { return even_count() == static_cast<int>(corner.size()); }

int CatalogEntry::even_count() const {
    int e = 0;
    for (auto& c : corner) e += c.even();
    return e;
}

std::string entry_summary(const CatalogEntry& e) {
    std::ostringstream os;
    os << (e.corners == 3 ? "triangle" : "quad") << " n=" << e.n << " d=" << e.d.str() << " angles=";
    for (std::size_t i = 0; i < e.corner.size(); ++i) os << (i ? "," : "") << e.corner[i].angle().str();
    os << " sides=";
    for (std::size_t i = 0; i < e.corner.size(); ++i) os << (i ? "," : "") << e.corner[i].side_after;
    return os.str();
}

namespace {

// smallest rotation / reflection of the corner sequence
std::vector<Corner> normalize_corners(const std::vector<Corner>& c) {
    auto key = [](const std::vector<Corner>& v) {
        std::vector<std::tuple<int, int, int, int>> r;
        for (auto& x : v) r.emplace_back(x.chambers, x.m, x.side_after, x.side_odd);
        return r;
    };
    const int l = static_cast<int>(c.size());
    std::vector<Corner> best = c;
    for (int dir = 0; dir < 2; ++dir)
        for (int s = 0; s < l; ++s) {
            std::vector<Corner> v(l);
            for (int i = 0; i < l; ++i) {
                if (dir == 0) {
                    v[i] = c[(s + i) % l];
                } else {
                    // walking backwards, the side leaving a corner is the one that arrived at it
                    int j = ((s - i) % l + l) % l;
                    int prev = (j + l - 1) % l;
                    v[i] = c[j];
                    v[i].side_after = c[prev].side_after;
                    v[i].side_odd = c[prev].side_odd;
                }
            }
            if (key(v) < key(best)) best = v;
        }
    return best;
}

// Lorentz normal of the line through p and q, unit length
HPoint line_normal(const HPoint& p, const HPoint& q) {
    double c0 = p.x1 * q.x2 - p.x2 * q.x1;
    double c1 = p.x2 * q.x0 - p.x0 * q.x2;
    double c2 = p.x0 * q.x1 - p.x1 * q.x0;
    HPoint n{c0, -c1, -c2};
    double s = std::sqrt(std::max(1e-300, -lorentz(n, n)));
    return {n.x0 / s, n.x1 / s, n.x2 / s};
}

HPoint neg(const HPoint& n) { return {-n.x0, -n.x1, -n.x2}; }

double side_of(const HPoint& v, const HPoint& n) { return lorentz(v, n); }

double angle_at(const HPoint& a, const HPoint& b, const HPoint& c) {
    auto unit = [](const HPoint& p, const HPoint& q) {
        double ch = lorentz(p, q);
        double s = std::sqrt(std::max(1e-300, ch * ch - 1));
        return HPoint{(q.x0 - ch * p.x0) / s, (q.x1 - ch * p.x1) / s, (q.x2 - ch * p.x2) / s};
    };
    double cs = -lorentz(unit(a, b), unit(a, c));
    return std::acos(std::clamp(cs, -1.0, 1.0));
}

double triangle_area(const HPoint& a, const HPoint& b, const HPoint& c) {
    return std::numbers::pi - angle_at(a, b, c) - angle_at(b, c, a) - angle_at(c, a, b);
}

struct Step {
    int v;      // vertex reached
    int c, i;   // edge used: edge i of chamber c
};

class Searcher {
public:
    Searcher(const ChamberSpec& spec, int corners)
        : T(spec), spec_(spec), k(spec.k), corners_(corners), cap(area_cap(spec, corners)), a0(area(spec)) {
        L = std::max(cap, 1);
        a0_value = static_cast<double>(a0.num()) * std::numbers::pi / a0.den();
    }

    std::vector<CatalogEntry> run(SearchStats* stats);

private:
    int far_end(int c, int i, int from) {
        int a = T.vertex(c, (i + k - 1) % k), b = T.vertex(c, i);
        return a == from ? b : a;
    }

    // continue straight through the far vertex v of edge (c, i)
    std::pair<int, int> straight(int c, int i, int v) {
        int j, t;
        if (T.vertex(c, i) == v) {
            t = i;
            j = (i + 1) % k;
        } else {
            t = (i + k - 1) % k;
            j = t;
        }
        const int m = spec_.m[t];
        int x = c;
        for (int r = 1; r <= m; ++r) x = T.neighbor(x, r % 2 ? j : i);
        return {x, m % 2 ? j : i};
    }

    std::vector<Step> walk(int from, int c, int i, int len) {
        std::vector<Step> out;
        int v = far_end(c, i, from);
        out.push_back({v, c, i});
        while (static_cast<int>(out.size()) < len) {
            auto [c2, i2] = straight(c, i, v);
            int w = far_end(c2, i2, v);
            c = c2;
            i = i2;
            v = w;
            out.push_back({v, c, i});
        }
        return out;
    }

    // edges at v: (chamber, label) for r = 0..2m-1, the r-th separating ring[r-1] and ring[r]
    std::vector<std::pair<int, int>> ring_edges(int v) {
        const auto& r = T.ring(v);
        const int t = T.vertex_type(v), j = (t + 1) % k;
        std::vector<std::pair<int, int>> e;
        for (int s = 0; s < static_cast<int>(r.size()); ++s) e.push_back({r[s], s % 2 ? j : t});
        return e;
    }

    void analyze(int start_chamber, const std::vector<int>& corner_v, const std::vector<std::vector<Step>>& sides);
    void triangles();
    void quads();

    Tessellation T;
    ChamberSpec spec_;
    int k, corners_, cap, L;
    RationalAngle a0;
    double a0_value;
    std::map<std::string, CatalogEntry> found_;
    SearchStats st_;
};

void Searcher::analyze(int start_chamber, const std::vector<int>& corner_v, const std::vector<std::vector<Step>>& sides) {
    ++st_.closures;
    // boundary edges and vertices
    std::set<int> bedges;
    std::vector<int> bverts;
    for (auto& side : sides)
        for (auto& s : side) {
            bedges.insert(T.edge(s.c, s.i));
            bverts.push_back(s.v);
        }
    {
        auto sorted = bverts;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return;  // not a simple circle
    }
    std::set<int> circle(bverts.begin(), bverts.end());
    // flood fill inside
    std::vector<int> S{start_chamber};
    std::unordered_map<int, int> index{{start_chamber, 0}};
    for (std::size_t h = 0; h < S.size(); ++h) {
        int c = S[h];
        for (int i = 0; i < k; ++i) {
            if (bedges.count(T.edge(c, i))) continue;
            int d = T.neighbor(c, i);
            if (index.count(d)) continue;
            index[d] = static_cast<int>(S.size());
            S.push_back(d);
            if (static_cast<int>(S.size()) > cap) return;  // larger than the area bound allows
        }
    }
    // per-vertex chamber counts
    std::map<int, int> cnt;
    for (int c : S)
        for (int t = 0; t < k; ++t) cnt[T.vertex(c, t)] = 0;
    for (auto& [v, n] : cnt)
        for (int c : T.ring(v)) n += index.count(c) ? 1 : 0;
    CatalogEntry e;
    e.corners = corners_;
    e.n = static_cast<int>(S.size());
    bool valid = true;
    RationalAngle kappa;  // curvature total
    for (auto& [v, n] : cnt) {
        const int m = T.vertex_m(v);
        bool on_circle = circle.count(v) > 0;
        bool is_corner = std::find(corner_v.begin(), corner_v.end(), v) != corner_v.end();
        if (!on_circle) {
            if (n != 2 * m) valid = false;
            if (n > 2 * m) e.special_points = true;
            kappa += RationalAngle(2) - RationalAngle(n, m);
        } else {
            if (n > m) e.special_points = true;
            if (is_corner ? (n < 1 || n >= m) : n != m) valid = false;
            kappa += RationalAngle(1) - RationalAngle(n, m);
        }
    }
    for (int v : circle)
        if (!cnt.count(v)) valid = false;
    if (!valid) return;
    kappa -= a0 * e.n;
    std::vector<RationalAngle> angles;
    for (std::size_t ci = 0; ci < corner_v.size(); ++ci) {
        Corner c;
        c.m = T.vertex_m(corner_v[ci]);
        c.chambers = cnt[corner_v[ci]];
        c.side_after = static_cast<int>(sides[ci].size());
        c.side_odd = label_meets_odd_vertex(spec_, sides[ci].front().i);
        angles.push_back(c.angle());
        e.corner.push_back(c);
    }
    e.d = defect(angles);
    e.gauss_bonnet = e.d == a0 * e.n && kappa == RationalAngle(2);
    e.corner = normalize_corners(e.corner);
    e.id = canonical_form(e.n, k, [&](int c, int i) {
        auto it = index.find(T.neighbor(S[c], i));
        return it == index.end() ? -1 : it->second;
    });
    if (found_.count(e.id)) return;
    for (int c : S) e.chambers.push_back(T.word(c));
    found_[e.id] = std::move(e);
}

void Searcher::triangles() {
    for (int t = 0; t < k; ++t) {
        const int x = T.vertex(0, t);
        const int m = T.vertex_m(x);
        auto xe = ring_edges(x);
        const auto xr = T.ring(x);
        for (int a = 0; a < 2 * m; ++a)
            for (int q = 1; q < m; ++q) {
                auto r1 = walk(x, xe[a].first, xe[a].second, L);
                auto r2 = walk(x, xe[(a + q) % (2 * m)].first, xe[(a + q) % (2 * m)].second, L);
                HPoint X = T.vertex_pos(x);
                HPoint n1 = line_normal(X, T.vertex_pos(r1[0].v));
                if (side_of(T.vertex_pos(r2[0].v), n1) < 0) n1 = neg(n1);
                HPoint n2 = line_normal(X, T.vertex_pos(r2[0].v));
                if (side_of(T.vertex_pos(r1[0].v), n2) < 0) n2 = neg(n2);
                std::unordered_map<int, int> on2;
                for (int u = 0; u < L; ++u) on2[r2[u].v] = u;
                for (int s = 0; s < L; ++s) {
                    const int y = r1[s].v;
                    for (auto [c, i] : ring_edges(y)) {
                        int y2 = far_end(c, i, y);
                        if (side_of(T.vertex_pos(y2), n1) < 1e-9) continue;
                        ++st_.candidates;
                        std::vector<Step> side;
                        int cc = c, ii = i, v = y;
                        for (int u = 0; u < L; ++u) {
                            int w = far_end(cc, ii, v);
                            side.push_back({w, cc, ii});
                            if (auto it = on2.find(w); it != on2.end()) {
                                std::vector<Step> s1(r1.begin(), r1.begin() + s + 1);
                                // side from the third corner back to x
                                std::vector<Step> s3;
                                for (int z = it->second; z >= 0; --z)
                                    s3.push_back({z > 0 ? r2[z - 1].v : x, r2[z].c, r2[z].i});
                                analyze(xr[a], {x, y, w}, {s1, side, s3});
                                break;
                            }
                            if (side_of(T.vertex_pos(w), n2) < -1e-9 || side_of(T.vertex_pos(w), n1) < -1e-9) break;
                            auto nx = straight(cc, ii, w);
                            cc = nx.first;
                            ii = nx.second;
                            v = w;
                        }
                    }
                }
            }
    }
}

void Searcher::quads() {
    const double area_max = cap * a0_value + 1e-9;
    for (int t = 0; t < k; ++t) {
        const int x = T.vertex(0, t);
        const int m = T.vertex_m(x);
        auto xe = ring_edges(x);
        const auto xr = T.ring(x);
        for (int a = 0; a < 2 * m; ++a)
            for (int q = 1; q < m; ++q) {
                auto r1 = walk(x, xe[a].first, xe[a].second, L);
                auto r4 = walk(x, xe[(a + q) % (2 * m)].first, xe[(a + q) % (2 * m)].second, L);
                HPoint X = T.vertex_pos(x);
                HPoint n1 = line_normal(X, T.vertex_pos(r1[0].v));
                if (side_of(T.vertex_pos(r4[0].v), n1) < 0) n1 = neg(n1);
                HPoint n4 = line_normal(X, T.vertex_pos(r4[0].v));
                if (side_of(T.vertex_pos(r1[0].v), n4) < 0) n4 = neg(n4);
                std::unordered_map<int, int> on4;
                for (int u = 0; u < L; ++u) on4[r4[u].v] = u;
                for (int s = 0; s < L; ++s) {
                    const int y = r1[s].v;
                    const HPoint Y = T.vertex_pos(y);
                    for (auto [c, i] : ring_edges(y)) {
                        int y2 = far_end(c, i, y);
                        if (side_of(T.vertex_pos(y2), n1) < 1e-9) continue;
                        HPoint n2 = line_normal(Y, T.vertex_pos(y2));
                        if (side_of(X, n2) < 0) n2 = neg(n2);
                        std::vector<Step> side2;
                        int cc = c, ii = i, v = y;
                        for (int u = 0; u < L; ++u) {
                            const int z = far_end(cc, ii, v);
                            side2.push_back({z, cc, ii});
                            const HPoint Z = T.vertex_pos(z);
                            if (on4.count(z) || side_of(Z, n4) < 1e-9) break;
                            if (triangle_area(X, Y, Z) > area_max) break;
                            // third side from z
                            for (auto [c3, i3] : ring_edges(z)) {
                                int z2 = far_end(c3, i3, z);
                                if (side_of(T.vertex_pos(z2), n2) < 1e-9) continue;
                                ++st_.candidates;
                                std::vector<Step> side3;
                                int c4 = c3, i4 = i3, v4 = z;
                                for (int h = 0; h < L; ++h) {
                                    int w = far_end(c4, i4, v4);
                                    side3.push_back({w, c4, i4});
                                    if (auto it = on4.find(w); it != on4.end()) {
                                        std::vector<Step> s1(r1.begin(), r1.begin() + s + 1);
                                        std::vector<Step> s4;
                                        for (int zz = it->second; zz >= 0; --zz)
                                            s4.push_back({zz > 0 ? r4[zz - 1].v : x, r4[zz].c, r4[zz].i});
                                        analyze(xr[a], {x, y, z, w}, {s1, side2, side3, s4});
                                        break;
                                    }
                                    const HPoint W = T.vertex_pos(w);
                                    if (side_of(W, n4) < -1e-9 || side_of(W, n1) < -1e-9 || side_of(W, n2) < -1e-9) break;
                                    auto nx = straight(c4, i4, w);
                                    c4 = nx.first;
                                    i4 = nx.second;
                                    v4 = w;
                                }
                            }
                            auto nx = straight(cc, ii, z);
                            cc = nx.first;
                            ii = nx.second;
                            v = z;
                        }
                    }
                }
            }
    }
}

std::vector<CatalogEntry> Searcher::run(SearchStats* stats) {
    st_.cap = cap;
    if (cap >= 1) {
        if (corners_ == 3)
            triangles();
        else
            quads();
    }
    if (stats) *stats = st_;
    std::vector<CatalogEntry> out;
    for (auto& [id, e] : found_) out.push_back(e);
    std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
        if (a.n != b.n) return a.n < b.n;
        return a.id < b.id;
    });
    return out;
}

}  // namespace

std::vector<CatalogEntry> enumerate_triangles(const ChamberSpec& spec, SearchStats* stats) {
    return Searcher(spec, 3).run(stats);
}

std::vector<CatalogEntry> enumerate_quads(const ChamberSpec& spec, SearchStats* stats) {
    return Searcher(spec, 4).run(stats);
}

// ---------------------------------------------------------------------------
// Brute force over connected chamber sets

namespace {

class Oracle {
public:
    Oracle(const ChamberSpec& spec, int max_n) : spec_(spec), ball(spec, max_n, 2000000, false), k(spec.k), N(max_n) {
        in.assign(ball.size(), 0);
        seen.assign(ball.size(), 0);
        a0 = area(spec);
    }

    OracleResult run() {
        seen[0] = 1;
        std::vector<int> untried{0};
        grow(untried);
        OracleResult r;
        r.sets = sets;
        for (auto& [id, e] : found) (e.corners == 3 ? r.triangles : r.quads).push_back(e);
        return r;
    }

private:
    void grow(std::vector<int> untried) {
        while (!untried.empty()) {
            int c = untried.back();
            untried.pop_back();
            poly.push_back(c);
            in[c] = 1;
            ++sets;
            classify();
            if (static_cast<int>(poly.size()) < N) {
                std::vector<int> next = untried, added;
                for (int i = 0; i < k; ++i) {
                    int d = ball.right(c, i);
                    if (d >= 0 && !seen[d]) {
                        seen[d] = 1;
                        next.push_back(d);
                        added.push_back(d);
                    }
                }
                grow(next);
                for (int d : added) seen[d] = 0;
            }
            in[c] = 0;
            poly.pop_back();
        }
    }

    void classify() {
        const int n = static_cast<int>(poly.size());
        std::set<int> verts, edges;
        for (int c : poly)
            for (int i = 0; i < k; ++i) {
                verts.insert(ball.chamber_vertex(c, i));
                edges.insert(ball.chamber_edge(c, i));
            }
        if (static_cast<int>(verts.size()) - static_cast<int>(edges.size()) + n != 1) return;
        std::map<int, int> cnt;
        for (int v : verts) {
            const auto& V = ball.vertices()[v];
            const int len = 2 * V.m;
            int c = 0, runs = 0;
            for (int r = 0; r < len; ++r) {
                bool a = V.ring[r] >= 0 && in[V.ring[r]];
                bool b = V.ring[(r + len - 1) % len] >= 0 && in[V.ring[(r + len - 1) % len]];
                c += a;
                runs += a && !b;
            }
            if (c < len && (runs != 1 || c > V.m)) return;  // not a disk, or not convex
            cnt[v] = c;
        }
        std::vector<int> corner_v;
        for (auto& [v, c] : cnt)
            if (c < ball.vertices()[v].m) corner_v.push_back(v);
        if (corner_v.size() != 3 && corner_v.size() != 4) return;
        // boundary cycle, to order corners and measure sides
        std::map<int, std::vector<std::pair<int, int>>> bnd;  // vertex -> (edge, other vertex)
        for (int c : poly)
            for (int i = 0; i < k; ++i) {
                int d = ball.right(c, i);
                if (d >= 0 && in[d]) continue;
                int e = ball.chamber_edge(c, i);
                const auto& E = ball.edges()[e];
                bnd[E.v0].push_back({e, E.v1});
                bnd[E.v1].push_back({e, E.v0});
            }
        std::vector<int> cyc{corner_v[0]};
        std::vector<int> cyc_edges;
        int prev_e = -1;
        for (;;) {
            auto& opts = bnd[cyc.back()];
            auto nxt = opts[0].first == prev_e ? opts[1] : opts[0];
            prev_e = nxt.first;
            cyc_edges.push_back(nxt.first);
            if (nxt.second == cyc[0]) break;
            cyc.push_back(nxt.second);
        }
        CatalogEntry e;
        e.corners = static_cast<int>(corner_v.size());
        e.n = n;
        std::vector<RationalAngle> angles;
        Corner* last = nullptr;
        for (std::size_t p = 0; p < cyc.size(); ++p) {
            int v = cyc[p];
            if (std::find(corner_v.begin(), corner_v.end(), v) != corner_v.end()) {
                Corner c;
                c.m = ball.vertices()[v].m;
                c.chambers = cnt[v];
                c.side_odd = label_meets_odd_vertex(spec_, ball.edges()[cyc_edges[p]].label);
                angles.push_back(c.angle());
                e.corner.push_back(c);
                last = &e.corner.back();
            }
            last->side_after += 1;
        }
        e.d = defect(angles);
        e.gauss_bonnet = e.d == a0 * n;
        e.corner = normalize_corners(e.corner);
        std::unordered_map<int, int> index;
        for (int i = 0; i < n; ++i) index[poly[i]] = i;
        e.id = canonical_form(n, k, [&](int c, int i) {
            int d = ball.right(poly[c], i);
            auto it = index.find(d);
            return it == index.end() ? -1 : it->second;
        });
        if (!found.count(e.id)) {
            for (int c : poly) e.chambers.push_back(ball.word(c));
            found[e.id] = std::move(e);
        }
    }

    ChamberSpec spec_;
    CoxeterBall ball;
    int k, N;
    RationalAngle a0;
    std::vector<char> in, seen;
    std::vector<int> poly;
    long long sets = 0;
    std::map<std::string, CatalogEntry> found;
};

}  // namespace

OracleResult brute_force_disks(const ChamberSpec& spec, int max_n) { return Oracle(spec, max_n).run(); }

// ---------------------------------------------------------------------------

SupportDisk support_disk(const CoxeterBall& ball, const std::vector<int>& circle_edges) {
    if (circle_edges.empty()) throw std::invalid_argument("support_disk: empty circle");
    std::set<int> bnd(circle_edges.begin(), circle_edges.end());
    const int k = ball.spec().k;
    auto fill = [&](int start, std::vector<int>& out) {
        std::vector<char> in(ball.size(), 0);
        out = {start};
        in[start] = 1;
        for (std::size_t h = 0; h < out.size(); ++h) {
            int c = out[h];
            for (int i = 0; i < k; ++i) {
                if (bnd.count(ball.chamber_edge(c, i))) continue;
                int d = ball.right(c, i);
                if (d < 0) return false;  // reached the edge of the ball
                if (!in[d]) {
                    in[d] = 1;
                    out.push_back(d);
                }
            }
        }
        return true;
    };
    const auto& E = ball.edges()[circle_edges[0]];
    std::vector<int> S;
    if (!fill(E.c0, S) && (E.c1 < 0 || !fill(E.c1, S)))
        throw TouchesBoundary("support_disk: circle is not enclosed within the ball");
    SupportDisk D;
    D.chambers = S;
    D.n = static_cast<int>(S.size());
    std::set<int> members(S.begin(), S.end());
    std::set<int> verts;
    for (int c : S)
        for (int i = 0; i < k; ++i) verts.insert(ball.chamber_vertex(c, i));
    std::set<int> on_circle;
    for (int e : circle_edges) {
        on_circle.insert(ball.edges()[e].v0);
        on_circle.insert(ball.edges()[e].v1);
    }
    for (int v : verts) {
        const auto& V = ball.vertices()[v];
        int cnt = 0;
        for (int c : V.ring) cnt += c >= 0 && members.count(c);
        if (on_circle.count(v) ? cnt > V.m : cnt > 2 * V.m) D.special_points.push_back(v);
    }
    return D;
}

// ---------------------------------------------------------------------------
// Claims

bool ClaimsReport::pass() const {
    for (auto& c : claims)
        if (c.applicable && !c.pass) return false;
    return true;
}

ClaimsReport claims_check(const ChamberSpec& spec) {
    ClaimsReport R;
    R.spec = spec;
    R.triangles = enumerate_triangles(spec);
    R.quads = enumerate_quads(spec);
    const bool tri_chamber = spec.k == 3;
    const bool right = spec.is_right_triangle();
    const bool acute = tri_chamber && std::all_of(spec.m.begin(), spec.m.end(), [](int m) { return m > 2; });
    const bool is238 = spec.is_triangle(2, 3, 8);
    const RationalAngle unit(1, 24);

    auto add = [&](std::string name, bool applicable, bool pass, std::string detail,
                   std::vector<std::string> wit = {}) {
        R.claims.push_back({std::move(name), applicable, pass, std::move(detail), std::move(wit)});
    };
    auto summaries = [](const std::vector<const CatalogEntry*>& v) {
        std::vector<std::string> s;
        for (auto* e : v) s.push_back(entry_summary(*e));
        return s;
    };

    {
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.triangles) w.push_back(&e);
        add("no-triangle-unless-triangular-chamber", !tri_chamber, R.triangles.empty(),
            std::to_string(R.triangles.size()) + " triangle classes", summaries(w));
    }
    {
        bool ok = R.triangles.size() == 1 && R.triangles[0].is_chamber();
        add("acute-chamber-triangles-are-chambers", acute, ok,
            std::to_string(R.triangles.size()) + " triangle classes");
    }
    {
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.quads) w.push_back(&e);
        add("no-quadrilateral-for-k-at-least-5", spec.k >= 5, R.quads.empty(),
            std::to_string(R.quads.size()) + " quadrilateral classes", summaries(w));
    }
    {
        // even angles at two adjacent corners and at least two interior vertices on the side between them
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.quads)
            for (int i = 0; i < 4; ++i)
                if (e.corner[i].even() && e.corner[(i + 1) % 4].even() && e.corner[i].side_after >= 3) {
                    w.push_back(&e);
                    break;
                }
        add("adjacent-even-long-side-only-238", !is238, w.empty(),
            std::to_string(w.size()) + " qualifying quadrilaterals", summaries(w));
    }
    {
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.quads)
            if (e.even_count() >= 3) w.push_back(&e);
        add("three-even-quadrilateral-only-right-triangle", !right, w.empty(),
            std::to_string(w.size()) + " quadrilaterals with three even angles", summaries(w));
    }
    {
        std::vector<const CatalogEntry*> w;
        RationalAngle mn(100);
        for (auto& e : R.triangles) mn = std::min(mn, e.d);
        for (auto& e : R.triangles)
            if (e.d == unit) w.push_back(&e);
        bool ok = is238 ? (!R.triangles.empty() && mn == unit && w.size() == 1 && w[0]->is_chamber()) : w.empty();
        add("minimal-triangle-defect", true, ok,
            "min defect " + (R.triangles.empty() ? std::string("none") : mn.str()) + ", " + std::to_string(w.size()) +
                " classes at pi/24",
            summaries(w));
    }
    {
        std::vector<const CatalogEntry*> w, low;
        RationalAngle mn(100);
        for (auto& e : R.quads) mn = std::min(mn, e.d);
        for (auto& e : R.quads) {
            if (e.d == unit * 2) w.push_back(&e);
            if (e.d < unit * 2) low.push_back(&e);
        }
        bool shape = std::all_of(w.begin(), w.end(), [](const CatalogEntry* e) { return e->n == 2; });
        bool ok = low.empty() && (is238 ? (!w.empty() && shape) : w.empty());
        auto wit = summaries(low);
        for (auto& s : summaries(w)) wit.push_back(s);
        add("minimal-quadrilateral-defect", true, ok,
            "min defect " + (R.quads.empty() ? std::string("none") : mn.str()) + ", " + std::to_string(w.size()) +
                " classes at 2pi/24",
            wit);
    }
    {
        std::vector<const CatalogEntry*> w;
        RationalAngle a0 = area(spec);
        for (auto* v : {&R.triangles, &R.quads})
            for (auto& e : *v)
                if (e.d < a0 * e.n) w.push_back(&e);
        add("defect-at-least-area", true, w.empty(), std::to_string(w.size()) + " violations", summaries(w));
    }
    {
        std::vector<const CatalogEntry*> w;
        for (auto* v : {&R.triangles, &R.quads})
            for (auto& e : *v)
                if (!e.gauss_bonnet) w.push_back(&e);
        add("gauss-bonnet", true, w.empty(), std::to_string(w.size()) + " violations", summaries(w));
    }
    {
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.triangles)
            if (e.special_points) w.push_back(&e);
        add("triangle-disks-without-special-points", true, w.empty(), std::to_string(w.size()) + " violations",
            summaries(w));
    }
    if (is238) {
        std::vector<const CatalogEntry*> w;
        for (auto& e : R.triangles)
            if (e.n == 2 && std::all_of(e.corner.begin(), e.corner.end(), [](const Corner& c) { return c.side_odd; }))
                w.push_back(&e);
        add("two-chamber-triangle-on-odd-walls", true, !w.empty(), std::to_string(w.size()) + " classes", summaries(w));
        std::vector<const CatalogEntry*> ev;
        for (auto& e : R.triangles)
            if (e.all_even()) ev.push_back(&e);
        bool ok = ev.size() == 1 && ev[0]->n == 6;
        add("three-even-triangle-has-six-chambers", true, ok, std::to_string(ev.size()) + " classes with three even angles",
            summaries(ev));
    }
    return R;
}

}  // namespace fb
