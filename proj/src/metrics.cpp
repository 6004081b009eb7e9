#include "fbuild/metrics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

namespace fb {

// ---------------------------------------------------------------------------
// WeightVector

void WeightVector::add(long long p, long long h) {
    if (h == 0) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(p, LLONG_MIN));
    if (it != terms_.end() && it->first == p) {
        it->second += h;
        if (it->second == 0) terms_.erase(it);
    } else {
        terms_.insert(it, {p, h});
    }
}

WeightVector WeightVector::log_of(long long q) {
    if (q < 1) throw std::invalid_argument("log_of: argument must be positive");
    WeightVector w;
    for (long long p = 2; p * p <= q; ++p)
        while (q % p == 0) {
            w.add(p, 2);
            q /= p;
        }
    if (q > 1) w.add(q, 2);
    return w;
}

long double WeightVector::value() const {
    long double v = 0;
    for (auto [p, h] : terms_) v += 0.5L * h * std::log(static_cast<long double>(p));
    return v;
}

WeightVector WeightVector::operator+(const WeightVector& o) const {
    WeightVector r = *this;
    for (auto [p, h] : o.terms_) r.add(p, h);
    return r;
}

WeightVector WeightVector::operator-(const WeightVector& o) const { return *this + (-o); }

WeightVector WeightVector::operator-() const {
    WeightVector r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    return r;
}

WeightVector WeightVector::scaled(long long n) const {
    if (n == 0) return {};
    WeightVector r = *this;
    for (auto& t : r.terms_) t.second *= n;
    return r;
}

WeightVector WeightVector::half() const {
    WeightVector r = *this;
    for (auto& t : r.terms_) {
        if (t.second % 2 != 0) throw std::domain_error("half: odd half-unit count at prime " + std::to_string(t.first));
        t.second /= 2;
    }
    return r;
}

int WeightVector::compare(const WeightVector& o) const {
    if (*this == o) return 0;
    long double a = value(), b = o.value();
    if (a < b) return -1;
    if (a > b) return 1;
    // distinct vectors with equal floating value: order on the terms for determinism
    return terms_ < o.terms_ ? -1 : 1;
}

std::optional<long long> WeightVector::multiple_of(const WeightVector& unit) const {
    if (is_zero()) return 0;
    if (unit.is_zero() || unit.terms_.size() != terms_.size()) return std::nullopt;
    std::optional<long long> n;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].first != unit.terms_[i].first) return std::nullopt;
        if (terms_[i].second % unit.terms_[i].second != 0) return std::nullopt;
        long long f = terms_[i].second / unit.terms_[i].second;
        if (n && *n != f) return std::nullopt;
        n = f;
    }
    return n;
}

std::string WeightVector::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto [p, h] : terms_) {
        long long num = std::abs(h);
        bool neg = h < 0;
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        if (num % 2 == 0) {
            if (num != 2) os << num / 2 << " ";
        } else {
            os << num << "/2 ";
        }
        os << "log " << p;
    }
    return os.str();
}

const char* to_string(MetricError::Code c) {
    switch (c) {
        case MetricError::Disconnected: return "Disconnected";
        case MetricError::NoStabilization: return "NoStabilization";
        case MetricError::HorizonTooSmall: return "HorizonTooSmall";
        case MetricError::NearVertex: return "NearVertex";
        case MetricError::Precondition: return "Precondition";
        case MetricError::HypothesisFail: return "HypothesisFail";
        case MetricError::NoApartment: return "NoApartment";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Dual graph

long double DualGraph::min_weight() const {
    long double m = INFINITY;
    for (auto& w : label_weight) m = std::min(m, w.value());
    return m;
}

DualGraph DualGraph::of(const CoxeterBall& ball, const std::vector<int>& q) {
    const int k = ball.spec().k;
    if (static_cast<int>(q.size()) != k) throw std::invalid_argument("DualGraph: need one weight per label");
    DualGraph G;
    G.radius = ball.radius();
    for (int i = 0; i < k; ++i) G.label_weight.push_back(WeightVector::log_of(q[i]));
    G.adj.resize(ball.size());
    for (int c = 0; c < ball.size(); ++c)
        for (int i = 0; i < k; ++i)
            if (int d = ball.right(c, i); d >= 0) G.adj[c].push_back({d, i});
    return G;
}

DualGraph DualGraph::of(const BuildingBall& ball) {
    const int k = ball.spec().k;
    DualGraph G;
    G.radius = ball.radius();
    for (int i = 0; i < k; ++i) G.label_weight.push_back(WeightVector::log_of(ball.spec().q[i]));
    G.adj.resize(ball.size());
    for (int c = 0; c < ball.size(); ++c)
        for (int i = 0; i < k; ++i)
            for (int d : ball.across(c, i))
                if (d >= 0) G.adj[c].push_back({d, i});
    return G;
}

ShortestPaths dijkstra(const DualGraph& G, int src) {
    const int n = G.size();
    ShortestPaths sp;
    sp.dist.assign(n, {});
    sp.value.assign(n, INFINITY);
    sp.parent.assign(n, -1);
    sp.reached.assign(n, 0);
    std::vector<long double> lw;
    for (auto& w : G.label_weight) lw.push_back(w.value());
    using Item = std::pair<long double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    std::vector<char> done(n, 0);
    sp.value[src] = 0;
    sp.reached[src] = 1;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [v, c] = pq.top();
        pq.pop();
        if (done[c]) continue;
        done[c] = 1;
        for (auto [d, l] : G.adj[c]) {
            if (done[d]) continue;
            long double nv = v + lw[l];
            // exact ties keep the smaller parent id
            bool better = !sp.reached[d] || nv < sp.value[d] - 1e-12L ||
                          (std::abs(nv - sp.value[d]) <= 1e-12L && c < sp.parent[d]);
            if (better) {
                sp.value[d] = nv;
                sp.parent[d] = c;
                sp.dist[d] = sp.dist[c] + G.label_weight[l];
                sp.reached[d] = 1;
                pq.push({nv, d});
            }
        }
    }
    return sp;
}

WeightVector dist(const DualGraph& G, int a, int b) {
    auto sp = dijkstra(G, a);
    if (!sp.reached[b]) throw MetricError(MetricError::Disconnected, "dist: chambers are not connected in the ball");
    return sp.dist[b];
}

WeightVector gromov(const DualGraph& G, int x, int y, int C) {
    auto sc = dijkstra(G, C);
    auto sx = dijkstra(G, x);
    if (!sc.reached[x] || !sc.reached[y] || !sx.reached[y])
        throw MetricError(MetricError::Disconnected, "gromov: chambers are not connected in the ball");
    return (sc.dist[x] + sc.dist[y] - sx.dist[y]).half();
}

long long growth(const DualGraph& G, double n) {
    if (n > G.radius * G.min_weight() + 1e-9)
        throw MetricError(MetricError::HorizonTooSmall, "growth: n exceeds radius * min weight of the ball");
    auto sp = dijkstra(G, 0);
    long long a = 0;
    for (int c = 0; c < G.size(); ++c)
        if (sp.reached[c] && sp.value[c] <= n + 1e-9L) ++a;
    return a;
}

TauEstimate tau_estimate(const DualGraph& G, int nmax) {
    if (nmax > G.radius * G.min_weight() + 1e-9)
        throw MetricError(MetricError::HorizonTooSmall, "tau_estimate: nmax exceeds radius * min weight of the ball");
    auto sp = dijkstra(G, 0);
    TauEstimate out;
    for (int n = 0; n <= nmax; ++n) {
        long long a = 0;
        for (int c = 0; c < G.size(); ++c)
            if (sp.reached[c] && sp.value[c] <= n + 1e-9L) ++a;
        out.a.push_back(a);
        if (n > 0) out.tau.push_back(std::log(static_cast<double>(a)) / n);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Host

namespace {

ColoredWord plain(const Word& w) {
    ColoredWord r;
    for (int s : w) r.push_back({s, 1});
    return r;
}

Word letters(const ColoredWord& w) {
    Word r;
    for (auto& l : w) r.push_back(l.gen);
    return r;
}

}  // namespace

MetricHost MetricHost::apartment(const ChamberSpec& spec, const std::vector<int>& weights, int radius) {
    if (static_cast<int>(weights.size()) != spec.k) throw std::invalid_argument("apartment host: need one weight per label");
    MetricHost H;
    H.spec_ = spec;
    H.radius_ = radius;
    for (int q : weights) H.weights_.push_back(WeightVector::log_of(q));
    H.real_ball_ = std::make_shared<CoxeterBall>(spec, radius);
    H.realized_ = std::make_shared<RealizedBall>(realize(*H.real_ball_));
    return H;
}

MetricHost MetricHost::building(const ChamberSpec& spec, int radius) {
    MetricHost H;
    H.spec_ = spec;
    H.radius_ = radius;
    H.group_ = std::make_shared<RAGroup>(spec);
    for (int q : spec.q) H.weights_.push_back(WeightVector::log_of(q));
    H.real_ball_ = std::make_shared<CoxeterBall>(spec, radius);
    H.realized_ = std::make_shared<RealizedBall>(realize(*H.real_ball_));
    return H;
}

ColoredWord MetricHost::normal(const ColoredWord& c) const {
    if (group_) return group_->normal_form(c);
    return plain(real_ball_->group().reduce(letters(c)));
}

int MetricHost::length(const ColoredWord& c) const { return static_cast<int>(normal(c).size()); }

WeightVector MetricHost::dist(const ColoredWord& a, const ColoredWord& b) const {
    Word path;
    if (group_) {
        path = group_->wdist(a, b);
    } else {
        const auto& W = real_ball_->group();
        path = W.reduce(W.multiply(W.inverse(letters(a)), letters(b)));
    }
    WeightVector d;
    for (int s : path) d += weights_[s];
    return d;
}

WeightVector MetricHost::gromov(const ColoredWord& x, const ColoredWord& y, const ColoredWord& C) const {
    return (dist(C, x) + dist(C, y) - dist(x, y)).half();
}

ColoredWord MetricHost::chamber(const ApartmentColoring& A, int c) const {
    if (group_) return apartment_eval(*group_, A, real_ball_->word(c));
    return plain(real_ball_->word(c));
}

ApartmentColoring random_apartment(const MetricHost& H, std::mt19937_64& rng) {
    ApartmentColoring A;
    if (!H.is_building()) return A;
    for (auto& w : H.realization().walls()) {
        std::uniform_int_distribution<int> pick(1, H.spec().q[w.label]);
        A.colors[word_str(w.reflection)] = pick(rng);
    }
    return A;
}

// ---------------------------------------------------------------------------
// Rays and boundary quantities

Ray make_ray(const MetricHost& H, const RaySpec& spec) {
    const auto& R = H.realized();
    TraceOptions opt;
    opt.eps = spec.eps;
    opt.skip_edge = spec.on_edge;
    opt.stop_at_boundary = true;
    TraceResult tr;
    try {
        tr = trace(R, spec.chamber, spec.point, spec.dir, 200.0, opt);
    } catch (const GeomError& e) {
        if (e.code == GeomError::NearVertex) throw MetricError(MetricError::NearVertex, e.what());
        throw;
    }
    Ray ray;
    ray.spec = spec;
    ray.real_chambers.push_back(tr.start);
    for (auto& x : tr.crossings) ray.real_chambers.push_back(x.chamber);
    for (int c : ray.real_chambers) ray.chambers.push_back(H.chamber(spec.apartment, c));
    const auto& p = spec.point;
    const auto& u = spec.dir;
    ray.ideal = {p.x0 + u.x0, p.x1 + u.x1, p.x2 + u.x2};
    return ray;
}

namespace {

void require_distinct(const Ray& a, const Ray& b) {
    HPoint x = a.ideal, y = b.ideal;
    double l = lorentz(x, y) / (x.x0 * y.x0);
    if (std::abs(l) < 1e-12) throw MetricError(MetricError::Precondition, "rays must have distinct endpoints");
}

}  // namespace

Stabilized boundary_gromov(const MetricHost& H, const Ray& xi, const Ray& eta, const ColoredWord& C, int window) {
    require_distinct(xi, eta);
    const int n1 = static_cast<int>(xi.chambers.size()), n2 = static_cast<int>(eta.chambers.size());
    std::vector<WeightVector> dx(n1), dy(n2);
    for (int i = 0; i < n1; ++i) dx[i] = H.dist(C, xi.chambers[i]);
    for (int j = 0; j < n2; ++j) dy[j] = H.dist(C, eta.chambers[j]);
    std::vector<std::vector<WeightVector>> g(n1, std::vector<WeightVector>(n2));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g[i][j] = (dx[i] + dy[j] - H.dist(xi.chambers[i], eta.chambers[j])).half();
    const WeightVector& v = g[n1 - 1][n2 - 1];
    int i0 = std::min(n1, n2) - 1;
    while (i0 > 0) {
        int t = i0 - 1;
        bool ok = true;
        for (int j = t; j < n2 && ok; ++j) ok = g[t][j] == v;
        for (int i = t; i < n1 && ok; ++i) ok = g[i][t] == v;
        if (!ok) break;
        i0 = t;
    }
    if (n1 - i0 < window + 1 || n2 - i0 < window + 1)
        throw MetricError(MetricError::NoStabilization, "boundary_gromov: not constant over the confirmation window (from " +
                                                            std::to_string(i0) + ", horizon " + std::to_string(std::min(n1, n2)) + ")");
    return {v, i0, std::min(n1, n2)};
}

Stabilized busemann(const MetricHost& H, const Ray& xi, const ColoredWord& C, const ColoredWord& D, int window) {
    const int n = static_cast<int>(xi.chambers.size());
    std::vector<WeightVector> b(n);
    for (int i = 0; i < n; ++i) b[i] = H.dist(D, xi.chambers[i]) - H.dist(C, xi.chambers[i]);
    int i0 = n - 1;
    while (i0 > 0 && b[i0 - 1] == b[n - 1]) --i0;
    if (n - i0 < window + 1)
        throw MetricError(MetricError::NoStabilization, "busemann: not constant over the confirmation window (from " +
                                                            std::to_string(i0) + ", horizon " + std::to_string(n) + ")");
    return {b[n - 1], i0, n};
}

WeightVector cross_ratio(const MetricHost& H, const Ray& x1, const Ray& x2, const Ray& y1, const Ray& y2,
                         const ColoredWord& C, int window) {
    auto g = [&](const Ray& a, const Ray& b) { return boundary_gromov(H, a, b, C, window).value; };
    return -g(x1, y1) - g(x2, y2) + g(x1, y2) + g(x2, y1);
}

double quasi_dist(const MetricHost& H, const Ray& xi, const Ray& eta, const ColoredWord& C, double tau) {
    auto s = boundary_gromov(H, xi, eta, C);
    return std::exp(-tau * static_cast<double>(s.value.value()));
}

std::vector<ColoredWord> segment_chambers(const MetricHost& H, const ApartmentColoring& A, int cp, const HPoint& p,
                                          const HPoint& q, double eps) {
    TraceResult tr;
    try {
        tr = trace_segment(H.realized(), cp, p, q, eps);
    } catch (const GeomError& e) {
        if (e.code == GeomError::NearVertex) throw MetricError(MetricError::NearVertex, e.what());
        if (e.code == GeomError::LeftBall) throw MetricError(MetricError::NoApartment, e.what());
        throw;
    }
    std::vector<ColoredWord> out{H.chamber(A, tr.start)};
    for (auto& x : tr.crossings) out.push_back(H.chamber(A, x.chamber));
    return out;
}

// ---------------------------------------------------------------------------
// Local frames at an edge of the base chamber

namespace {

HPoint lin(double a, const HPoint& x, double b, const HPoint& y) {
    return {a * x.x0 + b * y.x0, a * x.x1 + b * y.x1, a * x.x2 + b * y.x2};
}

HPoint unit_toward(const HPoint& p, const HPoint& q) {
    double c = lorentz(p, q);
    double s = std::sqrt(std::max(1e-300, c * c - 1));
    return lin(1 / s, q, -c / s, p);
}

// point on edge `label` of chamber 0, the unit tangent e along the edge (toward vertex `label`)
// and the inward unit normal
struct EdgeFrame {
    HPoint p, e, in;
};

EdgeFrame edge_frame(const RealizedBall& R, int label, double s) {
    const int k = R.poly.spec.k;
    HPoint a = R.vertex(0, (label + k - 1) % k), b = R.vertex(0, label);
    double d = hdist(a, b);
    HPoint p = lin(std::sinh((1 - s) * d) / std::sinh(d), a, std::sinh(s * d) / std::sinh(d), b);
    HPoint n = R.normal(0, label);
    return {p, unit_toward(p, b), {-n.x0, -n.x1, -n.x2}};
}

// ray from the frame point at angle theta from e, toward the `in` side for positive sin
RaySpec frame_ray(const EdgeFrame& F, int label, double theta, const RealizedBall& R, const ApartmentColoring& A) {
    RaySpec r;
    r.apartment = A;
    r.point = F.p;
    r.dir = lin(std::cos(theta), F.e, std::sin(theta), F.in);
    r.on_edge = label;
    r.chamber = std::sin(theta) > 0 ? 0 : R.ball->right(0, label);
    return r;
}

}  // namespace

RaySpec edge_ray(const MetricHost& H, const ApartmentColoring& A, int label, double s, int side, double phi) {
    const auto& R = H.realized();
    EdgeFrame F = edge_frame(R, label, s);
    // angle from the normal pointing into the chosen side
    double theta = side == 0 ? std::numbers::pi / 2 - phi : -std::numbers::pi / 2 + phi;
    return frame_ray(F, label, theta, R, A);
}

RaySpec center_ray(const ApartmentColoring& A, double theta) {
    RaySpec r;
    r.apartment = A;
    r.dir = tangent_at(r.point, theta);
    return r;
}

// ---------------------------------------------------------------------------
// Detection experiments

namespace {

const char* side_name(int side) { return side == 0 ? "up" : (side == 1 ? "down1" : "down2"); }

struct WallRayFactory {
    const MetricHost& H;
    int label;
    std::string wall_key;
    EdgeFrame F;

    WallRayFactory(const MetricHost& h, int l, double s) : H(h), label(l), F(edge_frame(h.realized(), l, s)) {
        wall_key = word_str(h.realization().group().conjugate({}, l));
    }

    // side 0: base side; side c >= 1: far side with the wall through the edge coloured c.
    // end +1: toward the end of e, -1: toward the other end; delta: angle off the wall.
    RaySpec ray(int side, int end, double delta, ApartmentColoring A) const {
        if (side > 0) A.colors[wall_key] = side;
        double sgn = side == 0 ? 1 : -1;
        double theta = end > 0 ? sgn * delta : std::numbers::pi - sgn * delta;
        return frame_ray(F, label, theta, H.realized(), A);
    }
};

template <class F>
QuadSample run_quad(const MetricHost& H, const std::vector<std::pair<std::string, RaySpec>>& specs, F&& base_chambers) {
    QuadSample q;
    std::vector<Ray> rays;
    try {
        for (auto& [name, s] : specs) {
            q.rays.push_back(name);
            rays.push_back(make_ray(H, s));
        }
        std::optional<WeightVector> v;
        for (auto& C : base_chambers()) {
            auto x = cross_ratio(H, rays[0], rays[1], rays[2], rays[3], C);
            if (v && *v != x) {
                q.failure = "base dependence: " + v->str() + " vs " + x.str();
                return q;
            }
            v = x;
        }
        q.value = v;
    } catch (const MetricError& e) {
        q.failure = std::string(to_string(e.code)) + ": " + e.what();
    }
    return q;
}

std::string fmt(const char* side, double angle) {
    std::ostringstream os;
    os.precision(4);
    os << side << "@" << angle;
    return os.str();
}

}  // namespace

SkeletonReport detect_skeleton_experiment(const MetricHost& H, bool skeleton, int label, int samples,
                                          unsigned long long seed) {
    if (!H.is_building()) throw MetricError(MetricError::Precondition, "detect_skeleton: needs a building host");
    if (label < 0 || label >= H.spec().k) throw std::invalid_argument("detect_skeleton: bad label");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    SkeletonReport rep;
    rep.skeleton = skeleton;
    rep.label = label;
    const ColoredWord base;
    auto bases = [&]() {
        std::vector<ColoredWord> b{base};
        for (int i = 0; i < H.spec().k; ++i) b.push_back({{i, 1}});
        return b;
    };
    const WeightVector unit = WeightVector::log_of(H.spec().q[label]).half();
    std::set<std::string> seen;
    bool all_in_lattice = true, all_zero = true, saw_zero = false, saw_minus = false;
    auto record = [&](QuadSample q) {
        if (q.value) {
            seen.insert(q.value->str());
            auto n = q.value->multiple_of(unit);
            if (!n) all_in_lattice = false;
            if (!q.value->is_zero()) all_zero = false;
            if (n && *n == 0) saw_zero = true;
            if (n && *n == -1) saw_minus = true;
        } else {
            ++rep.rejected;
        }
        rep.samples.push_back(std::move(q));
    };

    if (skeleton) {
        WallRayFactory W(H, label, 0.5);
        auto quad = [&](int s1, double d1, int s2, double d2, int s3, double d3, int s4, double d4,
                        const ApartmentColoring& A) {
            std::vector<std::pair<std::string, RaySpec>> specs{
                {fmt(side_name(s1), d1), W.ray(s1, +1, d1, A)},
                {fmt(side_name(s2), d2), W.ray(s2, +1, d2, A)},
                {fmt(side_name(s3), d3), W.ray(s3, -1, d3, A)},
                {fmt(side_name(s4), d4), W.ray(s4, -1, d4, A)},
            };
            return run_quad(H, specs, bases);
        };
        ApartmentColoring A0 = random_apartment(H, rng);
        // configuration separating the two far-side chambers of the edge
        record(quad(0, 0.1, 2, 0.1, 0, 0.1, 1, 0.1, A0));
        // all four on the base side
        record(quad(0, 0.1, 0, 0.15, 0, 0.12, 0, 0.08, A0));
        std::uniform_int_distribution<int> side(0, 2);
        for (int n = 0; n < samples; ++n) {
            ApartmentColoring A = random_apartment(H, rng);
            auto d = [&]() { return 0.05 + 0.25 * U(rng); };
            record(quad(side(rng), d(), side(rng), d(), side(rng), d(), side(rng), d(), A));
        }
        rep.pass = all_in_lattice && saw_zero && saw_minus && rep.rejected < static_cast<int>(rep.samples.size());
    } else {
        const auto& R = H.realized();
        for (int n = 0; n < samples; ++n) {
            double theta0 = 2 * std::numbers::pi * U(rng);
            std::vector<std::pair<std::string, RaySpec>> specs;
            for (int r = 0; r < 4; ++r) {
                double ang = 2 * std::numbers::pi * U(rng);
                HPoint p = chamber_point(R, 0, ang, 0.05 * U(rng));
                double th = theta0 + (r >= 2 ? std::numbers::pi : 0) + 0.01 * (2 * U(rng) - 1);
                RaySpec s;
                s.apartment = random_apartment(H, rng);
                s.chamber = 0;
                s.point = p;
                s.dir = tangent_at(p, th);
                specs.push_back({fmt(r < 2 ? "xi" : "eta", th), s});
            }
            record(run_quad(H, specs, bases));
        }
        rep.pass = all_zero && rep.rejected < static_cast<int>(rep.samples.size());
    }
    rep.observed.assign(seen.begin(), seen.end());
    std::ostringstream os;
    os << rep.samples.size() << " samples, " << rep.rejected << " rejected, values {";
    for (std::size_t i = 0; i < rep.observed.size(); ++i) os << (i ? ", " : "") << rep.observed[i];
    os << "}";
    rep.detail = os.str();
    return rep;
}

SideReport detect_side_experiment(const MetricHost& H, int label, int configs, int samples, unsigned long long seed) {
    if (!H.is_building()) throw MetricError(MetricError::Precondition, "detect_side: needs a building host");
    if (label < 0 || label >= H.spec().k) throw std::invalid_argument("detect_side: bad label");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0, 1);
    SideReport rep;
    rep.label = label;
    const auto& R = H.realized();
    const auto& ball = H.realization();
    WallRayFactory W(H, label, 0.5);
    const HPoint wall_n = R.normal(0, label);  // positive on the base side

    // the wall edge farthest toward the -e end, and the chamber on each side of it
    int far_edge = -1;
    double far_t = INFINITY;
    for (int e : ball.walk_wall(ball.chamber_edge(0, label))) {
        const auto& E = ball.edges()[e];
        if (E.c1 < 0) continue;
        HPoint a = R.vertex(E.c0, (E.label + H.spec().k - 1) % H.spec().k), b = R.vertex(E.c0, E.label);
        HPoint mid = lin(0.5, a, 0.5, b);
        double t = std::asinh(-lorentz(mid, W.F.e) / std::sqrt(lorentz(mid, mid)));
        if (t < far_t) {
            far_t = t;
            far_edge = e;
        }
    }
    if (far_edge < 0 || far_t > -0.5) {
        rep.detail = "ball too small to see the wall beyond the base edge";
        return rep;
    }
    const auto& FE = ball.edges()[far_edge];
    auto on_base_side = [&](int c) { return lorentz(R.incenter(c), wall_n) > 0; };
    const int far_up = on_base_side(FE.c0) ? FE.c0 : FE.c1;
    const int far_down = far_up == FE.c0 ? FE.c1 : FE.c0;

    // chamber on the far edge carrying the geodesic from the ray's endpoint to the wall end
    auto far_chamber = [&](const Ray& r) -> ColoredWord {
        HPoint x = r.ideal;
        double s = lorentz(x, wall_n) / x.x0;
        if (std::abs(s) < 1e-3) throw MetricError(MetricError::HypothesisFail, "endpoint too close to the wall");
        return H.chamber(r.spec.apartment, s > 0 ? far_up : far_down);
    };

    std::uniform_real_distribution<double> big(0.5, 1.0), small(0.02, 0.1);
    int agree = 0;
    for (int n = 0; n < configs; ++n) {
        SideConfig cfg;
        cfg.side1 = n % 3;
        cfg.side2 = (n / 3) % 3;
        ApartmentColoring A = random_apartment(H, rng);
        try {
            Ray x1 = make_ray(H, W.ray(cfg.side1, +1, big(rng), A));
            Ray x2 = make_ray(H, W.ray(cfg.side2, +1, big(rng), A));
            cfg.combinatorial_same = far_chamber(x1) == far_chamber(x2);
            Ray e1 = make_ray(H, W.ray(0, -1, 1.2, A));  // the perpendicular can run into a vertex
            std::set<std::string> vals;
            for (int j = 0; j < samples; ++j) {
                try {
                    Ray e2 = make_ray(H, W.ray(j % 3, -1, small(rng), A));
                    vals.insert(cross_ratio(H, x1, x2, e1, e2, ColoredWord{}).str());
                } catch (const MetricError& e) {
                    if (e.code != MetricError::NearVertex) throw;
                }
            }
            cfg.values.assign(vals.begin(), vals.end());
            cfg.distinct_values = static_cast<int>(vals.size());
            bool sampled_same = cfg.distinct_values == 1;
            cfg.agree = cfg.distinct_values > 0 && sampled_same == cfg.combinatorial_same;
        } catch (const MetricError& e) {
            cfg.failure = std::string(to_string(e.code)) + ": " + e.what();
        }
        if (cfg.agree) ++agree;
        rep.configs.push_back(std::move(cfg));
    }
    rep.pass = agree == configs && configs >= 1;
    rep.detail = std::to_string(agree) + "/" + std::to_string(configs) + " configurations agree";
    return rep;
}

}  // namespace fb
