#include "fbuild/geomrender.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <unordered_map>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define FB_HAVE_X86 1
#endif

namespace fb {

namespace {
constexpr double PI = std::numbers::pi;
}

double lorentz(const HPoint& a, const HPoint& b) { return a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2; }

double hdist(const HPoint& a, const HPoint& b) { return std::acosh(std::max(1.0, lorentz(a, b))); }

HPoint act(const Mat3& M, const HPoint& p) {
    return {M[0] * p.x0 + M[1] * p.x1 + M[2] * p.x2, M[3] * p.x0 + M[4] * p.x1 + M[5] * p.x2,
            M[6] * p.x0 + M[7] * p.x1 + M[8] * p.x2};
}

Mat3 mul(const Mat3& A, const Mat3& B) {
    Mat3 C{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int l = 0; l < 3; ++l) s += A[i * 3 + l] * B[l * 3 + j];
            C[i * 3 + j] = s;
        }
    return C;
}

Mat3 identity3() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Mat3 lorentz_inverse(const Mat3& M) {
    static const double J[3] = {1, -1, -1};
    Mat3 R{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R[i * 3 + j] = J[i] * M[j * 3 + i] * J[j];
    return R;
}

double lorentz_defect(const Mat3& M) {
    static const double J[3] = {1, -1, -1};
    double worst = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int l = 0; l < 3; ++l) s += M[l * 3 + i] * J[l] * M[l * 3 + j];
            worst = std::max(worst, std::abs(s - (i == j ? J[i] : 0.0)));
        }
    return worst;
}

std::array<double, 2> to_disk(const HPoint& p) { return {p.x1 / (1 + p.x0), p.x2 / (1 + p.x0)}; }

// ---------------------------------------------------------------------------

void lorentz_apply_batch_scalar(const Mat3& M, const double* x0, const double* x1, const double* x2, std::size_t n,
                                double* y0, double* y1, double* y2) {
    for (std::size_t i = 0; i < n; ++i) {
        double a = x0[i], b = x1[i], c = x2[i];
        y0[i] = M[0] * a + M[1] * b + M[2] * c;
        y1[i] = M[3] * a + M[4] * b + M[5] * c;
        y2[i] = M[6] * a + M[7] * b + M[8] * c;
    }
}

#ifdef FB_HAVE_X86
__attribute__((target("avx2,fma"))) static void lorentz_apply_batch_avx2(const Mat3& M, const double* x0,
                                                                          const double* x1, const double* x2,
                                                                          std::size_t n, double* y0, double* y1,
                                                                          double* y2) {
    __m256d m[9];
    for (int j = 0; j < 9; ++j) m[j] = _mm256_set1_pd(M[j]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(x0 + i), b = _mm256_loadu_pd(x1 + i), c = _mm256_loadu_pd(x2 + i);
        _mm256_storeu_pd(y0 + i, _mm256_fmadd_pd(m[0], a, _mm256_fmadd_pd(m[1], b, _mm256_mul_pd(m[2], c))));
        _mm256_storeu_pd(y1 + i, _mm256_fmadd_pd(m[3], a, _mm256_fmadd_pd(m[4], b, _mm256_mul_pd(m[5], c))));
        _mm256_storeu_pd(y2 + i, _mm256_fmadd_pd(m[6], a, _mm256_fmadd_pd(m[7], b, _mm256_mul_pd(m[8], c))));
    }
    lorentz_apply_batch_scalar(M, x0 + i, x1 + i, x2 + i, n - i, y0 + i, y1 + i, y2 + i);
}
#endif

bool lorentz_batch_uses_simd() {
#ifdef FB_HAVE_X86
    static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return ok;
#else
    return false;
#endif
}

void lorentz_apply_batch(const Mat3& M, const double* x0, const double* x1, const double* x2, std::size_t n,
                         double* y0, double* y1, double* y2) {
#ifdef FB_HAVE_X86
    if (lorentz_batch_uses_simd()) return lorentz_apply_batch_avx2(M, x0, x1, x2, n, y0, y1, y2);
#endif
    lorentz_apply_batch_scalar(M, x0, x1, x2, n, y0, y1, y2);
}

// ---------------------------------------------------------------------------

namespace {

HPoint polar(double d, double phi) { return {std::cosh(d), std::sinh(d) * std::cos(phi), std::sinh(d) * std::sin(phi)}; }

double tangent_cos(const HPoint& v, const HPoint& a, const HPoint& b) {
    auto tan_to = [&](const HPoint& w) {
        double c = lorentz(v, w);
        return HPoint{w.x0 - c * v.x0, w.x1 - c * v.x1, w.x2 - c * v.x2};
    };
    HPoint u1 = tan_to(a), u2 = tan_to(b);
    return -lorentz(u1, u2) / std::sqrt(lorentz(u1, u1) * lorentz(u2, u2));
}

}  // namespace

NormalPolygon normal_polygon(const ChamberSpec& spec) {
    auto vr = validate(spec);
    if (!vr.ok) throw GeomError(GeomError::NoConvergence, "normal_polygon: invalid chamber");
    const int k = spec.k;
    std::vector<double> half(k);
    for (int i = 0; i < k; ++i) half[i] = PI / spec.m[i] / 2;
    auto beta = [&](int i, double r) { return std::asin(std::cos(half[i]) / std::cosh(r)); };
    auto excess = [&](double r) {
        double s = 0;
        for (int i = 0; i < k; ++i) s += 2 * beta(i, r);
        return s - 2 * PI;
    };
    double lo = 0, hi = 1;
    if (!(excess(lo) > 0)) throw GeomError(GeomError::NoConvergence, "normal_polygon: bracket failure at r = 0");
    while (excess(hi) > 0) {
        hi *= 2;
        if (hi > 64) throw GeomError(GeomError::NoConvergence, "normal_polygon: bracket failure");
    }
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        (excess(mid) > 0 ? lo : hi) = mid;
    }
    NormalPolygon P;
    P.spec = spec;
    const double r = P.inradius = (lo + hi) / 2;

    double psi = 0;
    for (int i = 0; i < k; ++i) {
        HPoint n{std::sinh(r), std::cosh(r) * std::cos(psi), std::cosh(r) * std::sin(psi)};
        P.normals.push_back(n);
        const double J[3] = {1, -1, -1};
        const double nv[3] = {n.x0, n.x1, n.x2};
        Mat3 R{};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) R[a * 3 + b] = (a == b ? 1.0 : 0.0) + 2 * nv[a] * nv[b] * J[b];
        P.reflections.push_back(R);
        double b = beta(i, r);
        double c = std::acosh(1 / (std::tan(half[i]) * std::tan(b)));
        P.vertices.push_back(polar(c, psi + b));
        psi += 2 * b;
    }
    double sum = 0;
    for (int i = 0; i < k; ++i) {
        const auto& v = P.vertices[i];
        double ang = std::acos(std::clamp(tangent_cos(v, P.vertices[(i + k - 1) % k], P.vertices[(i + 1) % k]), -1.0, 1.0));
        P.measured_angles.push_back(ang);
        sum += ang;
        P.edge_lengths.push_back(hdist(P.vertices[(i + k - 1) % k], P.vertices[i]));
    }
    P.numeric_area = (k - 2) * PI - sum;
    return P;
}

HPoint RealizedBall::incenter(int c) const { return act(M[c], HPoint{}); }
HPoint RealizedBall::vertex(int c, int i) const { return act(M[c], poly.vertices[i]); }
HPoint RealizedBall::normal(int c, int i) const { return act(M[c], poly.normals[i]); }

bool RealizedBall::contains(int c, const HPoint& x, double tol) const {
    for (int i = 0; i < poly.spec.k; ++i)
        if (lorentz(x, normal(c, i)) < -tol) return false;
    return true;
}

RealizedBall realize(const CoxeterBall& ball) {
    RealizedBall R;
    R.ball = &ball;
    R.poly = normal_polygon(ball.spec());
    const int n = ball.size();
    R.M.assign(n, identity3());
    // chambers are listed by length, so the prefix is already realized
    for (int c = 1; c < n; ++c) {
        const Word& w = ball.word(c);
        int s = w.back();
        int parent = ball.right(c, s);
        R.M[c] = mul(R.M[parent], R.poly.reflections[s]);
    }
    for (int c = 0; c < n; ++c) {
        double d = lorentz_defect(R.M[c]);
        R.max_lorentz_defect = std::max(R.max_lorentz_defect, d);
        if (d > 1e-9)
            throw GeomError(GeomError::ToleranceFail,
                            "Lorentz form drift " + std::to_string(d) + " at word length " + std::to_string(ball.len(c)));
    }
    const int k = ball.spec().k;
    for (const auto& e : ball.edges()) {
        if (!e.interior()) continue;
        for (int end : {(e.label + k - 1) % k, e.label}) {
            HPoint a = R.vertex(e.c0, end), b = R.vertex(e.c1, end);
            double d = std::max({std::abs(a.x0 - b.x0), std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2)}) / a.x0;
            R.max_edge_mismatch = std::max(R.max_edge_mismatch, d);
            if (d > 1e-6)
                throw GeomError(GeomError::ToleranceFail,
                                "shared edge mismatch " + std::to_string(d) + " at word length " + std::to_string(ball.len(e.c0)));
        }
    }
    return R;
}

std::size_t geometric_chamber_count(const ChamberSpec& spec, int radius, double tol) {
    auto P = normal_polygon(spec);
    const double h = std::max(tol * 100, 1e-7);
    std::unordered_map<long long, std::vector<std::array<double, 2>>> grid;
    auto cell = [&](long long a, long long b) { return a * 1000003LL + b; };
    auto insert_new = [&](const HPoint& x) {
        auto z = to_disk(x);
        long long a = std::llround(z[0] / h), b = std::llround(z[1] / h);
        for (long long da = -1; da <= 1; ++da)
            for (long long db = -1; db <= 1; ++db) {
                auto it = grid.find(cell(a + da, b + db));
                if (it == grid.end()) continue;
                for (auto& y : it->second)
                    if (std::hypot(y[0] - z[0], y[1] - z[1]) < h) return false;
            }
        grid[cell(a, b)].push_back(z);
        return true;
    };
    std::vector<Mat3> frontier{identity3()};
    insert_new(HPoint{});
    std::size_t count = 1;
    for (int level = 0; level < radius; ++level) {
        std::vector<Mat3> next;
        for (const auto& M : frontier)
            for (int s = 0; s < spec.k; ++s) {
                Mat3 N = mul(M, P.reflections[s]);
                if (insert_new(act(N, HPoint{}))) next.push_back(N);
            }
        count += next.size();
        frontier = std::move(next);
    }
    return count;
}

HPoint tangent_at(const HPoint& p, double theta) {
    // boost taking the origin to p, applied to the unit vector (0, cos, sin)
    double d = 1 + p.x0;
    double c = std::cos(theta), s = std::sin(theta);
    return {p.x1 * c + p.x2 * s, (1 + p.x1 * p.x1 / d) * c + (p.x1 * p.x2 / d) * s,
            (p.x1 * p.x2 / d) * c + (1 + p.x2 * p.x2 / d) * s};
}

HPoint geodesic_point(const HPoint& p, const HPoint& u, double t) {
    double ch = std::cosh(t), sh = std::sinh(t);
    return {ch * p.x0 + sh * u.x0, ch * p.x1 + sh * u.x1, ch * p.x2 + sh * u.x2};
}

HPoint chamber_point(const RealizedBall& R, int c, double angle, double s) {
    return act(R.M[c], polar(s * R.poly.inradius, angle));
}

TraceResult trace(const RealizedBall& R, int c, const HPoint& p, const HPoint& u, double length,
                  const TraceOptions& opt) {
    const double eps = opt.eps < 0 ? 1e-3 * R.poly.inradius : opt.eps;
    const auto& ball = *R.ball;
    const int k = ball.spec().k;
    if (!R.contains(c, p, 1e-9)) throw GeomError(GeomError::BadInput, "trace: start point is not in the start chamber");
    TraceResult out;
    out.start = c;
    out.min_vertex_distance = INFINITY;
    double now = 0;
    int from = opt.skip_edge;
    for (;;) {
        double best = INFINITY;
        int edge = -1;
        for (int i = 0; i < k; ++i) {
            if (i == from) continue;
            HPoint n = R.normal(c, i);
            double a = lorentz(p, n), b = lorentz(u, n);
            if (b == 0) continue;
            double x = -a / b;
            if (std::abs(x) >= 1) continue;
            double t = std::atanh(x);
            if (t > now && t < best) {
                best = t;
                edge = i;
            }
        }
        if (edge < 0 || best > length) break;
        HPoint x = geodesic_point(p, u, best);
        double dv = std::min(hdist(x, R.vertex(c, (edge + k - 1) % k)), hdist(x, R.vertex(c, edge)));
        out.min_vertex_distance = std::min(out.min_vertex_distance, dv);
        if (dv < eps)
            throw GeomError(GeomError::NearVertex, "trace passes within " + std::to_string(dv) + " of a vertex");
        int next = ball.right(c, edge);
        if (next < 0) {
            if (!opt.stop_at_boundary) throw GeomError(GeomError::LeftBall, "trace leaves the realized ball");
            out.truncated = true;
            break;
        }
        out.crossings.push_back({edge, ball.chamber_edge(c, edge), next, best});
        c = next;
        from = edge;
        now = best;
    }
    out.end = c;
    return out;
}

TraceResult trace_segment(const RealizedBall& R, int c, const HPoint& p, const HPoint& q, double eps) {
    TraceOptions opt;
    opt.eps = eps;
    double ch = lorentz(p, q);
    double d = std::acosh(std::max(1.0, ch));
    if (d < 1e-14) {
        TraceResult t;
        t.start = t.end = c;
        t.min_vertex_distance = INFINITY;
        return t;
    }
    double sh = std::sinh(d);
    HPoint u{(q.x0 - ch * p.x0) / sh, (q.x1 - ch * p.x1) / sh, (q.x2 - ch * p.x2) / sh};
    return trace(R, c, p, u, d, opt);
}

// ---------------------------------------------------------------------------

namespace {

struct SvgPen {
    double cx, scale;
    std::string fmt(double v) const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return buf;
    }
    std::array<double, 2> px(const std::array<double, 2>& z) const { return {cx + scale * z[0], cx - scale * z[1]}; }
    std::string move(const std::array<double, 2>& z) const {
        auto p = px(z);
        return "M" + fmt(p[0]) + " " + fmt(p[1]);
    }
    // geodesic arc between disk points a and b
    std::string arc(const std::array<double, 2>& a, const std::array<double, 2>& b) const {
        auto pb = px(b);
        double det = a[0] * b[1] - a[1] * b[0];
        if (std::abs(det) < 1e-12) return " L" + fmt(pb[0]) + " " + fmt(pb[1]);
        double ra = (a[0] * a[0] + a[1] * a[1] + 1) / 2, rb = (b[0] * b[0] + b[1] * b[1] + 1) / 2;
        double cxm = (ra * b[1] - rb * a[1]) / det, cym = (a[0] * rb - b[0] * ra) / det;
        double rad = std::sqrt(std::max(0.0, cxm * cxm + cym * cym - 1));
        if (rad * scale > 1e6) return " L" + fmt(pb[0]) + " " + fmt(pb[1]);
        auto pa = px(a), pc = px({cxm, cym});
        double cross = (pa[0] - pc[0]) * (pb[1] - pc[1]) - (pa[1] - pc[1]) * (pb[0] - pc[0]);
        return " A" + fmt(rad * scale) + " " + fmt(rad * scale) + " 0 0 " + (cross > 0 ? "1 " : "0 ") + fmt(pb[0]) + " " +
               fmt(pb[1]);
    }
};

}  // namespace

std::string render_svg(const RealizedBall& R, const Overlays& ov, int size_px, const Mat3& view) {
    const auto& ball = *R.ball;
    const int k = ball.spec().k;
    const int n = ball.size();

    // all chamber vertices, moved by the view isometry in one batch
    std::size_t np = static_cast<std::size_t>(n) * k;
    std::vector<double> x0(np), x1(np), x2(np), y0(np), y1(np), y2(np);
    for (int c = 0; c < n; ++c)
        for (int i = 0; i < k; ++i) {
            HPoint v = R.vertex(c, i);
            std::size_t j = static_cast<std::size_t>(c) * k + i;
            x0[j] = v.x0;
            x1[j] = v.x1;
            x2[j] = v.x2;
        }
    lorentz_apply_batch(view, x0.data(), x1.data(), x2.data(), np, y0.data(), y1.data(), y2.data());
    auto vz = [&](int c, int i) {
        std::size_t j = static_cast<std::size_t>(c) * k + i;
        return to_disk(HPoint{y0[j], y1[j], y2[j]});
    };

    SvgPen pen{size_px / 2.0, size_px / 2.0 - 4};
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size_px << "\" height=\"" << size_px
       << "\" viewBox=\"0 0 " << size_px << " " << size_px << "\">\n";
    os << "<circle cx=\"" << pen.fmt(pen.cx) << "\" cy=\"" << pen.fmt(pen.cx) << "\" r=\"" << pen.fmt(pen.scale)
       << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1\"/>\n";
    std::vector<char> highlight(n, 0);
    for (auto& d : ov.disks)
        for (int c : d)
            if (c >= 0 && c < n) highlight[c] = 1;
    for (int c = 0; c < n; ++c) {
        std::string d = pen.move(vz(c, k - 1));
        for (int i = 0; i < k; ++i) d += pen.arc(vz(c, (i + k - 1) % k), vz(c, i));
        const char* fill = highlight[c] ? "#f2b134" : (ball.len(c) % 2 ? "#c8d7ea" : "#ffffff");
        os << "<path class=\"chamber\" data-word=\"" << word_str(ball.word(c)) << "\" d=\"" << d << " Z\" fill=\"" << fill
           << "\" stroke=\"#333\" stroke-width=\"0.4\"/>\n";
    }
    static const char* wall_colors[] = {"#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e"};
    for (int w : ov.walls) {
        if (w < 0 || w >= static_cast<int>(ball.walls().size())) continue;
        const auto& W = ball.walls()[w];
        auto line = ball.walk_wall(W.anchor_edge);
        std::string d;
        std::array<double, 2> last{};
        bool open = false;
        const auto& E = ball.edges();
        for (std::size_t j = 0; j < line.size(); ++j) {
            const auto& e = E[line[j]];
            int c = e.c0;
            auto a = vz(c, (e.label + k - 1) % k), b = vz(c, e.label);
            // orient each edge to continue from the previous endpoint
            if (open && std::hypot(b[0] - last[0], b[1] - last[1]) < std::hypot(a[0] - last[0], a[1] - last[1]))
                std::swap(a, b);
            if (!open && j + 1 < line.size()) {
                const auto& f = E[line[j + 1]];
                auto fa = vz(f.c0, (f.label + k - 1) % k), fb = vz(f.c0, f.label);
                auto near = [&](const std::array<double, 2>& p) {
                    return std::min(std::hypot(p[0] - fa[0], p[1] - fa[1]), std::hypot(p[0] - fb[0], p[1] - fb[1]));
                };
                if (near(a) < near(b)) std::swap(a, b);
            }
            if (!open) d += pen.move(a);
            d += pen.arc(a, b);
            last = b;
            open = true;
        }
        os << "<path class=\"wall\" data-type=\"" << W.type << "\" d=\"" << d << "\" fill=\"none\" stroke=\""
           << wall_colors[W.type % 5] << "\" stroke-width=\"2\"/>\n";
    }
    for (const auto& ray : ov.rays) {
        if (ray.empty()) continue;
        std::string d;
        for (std::size_t j = 0; j < ray.size(); ++j) {
            auto p = pen.px(to_disk(act(view, ray[j])));
            d += (j ? " L" : "M") + pen.fmt(p[0]) + " " + pen.fmt(p[1]);
        }
        os << "<path class=\"ray\" d=\"" << d << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.2\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace fb
