#pragma once

#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fbuild/coxeter.hpp"
#include "fbuild/geomrender.hpp"
#include "fbuild/rabuilding.hpp"

namespace fb {

// sum_p e_p * (1/2) log p with integer e_p ("half units"); equality is exact.
class WeightVector {
public:
    WeightVector() = default;
    static WeightVector log_of(long long q);  // log q via the prime factorization of q

    const std::vector<std::pair<long long, long long>>& terms() const { return terms_; }  // (prime, half units)
    bool is_zero() const { return terms_.empty(); }
    long double value() const;

    WeightVector operator+(const WeightVector& o) const;
    WeightVector operator-(const WeightVector& o) const;
    WeightVector operator-() const;
    WeightVector& operator+=(const WeightVector& o) { return *this = *this + o; }
    WeightVector scaled(long long n) const;
    WeightVector half() const;  // throws std::domain_error on an odd half-unit count
    bool operator==(const WeightVector& o) const { return terms_ == o.terms_; }
    bool operator!=(const WeightVector& o) const { return !(*this == o); }
    // exact tie check first, then numeric order
    int compare(const WeightVector& o) const;
    bool operator<(const WeightVector& o) const { return compare(o) < 0; }

    // n with *this = n * unit, if any
    std::optional<long long> multiple_of(const WeightVector& unit) const;
    std::string str() const;  // "0", "log 2", "-1/2 log 2", "log 2 + 3/2 log 5"

private:
    void add(long long p, long long h);
    std::vector<std::pair<long long, long long>> terms_;
};

struct MetricError : std::runtime_error {
    enum Code { Disconnected, NoStabilization, HorizonTooSmall, NearVertex, Precondition, HypothesisFail, NoApartment } code;
    MetricError(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
};
const char* to_string(MetricError::Code c);

// Dual graph of a ball: chambers joined across shared edges, weight log q_label.
struct DualGraph {
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, label)
    std::vector<WeightVector> label_weight;
    int radius = 0;  // gallery radius of the underlying ball

    int size() const { return static_cast<int>(adj.size()); }
    long double min_weight() const;
    static DualGraph of(const CoxeterBall& ball, const std::vector<int>& q);
    static DualGraph of(const BuildingBall& ball);
};

struct ShortestPaths {
    std::vector<WeightVector> dist;
    std::vector<long double> value;
    std::vector<int> parent;   // -1 at the source and at unreached vertices
    std::vector<char> reached;
};

// ties broken on (value, chamber id)
ShortestPaths dijkstra(const DualGraph& G, int src);
WeightVector dist(const DualGraph& G, int a, int b);
WeightVector gromov(const DualGraph& G, int x, int y, int C);

// a(n) = chambers within weighted distance n of chamber 0
long long growth(const DualGraph& G, double n);
struct TauEstimate {
    std::vector<long long> a;       // a(0..nmax)
    std::vector<double> tau;        // log a(n) / n for n = 1..nmax
    bool converged = false;         // always false: finite horizon only
};
TauEstimate tau_estimate(const DualGraph& G, int nmax);

// Chambers are coloured words; on a thin host the colours are ignored and the word is a Coxeter word.
class MetricHost {
public:
    static MetricHost apartment(const ChamberSpec& spec, const std::vector<int>& weights, int radius);
    static MetricHost building(const ChamberSpec& spec, int radius);

    bool is_building() const { return static_cast<bool>(group_); }
    const ChamberSpec& spec() const { return spec_; }
    int radius() const { return radius_; }
    const CoxeterBall& realization() const { return *real_ball_; }
    const RealizedBall& realized() const { return *realized_; }
    const RAGroup& group() const { return *group_; }
    const std::vector<WeightVector>& label_weight() const { return weights_; }

    ColoredWord normal(const ColoredWord& c) const;
    int length(const ColoredWord& c) const;
    WeightVector dist(const ColoredWord& a, const ColoredWord& b) const;
    WeightVector gromov(const ColoredWord& x, const ColoredWord& y, const ColoredWord& C) const;
    // image of a realization chamber under the apartment map
    ColoredWord chamber(const ApartmentColoring& A, int c) const;

private:
    ChamberSpec spec_;
    int radius_ = 0;
    std::vector<WeightVector> weights_;
    std::shared_ptr<CoxeterBall> real_ball_;
    std::shared_ptr<RealizedBall> realized_;
    std::shared_ptr<RAGroup> group_;
};

struct RaySpec {
    ApartmentColoring apartment;  // ignored on a thin host
    int chamber = 0;              // realization chamber the ray starts into
    HPoint point;
    HPoint dir;                   // unit tangent at point
    int on_edge = -1;             // label of the edge of `chamber` carrying the start point, if any
    double eps = -1;              // vertex margin, negative selects 1e-3 * inradius
};

struct Ray {
    RaySpec spec;
    std::vector<ColoredWord> chambers;  // geodesic sequence up to the host horizon
    std::vector<int> real_chambers;
    HPoint ideal;                       // light-like endpoint (p + u) in the realization
};

Ray make_ray(const MetricHost& H, const RaySpec& spec);  // throws MetricError(NearVertex)

struct Stabilized {
    WeightVector value;
    int index = 0;
    int horizon = 0;
};

Stabilized boundary_gromov(const MetricHost& H, const Ray& xi, const Ray& eta, const ColoredWord& C, int window = 2);
Stabilized busemann(const MetricHost& H, const Ray& xi, const ColoredWord& C, const ColoredWord& D, int window = 2);
WeightVector cross_ratio(const MetricHost& H, const Ray& x1, const Ray& x2, const Ray& y1, const Ray& y2,
                         const ColoredWord& C, int window = 2);
double quasi_dist(const MetricHost& H, const Ray& xi, const Ray& eta, const ColoredWord& C, double tau);

// chambers met by the segment from p (in realization chamber cp) to q, mapped through A
std::vector<ColoredWord> segment_chambers(const MetricHost& H, const ApartmentColoring& A, int cp, const HPoint& p,
                                          const HPoint& q, double eps = -1);

// Ray starting on edge `label` of realization chamber 0 at fraction s along it, entering chamber 0
// (side = 0) or the chamber across (side = 1), at angle phi from the edge normal.
RaySpec edge_ray(const MetricHost& H, const ApartmentColoring& A, int label, double s, int side, double phi);

// Ray from the incenter of realization chamber 0 in direction theta.
RaySpec center_ray(const ApartmentColoring& A, double theta);

// A random apartment through the base chamber: random colour on every wall of the realization.
ApartmentColoring random_apartment(const MetricHost& H, std::mt19937_64& rng);

struct QuadSample {
    std::vector<std::string> rays;  // per ray: side and angle description
    std::optional<WeightVector> value;
    std::string failure;
};

struct SkeletonReport {
    bool pass = false;
    bool skeleton = false;
    int label = -1;
    std::vector<QuadSample> samples;
    std::vector<std::string> observed;  // distinct values as strings
    int rejected = 0;
    std::string detail;
};

// Quadruples near the two ends of a wall through edge `label` of the base chamber (skeleton = true)
// or of a generic geodesic through the base chamber (skeleton = false).
SkeletonReport detect_skeleton_experiment(const MetricHost& H, bool skeleton, int label, int samples,
                                          unsigned long long seed);

struct SideConfig {
    int side1 = 0, side2 = 0;  // 0: base side of the wall, c >= 1: far side with wall colour c
    bool combinatorial_same = false;
    int distinct_values = 0;
    bool agree = false;
    std::vector<std::string> values;
    std::string failure;
};

struct SideReport {
    bool pass = false;
    int label = -1;
    std::vector<SideConfig> configs;
    std::string detail;
};

SideReport detect_side_experiment(const MetricHost& H, int label, int configs, int samples, unsigned long long seed);

}  // namespace fb
