#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbuild/chamber.hpp"
#include "fbuild/coxeter.hpp"

namespace fb {

// Hyperboloid model, form <x,y> = x0 y0 - x1 y1 - x2 y2.
struct HPoint {
    double x0 = 1, x1 = 0, x2 = 0;
};
using Mat3 = std::array<double, 9>;  // row-major

double lorentz(const HPoint& a, const HPoint& b);
double hdist(const HPoint& a, const HPoint& b);
HPoint act(const Mat3& M, const HPoint& p);
Mat3 mul(const Mat3& A, const Mat3& B);
Mat3 lorentz_inverse(const Mat3& M);  // J M^T J
Mat3 identity3();
double lorentz_defect(const Mat3& M);  // max |M^T J M - J|
std::array<double, 2> to_disk(const HPoint& p);

// Batched x -> M x on structure-of-arrays input; AVX2 path chosen at runtime when available.
void lorentz_apply_batch(const Mat3& M, const double* x0, const double* x1, const double* x2, std::size_t n,
                         double* y0, double* y1, double* y2);
void lorentz_apply_batch_scalar(const Mat3& M, const double* x0, const double* x1, const double* x2, std::size_t n,
                                double* y0, double* y1, double* y2);
bool lorentz_batch_uses_simd();

struct GeomError : std::runtime_error {
    enum Code { NoConvergence, ToleranceFail, NearVertex, LeftBall, BadInput } code;
    GeomError(Code c, const std::string& what) : std::runtime_error(what), code(c) {}
};

// Normal polygon with incenter at the origin. vertices[i] lies between edges i and i+1;
// edge i runs from vertices[i-1] to vertices[i].
struct NormalPolygon {
    ChamberSpec spec;
    double inradius = 0;
    std::vector<HPoint> vertices;
    std::vector<HPoint> normals;   // unit spacelike, <origin, n> > 0
    std::vector<Mat3> reflections;
    std::vector<double> measured_angles;
    double numeric_area = 0;       // (k-2)pi - sum of measured angles
    std::vector<double> edge_lengths;
};

NormalPolygon normal_polygon(const ChamberSpec& spec);

struct RealizedBall {
    const CoxeterBall* ball = nullptr;
    NormalPolygon poly;
    std::vector<Mat3> M;           // chamber c = M[c] applied to the base polygon
    double max_lorentz_defect = 0;
    double max_edge_mismatch = 0;

    HPoint incenter(int c) const;
    HPoint vertex(int c, int i) const;
    HPoint normal(int c, int i) const;  // outward side negative
    bool contains(int c, const HPoint& x, double tol = 0) const;
};

// throws GeomError(ToleranceFail) when tolerances are exceeded
RealizedBall realize(const CoxeterBall& ball);

// Distinct chambers reached by applying generator reflections up to `radius` times, deduplicated by incenter.
std::size_t geometric_chamber_count(const ChamberSpec& spec, int radius, double tol = 1e-9);

// Unit tangent at p in direction theta (angle measured in the frame obtained by boosting the origin frame).
HPoint tangent_at(const HPoint& p, double theta);
HPoint geodesic_point(const HPoint& p, const HPoint& u, double t);
// point of chamber c at distance s * inradius from its incenter, s in [0,1), in direction `angle`
HPoint chamber_point(const RealizedBall& R, int c, double angle, double s);

struct Crossing {
    int label = -1;     // edge label crossed
    int edge = -1;      // ball edge id
    int chamber = -1;   // chamber entered
    double t = 0;       // arclength parameter
};

struct TraceResult {
    int start = 0;
    std::vector<Crossing> crossings;
    int end = 0;
    double min_vertex_distance = 0;
    bool truncated = false;  // stopped at the ball boundary
};

struct TraceOptions {
    double eps = -1;            // vertex margin; negative selects 1e-3 * inradius
    int skip_edge = -1;         // start point lies on this edge of the start chamber
    bool stop_at_boundary = false;
};

// Geodesic from p (inside chamber c) with unit tangent u, for arclength `length`.
TraceResult trace(const RealizedBall& R, int c, const HPoint& p, const HPoint& u, double length,
                  const TraceOptions& opt = {});
TraceResult trace_segment(const RealizedBall& R, int c, const HPoint& p, const HPoint& q, double eps = -1);

struct Overlays {
    std::vector<int> walls;                   // wall ids drawn as polylines
    std::vector<std::vector<HPoint>> rays;    // sampled curves
    std::vector<std::vector<int>> disks;      // chamber sets highlighted
};

// view: isometry applied before projecting to the Poincare disk
std::string render_svg(const RealizedBall& R, const Overlays& ov = {}, int size_px = 800, const Mat3& view = identity3());

}  // namespace fb
