#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbuild/chamber.hpp"
#include "fbuild/coxeter.hpp"
#include "fbuild/geomrender.hpp"

namespace fb {

// (l - 2) pi - sum of the corner angles
RationalAngle defect(const std::vector<RationalAngle>& angles);

// Largest chamber count allowed by d >= n A0 for a circle with `corners` corners
// (every corner angle is at least the smallest chamber angle).
int area_cap(const ChamberSpec& spec, int corners);

// Coxeter complex of the chamber explored on demand; chambers and vertices are
// identified by position. Used by the side-driven search, which may wander far
// beyond any ball that is affordable to build in full.
class Tessellation {
public:
    explicit Tessellation(const ChamberSpec& spec);

    const ChamberSpec& spec() const { return spec_; }
    const NormalPolygon& polygon() const { return poly_; }
    int size() const { return static_cast<int>(mats_.size()); }
    int neighbor(int c, int i);           // chamber across edge i
    int vertex(int c, int t);             // vertex between edges t and t+1 of c
    const HPoint& vertex_pos(int v) const { return vpos_[v]; }
    int vertex_type(int v) const { return vtype_[v]; }
    int vertex_m(int v) const { return spec_.m[vtype_[v]]; }
    // chambers around v in cyclic order (2m of them)
    const std::vector<int>& ring(int v);
    int edge(int c, int i);               // edge id (pair of vertex ids)
    std::pair<int, int> edge_ends(int e) const { return eends_[e]; }
    Word word(int c) const;               // generator path from the base chamber (not reduced)

private:
    int chamber_at(const Mat3& M);
    int find_or_add(std::unordered_map<long long, std::vector<int>>& grid, const std::vector<HPoint>& pts,
                    const HPoint& p, bool& added);

    ChamberSpec spec_;
    NormalPolygon poly_;
    int k_;
    std::vector<Mat3> mats_;
    std::vector<int> nbr_, vert_, parent_, parent_gen_;
    std::vector<HPoint> cpos_, vpos_;
    std::vector<int> vtype_, vchamber_;
    std::unordered_map<long long, std::vector<int>> cgrid_, vgrid_;
    std::unordered_map<int, std::vector<int>> rings_;
    std::map<std::pair<int, int>, int> edge_index_;
    std::vector<std::pair<int, int>> eends_;
};

// Canonical encoding of a chamber set under label-preserving isomorphism: breadth-first
// relabelling from every start chamber, lexicographically smallest string wins.
// nb(c, i) is the set index of the chamber across edge i of set member c, or -1.
std::string canonical_form(int n, int k, const std::function<int(int, int)>& nb);

struct Corner {
    int m = 0;           // m(v)
    int chambers = 0;    // chambers of the disk at v; angle = chambers * pi / m
    int side_after = 0;  // edges on the side leaving this corner
    bool side_odd = false;  // that side lies on a wall through vertices of odd index
    RationalAngle angle() const { return {chambers, m}; }
    bool even() const { return chambers % 2 == 0; }
};

struct CatalogEntry {
    std::string id;               // canonical form
    int corners = 0;              // 3 or 4
    int n = 0;
    RationalAngle d;
    std::vector<Corner> corner;   // cyclic order, smallest rotation/reflection
    bool gauss_bonnet = false;    // d == n A0 and the per-vertex curvature sum is 2 pi
    bool special_points = false;  // boundary vertex with angle > pi or interior vertex with angle > 2 pi
    std::vector<Word> chambers;   // witness chambers (unreduced generator paths)

    bool all_even() const;
    int even_count() const;
    bool is_chamber() const { return n == 1; }
};

struct SearchStats {
    long long candidates = 0, closures = 0;
    int cap = 0;
};

std::vector<CatalogEntry> enumerate_triangles(const ChamberSpec& spec, SearchStats* stats = nullptr);
std::vector<CatalogEntry> enumerate_quads(const ChamberSpec& spec, SearchStats* stats = nullptr);

// Independent enumeration: all edge-connected chamber sets of size <= max_n around the base
// chamber of an exact Coxeter ball, kept when they form a convex disk with 3 or 4 corners.
struct OracleResult {
    std::vector<CatalogEntry> triangles, quads;
    long long sets = 0;
};
OracleResult brute_force_disks(const ChamberSpec& spec, int max_n);

struct TouchesBoundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SupportDisk {
    std::vector<int> chambers;
    int n = 0;
    std::vector<int> special_points;  // ball vertex ids
};

// Chambers enclosed by a circle of ball edges; throws TouchesBoundary if neither side is finite in the ball.
SupportDisk support_disk(const CoxeterBall& ball, const std::vector<int>& circle_edges);

// Labels whose walls pass through vertices of odd index (type II in the (2,3,8) terminology).
bool label_meets_odd_vertex(const ChamberSpec& spec, int label);

struct ClaimResult {
    std::string name;
    bool applicable = true;
    bool pass = false;
    std::string detail;
    std::vector<std::string> witnesses;
};

struct ClaimsReport {
    ChamberSpec spec;
    std::vector<CatalogEntry> triangles, quads;
    std::vector<ClaimResult> claims;
    bool pass() const;
};

ClaimsReport claims_check(const ChamberSpec& spec);

std::string entry_summary(const CatalogEntry& e);

}  // namespace fb
