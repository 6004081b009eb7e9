#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fb {

// Two-coloured graph; colour 0 = black ("points"), colour 1 = white ("lines").
struct BipartiteGraph {
    std::vector<int> color;
    std::vector<std::vector<int>> adj;
    std::vector<std::pair<int, int>> edges;  // (black, white)

    int size() const { return static_cast<int>(color.size()); }
    int add_vertex(int c);
    void add_edge(int a, int b);
    int edge_id(int a, int b) const;  // -1 if absent

    std::vector<int> distances(int src) const;  // BFS, -1 if unreachable
};

enum class GenPolyError {
    None,
    NotBipartite,
    AxiomFail,
    ParameterRuleFail,
    NotThick,
    UnsupportedParameter,
    NoneFound,
    FormatError,
};
const char* to_string(GenPolyError e);

struct GenPolyFailure : std::runtime_error {
    GenPolyError code;
    GenPolyFailure(GenPolyError c, const std::string& what) : std::runtime_error(what), code(c) {}
};

// An apartment is a 2m-circuit stored as its cyclic vertex sequence.
using Circuit = std::vector<int>;

struct GenPolygon {
    BipartiteGraph graph;
    int m = 0;
    bool thick = false;
    int s = -1, t = -1;  // -1 when the colour class is not regular
    std::vector<Circuit> apartments;
};

struct VerifyReport {
    bool ok = false;
    GenPolyError code = GenPolyError::None;
    std::string witness;
    std::vector<int> witness_ids;  // edge or vertex ids backing the witness
    bool prefilter_ok = false;     // girth 2m and diameter m
    GenPolygon polygon;
};

VerifyReport verify(const BipartiteGraph& g, int m, bool require_thick = false);

// digon(s,t): K_{s+1,t+1}; projective(q): PG(2,q) incidence, q in {2,3};
// quadrangle(2): the symplectic quadrangle on 15 points and 15 lines.
GenPolygon construct_digon(int s, int t);
GenPolygon construct_projective(int q);
GenPolygon construct_quadrangle(int q);
GenPolygon construct(const std::string& kind);  // "digon:2,2", "projective:2", "quadrangle:2"

std::vector<int> opposite_set(const GenPolygon& L, int v);
int common_opposite(const GenPolygon& L, int v1, int v2);
// vertex opposite every vertex of colour `type` on A (m in {3,4})
int apartment_opposite_vertex(const GenPolygon& L, const Circuit& A, int type);
std::vector<Circuit> apartment_chain(const GenPolygon& L, const Circuit& A, const Circuit& B);

// edge ids of a circuit and the edges shared by two circuits
std::vector<int> circuit_edges(const BipartiteGraph& g, const Circuit& c);
int shared_path_length(const BipartiteGraph& g, const Circuit& a, const Circuit& b, bool* is_path = nullptr);

std::string write_exchange(const BipartiteGraph& g);
BipartiteGraph read_exchange(const std::string& text);

}  // namespace fb
