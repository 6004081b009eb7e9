#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbuild/chamber.hpp"
#include "fbuild/coxeter.hpp"
#include "fbuild/genpoly.hpp"

namespace fb {

// One letter of a chamber word: generator index (0-based) and a colour in 1..q_gen.
struct Letter {
    int gen = 0;
    int color = 1;
    auto operator<=>(const Letter&) const = default;
};
using ColoredWord = std::vector<Letter>;

std::string colored_str(const ColoredWord& w);     // "(1,2)(3,1)" with 1-based generators, "e" if empty
ColoredWord parse_colored(const std::string& s);   // inverse of colored_str

// Graph product of Z/(q_i+1) over the commutation graph i ~ i+1.
class RAGroup {
public:
    explicit RAGroup(const ChamberSpec& spec);

    const ChamberSpec& spec() const { return spec_; }
    const CoxeterGroup& coxeter() const { return cox_; }
    bool commutes(int a, int b) const;

    ColoredWord normal_form(const ColoredWord& w) const;
    ColoredWord multiply(const ColoredWord& a, const ColoredWord& b) const;
    ColoredWord inverse(const ColoredWord& w) const;
    Word type(const ColoredWord& w) const;  // generator projection of the normal form
    Word wdist(const ColoredWord& g, const ColoredWord& h) const { return type(multiply(inverse(g), h)); }

    // drop trailing letters with generator in `gens` (coset representative), normal form
    ColoredWord strip(const ColoredWord& nf, std::uint32_t gens) const;
    std::string key(const ColoredWord& nf) const;

private:
    void push(ColoredWord& r, Letter l) const;
    ColoredWord lexmin(ColoredWord r) const;

    ChamberSpec spec_;
    CoxeterGroup cox_;
};

// An apartment: alpha(w) = base * prod (i_j, colour(t_j)) along a reduced word of w,
// t_j the j-th wall crossed. Walls are keyed by the canonical word of their reflection.
struct ApartmentColoring {
    ColoredWord base;
    std::map<std::string, int> colors;
    int default_color = 1;

    int color_of(const Word& reflection) const;
    std::string serialize() const;  // "base=<word>\n<wall> <colour>\n..."
};

ColoredWord apartment_eval(const RAGroup& G, const ApartmentColoring& A, const Word& w);
bool apartment_contains(const RAGroup& G, const ApartmentColoring& A, const ColoredWord& chamber);
ApartmentColoring apartment_through(const RAGroup& G, const ColoredWord& C, const ColoredWord& D);
// r_{A,C}(D); throws std::invalid_argument if C is not in A
ColoredWord retraction(const RAGroup& G, const ApartmentColoring& A, const ColoredWord& C, const ColoredWord& D);

struct BuildingCell {
    int type = 0;                 // edge label, or vertex type (between edges type and type+1)
    std::vector<int> chambers;    // chambers of the ball containing the cell
    bool interior = false;        // every chamber of the cell lies in the ball
};

class BuildingBall {
public:
    BuildingBall(const ChamberSpec& spec, int radius, std::size_t cap = 2000000);

    const ChamberSpec& spec() const { return G_.spec(); }
    const RAGroup& group() const { return G_; }
    int radius() const { return radius_; }
    int size() const { return static_cast<int>(words_.size()); }
    const ColoredWord& word(int c) const { return words_[c]; }
    int len(int c) const { return static_cast<int>(words_[c].size()); }
    int find(const ColoredWord& nf) const;  // -1 if outside

    // chambers across edge i of c (q_i entries, -1 outside the ball)
    std::vector<int> across(int c, int i) const;

    const std::vector<BuildingCell>& edges() const { return edges_; }
    const std::vector<BuildingCell>& vertices() const { return vertices_; }
    int chamber_edge(int c, int i) const { return cedge_[c * k_ + i]; }
    int chamber_vertex(int c, int i) const { return cvert_[c * k_ + i]; }

    // link of vertex v: black = edges of label type, white = edges of label type+1
    BipartiteGraph link(int v) const;
    std::string export_complex() const;

private:
    RAGroup G_;
    int radius_;
    int k_;
    std::vector<ColoredWord> words_;
    std::unordered_map<std::string, int> index_;
    std::vector<BuildingCell> edges_, vertices_;
    std::vector<int> cedge_, cvert_;
};

struct ComplexFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Labeled 2-complex in the exchange format shared with CoxeterBall::export_complex.
struct LabeledComplex {
    struct V { long long id; int a, b; };           // 1-based labels of the two edges meeting there
    struct E { long long id; int label; long long v0, v1; };
    struct F { long long id; std::vector<long long> edges; };
    std::vector<V> vertices;
    std::vector<E> edges;
    std::vector<F> faces;
};
LabeledComplex parse_complex(const std::string& text);

struct LocalViolation {
    std::string kind;  // "face", "edge", "vertex"
    long long id;
    std::string detail;
};

struct LocalReport {
    bool ok = false;
    std::vector<LocalViolation> violations;
    int faces = 0, interior_edges = 0, interior_vertices = 0;
    std::string note;
};

LocalReport verify_building_local(const std::string& complex_text, const ChamberSpec& spec);

}  // namespace fb
