#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbuild/chamber.hpp"

namespace fb {

// Generator indices are 0-based; generator i reflects across edge i of the base chamber.
using Word = std::vector<int>;

std::string word_str(const Word& w);  // "s1s2s1", "e" for the identity
Word parse_word(const std::string& s);  // accepts "s1s2s1", "1,2,1", "121", "e"

struct ResourceCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The polygon reflection group: (s_i s_{i+1})^{m[i]} = 1, non-adjacent pairs free.
class CoxeterGroup {
public:
    explicit CoxeterGroup(const ChamberSpec& spec);
    CoxeterGroup(int k, std::vector<int> m);

    int rank() const { return k_; }
    // order of s_a s_b; 0 stands for infinity
    int order(int a, int b) const;

    // Tits: braid moves plus deletion of ss
    Word reduce(const Word& w) const;
    bool is_reduced(const Word& w) const;
    bool equal(const Word& a, const Word& b) const;
    Word multiply(const Word& a, const Word& b) const;
    Word inverse(const Word& w) const;
    int length(const Word& w) const { return static_cast<int>(reduce(w).size()); }

    // all reduced words of the element represented by a reduced word
    std::vector<Word> reduced_words(const Word& reduced) const;
    std::uint32_t right_descents(const Word& reduced) const;
    std::uint32_t left_descents(const Word& reduced) const;

    // reflections s_{i1}..s_{ij}..s_{i1} for a reduced word, canonical forms
    std::vector<Word> inversions(const Word& w) const;
    Word conjugate(const Word& u, int s) const;  // canonical u s u^-1

private:
    using Str = std::string;
    Str canon(const Str& reduced) const;
    std::vector<Str> braid_class(const Str& reduced) const;
    Str mult_right(const Str& reduced, int s) const;

    int k_;
    std::vector<int> m_;
};

struct BallVertex {
    int type = 0;            // between edges type and type+1
    int m = 0;
    std::vector<int> ring;   // 2m chambers around the vertex in cyclic order, -1 outside the ball
    std::vector<int> ring_edges;  // ring_edges[j] separates ring[j] and ring[j+1], -1 if absent
    bool interior = false;
};

struct BallEdge {
    int label = 0;
    int v0 = -1, v1 = -1;    // endpoints: v0 of type label-1, v1 of type label
    int c0 = -1, c1 = -1;    // chambers; c1 = -1 on the ball boundary
    int wall = -1;
    bool interior() const { return c1 >= 0; }
};

struct Wall {
    Word reflection;         // canonical word of the reflection
    int anchor_edge = -1;
    int label = 0;           // label of the anchor edge
    int type = 0;            // wall type (component of the boundary of R cut at m != 3)
    std::vector<int> edges;  // ball edges lying on the wall
};

class CoxeterBall {
public:
    CoxeterBall(const ChamberSpec& spec, int radius, std::size_t cap = 2000000, bool with_walls = true);

    const ChamberSpec& spec() const { return spec_; }
    const CoxeterGroup& group() const { return group_; }
    int radius() const { return radius_; }
    int size() const { return static_cast<int>(words_.size()); }

    const Word& word(int c) const { return words_[c]; }
    int len(int c) const { return len_[c]; }
    int find(const Word& canonical) const;
    int find_any(const Word& w) const;  // reduces first
    int right(int c, int s) const { return right_[c * k_ + s]; }  // chamber across edge s
    int left(int c, int s) const { return left_[c * k_ + s]; }
    std::uint32_t right_desc(int c) const;
    std::uint32_t left_desc(int c) const { return ldesc_[c]; }

    const std::vector<BallVertex>& vertices() const { return vertices_; }
    const std::vector<BallEdge>& edges() const { return edges_; }
    const std::vector<Wall>& walls() const { return walls_; }
    int chamber_edge(int c, int i) const { return cedge_[c * k_ + i]; }
    int chamber_vertex(int c, int i) const { return cvert_[c * k_ + i]; }

    // walls crossed from the base chamber to chamber c, as wall ids (-1 if the wall has no ball edge)
    std::vector<int> inversion_walls(int c) const;
    // wall ids separating chambers a and b (symmetric difference of inversion sets)
    std::vector<int> separating_walls(int a, int b) const;
    int wall_of_reflection(const Word& canonical) const;

    // component id of each edge label; labels joined through m=3 vertices
    static std::vector<int> label_components(const ChamberSpec& spec);
    // edges along the wall through edge e, walking straight through vertices, in order
    std::vector<int> walk_wall(int e) const;

    std::string export_complex() const;

private:
    void build_group_ball(std::size_t cap);
    void build_cells();
    void build_walls();

    ChamberSpec spec_;
    CoxeterGroup group_;
    int radius_;
    int k_;
    std::vector<Word> words_;
    std::vector<int> len_;
    std::vector<int> right_, left_;
    std::vector<std::uint32_t> ldesc_;
    std::unordered_map<std::string, int> index_;
    std::vector<BallVertex> vertices_;
    std::vector<BallEdge> edges_;
    std::vector<Wall> walls_;
    std::unordered_map<std::string, int> wall_index_;
    std::vector<int> cedge_, cvert_;
};

enum class WallTypeStatus { Ok, BallTooSmall, Inconsistent };

struct WallTypeResult {
    WallTypeStatus status = WallTypeStatus::Ok;
    int type = -1;
    std::vector<int> labels;        // edge labels along the visible part, in order
    std::vector<int> vertex_m;      // m at the interior vertices passed, in order
    int period = 0;                 // expected period of the label sequence
};

// Type of a wall read off its visible edges; fails if a full period is not visible.
WallTypeResult wall_type(const CoxeterBall& ball, int wall);
int wall_type_count(const ChamberSpec& spec);

}  // namespace fb
