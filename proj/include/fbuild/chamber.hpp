#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fb {

// Exact rational multiple of pi, kept in lowest terms.
class RationalAngle {
public:
    RationalAngle() = default;
    RationalAngle(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    RationalAngle operator+(const RationalAngle& o) const;
    RationalAngle operator-(const RationalAngle& o) const;
    RationalAngle operator-() const { return {-num_, den_}; }
    RationalAngle operator*(std::int64_t s) const;
    RationalAngle& operator+=(const RationalAngle& o) { return *this = *this + o; }
    RationalAngle& operator-=(const RationalAngle& o) { return *this = *this - o; }

    bool operator==(const RationalAngle& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RationalAngle& o) const { return !(*this == o); }
    bool operator<(const RationalAngle& o) const;
    bool operator<=(const RationalAngle& o) const { return !(o < *this); }
    bool operator>(const RationalAngle& o) const { return o < *this; }
    bool operator>=(const RationalAngle& o) const { return !(*this < o); }

    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    // "pi/24", "5pi/24", "0", "-pi/2"
    std::string str() const;
    // "5/24" style, the coefficient of pi
    std::string coef_str() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

enum class ChamberError {
    NonHyperbolic,
    IllegalLinkGon,
    ThicknessRule3,
    ThicknessRule8,
    DegenerateK,
    LengthMismatch,
    BadThickness,
};

const char* to_string(ChamberError e);

struct Violation {
    ChamberError code;
    int index = -1;  // 0-based position of the offending vertex/edge, -1 if global
    std::string detail;
};

// Edge i of the chamber carries label i (0-based internally). m[i] is the
// angle denominator at the vertex shared by edges i and i+1 (mod k).
struct ChamberSpec {
    int k = 0;
    std::vector<int> m;
    std::vector<int> q;

    int next(int i) const { return (i + 1) % k; }
    int prev(int i) const { return (i + k - 1) % k; }
    bool thick() const;
    bool right_angled() const;
    bool is_triangle(int a, int b, int c) const;  // m equals (a,b,c) up to rotation/reflection
    bool is_right_triangle() const;

    // "3;2,3,8;1,1,1"
    std::string str() const;

    bool operator==(const ChamberSpec& o) const { return k == o.k && m == o.m && q == o.q; }
};

struct RawChamber {
    int k = 0;
    std::vector<int> m;
    std::vector<int> q;
};

struct ValidationResult {
    bool ok = false;
    ChamberSpec spec;
    std::vector<Violation> violations;
};

ValidationResult validate(const RawChamber& raw);
ValidationResult validate(const ChamberSpec& spec);

// Throws std::invalid_argument listing every violation.
ChamberSpec make_spec(int k, std::vector<int> m, std::vector<int> q = {});

RationalAngle area(const ChamberSpec& spec);
RationalAngle vertex_angle(const ChamberSpec& spec, int i);

// Accepts "3;2,3,8;1,1,1" and "chamber = 3; m = 2,3,8; q = 1,1,1".
RawChamber parse_chamber(const std::string& text);

}  // namespace fb
