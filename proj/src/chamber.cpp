#include "fbuild/chamber.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace fb {

RationalAngle::RationalAngle(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("RationalAngle: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g == 0) g = 1;
    num_ = num / g;
    den_ = den / g;
    if (num_ == 0) den_ = 1;
}

RationalAngle RationalAngle::operator+(const RationalAngle& o) const {
    std::int64_t l = std::lcm(den_, o.den_);
    return {num_ * (l / den_) + o.num_ * (l / o.den_), l};
}

RationalAngle RationalAngle::operator-(const RationalAngle& o) const { return *this + (-o); }

RationalAngle RationalAngle::operator*(std::int64_t s) const { return {num_ * s, den_}; }

bool RationalAngle::operator<(const RationalAngle& o) const {
    // denominators are positive so cross multiplication keeps the order
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::string RationalAngle::str() const {
    if (num_ == 0) return "0";
    std::ostringstream os;
    if (num_ == -1) os << "-";
    else if (num_ != 1) os << num_;
    os << "pi";
    if (den_ != 1) os << "/" << den_;
    return os.str();
}

std::string RationalAngle::coef_str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

const char* to_string(ChamberError e) {
    switch (e) {
    case ChamberError::NonHyperbolic: return "NonHyperbolic";
    case ChamberError::IllegalLinkGon: return "IllegalLinkGon";
    case ChamberError::ThicknessRule3: return "ThicknessRule3";
    case ChamberError::ThicknessRule8: return "ThicknessRule8";
    case ChamberError::DegenerateK: return "DegenerateK";
    case ChamberError::LengthMismatch: return "LengthMismatch";
    case ChamberError::BadThickness: return "BadThickness";
    }
    return "?";
}

bool ChamberSpec::thick() const {
    return !q.empty() && std::all_of(q.begin(), q.end(), [](int x) { return x >= 2; });
}

bool ChamberSpec::right_angled() const {
    return std::all_of(m.begin(), m.end(), [](int x) { return x == 2; });
}

bool ChamberSpec::is_triangle(int a, int b, int c) const {
    if (k != 3) return false;
    std::vector<int> want{a, b, c}, got = m;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    return want == got;
}

bool ChamberSpec::is_right_triangle() const {
    return k == 3 && std::count(m.begin(), m.end(), 2) >= 1;
}

std::string ChamberSpec::str() const {
    std::ostringstream os;
    os << k << ";";
    for (int i = 0; i < k; ++i) os << (i ? "," : "") << m[i];
    os << ";";
    for (int i = 0; i < k; ++i) os << (i ? "," : "") << q[i];
    return os.str();
}

ValidationResult validate(const RawChamber& raw) {
    ValidationResult r;
    auto bad = [&](ChamberError c, int idx, std::string d) {
        r.violations.push_back({c, idx, std::move(d)});
    };
    if (raw.k < 3) bad(ChamberError::DegenerateK, -1, "k=" + std::to_string(raw.k));
    std::vector<int> q = raw.q;
    if (q.empty()) q.assign(std::max(raw.k, 0), 1);
    if (static_cast<int>(raw.m.size()) != raw.k || static_cast<int>(q.size()) != raw.k) {
        bad(ChamberError::LengthMismatch, -1, "m and q must have k entries");
        return r;
    }
    if (raw.k < 3) return r;

    const int k = raw.k;
    for (int i = 0; i < k; ++i) {
        int v = raw.m[i];
        if (v != 2 && v != 3 && v != 4 && v != 6 && v != 8)
            bad(ChamberError::IllegalLinkGon, i, "m=" + std::to_string(v));
        if (q[i] < 1) bad(ChamberError::BadThickness, i, "q=" + std::to_string(q[i]));
    }
    // hyperbolic iff sum 1/m < k-2
    RationalAngle s(0);
    bool positive_m = std::all_of(raw.m.begin(), raw.m.end(), [](int v) { return v >= 1; });
    if (positive_m) {
        for (int v : raw.m) s += RationalAngle(1, v);
        if (!(s < RationalAngle(k - 2))) bad(ChamberError::NonHyperbolic, -1, "angle sum " + s.str());
    } else {
        bad(ChamberError::IllegalLinkGon, -1, "nonpositive m");
    }

    bool all_thick = std::all_of(q.begin(), q.end(), [](int x) { return x >= 2; });
    if (all_thick) {
        for (int i = 0; i < k; ++i) {
            int j = (i + 1) % k;
            if (raw.m[i] == 3 && q[i] != q[j])
                bad(ChamberError::ThicknessRule3, i,
                    "q" + std::to_string(i + 1) + "!=q" + std::to_string(j + 1) + " at m=3");
            if (raw.m[i] == 8 && q[i] == q[j])
                bad(ChamberError::ThicknessRule8, i,
                    "q" + std::to_string(i + 1) + "=q" + std::to_string(j + 1) + " at m=8");
        }
    }
    if (r.violations.empty()) {
        r.ok = true;
        r.spec = ChamberSpec{k, raw.m, q};
    }
    return r;
}

ValidationResult validate(const ChamberSpec& spec) { return validate(RawChamber{spec.k, spec.m, spec.q}); }

ChamberSpec make_spec(int k, std::vector<int> m, std::vector<int> q) {
    auto r = validate(RawChamber{k, std::move(m), std::move(q)});
    if (!r.ok) {
        std::string msg = "invalid chamber:";
        for (auto& v : r.violations) msg += std::string(" ") + to_string(v.code) + "(" + v.detail + ")";
        throw std::invalid_argument(msg);
    }
    return r.spec;
}

RationalAngle area(const ChamberSpec& spec) {
    RationalAngle a(spec.k - 2);
    for (int v : spec.m) a -= RationalAngle(1, v);
    return a;
}

RationalAngle vertex_angle(const ChamberSpec& spec, int i) { return RationalAngle(1, spec.m[i]); }

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &pos);
        } catch (const std::logic_error&) {
            pos = 0;
        }
        if (pos != tok.size()) throw std::invalid_argument("bad integer '" + tok + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

RawChamber parse_chamber(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) parts.push_back(trim(tok));
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("chamber: expected 'k;m;q'");
    RawChamber raw;
    auto value = [](const std::string& p) {
        auto eq = p.find('=');
        return eq == std::string::npos ? p : p.substr(eq + 1);
    };
    auto ks = parse_ints(value(parts[0]));
    if (ks.size() != 1) throw std::invalid_argument("chamber: bad k");
    raw.k = ks[0];
    raw.m = parse_ints(value(parts[1]));
    if (parts.size() == 3) raw.q = parse_ints(value(parts[2]));
    return raw;
}

}  // namespace fb
