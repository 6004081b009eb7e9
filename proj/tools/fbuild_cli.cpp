#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fbuild/catalog.hpp"
#include "fbuild/chamber.hpp"
#include "fbuild/coxeter.hpp"
#include "fbuild/genpoly.hpp"
#include "fbuild/geomrender.hpp"
#include "fbuild/metrics.hpp"
#include "fbuild/rabuilding.hpp"

using json = nlohmann::ordered_json;
using namespace fb;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every key the config file or a flag may set.
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"chamber", "chamber spec, \"k;m1,..,mk;q1,..,qk\""},
    {"host", "apartment | building"},
    {"radius", "ball radius (gallery distance)"},
    {"cap", "chamber cap for balls"},
    {"eps", "vertex margin for traced rays"},
    {"seed", "random seed"},
    {"samples", "sample count"},
    {"configs", "configuration count"},
    {"label", "edge label (1-based)"},
    {"weights", "apartment wall weights q1,..,qk"},
    {"a", "chamber word"},
    {"b", "chamber word"},
    {"base", "base chamber word"},
    {"through", "second chamber fixing the apartment"},
    {"kind", "generalized polygon: digon:s,t | projective:q | quadrangle:q"},
    {"input", "input file"},
    {"m", "polygon parameter m"},
    {"export", "write the constructed object to this file"},
    {"svg", "SVG output path (render) or directory (catalog)"},
    {"nmax", "growth horizon"},
    {"ray", "ray: theta, or edge:label:s:side:phi (';'-separated list)"},
    {"wall", "wall overlay: reflection word (';'-separated list)"},
    {"disk", "catalog overlay: triangle:<index> or quad:<index>"},
    {"out", "write the JSON report to this file"},
};

using Config = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool known_key(const std::string& k) {
    return std::any_of(kKeys.begin(), kKeys.end(), [&](auto& p) { return p.first == k; });
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    Config cfg;
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        if (key == "chamber" && line.find(';') != std::string::npos) {
            cfg["chamber"] = line;  // "chamber = k; m = ...; q = ..."
            continue;
        }
        if (!known_key(key)) throw UsageError(path + ":" + std::to_string(no) + ": unknown key '" + key + "'");
        cfg[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

int get_int(const Config& c, const std::string& key, int def, int lo = INT32_MIN, int hi = INT32_MAX) {
    auto it = c.find(key);
    if (it == c.end()) return def;
    try {
        std::size_t pos;
        long v = std::stol(it->second, &pos);
        if (pos != it->second.size() || v < lo || v > hi) throw std::invalid_argument("");
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw UsageError("bad value for " + key + ": '" + it->second + "'");
    }
}

double get_double(const Config& c, const std::string& key, double def) {
    auto it = c.find(key);
    if (it == c.end()) return def;
    try {
        std::size_t pos;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size() || !std::isfinite(v)) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw UsageError("bad value for " + key + ": '" + it->second + "'");
    }
}

std::string get_str(const Config& c, const std::string& key, const std::string& def = "") {
    auto it = c.find(key);
    return it == c.end() ? def : it->second;
}

std::string require(const Config& c, const std::string& key) {
    auto it = c.find(key);
    if (it == c.end()) throw UsageError("missing required option --" + key);
    return it->second;
}

std::vector<int> int_list(const std::string& s, const std::string& key) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            v.push_back(std::stoi(trim(tok)));
        } catch (const std::exception&) {
            throw UsageError("bad list for " + key + ": '" + s + "'");
        }
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep))
        if (!trim(tok).empty()) out.push_back(trim(tok));
    return out;
}

ChamberSpec chamber_of(const Config& c) {
    RawChamber raw;
    try {
        raw = parse_chamber(require(c, "chamber"));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("chamber: ") + e.what());
    }
    auto vr = validate(raw);
    if (!vr.ok) {
        std::string msg = "invalid chamber:";
        for (auto& v : vr.violations) msg += std::string(" ") + to_string(v.code) + " (" + v.detail + ")";
        throw UsageError(msg);
    }
    return vr.spec;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

struct Report {
    std::string command;
    Config config;
    json results = json::array();
    json verdicts = json::array();
    json witnesses = json::array();
    json timings = json::object();
    std::vector<std::string> text;
    bool failed = false;

    void verdict(const std::string& name, bool pass, const std::string& detail = "") {
        json v{{"name", name}, {"pass", pass}};
        if (!detail.empty()) v["detail"] = detail;
        verdicts.push_back(v);
        text.push_back(std::string(pass ? "PASS " : "FAIL ") + name + (detail.empty() ? "" : ": " + detail));
        if (!pass) failed = true;
    }
    void witness(json w) { witnesses.push_back(std::move(w)); }
    void say(const std::string& s) { text.push_back(s); }

    json to_json() const {
        json cfg = json::object();
        for (auto& [k, v] : config) cfg[k] = v;
        return {{"command", command}, {"config", cfg},       {"results", results},
                {"verdicts", verdicts}, {"witnesses", witnesses}, {"timings", timings}};
    }
};

// ---------------------------------------------------------------------------
// chamber

void cmd_chamber_validate(const Config& c, Report& r) {
    RawChamber raw;
    try {
        raw = parse_chamber(require(c, "chamber"));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(std::string("chamber: ") + e.what());
    }
    auto vr = validate(raw);
    json viol = json::array();
    for (auto& v : vr.violations) {
        json w{{"code", to_string(v.code)}, {"index", v.index < 0 ? -1 : v.index + 1}, {"detail", v.detail}};
        viol.push_back(w);
        r.witness(w);
        r.say(std::string(to_string(v.code)) + (v.index >= 0 ? " at " + std::to_string(v.index + 1) : "") + ": " +
              v.detail);
    }
    r.results.push_back({{"valid", vr.ok}, {"violations", viol}});
    if (vr.ok) {
        r.results.push_back({{"spec", vr.spec.str()}, {"area", area(vr.spec).str()}});
        r.say(vr.spec.str());
    }
    r.verdict("valid-chamber", vr.ok);
}

void cmd_chamber_area(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    json angles = json::array();
    for (int i = 0; i < spec.k; ++i) angles.push_back(vertex_angle(spec, i).str());
    r.results.push_back({{"spec", spec.str()}, {"area", area(spec).str()}, {"angles", angles}});
    r.say(area(spec).str());
}

// ---------------------------------------------------------------------------
// coxeter

std::size_t cap_of(const Config& c) { return static_cast<std::size_t>(get_int(c, "cap", 2000000, 1)); }

void cmd_coxeter_ball(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    int radius = get_int(c, "radius", 4, 0, 60);
    CoxeterBall ball(spec, radius, cap_of(c));
    int interior = 0;
    for (auto& v : ball.vertices()) interior += v.interior;
    json sphere = json::array();
    std::vector<long long> counts(radius + 1, 0);
    for (int i = 0; i < ball.size(); ++i) counts[ball.len(i)]++;
    for (auto n : counts) sphere.push_back(n);
    r.results.push_back({{"radius", radius},
                         {"chambers", ball.size()},
                         {"edges", ball.edges().size()},
                         {"vertices", ball.vertices().size()},
                         {"interior_vertices", interior},
                         {"walls", ball.walls().size()},
                         {"sphere_sizes", sphere}});
    r.say("chambers " + std::to_string(ball.size()) + ", edges " + std::to_string(ball.edges().size()) +
          ", vertices " + std::to_string(ball.vertices().size()) + ", walls " + std::to_string(ball.walls().size()));
    if (c.count("export")) write_file(c.at("export"), ball.export_complex());
}

void cmd_coxeter_walls(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    int radius = get_int(c, "radius", 3, 0, 60);
    CoxeterBall ball(spec, radius, cap_of(c));
    for (auto& w : ball.walls()) {
        r.results.push_back({{"reflection", word_str(w.reflection)},
                             {"label", w.label + 1},
                             {"type", w.type + 1},
                             {"edges", w.edges.size()}});
        r.say(word_str(w.reflection) + " label " + std::to_string(w.label + 1) + " type " + std::to_string(w.type + 1) +
              " edges " + std::to_string(w.edges.size()));
    }
}

// ---------------------------------------------------------------------------
// genpoly

GenPolygon polygon_of(const Config& c) {
    try {
        return construct(require(c, "kind"));
    } catch (const GenPolyFailure& e) {
        throw UsageError(e.what());
    }
}

json polygon_json(const GenPolygon& L) {
    int pts = 0;
    for (int col : L.graph.color) pts += col == 0;
    return {{"m", L.m},         {"points", pts},    {"lines", L.graph.size() - pts},
            {"flags", L.graph.edges.size()}, {"s", L.s}, {"t", L.t},
            {"thick", L.thick}, {"apartments", L.apartments.size()}};
}

void cmd_genpoly_construct(const Config& c, Report& r) {
    auto L = polygon_of(c);
    r.results.push_back(polygon_json(L));
    r.say("m=" + std::to_string(L.m) + " s=" + std::to_string(L.s) + " t=" + std::to_string(L.t) + " vertices " +
          std::to_string(L.graph.size()) + " apartments " + std::to_string(L.apartments.size()));
    if (c.count("export")) write_file(c.at("export"), write_exchange(L.graph));
}

void cmd_genpoly_verify(const Config& c, Report& r) {
    BipartiteGraph g;
    int m;
    if (c.count("input")) {
        try {
            g = read_exchange(read_file(c.at("input")));
        } catch (const GenPolyFailure& e) {
            throw UsageError(e.what());
        }
        m = get_int(c, "m", 0, 2, 8);
        if (!c.count("m")) throw UsageError("missing required option --m");
    } else {
        auto L = polygon_of(c);
        g = L.graph;
        m = get_int(c, "m", L.m, 2, 8);
    }
    auto rep = verify(g, m);
    json res{{"ok", rep.ok}, {"code", to_string(rep.code)}, {"prefilter_ok", rep.prefilter_ok}};
    if (rep.ok) res["polygon"] = polygon_json(rep.polygon);
    r.results.push_back(res);
    if (!rep.ok) r.witness({{"code", to_string(rep.code)}, {"detail", rep.witness}, {"ids", rep.witness_ids}});
    r.verdict("generalized-" + std::to_string(m) + "-gon", rep.ok, rep.ok ? "" : rep.witness);
}

void cmd_genpoly_opposites(const Config& c, Report& r) {
    auto L = polygon_of(c);
    const int n = L.graph.size();
    std::vector<std::vector<int>> d(n);
    for (int v = 0; v < n; ++v) d[v] = L.graph.distances(v);
    long long checked = 0, bad = 0;
    if (L.m == 3 || L.m == 4) {
        for (std::size_t ai = 0; ai < L.apartments.size(); ++ai)
            for (int type = 0; type < 2; ++type) {
                ++checked;
                try {
                    int w = apartment_opposite_vertex(L, L.apartments[ai], type);
                    for (int a : L.apartments[ai])
                        if (L.graph.color[a] == type && d[a][w] != L.m) throw GenPolyFailure(GenPolyError::NoneFound, "");
                } catch (const GenPolyFailure&) {
                    ++bad;
                    r.witness({{"apartment", ai}, {"type", type}});
                }
            }
        r.verdict("apartment-opposite-vertex", bad == 0,
                  std::to_string(checked) + " apartment/type pairs, " + std::to_string(bad) + " failures");
    } else {
        r.say("apartment scan skipped: m = " + std::to_string(L.m) + " (m in {3,4} only)");
    }
    long long pairs = 0, pbad = 0;
    for (int v1 = 0; v1 < n; ++v1)
        for (int v2 = v1 + 1; v2 < n; ++v2) {
            if (L.graph.color[v1] != L.graph.color[v2]) continue;
            ++pairs;
            try {
                int w = common_opposite(L, v1, v2);
                if (d[v1][w] != L.m || d[v2][w] != L.m) throw GenPolyFailure(GenPolyError::NoneFound, "");
            } catch (const GenPolyFailure&) {
                ++pbad;
                r.witness({{"v1", v1}, {"v2", v2}});
            }
        }
    r.verdict("common-opposite-vertex", pbad == 0,
              std::to_string(pairs) + " same-type pairs, " + std::to_string(pbad) + " failures");
    r.results.push_back({{"apartment_checks", checked}, {"pair_checks", pairs}});
}

void cmd_genpoly_chain(const Config& c, Report& r) {
    auto L = polygon_of(c);
    const int na = static_cast<int>(L.apartments.size());
    long long chains = 0, bad = 0;
    int longest = 0;
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
            auto ch = apartment_chain(L, L.apartments[a], L.apartments[b]);
            ++chains;
            bool ok = !ch.empty() && ch.front() == L.apartments[a] && ch.back() == L.apartments[b];
            for (std::size_t i = 0; ok && i + 1 < ch.size(); ++i) {
                bool path = false;
                int len = shared_path_length(L.graph, ch[i], ch[i + 1], &path);
                ok = path && len == L.m;
            }
            if (a == b) ok = ok && ch.size() == 1;
            longest = std::max(longest, static_cast<int>(ch.size()) - 1);
            if (!ok) {
                ++bad;
                if (bad <= 10) r.witness({{"from", a}, {"to", b}, {"length", ch.size()}});
            }
        }
    r.results.push_back({{"apartments", na}, {"chains", chains}, {"longest", longest}});
    r.verdict("half-apartment-chain", bad == 0,
              std::to_string(chains) + " apartment pairs, longest chain " + std::to_string(longest) + ", " +
                  std::to_string(bad) + " failures");
}

// ---------------------------------------------------------------------------
// building

ColoredWord colored_of(const std::string& s) {
    try {
        if (s.find('(') != std::string::npos || trim(s) == "e") return parse_colored(s);
        ColoredWord w;
        for (int g : parse_word(s)) w.push_back({g, 1});
        return w;
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad chamber word: ") + e.what());
    }
}

void check_word(const ChamberSpec& spec, const ColoredWord& w, bool colored) {
    for (auto& l : w) {
        if (l.gen < 0 || l.gen >= spec.k) throw UsageError("generator out of range in chamber word");
        if (colored && (l.color < 1 || l.color > spec.q[l.gen])) throw UsageError("colour out of range in chamber word");
    }
}

void cmd_building_ball(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    int radius = get_int(c, "radius", 3, 0, 30);
    BuildingBall B(spec, radius, cap_of(c));
    int interior = 0, good = 0;
    for (int v = 0; v < static_cast<int>(B.vertices().size()); ++v) {
        if (!B.vertices()[v].interior) continue;
        ++interior;
        auto rep = verify(B.link(v), spec.m[B.vertices()[v].type]);
        if (rep.ok) ++good;
        else r.witness({{"vertex", v}, {"detail", rep.witness}});
    }
    r.results.push_back({{"radius", radius},
                         {"chambers", B.size()},
                         {"edges", B.edges().size()},
                         {"vertices", B.vertices().size()},
                         {"interior_vertices", interior}});
    r.verdict("interior-links-are-generalized-polygons", good == interior,
              std::to_string(good) + "/" + std::to_string(interior));
    if (c.count("export")) write_file(c.at("export"), B.export_complex());
}

void cmd_building_verify(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    std::string text = read_file(require(c, "input"));
    LocalReport rep;
    try {
        rep = verify_building_local(text, spec);
    } catch (const ComplexFormatError& e) {
        throw UsageError(e.what());
    }
    r.results.push_back({{"faces", rep.faces},
                         {"interior_edges", rep.interior_edges},
                         {"interior_vertices", rep.interior_vertices},
                         {"note", rep.note}});
    for (auto& v : rep.violations) r.witness({{"kind", v.kind}, {"id", v.id}, {"detail", v.detail}});
    r.verdict("local-building-structure", rep.ok, std::to_string(rep.violations.size()) + " violations");
}

void cmd_building_retract(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    RAGroup G(spec);
    ColoredWord C = G.normal_form(colored_of(get_str(c, "base", "e")));
    ColoredWord E = G.normal_form(colored_of(get_str(c, "through", get_str(c, "base", "e"))));
    ColoredWord D = G.normal_form(colored_of(require(c, "a")));
    check_word(spec, C, true);
    check_word(spec, E, true);
    check_word(spec, D, true);
    auto A = apartment_through(G, C, E);
    auto img = retraction(G, A, C, D);
    bool fixed = !apartment_contains(G, A, D) || img == D;
    bool label = G.type(G.multiply(G.inverse(C), img)) == G.type(G.multiply(G.inverse(C), D));
    r.results.push_back({{"center", colored_str(C)}, {"chamber", colored_str(D)}, {"image", colored_str(img)},
                         {"apartment", A.serialize()}});
    r.say(colored_str(img));
    r.verdict("fixes-apartment", fixed);
    r.verdict("preserves-distance-from-center", label);
}

// ---------------------------------------------------------------------------
// metrics

bool building_host(const Config& c) {
    std::string h = get_str(c, "host", "apartment");
    if (h != "apartment" && h != "building") throw UsageError("host must be apartment or building");
    return h == "building";
}

std::vector<int> weights_of(const Config& c, const ChamberSpec& spec) {
    std::vector<int> w;
    if (c.count("weights")) {
        w = int_list(c.at("weights"), "weights");
    } else {
        for (int q : spec.q) w.push_back(std::max(q, 2));
    }
    if (static_cast<int>(w.size()) != spec.k) throw UsageError("weights needs k entries");
    for (int x : w)
        if (x < 2) throw UsageError("weights must be >= 2");
    return w;
}

MetricHost host_of(const Config& c, const ChamberSpec& spec, int radius) {
    if (building_host(c)) {
        if (!spec.right_angled()) throw UsageError("building host needs a right-angled chamber");
        for (int q : spec.q)
            if (q < 2) throw UsageError("building host needs q >= 2 on every label");
        return MetricHost::building(spec, radius);
    }
    return MetricHost::apartment(spec, weights_of(c, spec), radius);
}

ColoredWord host_word(const MetricHost& H, const std::string& s) {
    auto w = colored_of(s);
    check_word(H.spec(), w, H.is_building());
    if (!H.is_building())
        for (auto& l : w) l.color = 1;
    auto n = H.normal(w);
    if (H.length(n) > H.radius()) throw UsageError("chamber " + s + " lies outside the ball");
    return n;
}

RaySpec ray_text(const MetricHost& H, const ApartmentColoring& A, const std::string& text) {
    try {
        if (text.rfind("edge:", 0) == 0) {
            auto f = split(text.substr(5), ':');
            if (f.size() != 4) throw std::invalid_argument("");
            int label = std::stoi(f[0]) - 1;
            if (label < 0 || label >= H.spec().k) throw std::invalid_argument("");
            return edge_ray(H, A, label, std::stod(f[1]), std::stoi(f[2]), std::stod(f[3]));
        }
        return center_ray(A, std::stod(text));
    } catch (const std::exception&) {
        throw UsageError("bad ray '" + text + "'");
    }
}

RaySpec ray_of(const MetricHost& H, const ApartmentColoring& A, const std::string& text, double eps) {
    RaySpec r = ray_text(H, A, text);
    r.eps = eps;
    return r;
}


json weight_json(const WeightVector& w) {
    json t = json::array();
    for (auto [p, h] : w.terms()) t.push_back({{"prime", p}, {"half_units", h}});
    return {{"value", w.str()}, {"numeric", static_cast<double>(w.value())}, {"terms", t}};
}

void cmd_metrics_dist(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 4, 0, 30));
    auto a = host_word(H, require(c, "a")), b = host_word(H, get_str(c, "b", "e"));
    auto d = H.dist(a, b);
    r.results.push_back({{"a", colored_str(a)}, {"b", colored_str(b)}, {"dist", weight_json(d)}});
    r.say(d.str());
}

void cmd_metrics_gromov(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 4, 0, 30));
    auto a = host_word(H, require(c, "a")), b = host_word(H, require(c, "b"));
    auto C = host_word(H, get_str(c, "base", "e"));
    auto g = H.gromov(a, b, C);
    r.results.push_back({{"a", colored_str(a)}, {"b", colored_str(b)}, {"base", colored_str(C)}, {"gromov", weight_json(g)}});
    r.say(g.str());
}

ApartmentColoring apartment_of(const MetricHost& H, std::mt19937_64& rng) { return random_apartment(H, rng); }

void cmd_metrics_busemann(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 4, 0, 30));
    std::mt19937_64 rng(static_cast<unsigned long long>(get_int(c, "seed", 1)));
    auto A = apartment_of(H, rng);
    auto rays = split(get_str(c, "ray", "0.3"), ';');
    if (rays.size() != 1) throw UsageError("busemann needs exactly one ray");
    auto xi = make_ray(H, ray_of(H, A, rays[0], get_double(c, "eps", -1)));
    auto C = host_word(H, get_str(c, "a", "e")), D = host_word(H, get_str(c, "b", "e"));
    auto s = busemann(H, xi, C, D);
    r.results.push_back({{"ray", rays[0]}, {"a", colored_str(C)}, {"b", colored_str(D)}, {"busemann", weight_json(s.value)},
                         {"stabilized_at", s.index}, {"horizon", s.horizon}});
    r.say(s.value.str());
}

void cmd_metrics_crossratio(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 4, 0, 30));
    std::mt19937_64 rng(static_cast<unsigned long long>(get_int(c, "seed", 1)));
    std::vector<std::string> texts = split(get_str(c, "ray"), ';');
    std::vector<Ray> rays;
    if (texts.empty()) {
        std::uniform_real_distribution<double> th(0, 2 * std::numbers::pi);
        for (int i = 0; i < 4; ++i) {
            auto A = apartment_of(H, rng);
            double t = th(rng);
            std::ostringstream os;
            os.precision(17);
            os << t;
            texts.push_back(os.str());
            auto spec_ray = center_ray(A, t);
            spec_ray.eps = get_double(c, "eps", -1);
            rays.push_back(make_ray(H, spec_ray));
        }
    } else {
        if (texts.size() != 4) throw UsageError("crossratio needs four rays");
        for (auto& t : texts) {
            auto A = apartment_of(H, rng);
            rays.push_back(make_ray(H, ray_of(H, A, t, get_double(c, "eps", -1))));
        }
    }
    auto C = host_word(H, get_str(c, "base", "e"));
    auto v = cross_ratio(H, rays[0], rays[1], rays[2], rays[3], C);
    r.results.push_back({{"rays", texts}, {"base", colored_str(C)}, {"cross_ratio", weight_json(v)}});
    r.say(v.str());
}

void cmd_metrics_growth(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    int radius = get_int(c, "radius", 6, 0, 30);
    DualGraph G = building_host(c) ? DualGraph::of(BuildingBall(spec, radius, cap_of(c)))
                                   : DualGraph::of(CoxeterBall(spec, radius, cap_of(c), false), weights_of(c, spec));
    int nmax = get_int(c, "nmax", 4, 0, 100);
    auto t = tau_estimate(G, nmax);
    bool mono = !t.a.empty() && t.a[0] == 1;
    for (std::size_t i = 1; i < t.a.size(); ++i) mono = mono && t.a[i] >= t.a[i - 1];
    r.results.push_back({{"a", t.a}, {"tau", t.tau}, {"converged", t.converged},
                         {"note", "finite horizon: a(n) counts chambers of the ball only"}});
    std::string line = "a =";
    for (auto x : t.a) line += " " + std::to_string(x);
    r.say(line);
    r.verdict("growth-nondecreasing-from-one", mono);
}

void cmd_metrics_detect_skeleton(const Config& c, Report& r, bool generic) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 5, 1, 30));
    int label = get_int(c, "label", 1, 1, spec.k) - 1;
    auto rep = detect_skeleton_experiment(H, !generic, label, get_int(c, "samples", 40, 1),
                                          static_cast<unsigned long long>(get_int(c, "seed", 1)));
    json samples = json::array();
    for (auto& s : rep.samples) {
        json j{{"rays", s.rays}};
        if (s.value) j["value"] = weight_json(*s.value);
        if (!s.failure.empty()) j["failure"] = s.failure;
        samples.push_back(j);
    }
    r.results.push_back({{"skeleton", rep.skeleton}, {"label", label + 1}, {"observed", rep.observed},
                         {"rejected", rep.rejected}, {"samples", samples}});
    if (!rep.pass) r.witness({{"observed", rep.observed}, {"detail", rep.detail}});
    r.verdict(generic ? "generic-line-values-zero" : "wall-values-detect-skeleton", rep.pass, rep.detail);
}

void cmd_metrics_detect_side(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto H = host_of(c, spec, get_int(c, "radius", 5, 1, 30));
    int label = get_int(c, "label", 1, 1, spec.k) - 1;
    auto rep = detect_side_experiment(H, label, get_int(c, "configs", 27, 1), get_int(c, "samples", 6, 1),
                                      static_cast<unsigned long long>(get_int(c, "seed", 1)));
    json cfgs = json::array();
    for (auto& s : rep.configs) {
        json j{{"side1", s.side1}, {"side2", s.side2}, {"same_side", s.combinatorial_same},
               {"distinct_values", s.distinct_values}, {"agree", s.agree}, {"values", s.values}};
        if (!s.failure.empty()) j["failure"] = s.failure;
        cfgs.push_back(j);
        if (!s.agree) r.witness(j);
    }
    r.results.push_back({{"label", label + 1}, {"configs", cfgs}});
    r.verdict("side-detection-agrees", rep.pass, rep.detail);
}

// ---------------------------------------------------------------------------
// catalog and rendering

json entry_json(const CatalogEntry& e) {
    json angles = json::array(), sides = json::array(), words = json::array();
    for (auto& k : e.corner) {
        angles.push_back(k.angle().str());
        sides.push_back(k.side_after);
    }
    for (auto& w : e.chambers) words.push_back(word_str(w));
    return {{"id", e.id},
            {"n", e.n},
            {"defect", e.d.str()},
            {"angles", angles},
            {"sides", sides},
            {"all_even", e.all_even()},
            {"gauss_bonnet", e.gauss_bonnet},
            {"special_points", e.special_points},
            {"chambers", words}};
}

// ball large enough to hold every chamber of the entries, and the chamber ids of each entry
std::pair<std::unique_ptr<CoxeterBall>, std::vector<std::vector<int>>> place(const ChamberSpec& spec,
                                                                               const std::vector<CatalogEntry>& es) {
    CoxeterGroup W(spec);
    int radius = 1;
    for (auto& e : es)
        for (auto& w : e.chambers) radius = std::max(radius, W.length(w));
    auto ball = std::make_unique<CoxeterBall>(spec, radius + 1);
    std::vector<std::vector<int>> ids;
    for (auto& e : es) {
        std::vector<int> v;
        for (auto& w : e.chambers) v.push_back(ball->find_any(w));
        ids.push_back(v);
    }
    return {std::move(ball), ids};
}

void write_entry_svgs(const ChamberSpec& spec, const std::vector<CatalogEntry>& es, const std::string& dir,
                      const std::string& prefix, Report& r) {
    if (es.empty()) return;
    auto [ball, ids] = place(spec, es);
    auto R = realize(*ball);
    for (std::size_t i = 0; i < es.size(); ++i) {
        Overlays ov;
        ov.disks.push_back(ids[i]);
        std::string path = dir + "/" + prefix + "_" + std::to_string(i) + ".svg";
        write_file(path, render_svg(R, ov));
        r.say("wrote " + path);
    }
}

void cmd_catalog(const Config& c, Report& r, int corners) {
    auto spec = chamber_of(c);
    SearchStats st;
    auto es = corners == 3 ? enumerate_triangles(spec, &st) : enumerate_quads(spec, &st);
    json arr = json::array();
    for (auto& e : es) {
        arr.push_back(entry_json(e));
        r.say(entry_summary(e));
    }
    r.results.push_back({{"spec", spec.str()}, {"area_cap", st.cap}, {"classes", es.size()}, {"entries", arr}});
    if (es.empty()) r.say("empty catalog");
    if (corners == 3 && spec.k >= 4) r.verdict("no-triangle-unless-triangular-chamber", es.empty());
    if (corners == 4 && spec.k >= 5) r.verdict("no-quadrilateral-for-k-at-least-5", es.empty());
    if (c.count("svg")) write_entry_svgs(spec, es, c.at("svg"), corners == 3 ? "triangle" : "quad", r);
}

void cmd_catalog_claims(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    auto rep = claims_check(spec);
    r.results.push_back({{"spec", spec.str()}, {"triangles", rep.triangles.size()}, {"quads", rep.quads.size()}});
    for (auto& cl : rep.claims) {
        if (!cl.applicable) {
            r.results.push_back({{"claim", cl.name}, {"applicable", false}, {"detail", cl.detail}});
            r.say("n/a  " + cl.name);
            continue;
        }
        r.verdict(cl.name, cl.pass, cl.detail);
        if (!cl.pass) r.witness({{"claim", cl.name}, {"entries", cl.witnesses}});
    }
}

void cmd_render(const Config& c, Report& r) {
    auto spec = chamber_of(c);
    int radius = get_int(c, "radius", 4, 0, 30);
    std::string out = require(c, "svg");
    Overlays ov;
    std::unique_ptr<CoxeterBall> ball;
    if (c.count("disk")) {
        auto f = split(c.at("disk"), ':');
        if (f.size() != 2 || (f[0] != "triangle" && f[0] != "quad")) throw UsageError("disk must be triangle:<i> or quad:<i>");
        auto es = f[0] == "triangle" ? enumerate_triangles(spec) : enumerate_quads(spec);
        int i = get_int({{"disk", f[1]}}, "disk", 0, 0);
        if (i >= static_cast<int>(es.size())) throw UsageError("catalog has " + std::to_string(es.size()) + " entries");
        auto placed = place(spec, {es[i]});
        if (placed.first->radius() > radius) radius = placed.first->radius();
        ball = std::make_unique<CoxeterBall>(spec, radius);
        std::vector<int> ids;
        for (auto& w : es[i].chambers) ids.push_back(ball->find_any(w));
        ov.disks.push_back(ids);
    } else {
        ball = std::make_unique<CoxeterBall>(spec, radius, cap_of(c));
    }
    for (auto& w : split(get_str(c, "wall"), ';')) {
        Word refl;
        try {
            refl = ball->group().reduce(parse_word(w));
        } catch (const std::exception&) {
            throw UsageError("bad wall word '" + w + "'");
        }
        int id = ball->wall_of_reflection(refl);
        if (id < 0) throw UsageError("wall '" + w + "' is not a reflection wall inside the ball");
        ov.walls.push_back(id);
    }
    auto R = realize(*ball);
    for (auto& t : split(get_str(c, "ray"), ';')) {
        double theta = get_double({{"ray", t}}, "ray", 0);
        HPoint o;
        HPoint u = tangent_at(o, theta);
        std::vector<HPoint> pts;
        for (int s = 0; s <= 200; ++s) pts.push_back(geodesic_point(o, u, 0.05 * s));
        ov.rays.push_back(pts);
    }
    std::string svg = render_svg(R, ov);
    write_file(out, svg);
    std::size_t faces = 0;
    for (std::size_t p = svg.find("class=\"chamber\""); p != std::string::npos; p = svg.find("class=\"chamber\"", p + 1))
        ++faces;
    r.results.push_back({{"svg", out}, {"chambers", ball->size()}, {"faces", faces}});
    r.say("wrote " + out + " (" + std::to_string(ball->size()) + " chambers)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuchsian building toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    bool as_json = false, timings = false;
    std::map<std::string, std::string> store;
    std::vector<std::pair<std::string, CLI::Option*>> flags;
    std::function<void(const Config&, Report&)> action;
    std::string command;

    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help,
                    std::vector<std::string> keys, std::function<void(const Config&, Report&)> fn) {
        auto* sub = parent->add_subcommand(name, help);
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_flag("--json", as_json, "print the JSON report instead of text");
        sub->add_flag("--timings", timings, "include wall-clock timings in the report");
        keys.push_back("out");
        for (auto& k : keys) {
            std::string help_text;
            for (auto& [kk, h] : kKeys)
                if (kk == k) help_text = h;
            flags.push_back({k, sub->add_option("--" + k, store[k], help_text)});
        }
        std::string full = parent == &app ? name : parent->get_name() + " " + name;
        sub->callback([&, fn, full] {
            action = fn;
            command = full;
        });
        return sub;
    };
    auto group = [&](const std::string& name, const std::string& help) {
        auto* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };

    const std::vector<std::string> metric_keys{"chamber", "host", "radius", "weights", "seed"};
    auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };

    auto* ch = group("chamber", "chamber specs");
    leaf(ch, "validate", "check a chamber spec", {"chamber"}, cmd_chamber_validate);
    leaf(ch, "area", "chamber area", {"chamber"}, cmd_chamber_area);
    auto* cx = group("coxeter", "Coxeter complex");
    leaf(cx, "ball", "gallery ball", {"chamber", "radius", "cap", "export"}, cmd_coxeter_ball);
    leaf(cx, "walls", "walls of a ball", {"chamber", "radius", "cap"}, cmd_coxeter_walls);
    auto* gp = group("genpoly", "generalized polygons");
    leaf(gp, "construct", "build a polygon", {"kind", "export"}, cmd_genpoly_construct);
    leaf(gp, "verify", "verify polygon axioms", {"kind", "input", "m"}, cmd_genpoly_verify);
    leaf(gp, "opposites", "opposite-vertex scans", {"kind"}, cmd_genpoly_opposites);
    leaf(gp, "chain", "half-apartment chains", {"kind"}, cmd_genpoly_chain);
    auto* bd = group("building", "right-angled buildings");
    leaf(bd, "ball", "building ball", {"chamber", "radius", "cap", "export"}, cmd_building_ball);
    leaf(bd, "verify", "local structure of a complex", {"chamber", "input"}, cmd_building_verify);
    leaf(bd, "retract", "retraction onto an apartment", {"chamber", "base", "through", "a"}, cmd_building_retract);
    auto* mt = group("metrics", "distances and boundary quantities");
    leaf(mt, "dist", "chamber distance", with(metric_keys, {"a", "b"}), cmd_metrics_dist);
    leaf(mt, "gromov", "Gromov product", with(metric_keys, {"a", "b", "base"}), cmd_metrics_gromov);
    leaf(mt, "busemann", "Busemann cocycle", with(metric_keys, {"a", "b", "ray", "eps"}), cmd_metrics_busemann);
    leaf(mt, "crossratio", "cross ratio", with(metric_keys, {"base", "ray", "eps"}), cmd_metrics_crossratio);
    leaf(mt, "growth", "growth of balls", with(metric_keys, {"nmax", "cap"}), cmd_metrics_growth);
    auto* ds = leaf(mt, "detect-skeleton", "cross ratios near a wall", with(metric_keys, {"label", "samples"}),
                    [](const Config& c, Report& r) { cmd_metrics_detect_skeleton(c, r, c.count("generic") > 0); });
    bool generic = false;
    ds->add_flag("--generic", generic, "use a generic line instead of a wall");
    leaf(mt, "detect-side", "side detection", with(metric_keys, {"label", "samples", "configs"}), cmd_metrics_detect_side);
    auto* cg = group("catalog", "triangles and quadrilaterals");
    leaf(cg, "triangles", "triangle catalog", {"chamber", "svg"}, [](const Config& c, Report& r) { cmd_catalog(c, r, 3); });
    leaf(cg, "quads", "quadrilateral catalog", {"chamber", "svg"}, [](const Config& c, Report& r) { cmd_catalog(c, r, 4); });
    leaf(cg, "claims", "check catalog claims", {"chamber"}, cmd_catalog_claims);
    leaf(&app, "render", "SVG of a ball", {"chamber", "radius", "cap", "svg", "wall", "ray", "disk"}, cmd_render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Report report;
    report.command = command;
    try {
        Config cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        for (auto& [k, opt] : flags)
            if (opt->count() > 0) cfg[k] = store[k];
        if (generic) cfg["generic"] = "true";
        report.config = cfg;
        auto t0 = std::chrono::steady_clock::now();
        action(cfg, report);
        if (timings)
            report.timings["total_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string js = report.to_json().dump(2) + "\n";
        if (cfg.count("out")) write_file(cfg.at("out"), js);
        if (as_json) {
            std::cout << js;
        } else {
            for (auto& l : report.text) std::cout << l << "\n";
        }
        return report.failed ? 1 : 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceCap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MetricError& e) {
        std::cerr << "error: " << to_string(e.code) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
