#pragma once

// File formats and report documents. The native format is a single JSON
// document with nodes/triangles/boundary plus optional constrained edges;
// coordinates round-trip bit-exactly (shortest decimal via to_chars on the
// way out, correctly rounded strtod on the way in, and an optional hexfloat
// string encoding for byte-level interchange). A node/ele reader covers the
// classic mesh-file pair, with boundary indices in a sibling .bnd file.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tricheck/core.hpp"
#include "tricheck/delaunay.hpp"
#include "tricheck/pstv.hpp"

namespace tricheck {

inline constexpr const char* kToolName = "tricheck";
inline constexpr const char* kToolVersion = "0.1.0";

struct ParseError : std::runtime_error {
    std::size_t line;
    std::size_t column;
    ParseError(std::size_t l, std::size_t c, const std::string& reason)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) + ": " +
                             reason),
          line(l),
          column(c) {}
};

struct IndexBaseMismatchError : ParseError {
    IndexBaseMismatchError(std::size_t l, const std::string& reason) : ParseError(l, 1, reason) {}
};

enum class MeshFormat { NativeJson, TriangleNodeEle };
enum class CoordinateEncoding { Decimal, HexFloat };

struct MeshFile {
    MeshDataset dataset;
    std::vector<Edge> constrainedEdges;
    CoordinateEncoding encoding = CoordinateEncoding::Decimal;
};

namespace detail {

inline std::string double_to_decimal(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s == "-0") s = "-0.0";  // "-0" would parse as the integer 0
    return s;
}

// wall-clock seconds at the reports' 3-significant-digit granularity
inline std::string seconds_to_json(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

inline std::string double_to_hex(double v) {
    char buf[64];
    std::string out;
    if (std::signbit(v)) {
        out += '-';
        v = -v;
    }
    out += "0x";
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    out.append(buf, res.ptr);
    return out;
}

inline std::optional<double> parse_hex_double(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X')) return std::nullopt;
    s.remove_prefix(2);
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return neg ? -v : v;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::pair<std::size_t, std::size_t> line_col_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline double coordinate_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        if (auto v = parse_hex_double(j.get<std::string>())) return *v;
        throw ParseError(0, 0, "bad hexfloat coordinate '" + j.get<std::string>() + "'");
    }
    if (!j.is_number()) throw ParseError(0, 0, "coordinate is neither number nor hexfloat string");
    return j.get<double>();
}

}  // namespace detail

// FNV-1a 64-bit over raw bytes; used as the input digest in reports.
inline std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline MeshFile parse_native_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(line, col, e.what());
    }
    if (!j.is_object()) throw ParseError(1, 1, "top-level value must be an object");
    for (const char* field : {"nodes", "triangles", "boundary"})
        if (!j.contains(field) || !j[field].is_array())
            throw ParseError(1, 1, std::string("missing array field '") + field + "'");

    MeshFile f;
    for (const auto& n : j["nodes"]) {
        if (!n.is_array() || n.size() != 2) throw ParseError(0, 0, "node entry must be [x, y]");
        f.dataset.nodes.push_back(Point{detail::coordinate_from_json(n[0]),
                                        detail::coordinate_from_json(n[1])});
    }
    for (const auto& t : j["triangles"]) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            !t[2].is_number_integer())
            throw ParseError(0, 0, "triangle entry must be [i, j, k]");
        f.dataset.triangles.push_back(Triangle{t[0].get<VertId>(), t[1].get<VertId>(), t[2].get<VertId>()});
    }
    for (const auto& b : j["boundary"]) {
        if (!b.is_number_integer()) throw ParseError(0, 0, "boundary entry must be an integer");
        f.dataset.boundary.push_back(b.get<VertId>());
    }
    if (j.contains("constrained_edges")) {
        for (const auto& e : j["constrained_edges"]) {
            if (!e.is_array() || e.size() != 2) throw ParseError(0, 0, "constrained edge must be [a, b]");
            f.constrainedEdges.emplace_back(e[0].get<VertId>(), e[1].get<VertId>());
        }
    }
    if (j.contains("coordinate_encoding") && j["coordinate_encoding"] == "hexfloat")
        f.encoding = CoordinateEncoding::HexFloat;
    return f;
}

// Hand-rolled emitter so coordinate text is exactly what to_chars produces.
inline std::string emit_native_json(const MeshFile& f) {
    const bool hex = f.encoding == CoordinateEncoding::HexFloat;
    std::string out = "{\n  \"coordinate_encoding\": ";
    out += hex ? "\"hexfloat\"" : "\"decimal\"";
    out += ",\n  \"nodes\": [";
    for (std::size_t i = 0; i < f.dataset.nodes.size(); ++i) {
        const Point& p = f.dataset.nodes[i];
        out += i ? ",\n    [" : "\n    [";
        if (hex) {
            out += '"' + detail::double_to_hex(p.x) + "\", \"" + detail::double_to_hex(p.y) + '"';
        } else {
            out += detail::double_to_decimal(p.x) + ", " + detail::double_to_decimal(p.y);
        }
        out += ']';
    }
    out += "\n  ],\n  \"triangles\": [";
    for (std::size_t i = 0; i < f.dataset.triangles.size(); ++i) {
        const Triangle& t = f.dataset.triangles[i];
        out += i ? ",\n    [" : "\n    [";
        out += std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) + "]";
    }
    out += "\n  ],\n  \"boundary\": [";
    for (std::size_t i = 0; i < f.dataset.boundary.size(); ++i) {
        out += i ? ", " : "";
        out += std::to_string(f.dataset.boundary[i]);
    }
    out += "]";
    if (!f.constrainedEdges.empty()) {
        out += ",\n  \"constrained_edges\": [";
        for (std::size_t i = 0; i < f.constrainedEdges.size(); ++i) {
            out += i ? ", [" : "[";
            out += std::to_string(f.constrainedEdges[i].a) + ", " + std::to_string(f.constrainedEdges[i].b) +
                   "]";
        }
        out += "]";
    }
    out += "\n}\n";
    return out;
}

namespace detail {

struct TokenReader {
    std::istringstream in;
    std::size_t line = 0;
    std::string path;

    explicit TokenReader(const std::string& text) : in(text) {}

    // skips blank lines and '#' comments, Triangle-style
    bool next_line(std::vector<std::string>& tokens) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line;
            if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
            std::istringstream ls(raw);
            tokens.assign(std::istream_iterator<std::string>(ls), std::istream_iterator<std::string>());
            if (!tokens.empty()) return true;
        }
        return false;
    }
};

inline long to_long(const std::string& s, std::size_t line) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, 1, "expected integer, got '" + s + "'");
    return v;
}

inline double to_double(const std::string& s, std::size_t line) {
    if (auto v = parse_hex_double(s)) return *v;
    double v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(line, 1, "expected number, got '" + s + "'");
    return v;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ParseError(0, 0, "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

// Reads <base>.node / <base>.ele / <base>.bnd given the path of the .node
// file. Index base (0 or 1) is taken from the first node line; the other
// files must agree.
inline MeshFile parse_node_ele(const std::filesystem::path& nodePath) {
    MeshFile f;
    std::filesystem::path base = nodePath;
    base.replace_extension();

    long indexBase = 0;
    {
        detail::TokenReader r(detail::read_file(nodePath));
        std::vector<std::string> tok;
        if (!r.next_line(tok) || tok.size() < 2) throw ParseError(r.line, 1, "bad .node header");
        const long count = detail::to_long(tok[0], r.line);
        if (detail::to_long(tok[1], r.line) != 2) throw ParseError(r.line, 1, "only 2-D nodes supported");
        for (long i = 0; i < count; ++i) {
            if (!r.next_line(tok) || tok.size() < 3) throw ParseError(r.line, 1, "bad node line");
            const long idx = detail::to_long(tok[0], r.line);
            if (i == 0) {
                if (idx != 0 && idx != 1) throw IndexBaseMismatchError(r.line, "first node index must be 0 or 1");
                indexBase = idx;
            } else if (idx != i + indexBase) {
                throw IndexBaseMismatchError(r.line, "node indices are not consecutive");
            }
            f.dataset.nodes.push_back(Point{detail::to_double(tok[1], r.line), detail::to_double(tok[2], r.line)});
        }
    }
    {
        detail::TokenReader r(detail::read_file(base.string() + ".ele"));
        std::vector<std::string> tok;
        if (!r.next_line(tok) || tok.size() < 2) throw ParseError(r.line, 1, "bad .ele header");
        const long count = detail::to_long(tok[0], r.line);
        if (detail::to_long(tok[1], r.line) != 3) throw ParseError(r.line, 1, "only 3-node triangles supported");
        for (long i = 0; i < count; ++i) {
            if (!r.next_line(tok) || tok.size() < 4) throw ParseError(r.line, 1, "bad element line");
            const long idx = detail::to_long(tok[0], r.line);
            if (i == 0 && idx != indexBase)
                throw IndexBaseMismatchError(r.line, ".ele index base differs from .node");
            Triangle t;
            for (int k = 0; k < 3; ++k)
                t[static_cast<std::size_t>(k)] =
                    static_cast<VertId>(detail::to_long(tok[static_cast<std::size_t>(k + 1)], r.line) - indexBase);
            f.dataset.triangles.push_back(t);
        }
    }
    {
        detail::TokenReader r(detail::read_file(base.string() + ".bnd"));
        std::vector<std::string> tok;
        while (r.next_line(tok))
            for (const std::string& s : tok)
                f.dataset.boundary.push_back(static_cast<VertId>(detail::to_long(s, r.line) - indexBase));
    }
    return f;
}

inline MeshFile load_mesh_file(const std::filesystem::path& path, MeshFormat format) {
    if (format == MeshFormat::NativeJson) return parse_native_json(detail::read_file(path));
    return parse_node_ele(path);
}

// --- report document ---------------------------------------------------

struct ReportFile {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::string inputPath;
    std::string inputDigest;
    std::optional<ValidationReport> validation;
    std::optional<DelaunayReport> delaunay;
};

inline std::string emit_report_json(const ReportFile& r) {
    std::string out = "{\n";
    out += "  \"tool\": \"" + detail::json_escape(r.tool) + "\",\n";
    out += "  \"version\": \"" + detail::json_escape(r.version) + "\",\n";
    out += "  \"input\": {\"path\": \"" + detail::json_escape(r.inputPath) + "\", \"digest\": \"fnv1a64:" +
           r.inputDigest + "\"}";
    if (r.validation) {
        const ValidationReport& v = *r.validation;
        out += ",\n  \"validation\": {\n";
        out += std::string("    \"verdict\": \"") + (v.verdict == Verdict::Valid ? "valid" : "invalid") +
               "\",\n";
        if (v.failure) {
            out += "    \"failure\": {\"kind\": \"" + std::string(to_string(v.failure->kind)) + "\"";
            if (v.failure->triangle >= 0) out += ", \"triangle\": " + std::to_string(v.failure->triangle);
            if (v.failure->edge)
                out += ", \"edge\": [" + std::to_string(v.failure->edge->a) + ", " +
                       std::to_string(v.failure->edge->b) + "]";
            out += ", \"detail\": \"" + detail::json_escape(v.failure->detail) + "\"},\n";
        }
        out += "    \"stats\": {\"ot_calls\": " + std::to_string(v.stats.ot_calls) +
               ", \"ot_fallbacks\": " + std::to_string(v.stats.ot_fallbacks) +
               ", \"ict_calls\": " + std::to_string(v.stats.ict_calls) +
               ", \"ict_fallbacks\": " + std::to_string(v.stats.ict_fallbacks) + "},\n";
        out += "    \"triangles_absorbed\": " + std::to_string(v.trianglesAbsorbed) + ",\n";
        out += "    \"boundary_length\": " + std::to_string(v.boundaryLength) + ",\n";
        out += "    \"elapsed_seconds\": " + detail::seconds_to_json(v.elapsedSeconds) + "\n  }";
    }
    if (r.delaunay) {
        const DelaunayReport& dl = *r.delaunay;
        out += ",\n  \"delaunay\": {\n    \"verdict\": \"";
        out += dl.verdict == DelaunayVerdict::AllDelaunay ? "all_delaunay" : "violations_found";
        out += "\",\n    \"violating_edges\": [";
        for (std::size_t i = 0; i < dl.violatingEdges.size(); ++i) {
            out += i ? ", [" : "[";
            out += std::to_string(dl.violatingEdges[i].a) + ", " + std::to_string(dl.violatingEdges[i].b) +
                   "]";
        }
        out += "],\n    \"flips_performed\": " + std::to_string(dl.flipsPerformed) + "\n  }";
    }
    out += "\n}\n";
    return out;
}

inline ReportFile parse_report_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col_of(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(line, col, e.what());
    }
    ReportFile r;
    r.tool = j.at("tool").get<std::string>();
    r.version = j.at("version").get<std::string>();
    r.inputPath = j.at("input").at("path").get<std::string>();
    std::string digest = j.at("input").at("digest").get<std::string>();
    if (auto p = digest.find(':'); p != std::string::npos) digest = digest.substr(p + 1);
    r.inputDigest = digest;
    if (j.contains("validation")) {
        const auto& jv = j["validation"];
        ValidationReport v;
        v.verdict = jv.at("verdict") == "valid" ? Verdict::Valid : Verdict::Invalid;
        if (jv.contains("failure")) {
            ValidationFailure f;
            const std::string kind = jv["failure"].at("kind").get<std::string>();
            for (FailureKind k :
                 {FailureKind::Precondition, FailureKind::EdgeSharedByThree, FailureKind::Orientation,
                  FailureKind::Overlap, FailureKind::IllegalAdjacency, FailureKind::UnreachableTriangles,
                  FailureKind::BoundaryMismatch})
                if (kind == to_string(k)) f.kind = k;
            if (jv["failure"].contains("triangle")) f.triangle = jv["failure"]["triangle"].get<TriId>();
            if (jv["failure"].contains("edge"))
                f.edge = Edge(jv["failure"]["edge"][0].get<VertId>(), jv["failure"]["edge"][1].get<VertId>());
            f.detail = jv["failure"].at("detail").get<std::string>();
            v.failure = f;
        }
        v.stats.ot_calls = jv.at("stats").at("ot_calls").get<std::uint64_t>();
        v.stats.ot_fallbacks = jv.at("stats").at("ot_fallbacks").get<std::uint64_t>();
        v.stats.ict_calls = jv.at("stats").at("ict_calls").get<std::uint64_t>();
        v.stats.ict_fallbacks = jv.at("stats").at("ict_fallbacks").get<std::uint64_t>();
        v.trianglesAbsorbed = jv.at("triangles_absorbed").get<std::size_t>();
        v.boundaryLength = jv.at("boundary_length").get<std::size_t>();
        v.elapsedSeconds = jv.at("elapsed_seconds").get<double>();
        r.validation = v;
    }
    if (j.contains("delaunay")) {
        const auto& jd = j["delaunay"];
        DelaunayReport dl;
        dl.verdict = jd.at("verdict") == "all_delaunay" ? DelaunayVerdict::AllDelaunay
                                                        : DelaunayVerdict::ViolationsFound;
        for (const auto& e : jd.at("violating_edges"))
            dl.violatingEdges.emplace_back(e[0].get<VertId>(), e[1].get<VertId>());
        dl.flipsPerformed = jd.at("flips_performed").get<std::size_t>();
        r.delaunay = dl;
    }
    return r;
}

}  // namespace tricheck
