#pragma once

// Dataset model for 2D triangulations: the node set, the triangle index
// triples, the clockwise boundary cycle, and the mutable polygon state the
// validator grows. Everything here is index arithmetic; geometry lives in
// predicates.hpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace tricheck {

using VertId = std::int32_t;
using TriId = std::int32_t;
using Triangle = std::array<VertId, 3>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Geometric equality: -0.0 and +0.0 name the same point.
inline bool same_point(Point a, Point b) {
    return a.x == b.x && a.y == b.y;
}

inline bool point_is_finite(Point p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

// Input dataset: nodes, triangles as index triples, boundary as a clockwise
// cycle of node indices. Indices are 0-based; file readers convert.
struct MeshDataset {
    std::vector<Point> nodes;
    std::vector<Triangle> triangles;
    std::vector<VertId> boundary;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t triangle_count() const { return triangles.size(); }
};

// Undirected edge key, stored canonically with a < b.
struct Edge {
    VertId a = -1;
    VertId b = -1;

    Edge() = default;
    Edge(VertId u, VertId v) : a(u < v ? u : v), b(u < v ? v : u) {}

    bool operator==(const Edge&) const = default;
    bool operator<(const Edge& o) const {
        return a != o.a ? a < o.a : b < o.b;
    }

    std::uint64_t packed() const {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
               static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
    }
};

struct EdgeHash {
    std::size_t operator()(const Edge& e) const {
        // splitmix64 finisher on the packed key
        std::uint64_t x = e.packed() + 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

struct PreconditionViolation {
    enum class Code {
        DatasetTooSmall,
        NonFiniteCoordinate,
        DuplicateNode,
        IndexOutOfRange,
        DegenerateTriangleIndices,
        MalformedBoundary,
    };
    Code code;
    std::int64_t first = -1;   // offending node/triangle/boundary position
    std::int64_t second = -1;  // second participant where applicable
    std::string message;
};

namespace detail {

inline double canonical_zero(double v) { return v == 0.0 ? 0.0 : v; }

struct PointKeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const {
        std::uint64_t x = k.first * 0x9e3779b97f4a7c15ULL ^ (k.second + 0x7f4a7c15ULL);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

inline std::pair<std::uint64_t, std::uint64_t> point_key(Point p) {
    std::uint64_t kx, ky;
    double cx = canonical_zero(p.x), cy = canonical_zero(p.y);
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&kx, &cx, sizeof kx);
    std::memcpy(&ky, &cy, sizeof ky);
    return {kx, ky};
}

}  // namespace detail

// Checks every dataset invariant; returns the first violation in scan order
// (sizes, node finiteness/uniqueness, triangle indices, boundary shape).
inline std::optional<PreconditionViolation> validate_dataset_preconditions(const MeshDataset& d) {
    using Code = PreconditionViolation::Code;
    const auto np = static_cast<std::int64_t>(d.nodes.size());
    const auto nt = static_cast<std::int64_t>(d.triangles.size());
    if (np < 3)
        return PreconditionViolation{Code::DatasetTooSmall, np, -1, "need at least 3 nodes"};
    if (nt < 1)
        return PreconditionViolation{Code::DatasetTooSmall, nt, -1, "need at least 1 triangle"};

    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, detail::PointKeyHash> seen;
    seen.reserve(d.nodes.size() * 2);
    for (std::int64_t i = 0; i < np; ++i) {
        if (!point_is_finite(d.nodes[i]))
            return PreconditionViolation{Code::NonFiniteCoordinate, i, -1,
                                         "node " + std::to_string(i) + " has a non-finite coordinate"};
        auto [it, fresh] = seen.insert(detail::point_key(d.nodes[i]));
        if (!fresh) {
            // rescan for the earlier twin so the report names both
            std::int64_t j = 0;
            while (!same_point(d.nodes[j], d.nodes[i])) ++j;
            return PreconditionViolation{Code::DuplicateNode, j, i,
                                         "nodes " + std::to_string(j) + " and " + std::to_string(i) +
                                             " coincide"};
        }
    }

    for (std::int64_t t = 0; t < nt; ++t) {
        const Triangle& tri = d.triangles[t];
        for (VertId v : tri)
            if (v < 0 || v >= np)
                return PreconditionViolation{Code::IndexOutOfRange, t, v,
                                             "triangle " + std::to_string(t) + " references node " +
                                                 std::to_string(v)};
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            return PreconditionViolation{Code::DegenerateTriangleIndices, t, -1,
                                         "triangle " + std::to_string(t) + " repeats a node index"};
    }

    if (d.boundary.size() < 3)
        return PreconditionViolation{Code::MalformedBoundary, static_cast<std::int64_t>(d.boundary.size()),
                                     -1, "boundary needs at least 3 entries"};
    std::unordered_set<VertId> bseen;
    bseen.reserve(d.boundary.size() * 2);
    for (std::size_t i = 0; i < d.boundary.size(); ++i) {
        VertId v = d.boundary[i];
        if (v < 0 || v >= np)
            return PreconditionViolation{Code::IndexOutOfRange, static_cast<std::int64_t>(i), v,
                                         "boundary entry " + std::to_string(i) + " references node " +
                                             std::to_string(v)};
        if (!bseen.insert(v).second)
            return PreconditionViolation{Code::MalformedBoundary, static_cast<std::int64_t>(i), v,
                                         "boundary visits node " + std::to_string(v) + " twice"};
    }
    return std::nullopt;
}

// True iff one cycle is a rotation of the other (same direction, no
// reflection). Implemented by doubling one sequence and substring-searching
// the other.
inline bool boundary_cycles_equivalent(const std::vector<VertId>& a, const std::vector<VertId>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<VertId> doubled(a);
    doubled.insert(doubled.end(), a.begin(), a.end());
    return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

// Boundary cycle of the growing polygon: a linked ring over node ids (each
// node appears at most once) plus the validator's cursor. Single-owner
// mutable state; everything else in this header is a value type.
class BoundaryCycle {
  public:
    BoundaryCycle() = default;

    // Ring seeded with the reverse of a counterclockwise triangle, which is
    // the clockwise boundary of that triangle.
    BoundaryCycle(std::size_t nodeCount, const Triangle& ccwTriangle)
        : next_(nodeCount, kAbsent), prev_(nodeCount, kAbsent) {
        const VertId v0 = ccwTriangle[0], v1 = ccwTriangle[2], v2 = ccwTriangle[1];
        link(v0, v1);
        link(v1, v2);
        link(v2, v0);
        size_ = 3;
        cursor_ = v0;
    }

    static BoundaryCycle from_sequence(std::size_t nodeCount, const std::vector<VertId>& cycle) {
        BoundaryCycle c;
        c.next_.assign(nodeCount, kAbsent);
        c.prev_.assign(nodeCount, kAbsent);
        for (std::size_t i = 0; i < cycle.size(); ++i)
            c.link(cycle[i], cycle[(i + 1) % cycle.size()]);
        c.size_ = cycle.size();
        c.cursor_ = cycle.empty() ? kAbsent : cycle[0];
        return c;
    }

    bool contains(VertId v) const { return next_[static_cast<std::size_t>(v)] != kAbsent; }
    VertId next(VertId v) const { return next_[static_cast<std::size_t>(v)]; }
    VertId prev(VertId v) const { return prev_[static_cast<std::size_t>(v)]; }
    std::size_t size() const { return size_; }

    VertId cursor() const { return cursor_; }
    void set_cursor(VertId v) { cursor_ = v; }
    void advance_cursor() { cursor_ = next(cursor_); }

    bool edge_on_cycle(VertId u, VertId v) const {
        return contains(u) && contains(v) && (next(u) == v || next(v) == u);
    }

    // Insert c between consecutive u -> v.
    void insert_between(VertId u, VertId v, VertId c) {
        link(u, c);
        link(c, v);
        ++size_;
    }

    // Unlink v, joining its neighbors.
    void erase(VertId v) {
        const VertId p = prev(v), n = next(v);
        next_[static_cast<std::size_t>(v)] = kAbsent;
        prev_[static_cast<std::size_t>(v)] = kAbsent;
        link(p, n);
        --size_;
        if (cursor_ == v) cursor_ = p;
    }

    // Cycle as a sequence starting at the smallest member, for deterministic
    // comparison and reporting.
    std::vector<VertId> to_sequence() const {
        std::vector<VertId> out;
        out.reserve(size_);
        VertId start = kAbsent;
        for (std::size_t v = 0; v < next_.size(); ++v) {
            if (next_[v] != kAbsent) {
                start = static_cast<VertId>(v);
                break;
            }
        }
        if (start == kAbsent) return out;
        VertId v = start;
        do {
            out.push_back(v);
            v = next(v);
        } while (v != start);
        return out;
    }

  private:
    static constexpr VertId kAbsent = -1;

    void link(VertId u, VertId v) {
        next_[static_cast<std::size_t>(u)] = v;
        prev_[static_cast<std::size_t>(v)] = u;
    }

    std::vector<VertId> next_, prev_;
    VertId cursor_ = kAbsent;
    std::size_t size_ = 0;
};

// Growing polygon: its boundary ring plus the set of absorbed triangles.
struct PolygonState {
    BoundaryCycle boundary;
    std::vector<char> absorbed;
    std::size_t absorbedCount = 0;

    bool is_absorbed(TriId t) const { return absorbed[static_cast<std::size_t>(t)] != 0; }
    void mark_absorbed(TriId t) {
        absorbed[static_cast<std::size_t>(t)] = 1;
        ++absorbedCount;
    }
};

}  // namespace tricheck
