#pragma once

// Polygon-growth validator. Starting from one positively oriented triangle,
// the polygon absorbs an adjacent triangle across a boundary edge per step,
// checking each attachment (apex strictly left of the directed boundary
// edge, no unshared edge crossing the current boundary) and finally
// comparing the grown boundary against the dataset's boundary cycle. Also
// hosts the quadratic brute-force oracle used by the tests.

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tricheck/core.hpp"
#include "tricheck/edge_map.hpp"
#include "tricheck/interval_tree.hpp"
#include "tricheck/predicates.hpp"

namespace tricheck {

enum class AdjacencyCategory {
    ThreePtsOneEdge,    // apex on the boundary but not adjacent: skip and revisit
    ThreePtsTwoEdges,   // apex is a boundary neighbor of the shared edge
    TwoPtsOneEdge,      // apex not on the boundary
    ThreePtsThreeEdges, // triangle would close the whole remaining cycle
    Illegal,
};

enum class Verdict { Valid, Invalid };

enum class FailureKind {
    Precondition,
    EdgeSharedByThree,
    Orientation,
    Overlap,
    IllegalAdjacency,
    UnreachableTriangles,
    BoundaryMismatch,
};

inline const char* to_string(FailureKind k) {
    switch (k) {
        case FailureKind::Precondition: return "precondition";
        case FailureKind::EdgeSharedByThree: return "edge_shared_by_three";
        case FailureKind::Orientation: return "orientation";
        case FailureKind::Overlap: return "overlap";
        case FailureKind::IllegalAdjacency: return "illegal_adjacency";
        case FailureKind::UnreachableTriangles: return "unreachable_triangles";
        case FailureKind::BoundaryMismatch: return "boundary_mismatch";
    }
    return "?";
}

struct ValidationFailure {
    FailureKind kind;
    TriId triangle = -1;
    std::optional<Edge> edge;
    std::optional<PreconditionViolation> precondition;
    std::string detail;
};

struct ValidationReport {
    Verdict verdict = Verdict::Invalid;
    std::optional<ValidationFailure> failure;
    PredicateStats stats;
    std::size_t trianglesAbsorbed = 0;
    std::size_t boundaryLength = 0;
    double elapsedSeconds = 0.0;
};

struct ValidateOptions {
    // Reorder clockwise triangles on ingest instead of rejecting them.
    bool normalizeOrientation = false;
};

// Category per the shared-point / shared-edge counts, both taken against
// the current boundary cycle.
inline AdjacencyCategory classify_adjacency(const PolygonState& state, const Triangle& t) {
    const BoundaryCycle& ring = state.boundary;
    int sharedPoints = 0;
    for (VertId v : t)
        if (ring.contains(v)) ++sharedPoints;
    int sharedEdges = 0;
    for (int k = 0; k < 3; ++k)
        if (ring.edge_on_cycle(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]))
            ++sharedEdges;

    if (sharedPoints == 2 && sharedEdges == 1) return AdjacencyCategory::TwoPtsOneEdge;
    if (sharedPoints == 3 && sharedEdges == 1) return AdjacencyCategory::ThreePtsOneEdge;
    if (sharedPoints == 3 && sharedEdges == 2) return AdjacencyCategory::ThreePtsTwoEdges;
    if (sharedPoints == 3 && sharedEdges == 3) return AdjacencyCategory::ThreePtsThreeEdges;
    return AdjacencyCategory::Illegal;
}

struct VerifyResult {
    enum class Code { Ok, WrongSide, Overlap };
    Code code = Code::Ok;
    Edge offendingBoundaryEdge{};
};

// Attachment check for a triangle on boundary edge a->b with apex c: the
// apex must lie strictly left of a->b, and no unshared triangle edge may
// intersect a current boundary edge. Candidate boundary edges come from the
// interval index (segments whose bounding box overlaps the edge's box).
inline VerifyResult verify_adjacent_triangle(const MeshDataset& d, const PolygonState& state,
                                             const SegmentIntervalIndex& idx, VertId a, VertId b,
                                             VertId c, PredicateStats* stats = nullptr) {
    const auto& nodes = d.nodes;
    if (orientation(nodes[static_cast<std::size_t>(a)], nodes[static_cast<std::size_t>(b)],
                    nodes[static_cast<std::size_t>(c)], stats) != Sign::Positive)
        return {VerifyResult::Code::WrongSide, {}};

    const BoundaryCycle& ring = state.boundary;
    std::vector<SegmentId> hits;
    const std::array<std::pair<VertId, VertId>, 2> unshared{{{a, c}, {c, b}}};
    for (auto [u, v] : unshared) {
        if (ring.edge_on_cycle(u, v)) continue;  // shared edge of a two-edge attachment
        idx.segment_search(nodes[static_cast<std::size_t>(u)], nodes[static_cast<std::size_t>(v)], hits);
        for (SegmentId id : hits) {
            const Edge be(static_cast<VertId>(id >> 32), static_cast<VertId>(id & 0xffffffffu));
            if (segments_intersect(nodes[static_cast<std::size_t>(u)], nodes[static_cast<std::size_t>(v)],
                                   nodes[static_cast<std::size_t>(be.a)],
                                   nodes[static_cast<std::size_t>(be.b)], stats))
                return {VerifyResult::Code::Overlap, be};
        }
    }
    return {VerifyResult::Code::Ok, {}};
}

namespace detail {

inline void index_insert_edge(SegmentIntervalIndex& idx, const MeshDataset& d, VertId u, VertId v) {
    const Edge e(u, v);
    idx.insert(e.packed(), d.nodes[static_cast<std::size_t>(e.a)], d.nodes[static_cast<std::size_t>(e.b)]);
}

inline void index_remove_edge(SegmentIntervalIndex& idx, VertId u, VertId v) {
    idx.remove(Edge(u, v).packed());
}

}  // namespace detail

// Boundary/cursor update for an attachment that passed verification, per
// category. Keeps the interval index synchronized with the boundary edges
// and marks the triangle absorbed (categories ii/iii). For category i the
// triangle is skipped and only the cursor advances.
inline void merge_triangle(PolygonState& state, SegmentIntervalIndex& idx, const MeshDataset& d,
                           TriId t, VertId a, VertId b, VertId c, AdjacencyCategory category) {
    BoundaryCycle& ring = state.boundary;
    switch (category) {
        case AdjacencyCategory::ThreePtsOneEdge:
            ring.set_cursor(b);
            return;
        case AdjacencyCategory::TwoPtsOneEdge:
            detail::index_remove_edge(idx, a, b);
            detail::index_insert_edge(idx, d, a, c);
            detail::index_insert_edge(idx, d, c, b);
            ring.insert_between(a, b, c);
            ring.set_cursor(c);
            break;
        case AdjacencyCategory::ThreePtsTwoEdges:
            if (ring.next(b) == c) {
                // apex on the b side: b becomes interior
                detail::index_remove_edge(idx, a, b);
                detail::index_remove_edge(idx, b, c);
                detail::index_insert_edge(idx, d, a, c);
                ring.erase(b);
                ring.set_cursor(a);
            } else {
                // apex on the a side: a becomes interior, cursor steps back
                detail::index_remove_edge(idx, c, a);
                detail::index_remove_edge(idx, a, b);
                detail::index_insert_edge(idx, d, c, b);
                ring.erase(a);
                ring.set_cursor(c);
            }
            break;
        case AdjacencyCategory::ThreePtsThreeEdges:
        case AdjacencyCategory::Illegal:
            return;  // never merged; the caller rejects these
    }
    state.mark_absorbed(t);
}

namespace detail {

inline ValidationReport invalid_report(ValidationFailure f, PredicateStats stats, std::size_t absorbed,
                                       std::size_t blen,
                                       std::chrono::steady_clock::time_point t0) {
    ValidationReport r;
    r.verdict = Verdict::Invalid;
    r.failure = std::move(f);
    r.stats = stats;
    r.trianglesAbsorbed = absorbed;
    r.boundaryLength = blen;
    r.elapsedSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

}  // namespace detail

// Full validation run. Never throws on well-formed input; every defect is
// reported through the verdict.
inline ValidationReport validate(const MeshDataset& input, const ValidateOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    PredicateStats stats;

    if (auto v = validate_dataset_preconditions(input))
        return detail::invalid_report(
            ValidationFailure{FailureKind::Precondition, -1, std::nullopt, *v, v->message}, stats, 0, 0,
            t0);

    MeshDataset d = input;  // triangle triples may be normalized below
    const auto nt = static_cast<TriId>(d.triangles.size());

    for (TriId t = 0; t < nt; ++t) {
        Triangle& tri = d.triangles[static_cast<std::size_t>(t)];
        const Sign s = orientation(d.nodes[static_cast<std::size_t>(tri[0])],
                                   d.nodes[static_cast<std::size_t>(tri[1])],
                                   d.nodes[static_cast<std::size_t>(tri[2])], &stats);
        if (s == Sign::Zero)
            return detail::invalid_report(
                ValidationFailure{FailureKind::Orientation, t, std::nullopt, std::nullopt,
                                  "triangle " + std::to_string(t) + " is degenerate"},
                stats, 0, 0, t0);
        if (s == Sign::Negative) {
            if (!opt.normalizeOrientation)
                return detail::invalid_report(
                    ValidationFailure{FailureKind::Orientation, t, std::nullopt, std::nullopt,
                                      "triangle " + std::to_string(t) + " is clockwise"},
                    stats, 0, 0, t0);
            std::swap(tri[1], tri[2]);
        }
    }

    auto built = build_edge_map(d);
    if (std::holds_alternative<EdgeConflict>(built)) {
        const EdgeConflict& c = std::get<EdgeConflict>(built);
        return detail::invalid_report(
            ValidationFailure{FailureKind::EdgeSharedByThree, c.triangles[2], c.edge, std::nullopt,
                              "edge shared by three triangles"},
            stats, 0, 0, t0);
    }
    const EdgeMap& em = std::get<EdgeMap>(built);

    PolygonState state;
    state.boundary = BoundaryCycle(d.nodes.size(), d.triangles[0]);
    state.absorbed.assign(d.triangles.size(), 0);
    state.mark_absorbed(0);

    SegmentIntervalIndex idx;
    {
        const Triangle& t0tri = d.triangles[0];
        detail::index_insert_edge(idx, d, t0tri[0], t0tri[1]);
        detail::index_insert_edge(idx, d, t0tri[1], t0tri[2]);
        detail::index_insert_edge(idx, d, t0tri[2], t0tri[0]);
    }

    std::size_t stepsWithoutProgress = 0;
    while (state.absorbedCount < static_cast<std::size_t>(nt)) {
        const VertId a = state.boundary.cursor();
        const VertId b = state.boundary.next(a);
        const Edge e(a, b);

        const EdgeMap::Incident* inc = em.find(e);
        TriId cand = -1;
        if (inc)
            for (int k = 0; k < inc->count; ++k)
                if (!state.is_absorbed(inc->ids[static_cast<std::size_t>(k)]))
                    cand = inc->ids[static_cast<std::size_t>(k)];

        bool advanced = false;
        if (cand < 0) {
            advanced = true;  // region-boundary edge; nothing to attach here
        } else {
            const Triangle& tri = d.triangles[static_cast<std::size_t>(cand)];
            VertId c = tri[0];
            for (VertId v : tri)
                if (v != a && v != b) c = v;

            const AdjacencyCategory cat = classify_adjacency(state, tri);
            switch (cat) {
                case AdjacencyCategory::ThreePtsOneEdge:
                    advanced = true;  // would pinch the boundary; revisit later
                    break;
                case AdjacencyCategory::ThreePtsThreeEdges:
                case AdjacencyCategory::Illegal:
                    return detail::invalid_report(
                        ValidationFailure{FailureKind::IllegalAdjacency, cand, e, std::nullopt,
                                          "triangle " + std::to_string(cand) +
                                              " closes the remaining boundary"},
                        stats, state.absorbedCount, state.boundary.size(), t0);
                case AdjacencyCategory::TwoPtsOneEdge:
                case AdjacencyCategory::ThreePtsTwoEdges: {
                    const VerifyResult vr = verify_adjacent_triangle(d, state, idx, a, b, c, &stats);
                    if (vr.code == VerifyResult::Code::WrongSide)
                        return detail::invalid_report(
                            ValidationFailure{FailureKind::Orientation, cand, e, std::nullopt,
                                              "apex of triangle " + std::to_string(cand) +
                                                  " is not strictly left of the boundary edge"},
                            stats, state.absorbedCount, state.boundary.size(), t0);
                    if (vr.code == VerifyResult::Code::Overlap)
                        return detail::invalid_report(
                            ValidationFailure{FailureKind::Overlap, cand, vr.offendingBoundaryEdge,
                                              std::nullopt,
                                              "edge of triangle " + std::to_string(cand) +
                                                  " intersects boundary edge (" +
                                                  std::to_string(vr.offendingBoundaryEdge.a) + "," +
                                                  std::to_string(vr.offendingBoundaryEdge.b) + ")"},
                            stats, state.absorbedCount, state.boundary.size(), t0);
                    merge_triangle(state, idx, d, cand, a, b, c, cat);
                    stepsWithoutProgress = 0;
                    break;
                }
            }
        }

        if (advanced) {
            state.boundary.set_cursor(b);
            if (++stepsWithoutProgress > state.boundary.size())
                return detail::invalid_report(
                    ValidationFailure{FailureKind::UnreachableTriangles, -1, e, std::nullopt,
                                      "full boundary sweep absorbed nothing"},
                    stats, state.absorbedCount, state.boundary.size(), t0);
        }
    }

    if (!boundary_cycles_equivalent(state.boundary.to_sequence(), input.boundary))
        return detail::invalid_report(
            ValidationFailure{FailureKind::BoundaryMismatch, -1, std::nullopt, std::nullopt,
                              "grown boundary is not a rotation of the input boundary"},
            stats, state.absorbedCount, state.boundary.size(), t0);

    ValidationReport r;
    r.verdict = Verdict::Valid;
    r.stats = stats;
    r.trianglesAbsorbed = state.absorbedCount;
    r.boundaryLength = state.boundary.size();
    r.elapsedSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace detail {

// Strictly inside test for a counterclockwise triangle.
inline bool strictly_inside(const MeshDataset& d, const Triangle& t, Point p, PredicateStats* stats) {
    for (int k = 0; k < 3; ++k) {
        const Point u = d.nodes[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
        const Point v = d.nodes[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
        if (orientation(u, v, p, stats) != Sign::Positive) return false;
    }
    return true;
}

// Separating-axis test for two counterclockwise triangles: disjoint
// interiors iff some edge line of one keeps the other on the non-interior
// closed side.
inline bool tri_interiors_overlap(const MeshDataset& d, const Triangle& s, const Triangle& t,
                                  PredicateStats* stats) {
    const auto separated_by = [&](const Triangle& from, const Triangle& other) {
        for (int k = 0; k < 3; ++k) {
            const Point u = d.nodes[static_cast<std::size_t>(from[static_cast<std::size_t>(k)])];
            const Point v = d.nodes[static_cast<std::size_t>(from[static_cast<std::size_t>((k + 1) % 3)])];
            bool allRightOrOn = true;
            for (VertId w : other) {
                if (orientation(u, v, d.nodes[static_cast<std::size_t>(w)], stats) == Sign::Positive) {
                    allRightOrOn = false;
                    break;
                }
            }
            if (allRightOrOn) return true;
        }
        return false;
    };
    return !separated_by(s, t) && !separated_by(t, s);
}

// Doubled signed areas over a common power-of-two scaling, exact.
inline boost::multiprecision::cpp_int exact_doubled_area_sum(const MeshDataset& d) {
    std::vector<double> coords;
    coords.reserve(d.nodes.size() * 2);
    for (const Point& p : d.nodes) {
        coords.push_back(p.x);
        coords.push_back(p.y);
    }
    int emin = std::numeric_limits<int>::max();
    std::vector<detail::Decomposed> dec(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        dec[i] = detail::decompose(coords[i]);
        if (dec[i].mant != 0 && dec[i].exp < emin) emin = dec[i].exp;
    }
    if (emin == std::numeric_limits<int>::max()) emin = 0;
    std::vector<boost::multiprecision::cpp_int> sc(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        sc[i] = dec[i].mant;
        if (dec[i].mant != 0) sc[i] <<= static_cast<unsigned>(dec[i].exp - emin);
    }
    const auto X = [&](VertId v) { return sc[static_cast<std::size_t>(v) * 2]; };
    const auto Y = [&](VertId v) { return sc[static_cast<std::size_t>(v) * 2 + 1]; };

    boost::multiprecision::cpp_int triSum = 0;
    for (const Triangle& t : d.triangles)
        triSum += (X(t[1]) - X(t[0])) * (Y(t[2]) - Y(t[0])) - (X(t[2]) - X(t[0])) * (Y(t[1]) - Y(t[0]));

    boost::multiprecision::cpp_int shoelace = 0;
    for (std::size_t i = 0; i < d.boundary.size(); ++i) {
        const VertId u = d.boundary[i];
        const VertId v = d.boundary[(i + 1) % d.boundary.size()];
        shoelace += X(u) * Y(v) - X(v) * Y(u);
    }
    // boundary is clockwise, so its shoelace sum is the negated area
    return triSum + shoelace;
}

}  // namespace detail

// O(n_t^2) oracle: positively oriented triangles, pairwise disjoint
// interiors, exact area bookkeeping against the boundary polygon, and every
// boundary edge present as a triangle edge. Test-scale only.
inline bool brute_force_valid(const MeshDataset& d, PredicateStats* stats = nullptr) {
    if (validate_dataset_preconditions(d)) return false;

    for (const Triangle& t : d.triangles)
        if (orientation(d.nodes[static_cast<std::size_t>(t[0])], d.nodes[static_cast<std::size_t>(t[1])],
                        d.nodes[static_cast<std::size_t>(t[2])], stats) != Sign::Positive)
            return false;

    const auto nt = d.triangles.size();
    std::vector<std::array<double, 4>> boxes(nt);  // xmin xmax ymin ymax
    for (std::size_t i = 0; i < nt; ++i) {
        const Triangle& t = d.triangles[i];
        const Point p0 = d.nodes[static_cast<std::size_t>(t[0])];
        const Point p1 = d.nodes[static_cast<std::size_t>(t[1])];
        const Point p2 = d.nodes[static_cast<std::size_t>(t[2])];
        boxes[i] = {std::fmin(p0.x, std::fmin(p1.x, p2.x)), std::fmax(p0.x, std::fmax(p1.x, p2.x)),
                    std::fmin(p0.y, std::fmin(p1.y, p2.y)), std::fmax(p0.y, std::fmax(p1.y, p2.y))};
    }
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = i + 1; j < nt; ++j) {
            if (boxes[i][1] < boxes[j][0] || boxes[j][1] < boxes[i][0] || boxes[i][3] < boxes[j][2] ||
                boxes[j][3] < boxes[i][2])
                continue;
            if (detail::tri_interiors_overlap(d, d.triangles[i], d.triangles[j], stats)) return false;
        }
    }

    if (detail::exact_doubled_area_sum(d) != 0) return false;

    std::unordered_set<std::uint64_t> triEdges;
    triEdges.reserve(nt * 6);
    for (const Triangle& t : d.triangles)
        for (int k = 0; k < 3; ++k)
            triEdges.insert(
                Edge(t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]).packed());
    for (std::size_t i = 0; i < d.boundary.size(); ++i)
        if (!triEdges.contains(
                Edge(d.boundary[i], d.boundary[(i + 1) % d.boundary.size()]).packed()))
            return false;
    return true;
}

}  // namespace tricheck
