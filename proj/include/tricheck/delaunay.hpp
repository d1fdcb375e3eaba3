#pragma once

// Local Delaunay checks and flip-based repair for a triangulation the
// validator has already accepted. An interior edge is locally Delaunay when
// the opposite vertex of one incident triangle is on or outside the
// circumcircle of the other; cocircular counts as Delaunay and is never
// flipped. Repair runs a FIFO worklist: flip a violating edge, re-enqueue
// the four surrounding edges, stop when nothing violates.

#include <deque>
#include <stdexcept>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tricheck/core.hpp"
#include "tricheck/edge_map.hpp"
#include "tricheck/predicates.hpp"

namespace tricheck {

using EdgeSet = std::unordered_set<Edge, EdgeHash>;

enum class DelaunayVerdict { AllDelaunay, ViolationsFound };

struct DelaunayReport {
    DelaunayVerdict verdict = DelaunayVerdict::AllDelaunay;
    std::vector<Edge> violatingEdges;
    std::size_t flipsPerformed = 0;
};

struct FlipError : std::runtime_error {
    enum class Kind { NonConvexQuad, InconsistentOrientation, IterationCap };
    Kind kind;
    explicit FlipError(Kind k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

// Region-boundary edges are always exempt from flipping.
inline EdgeSet boundary_constrained_edges(const MeshDataset& d) {
    EdgeSet s;
    s.reserve(d.boundary.size() * 2);
    for (std::size_t i = 0; i < d.boundary.size(); ++i)
        s.insert(Edge(d.boundary[i], d.boundary[(i + 1) % d.boundary.size()]));
    return s;
}

namespace detail {

// Orient the two incident triangles of an interior edge as (i,j,k) and
// (j,i,l), both counterclockwise as stored.
struct EdgePair {
    VertId i, j, k, l;
    TriId t1, t2;  // t1 holds (i,j,k), t2 holds (j,i,l)
};

inline bool contains_directed(const Triangle& t, VertId u, VertId v) {
    for (int k = 0; k < 3; ++k)
        if (t[static_cast<std::size_t>(k)] == u && t[static_cast<std::size_t>((k + 1) % 3)] == v)
            return true;
    return false;
}

inline VertId third_vertex(const Triangle& t, VertId u, VertId v) {
    for (VertId w : t)
        if (w != u && w != v) return w;
    return -1;
}

inline EdgePair orient_edge_pair(const std::vector<Triangle>& tris, const Edge& e,
                                 const EdgeMap::Incident& inc) {
    const Triangle& ta = tris[static_cast<std::size_t>(inc.ids[0])];
    VertId i, j;
    TriId t1, t2;
    if (contains_directed(ta, e.a, e.b)) {
        i = e.a;
        j = e.b;
        t1 = inc.ids[0];
        t2 = inc.ids[1];
    } else if (contains_directed(ta, e.b, e.a)) {
        i = e.b;
        j = e.a;
        t1 = inc.ids[0];
        t2 = inc.ids[1];
    } else {
        throw FlipError(FlipError::Kind::InconsistentOrientation,
                        "triangle does not contain its mapped edge");
    }
    const Triangle& t2tri = tris[static_cast<std::size_t>(t2)];
    if (!contains_directed(t2tri, j, i))
        throw FlipError(FlipError::Kind::InconsistentOrientation,
                        "incident triangles traverse the shared edge in the same direction");
    return {i, j, third_vertex(tris[static_cast<std::size_t>(t1)], i, j), third_vertex(t2tri, i, j),
            t1, t2};
}

}  // namespace detail

// Flip legality: both replacement triangles must be strictly
// counterclockwise, i.e. the surrounding quadrilateral is strictly convex.
// For a non-Delaunay interior edge of a correct triangulation this always
// holds; a failure indicates corrupted state.
inline bool flip_quad_is_strictly_convex(Point pi, Point pj, Point pk, Point pl,
                                         PredicateStats* stats = nullptr) {
    return orientation(pk, pl, pj, stats) == Sign::Positive &&
           orientation(pl, pk, pi, stats) == Sign::Positive;
}

// Local Delaunay property of one edge. Boundary edges (one incident
// triangle) hold trivially; cocircular opposite vertices count as Delaunay.
inline bool is_locally_delaunay(const MeshDataset& d, const Edge& e, const EdgeMap& em,
                                PredicateStats* stats = nullptr) {
    const EdgeMap::Incident* inc = em.find(e);
    if (!inc) throw UnknownEdgeError{};
    if (inc->count < 2) return true;
    const detail::EdgePair p = detail::orient_edge_pair(d.triangles, e, *inc);
    return incircle(d.nodes[static_cast<std::size_t>(p.i)], d.nodes[static_cast<std::size_t>(p.j)],
                    d.nodes[static_cast<std::size_t>(p.k)], d.nodes[static_cast<std::size_t>(p.l)],
                    stats) != Sign::Negative;
}

// Every non-constrained interior edge failing the local check, sorted for
// deterministic reports. Requires a dataset the validator accepted.
inline DelaunayReport check_delaunay(const MeshDataset& d, const EdgeMap& em,
                                     const EdgeSet& constrained, PredicateStats* stats = nullptr) {
    DelaunayReport r;
    for (const auto& [edge, inc] : em.entries()) {
        if (inc.count < 2 || constrained.contains(edge)) continue;
        if (!is_locally_delaunay(d, edge, em, stats)) r.violatingEdges.push_back(edge);
    }
    std::sort(r.violatingEdges.begin(), r.violatingEdges.end());
    r.verdict = r.violatingEdges.empty() ? DelaunayVerdict::AllDelaunay : DelaunayVerdict::ViolationsFound;
    return r;
}

// Flip repair per the worklist scheme. Returns the repaired triangle list
// and a report; the input dataset is never mutated. Throws FlipError on
// corrupted input (non-convex quad, inconsistent orientation) or if the
// n_p^2 iteration cap is hit, which would indicate a defect.
inline std::pair<std::vector<Triangle>, DelaunayReport> repair_flip(const MeshDataset& d,
                                                                    const EdgeMap& inputMap,
                                                                    const EdgeSet& constrained,
                                                                    PredicateStats* stats = nullptr) {
    std::vector<Triangle> tris = d.triangles;
    EdgeMap em = inputMap;

    std::deque<Edge> queue;
    EdgeSet queued;
    {
        std::vector<Edge> initial;
        for (const auto& [edge, inc] : em.entries())
            if (inc.count == 2 && !constrained.contains(edge)) initial.push_back(edge);
        std::sort(initial.begin(), initial.end());
        for (const Edge& e : initial) {
            queue.push_back(e);
            queued.insert(e);
        }
    }

    const std::size_t flipCap = d.nodes.size() * d.nodes.size();
    DelaunayReport r;

    while (!queue.empty()) {
        const Edge e = queue.front();
        queue.pop_front();
        queued.erase(e);

        const EdgeMap::Incident* inc = em.find(e);
        if (!inc || inc->count < 2) continue;  // flipped away or boundary

        const detail::EdgePair p = detail::orient_edge_pair(tris, e, *inc);
        const Point pi = d.nodes[static_cast<std::size_t>(p.i)];
        const Point pj = d.nodes[static_cast<std::size_t>(p.j)];
        const Point pk = d.nodes[static_cast<std::size_t>(p.k)];
        const Point pl = d.nodes[static_cast<std::size_t>(p.l)];
        if (incircle(pi, pj, pk, pl, stats) != Sign::Negative) continue;

        if (!flip_quad_is_strictly_convex(pi, pj, pk, pl, stats))
            throw FlipError(FlipError::Kind::NonConvexQuad,
                            "flip of a non-convex quadrilateral; mesh state is corrupt");

        // replace (i,j,k),(j,i,l) with (k,l,j),(l,k,i)
        tris[static_cast<std::size_t>(p.t1)] = Triangle{p.k, p.l, p.j};
        tris[static_cast<std::size_t>(p.t2)] = Triangle{p.l, p.k, p.i};
        em.erase(e);
        em.insert_pair(Edge(p.k, p.l), p.t1, p.t2);
        em.replace_incident(Edge(p.i, p.k), p.t1, p.t2);
        em.replace_incident(Edge(p.j, p.l), p.t2, p.t1);

        if (++r.flipsPerformed > flipCap)
            throw FlipError(FlipError::Kind::IterationCap, "flip count exceeded n_p^2");

        for (const Edge& s : {Edge(p.i, p.k), Edge(p.k, p.j), Edge(p.j, p.l), Edge(p.l, p.i)}) {
            if (constrained.contains(s) || queued.contains(s)) continue;
            queue.push_back(s);
            queued.insert(s);
        }
    }

    r.verdict = DelaunayVerdict::AllDelaunay;
    return {std::move(tris), r};
}

}  // namespace tricheck
