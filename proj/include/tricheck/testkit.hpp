#pragma once

// Fixture machinery for the test suites: the four point distributions, a
// reference incremental Delaunay triangulator (walk locate + flip
// propagation, all decisions through the exact predicates), and mutation
// operators that turn a valid dataset into one failing a known check.
//
// Randomness comes from std::mt19937_64 with a fixed draw discipline:
// uniforms are (x >> 11) * 2^-53 resampled on zero, normals are plain
// Box-Muller consuming exactly two uniforms per draw. Streams are
// deterministic per seed; the exact values are fixture data, not API.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tricheck/core.hpp"
#include "tricheck/delaunay.hpp"
#include "tricheck/edge_map.hpp"
#include "tricheck/predicates.hpp"
#include "tricheck/pstv.hpp"

namespace tricheck {

struct AllCollinearError : std::runtime_error {
    AllCollinearError() : std::runtime_error("all points are collinear") {}
};

struct MutationInapplicableError : std::runtime_error {
    explicit MutationInapplicableError(const std::string& why)
        : std::runtime_error("mutation not applicable: " + why) {}
};

enum class Distribution { Uniform, Normal, Cluster, Grid };

struct DistributionSpec {
    Distribution kind = Distribution::Uniform;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

enum class MutationKind {
    FlipTriangleOrientation,
    DuplicateTriangle,
    RemoveTriangle,
    OverlapTriangle,
    CorruptBoundary,
    IllegalFlip,
};

struct MutationSpec {
    MutationKind kind;
    std::uint64_t seed = 0;
};

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in (0,1), 53-bit resolution.
    double unit() {
        for (;;) {
            const double u = static_cast<double>(eng_() >> 11) * 0x1p-53;
            if (u != 0.0) return u;
        }
    }

    double normal() {
        const double u1 = unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    }

    std::uint64_t raw() { return eng_(); }
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

  private:
    std::mt19937_64 eng_;
};

// Deterministic point sets for the four experiment patterns; collisions are
// resampled so the node-uniqueness precondition always holds.
inline std::vector<Point> generate_points(const DistributionSpec& spec) {
    if (spec.n < 3) throw std::invalid_argument("need at least 3 points");
    Rng rng(spec.seed);
    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, detail::PointKeyHash> seen;
    std::vector<Point> pts;
    pts.reserve(spec.n);

    const auto add_unique = [&](auto sample) {
        for (;;) {
            const Point p = sample();
            if (seen.insert(detail::point_key(p)).second) {
                pts.push_back(p);
                return;
            }
        }
    };

    switch (spec.kind) {
        case Distribution::Uniform:
            for (std::size_t i = 0; i < spec.n; ++i)
                add_unique([&] { return Point{rng.unit(), rng.unit()}; });
            break;
        case Distribution::Normal:
            for (std::size_t i = 0; i < spec.n; ++i)
                add_unique([&] { return Point{rng.normal(), rng.normal()}; });
            break;
        case Distribution::Cluster: {
            // 10 random centers in (-5,5)^2, sigma 0.5 around each
            std::vector<Point> centers;
            for (int c = 0; c < 10; ++c)
                centers.push_back(Point{-5.0 + 10.0 * rng.unit(), -5.0 + 10.0 * rng.unit()});
            const std::size_t base = spec.n / centers.size();
            const std::size_t rem = spec.n % centers.size();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const std::size_t count = base + (c < rem ? 1 : 0);
                for (std::size_t i = 0; i < count; ++i)
                    add_unique([&] {
                        return Point{centers[c].x + 0.5 * rng.normal(), centers[c].y + 0.5 * rng.normal()};
                    });
            }
            break;
        }
        case Distribution::Grid: {
            // 100 integer centers (1..10)^2, sigma 0.2 (variance 0.04)
            std::vector<Point> centers;
            for (int x = 1; x <= 10; ++x)
                for (int y = 1; y <= 10; ++y)
                    centers.push_back(Point{static_cast<double>(x), static_cast<double>(y)});
            const std::size_t base = spec.n / centers.size();
            const std::size_t rem = spec.n % centers.size();
            for (std::size_t c = 0; c < centers.size(); ++c) {
                const std::size_t count = base + (c < rem ? 1 : 0);
                for (std::size_t i = 0; i < count; ++i)
                    add_unique([&] {
                        return Point{centers[c].x + 0.2 * rng.normal(), centers[c].y + 0.2 * rng.normal()};
                    });
            }
            break;
        }
    }
    return pts;
}

namespace detail {

// Incremental Delaunay triangulation of the convex hull: locate by a
// visibility walk, split or fan-attach, then restore the local Delaunay
// property by flips. Every decision is an exact predicate; cocircular
// configurations are left as inserted.
class DelaunayBuilder {
  public:
    explicit DelaunayBuilder(const std::vector<Point>& pts, PredicateStats* stats = nullptr)
        : pts_(pts), stats_(stats) {}

    MeshDataset build() {
        const std::size_t n = pts_.size();
        if (n < 3) throw AllCollinearError{};

        std::size_t k = 2;
        Sign s0 = Sign::Zero;
        while (k < n) {
            s0 = orientation(pts_[0], pts_[1], pts_[k], stats_);
            if (s0 != Sign::Zero) break;
            ++k;
        }
        if (k == n) throw AllCollinearError{};

        Triangle first = s0 == Sign::Positive
                             ? Triangle{0, 1, static_cast<VertId>(k)}
                             : Triangle{1, 0, static_cast<VertId>(k)};
        tris_.push_back(Tri{first, {-1, -1, -1}});
        set_hull(first[0], first[1], 0);
        set_hull(first[1], first[2], 0);
        set_hull(first[2], first[0], 0);
        last_ = 0;

        for (std::size_t i = 2; i < n; ++i) {
            if (i == k) continue;
            insert(static_cast<VertId>(i));
        }

        MeshDataset d;
        d.nodes = pts_;
        d.triangles = tris_to_triples();
        d.boundary = clockwise_hull();
        return d;
    }

  private:
    struct Tri {
        Triangle v;
        std::array<int, 3> nbr;  // nbr[k] across directed edge (v[k], v[k+1]), -1 = hull
    };

    struct FlipCandidate {
        int tri;
        int edge;
        VertId u, v;  // stale-entry guard
    };

    Point pt(VertId v) const { return pts_[static_cast<std::size_t>(v)]; }

    void set_hull(VertId from, VertId to, int tri) {
        hullNext_[from] = {to, tri};
        hullPrev_[to] = from;
    }

    int edge_index(const Tri& t, VertId u, VertId v) const {
        for (int e = 0; e < 3; ++e)
            if (t.v[static_cast<std::size_t>(e)] == u &&
                t.v[static_cast<std::size_t>((e + 1) % 3)] == v)
                return e;
        return -1;
    }

    void set_neighbor(int tri, VertId u, VertId v, int newNbr) {
        if (tri < 0) {
            if (hullNext_.contains(u) && hullNext_[u].first == v) hullNext_[u].second = newNbr;
            return;
        }
        Tri& t = tris_[static_cast<std::size_t>(tri)];
        const int e = edge_index(t, u, v);
        t.nbr[static_cast<std::size_t>(e)] = newNbr;
    }

    // Hull ownership may move between slots during splits/flips.
    void rehome_hull(VertId u, VertId v, int tri) {
        auto it = hullNext_.find(u);
        if (it != hullNext_.end() && it->second.first == v) it->second.second = tri;
    }

    struct Location {
        enum class Where { Inside, OnEdge, Outside } where;
        int tri;
        int edge;  // for OnEdge / Outside
    };

    Location locate(Point p) const {
        int cur = last_;
        for (;;) {
            const Tri& t = tris_[static_cast<std::size_t>(cur)];
            int zeroEdge = -1;
            int negEdge = -1;
            for (int e = 0; e < 3; ++e) {
                const Sign s = orientation(pt(t.v[static_cast<std::size_t>(e)]),
                                           pt(t.v[static_cast<std::size_t>((e + 1) % 3)]), p, stats_);
                if (s == Sign::Negative) {
                    negEdge = e;
                    break;
                }
                if (s == Sign::Zero) {
                    if (zeroEdge >= 0) throw std::invalid_argument("duplicate point in input");
                    zeroEdge = e;
                }
            }
            if (negEdge >= 0) {
                const int nb = t.nbr[static_cast<std::size_t>(negEdge)];
                if (nb < 0) return {Location::Where::Outside, cur, negEdge};
                cur = nb;
                continue;
            }
            if (zeroEdge >= 0) return {Location::Where::OnEdge, cur, zeroEdge};
            return {Location::Where::Inside, cur, -1};
        }
    }

    void insert(VertId pid) {
        const Location loc = locate(pt(pid));
        switch (loc.where) {
            case Location::Where::Inside: split_inside(loc.tri, pid); break;
            case Location::Where::OnEdge: split_on_edge(loc.tri, loc.edge, pid); break;
            case Location::Where::Outside: attach_outside(loc.tri, loc.edge, pid); break;
        }
        flush_flips();
    }

    void split_inside(int ti, VertId p) {
        const Tri old = tris_[static_cast<std::size_t>(ti)];
        const VertId v0 = old.v[0], v1 = old.v[1], v2 = old.v[2];
        const int n0 = old.nbr[0], n1 = old.nbr[1], n2 = old.nbr[2];
        const int tA = ti;
        const int tB = static_cast<int>(tris_.size());
        const int tC = tB + 1;

        tris_[static_cast<std::size_t>(tA)] = Tri{{v0, v1, p}, {n0, tB, tC}};
        tris_.push_back(Tri{{v1, v2, p}, {n1, tC, tA}});
        tris_.push_back(Tri{{v2, v0, p}, {n2, tA, tB}});

        set_neighbor(n1, v2, v1, tB);
        set_neighbor(n2, v0, v2, tC);
        if (n1 < 0) rehome_hull(v1, v2, tB);
        if (n2 < 0) rehome_hull(v2, v0, tC);

        push_flip(tA, 0);
        push_flip(tB, 0);
        push_flip(tC, 0);
        last_ = tC;
    }

    void split_on_edge(int ti, int e, VertId p) {
        const Tri told = tris_[static_cast<std::size_t>(ti)];
        const VertId u = told.v[static_cast<std::size_t>(e)];
        const VertId vv = told.v[static_cast<std::size_t>((e + 1) % 3)];
        const VertId w = told.v[static_cast<std::size_t>((e + 2) % 3)];
        const int A = told.nbr[static_cast<std::size_t>((e + 1) % 3)];  // across (vv,w)
        const int B = told.nbr[static_cast<std::size_t>((e + 2) % 3)];  // across (w,u)
        const int si = told.nbr[static_cast<std::size_t>(e)];

        if (si < 0) {
            // splitting a hull edge: two triangles replace one
            const int tA = ti;
            const int tB = static_cast<int>(tris_.size());
            tris_[static_cast<std::size_t>(tA)] = Tri{{p, vv, w}, {-1, A, tB}};
            tris_.push_back(Tri{{p, w, u}, {tA, B, -1}});
            set_neighbor(B, u, w, tB);
            if (A < 0) rehome_hull(vv, w, tA);
            if (B < 0) rehome_hull(w, u, tB);
            hullNext_.erase(u);
            set_hull(u, p, tB);
            set_hull(p, vv, tA);
            push_flip(tA, 1);
            push_flip(tB, 1);
            last_ = tB;
            return;
        }

        const Tri sold = tris_[static_cast<std::size_t>(si)];
        const int es = edge_index(sold, vv, u);
        const VertId x = sold.v[static_cast<std::size_t>((es + 2) % 3)];
        const int C = sold.nbr[static_cast<std::size_t>((es + 1) % 3)];  // across (u,x)
        const int D = sold.nbr[static_cast<std::size_t>((es + 2) % 3)];  // across (x,vv)

        const int tA = ti;
        const int tC = si;
        const int tB = static_cast<int>(tris_.size());
        const int tD = tB + 1;

        tris_[static_cast<std::size_t>(tA)] = Tri{{p, vv, w}, {tD, A, tB}};
        tris_[static_cast<std::size_t>(tC)] = Tri{{p, u, x}, {tB, C, tD}};
        tris_.push_back(Tri{{p, w, u}, {tA, B, tC}});
        tris_.push_back(Tri{{p, x, vv}, {tC, D, tA}});

        set_neighbor(B, u, w, tB);
        set_neighbor(D, vv, x, tD);
        if (A < 0) rehome_hull(vv, w, tA);
        if (B < 0) rehome_hull(w, u, tB);
        if (C < 0) rehome_hull(u, x, tC);
        if (D < 0) rehome_hull(x, vv, tD);

        push_flip(tA, 1);
        push_flip(tB, 1);
        push_flip(tC, 1);
        push_flip(tD, 1);
        last_ = tD;
    }

    void attach_outside(int ti, int e, VertId p) {
        // first strictly visible hull edge, then extend the chain both ways
        VertId b0 = tris_[static_cast<std::size_t>(ti)].v[static_cast<std::size_t>(e)];
        VertId bEnd = tris_[static_cast<std::size_t>(ti)].v[static_cast<std::size_t>((e + 1) % 3)];
        while (true) {
            const VertId prev = hullPrev_.at(b0);
            if (orientation(pt(prev), pt(b0), pt(p), stats_) != Sign::Negative) break;
            b0 = prev;
        }
        while (true) {
            const VertId next = hullNext_.at(bEnd).first;
            if (orientation(pt(bEnd), pt(next), pt(p), stats_) != Sign::Negative) break;
            bEnd = next;
        }

        std::vector<VertId> chain{b0};
        while (chain.back() != bEnd) chain.push_back(hullNext_.at(chain.back()).first);

        int prevNew = -1;
        std::vector<int> created;
        for (std::size_t t = 0; t + 1 < chain.size(); ++t) {
            const VertId x = chain[t], y = chain[t + 1];
            const int owner = hullNext_.at(x).second;
            const int slot = static_cast<int>(tris_.size());
            tris_.push_back(Tri{{y, x, p}, {owner, prevNew, -1}});
            set_neighbor(owner, x, y, slot);
            if (prevNew >= 0) tris_[static_cast<std::size_t>(prevNew)].nbr[2] = slot;
            prevNew = slot;
            created.push_back(slot);
        }

        for (std::size_t t = 0; t + 1 < chain.size(); ++t) hullNext_.erase(chain[t]);
        set_hull(b0, p, created.front());
        set_hull(p, bEnd, created.back());

        for (int slot : created) push_flip(slot, 0);
        last_ = created.back();
    }

    void push_flip(int tri, int e) {
        const Tri& t = tris_[static_cast<std::size_t>(tri)];
        flips_.push_back(FlipCandidate{tri, e, t.v[static_cast<std::size_t>(e)],
                                       t.v[static_cast<std::size_t>((e + 1) % 3)]});
    }

    void flush_flips() {
        while (!flips_.empty()) {
            const FlipCandidate c = flips_.back();
            flips_.pop_back();
            Tri& t = tris_[static_cast<std::size_t>(c.tri)];
            if (t.v[static_cast<std::size_t>(c.edge)] != c.u ||
                t.v[static_cast<std::size_t>((c.edge + 1) % 3)] != c.v)
                continue;  // stale
            const int ni = t.nbr[static_cast<std::size_t>(c.edge)];
            if (ni < 0) continue;

            const VertId u = c.u, v = c.v;
            const VertId w = t.v[static_cast<std::size_t>((c.edge + 2) % 3)];
            const Tri& nb = tris_[static_cast<std::size_t>(ni)];
            const int en = edge_index(nb, v, u);
            const VertId x = nb.v[static_cast<std::size_t>((en + 2) % 3)];

            if (incircle(pt(u), pt(v), pt(w), pt(x), stats_) != Sign::Negative) continue;

            // replace (u,v,w),(v,u,x) with (w,x,v),(x,w,u)
            const int A = t.nbr[static_cast<std::size_t>((c.edge + 1) % 3)];   // across (v,w)
            const int B = t.nbr[static_cast<std::size_t>((c.edge + 2) % 3)];   // across (w,u)
            const int C = nb.nbr[static_cast<std::size_t>((en + 1) % 3)];      // across (u,x)
            const int D = nb.nbr[static_cast<std::size_t>((en + 2) % 3)];      // across (x,v)

            tris_[static_cast<std::size_t>(c.tri)] = Tri{{w, x, v}, {ni, D, A}};
            tris_[static_cast<std::size_t>(ni)] = Tri{{x, w, u}, {c.tri, B, C}};

            set_neighbor(B, u, w, ni);
            set_neighbor(D, v, x, c.tri);
            if (B < 0) rehome_hull(w, u, ni);
            if (D < 0) rehome_hull(x, v, c.tri);

            push_flip(c.tri, 1);  // (x,v)
            push_flip(c.tri, 2);  // (v,w)
            push_flip(ni, 1);     // (w,u)
            push_flip(ni, 2);     // (u,x)
            last_ = c.tri;
        }
    }

    std::vector<Triangle> tris_to_triples() const {
        std::vector<Triangle> out;
        out.reserve(tris_.size());
        for (const Tri& t : tris_) out.push_back(t.v);
        return out;
    }

    std::vector<VertId> clockwise_hull() const {
        VertId start = hullNext_.begin()->first;
        for (const auto& [v, _] : hullNext_)
            if (v < start) start = v;
        std::vector<VertId> ccw;
        VertId v = start;
        do {
            ccw.push_back(v);
            v = hullNext_.at(v).first;
        } while (v != start);
        std::reverse(ccw.begin(), ccw.end());
        return ccw;
    }

    const std::vector<Point>& pts_;
    PredicateStats* stats_;
    std::vector<Tri> tris_;
    std::unordered_map<VertId, std::pair<VertId, int>> hullNext_;
    std::unordered_map<VertId, VertId> hullPrev_;
    std::vector<FlipCandidate> flips_;
    int last_ = 0;
};

}  // namespace detail

// Delaunay triangulation of the convex hull of the given distinct points,
// with the hull cycle emitted clockwise. Throws AllCollinearError when no
// triangle exists.
inline MeshDataset reference_delaunay(const std::vector<Point>& points, PredicateStats* stats = nullptr) {
    return detail::DelaunayBuilder(points, stats).build();
}

// Failure kinds a mutation may legitimately produce; the exact kind can
// depend on traversal order, never the verdict.
inline std::vector<FailureKind> mutation_expected_kinds(MutationKind k) {
    switch (k) {
        case MutationKind::FlipTriangleOrientation: return {FailureKind::Orientation};
        case MutationKind::DuplicateTriangle:
            return {FailureKind::EdgeSharedByThree, FailureKind::IllegalAdjacency};
        case MutationKind::RemoveTriangle:
            return {FailureKind::UnreachableTriangles, FailureKind::BoundaryMismatch};
        case MutationKind::OverlapTriangle:
            return {FailureKind::Orientation, FailureKind::Overlap, FailureKind::UnreachableTriangles,
                    FailureKind::BoundaryMismatch};
        case MutationKind::CorruptBoundary:
            return {FailureKind::BoundaryMismatch, FailureKind::Precondition};
        case MutationKind::IllegalFlip: return {};  // stays valid; Delaunay check flags it
    }
    return {};
}

// Applies one corruption to a valid dataset. Deterministic per seed.
inline MeshDataset mutate(const MeshDataset& d, const MutationSpec& spec) {
    Rng rng(spec.seed);
    MeshDataset out = d;

    const auto edge_map_or_throw = [&]() {
        auto built = build_edge_map(d);
        if (!std::holds_alternative<EdgeMap>(built))
            throw MutationInapplicableError("input dataset is not edge-consistent");
        return std::get<EdgeMap>(built);
    };

    switch (spec.kind) {
        case MutationKind::FlipTriangleOrientation: {
            Triangle& t = out.triangles[rng.pick(out.triangles.size())];
            std::swap(t[1], t[2]);
            return out;
        }
        case MutationKind::DuplicateTriangle: {
            out.triangles.push_back(out.triangles[rng.pick(out.triangles.size())]);
            return out;
        }
        case MutationKind::RemoveTriangle: {
            const EdgeMap em = edge_map_or_throw();
            std::vector<std::size_t> interior;
            for (std::size_t t = 0; t < d.triangles.size(); ++t) {
                const Triangle& tri = d.triangles[t];
                bool allShared = true;
                for (int k = 0; k < 3; ++k) {
                    const EdgeMap::Incident* inc = em.find(
                        Edge(tri[static_cast<std::size_t>(k)], tri[static_cast<std::size_t>((k + 1) % 3)]));
                    if (!inc || inc->count != 2) allShared = false;
                }
                if (allShared) interior.push_back(t);
            }
            if (interior.empty()) throw MutationInapplicableError("no interior triangle to remove");
            out.triangles.erase(out.triangles.begin() +
                                static_cast<std::ptrdiff_t>(interior[rng.pick(interior.size())]));
            return out;
        }
        case MutationKind::OverlapTriangle: {
            const EdgeMap em = edge_map_or_throw();
            // pick a triangle with a neighbor, move its apex strictly inside
            // that neighbor (the overlapping-triangle failure pattern)
            std::vector<std::pair<std::size_t, Edge>> candidates;
            for (std::size_t t = 0; t < d.triangles.size(); ++t) {
                const Triangle& tri = d.triangles[t];
                for (int k = 0; k < 3; ++k) {
                    const Edge e(tri[static_cast<std::size_t>(k)], tri[static_cast<std::size_t>((k + 1) % 3)]);
                    const EdgeMap::Incident* inc = em.find(e);
                    if (inc && inc->count == 2) candidates.push_back({t, e});
                }
            }
            if (candidates.empty()) throw MutationInapplicableError("no shared edge");
            const auto [t, e] = candidates[rng.pick(candidates.size())];
            const TriId other = *adjacent_triangle(em, e, static_cast<TriId>(t));
            const Triangle& otherTri = d.triangles[static_cast<std::size_t>(other)];
            const Point p0 = d.nodes[static_cast<std::size_t>(otherTri[0])];
            const Point p1 = d.nodes[static_cast<std::size_t>(otherTri[1])];
            const Point p2 = d.nodes[static_cast<std::size_t>(otherTri[2])];

            Point inside{};
            bool found = false;
            for (int attempt = 0; attempt < 32 && !found; ++attempt) {
                const double a = attempt == 0 ? 1.0 : rng.unit();
                const double b = attempt == 0 ? 1.0 : rng.unit();
                const double c = attempt == 0 ? 1.0 : rng.unit();
                const double s = a + b + c;
                const Point q{(a * p0.x + b * p1.x + c * p2.x) / s, (a * p0.y + b * p1.y + c * p2.y) / s};
                if (orientation(p0, p1, q) == Sign::Positive && orientation(p1, p2, q) == Sign::Positive &&
                    orientation(p2, p0, q) == Sign::Positive) {
                    bool clean = true;  // must also be a fresh node
                    for (const Point& existing : d.nodes)
                        if (same_point(existing, q)) clean = false;
                    if (clean) {
                        inside = q;
                        found = true;
                    }
                }
            }
            if (!found) throw MutationInapplicableError("could not find a strict interior point");

            const VertId nid = static_cast<VertId>(out.nodes.size());
            out.nodes.push_back(inside);
            // orient (e.a, e.b, new) positively
            Triangle repl{e.a, e.b, nid};
            if (orientation(out.nodes[static_cast<std::size_t>(e.a)],
                            out.nodes[static_cast<std::size_t>(e.b)], inside) == Sign::Negative)
                repl = Triangle{e.b, e.a, nid};
            out.triangles[t] = repl;
            return out;
        }
        case MutationKind::CorruptBoundary: {
            if (out.boundary.size() < 4) throw MutationInapplicableError("boundary too short to corrupt");
            const std::size_t i = rng.pick(out.boundary.size());
            std::swap(out.boundary[i], out.boundary[(i + 1) % out.boundary.size()]);
            return out;
        }
        case MutationKind::IllegalFlip: {
            const EdgeMap em = edge_map_or_throw();
            // flippable edges that are strictly Delaunay now: flipping one
            // keeps the mesh valid but breaks the local Delaunay property
            std::vector<Edge> flippable;
            for (const auto& [edge, inc] : em.entries()) {
                if (inc.count != 2) continue;
                const detail::EdgePair p = detail::orient_edge_pair(d.triangles, edge, inc);
                const Point pi = d.nodes[static_cast<std::size_t>(p.i)];
                const Point pj = d.nodes[static_cast<std::size_t>(p.j)];
                const Point pk = d.nodes[static_cast<std::size_t>(p.k)];
                const Point pl = d.nodes[static_cast<std::size_t>(p.l)];
                if (incircle(pi, pj, pk, pl) == Sign::Positive &&
                    flip_quad_is_strictly_convex(pi, pj, pk, pl))
                    flippable.push_back(edge);
            }
            if (flippable.empty()) throw MutationInapplicableError("no strictly Delaunay flippable edge");
            std::sort(flippable.begin(), flippable.end());
            const Edge e = flippable[rng.pick(flippable.size())];
            const detail::EdgePair p = detail::orient_edge_pair(d.triangles, e, *em.find(e));
            out.triangles[static_cast<std::size_t>(p.t1)] = Triangle{p.k, p.l, p.j};
            out.triangles[static_cast<std::size_t>(p.t2)] = Triangle{p.l, p.k, p.i};
            return out;
        }
    }
    throw MutationInapplicableError("unknown mutation kind");
}

}  // namespace tricheck
