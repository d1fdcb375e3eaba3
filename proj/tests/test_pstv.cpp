#include <catch2/catch_amalgamated.hpp>

#include "tricheck/pstv.hpp"
#include "tricheck/testkit.hpp"

using namespace tricheck;

namespace {

MeshDataset minimal_triangle() {
    MeshDataset d;
    d.nodes = {{0, 0}, {1, 0}, {0, 1}};
    d.triangles = {{0, 1, 2}};
    d.boundary = {0, 2, 1};
    return d;
}

// Triangle region (i, j, l) with interior point k; boundary clockwise.
MeshDataset fan_dataset() {
    MeshDataset d;
    d.nodes = {{0, 0}, {2, 0}, {1, 0.7}, {1, 2}};
    d.triangles = {{0, 1, 2}, {1, 3, 2}, {2, 3, 0}};
    d.boundary = {0, 3, 1};
    return d;
}

// Reflex quad (dart) a(0,0) b(4,0) c(1,1) d(0,4) plus a spear triangle on
// edge (c,b) whose free edge crosses boundary edge (d,c): overlapping pair.
MeshDataset dart_with_crossing_spear() {
    MeshDataset d;
    d.nodes = {{0, 0}, {4, 0}, {1, 1}, {0, 4}, {0.5, 2}};
    d.triangles = {{0, 1, 2}, {0, 2, 3}, {2, 1, 4}};
    d.boundary = {0, 3, 2, 1};
    return d;
}

// Same dart, spear apex on the open segment (d,c): the free edge overlaps a
// boundary edge collinearly (the thread degeneracy).
MeshDataset dart_with_thread_spear() {
    MeshDataset d = dart_with_crossing_spear();
    d.nodes[4] = {0.5, 2.5};
    return d;
}

}  // namespace

TEST_CASE("single counterclockwise triangle validates") {
    const ValidationReport r = validate(minimal_triangle());
    CHECK(r.verdict == Verdict::Valid);
    CHECK(r.trianglesAbsorbed == 1);
    CHECK(r.boundaryLength == 3);
}

TEST_CASE("interior-point fan validates") {
    const ValidationReport r = validate(fan_dataset());
    CHECK(r.verdict == Verdict::Valid);
    CHECK(r.trianglesAbsorbed == 3);
}

TEST_CASE("clockwise triangle is rejected unless normalization is on") {
    MeshDataset d = minimal_triangle();
    d.triangles = {{0, 2, 1}};
    const ValidationReport r = validate(d);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::Orientation);

    ValidateOptions opt;
    opt.normalizeOrientation = true;
    CHECK(validate(d, opt).verdict == Verdict::Valid);
}

TEST_CASE("degenerate triangle is an orientation failure") {
    MeshDataset d;
    d.nodes = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    d.triangles = {{0, 1, 3}, {0, 1, 2}};
    d.boundary = {0, 3, 1};
    const ValidationReport r = validate(d);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::Orientation);
    CHECK(r.failure->triangle == 1);
}

TEST_CASE("crossing spear is reported as overlap") {
    const ValidationReport r = validate(dart_with_crossing_spear());
    REQUIRE(r.verdict == Verdict::Invalid);
    REQUIRE(r.failure.has_value());
    CHECK(r.failure->kind == FailureKind::Overlap);
    CHECK(r.failure->triangle == 2);
    REQUIRE(r.failure->edge.has_value());
    CHECK(*r.failure->edge == Edge(2, 3));  // the crossed boundary edge (d,c)
}

TEST_CASE("collinear thread spear is reported as overlap") {
    const ValidationReport r = validate(dart_with_thread_spear());
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::Overlap);
    CHECK(r.failure->triangle == 2);
}

TEST_CASE("duplicated triangle trips the edge map") {
    MeshDataset d = fan_dataset();
    d.triangles.push_back(d.triangles[0]);
    const ValidationReport r = validate(d);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::EdgeSharedByThree);
}

TEST_CASE("removed interior triangle leaves unreachable triangles") {
    // triforce: corner triangles plus a middle one; remove the middle
    MeshDataset d;
    d.nodes = {{0, 0}, {4, 0}, {2, 4}, {2, 0}, {3, 2}, {1, 2}};
    d.triangles = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
    d.boundary = {0, 5, 2, 4, 1, 3};
    REQUIRE(validate(d).verdict == Verdict::Valid);

    MeshDataset broken = d;
    broken.triangles.pop_back();
    const ValidationReport r = validate(broken);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::UnreachableTriangles);
    CHECK_FALSE(brute_force_valid(broken));
}

TEST_CASE("boundary mismatch is detected after full absorption") {
    MeshDataset d = fan_dataset();
    std::swap(d.boundary[0], d.boundary[1]);
    const ValidationReport r = validate(d);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::BoundaryMismatch);
}

TEST_CASE("precondition failures are reported with kind precondition") {
    MeshDataset d = minimal_triangle();
    d.nodes.push_back({0, 0});
    const ValidationReport r = validate(d);
    REQUIRE(r.verdict == Verdict::Invalid);
    CHECK(r.failure->kind == FailureKind::Precondition);
    REQUIRE(r.failure->precondition.has_value());
    CHECK(r.failure->precondition->code == PreconditionViolation::Code::DuplicateNode);
}

TEST_CASE("adjacency classification follows the shared point and edge counts") {
    // boundary ring [0,4,2,5,1] over 6 nodes; attachment edge (0,4)
    PolygonState st;
    st.boundary = BoundaryCycle::from_sequence(6, {0, 4, 2, 5, 1});
    st.absorbed.assign(4, 0);

    CHECK(classify_adjacency(st, Triangle{0, 4, 3}) == AdjacencyCategory::TwoPtsOneEdge);
    CHECK(classify_adjacency(st, Triangle{0, 4, 2}) == AdjacencyCategory::ThreePtsTwoEdges);  // next(4)
    CHECK(classify_adjacency(st, Triangle{0, 4, 1}) == AdjacencyCategory::ThreePtsTwoEdges);  // prev(0)
    CHECK(classify_adjacency(st, Triangle{0, 4, 5}) == AdjacencyCategory::ThreePtsOneEdge);

    PolygonState tri;
    tri.boundary = BoundaryCycle::from_sequence(6, {0, 4, 2});
    tri.absorbed.assign(4, 0);
    CHECK(classify_adjacency(tri, Triangle{0, 4, 2}) == AdjacencyCategory::ThreePtsThreeEdges);
}

TEST_CASE("verify rejects an apex on the directed edge") {
    MeshDataset d;
    d.nodes = {{0, 0}, {2, 0}, {1, 0}, {0, 2}};
    PolygonState st;
    st.boundary = BoundaryCycle::from_sequence(4, {0, 1, 3});
    st.absorbed.assign(1, 0);
    SegmentIntervalIndex idx;
    for (auto [u, v] : {std::pair<VertId, VertId>{0, 1}, {1, 3}, {3, 0}})
        idx.insert(Edge(u, v).packed(), d.nodes[static_cast<std::size_t>(Edge(u, v).a)],
                   d.nodes[static_cast<std::size_t>(Edge(u, v).b)]);
    const VerifyResult r = verify_adjacent_triangle(d, st, idx, 0, 1, 2);
    CHECK(r.code == VerifyResult::Code::WrongSide);
}

TEST_CASE("merge updates the boundary per category") {
    MeshDataset d;
    d.nodes = {{0, 0}, {2, 0}, {1, -1}, {1, 2}, {3, 1}};

    SECTION("two points one edge inserts the apex") {
        PolygonState st;
        st.boundary = BoundaryCycle::from_sequence(5, {0, 1, 3});
        st.boundary.set_cursor(0);
        st.absorbed.assign(2, 0);
        SegmentIntervalIndex idx;
        detail::index_insert_edge(idx, d, 0, 1);
        detail::index_insert_edge(idx, d, 1, 3);
        detail::index_insert_edge(idx, d, 3, 0);
        merge_triangle(st, idx, d, 1, 0, 1, 2, AdjacencyCategory::TwoPtsOneEdge);
        CHECK(st.boundary.to_sequence() == std::vector<VertId>{0, 2, 1, 3});
        CHECK(st.boundary.cursor() == 2);
        CHECK(st.absorbedCount == 1);
        CHECK(idx.contains(Edge(0, 2).packed()));
        CHECK(idx.contains(Edge(2, 1).packed()));
        CHECK_FALSE(idx.contains(Edge(0, 1).packed()));
    }

    SECTION("three points two edges drops the far vertex (apex on b side)") {
        PolygonState st;
        st.boundary = BoundaryCycle::from_sequence(5, {0, 1, 4, 3});
        st.boundary.set_cursor(0);
        st.absorbed.assign(2, 0);
        SegmentIntervalIndex idx;
        for (auto [u, v] : {std::pair<VertId, VertId>{0, 1}, {1, 4}, {4, 3}, {3, 0}})
            detail::index_insert_edge(idx, d, u, v);
        // apex 4 == next(b=1): drop b's successor... apex c == next(b)
        merge_triangle(st, idx, d, 1, 0, 1, 4, AdjacencyCategory::ThreePtsTwoEdges);
        CHECK(st.boundary.to_sequence() == std::vector<VertId>{0, 4, 3});
        CHECK(st.boundary.cursor() == 0);
        CHECK(idx.contains(Edge(0, 4).packed()));
        CHECK_FALSE(idx.contains(Edge(0, 1).packed()));
        CHECK_FALSE(idx.contains(Edge(1, 4).packed()));
    }

    SECTION("three points two edges drops the near vertex (apex on a side)") {
        PolygonState st;
        st.boundary = BoundaryCycle::from_sequence(5, {3, 0, 1, 4});
        st.boundary.set_cursor(0);
        st.absorbed.assign(2, 0);
        SegmentIntervalIndex idx;
        for (auto [u, v] : {std::pair<VertId, VertId>{3, 0}, {0, 1}, {1, 4}, {4, 3}})
            detail::index_insert_edge(idx, d, u, v);
        // apex 3 == prev(a=0)
        merge_triangle(st, idx, d, 1, 0, 1, 3, AdjacencyCategory::ThreePtsTwoEdges);
        CHECK(st.boundary.to_sequence() == std::vector<VertId>{1, 4, 3});
        CHECK(st.boundary.cursor() == 3);
        CHECK(idx.contains(Edge(3, 1).packed()));
        CHECK_FALSE(idx.contains(Edge(3, 0).packed()));
        CHECK_FALSE(idx.contains(Edge(0, 1).packed()));
    }

    SECTION("three points one edge only advances the cursor") {
        PolygonState st;
        st.boundary = BoundaryCycle::from_sequence(5, {0, 1, 3, 4});
        st.boundary.set_cursor(0);
        st.absorbed.assign(2, 0);
        SegmentIntervalIndex idx;
        merge_triangle(st, idx, d, 1, 0, 1, 3, AdjacencyCategory::ThreePtsOneEdge);
        CHECK(st.boundary.to_sequence() == std::vector<VertId>{0, 1, 3, 4});
        CHECK(st.boundary.cursor() == 1);
        CHECK(st.absorbedCount == 0);
    }
}

TEST_CASE("polygon growth keeps its loop invariants") {
    // drive the absorption loop by hand on the triforce and check, after
    // every step: the ring is a consistent cycle, each boundary edge belongs
    // to exactly one absorbed triangle, and the interval index mirrors the
    // ring's edge set
    MeshDataset d;
    d.nodes = {{0, 0}, {4, 0}, {2, 4}, {2, 0}, {3, 2}, {1, 2}};
    d.triangles = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
    d.boundary = {0, 5, 2, 4, 1, 3};

    const EdgeMap em = std::get<EdgeMap>(build_edge_map(d));
    PolygonState st;
    st.boundary = BoundaryCycle(d.nodes.size(), d.triangles[0]);
    st.absorbed.assign(d.triangles.size(), 0);
    st.mark_absorbed(0);
    SegmentIntervalIndex idx;
    for (int k = 0; k < 3; ++k)
        detail::index_insert_edge(idx, d, d.triangles[0][static_cast<std::size_t>(k)],
                                  d.triangles[0][static_cast<std::size_t>((k + 1) % 3)]);

    const auto invariants_hold = [&]() {
        const std::vector<VertId> seq = st.boundary.to_sequence();
        if (seq.size() != st.boundary.size()) return false;
        std::size_t absorbedEdges = 0;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const Edge e(seq[i], seq[(i + 1) % seq.size()]);
            if (!idx.contains(e.packed())) return false;
            int owners = 0;
            const EdgeMap::Incident* inc = em.find(e);
            if (!inc) return false;
            for (int k = 0; k < inc->count; ++k)
                if (st.is_absorbed(inc->ids[static_cast<std::size_t>(k)])) ++owners;
            if (owners != 1) return false;
            ++absorbedEdges;
        }
        return idx.size() == absorbedEdges;
    };

    REQUIRE(invariants_hold());
    std::size_t guard = 0;
    while (st.absorbedCount < d.triangles.size()) {
        REQUIRE(++guard < 64);
        const VertId a = st.boundary.cursor();
        const VertId b = st.boundary.next(a);
        const EdgeMap::Incident* inc = em.find(Edge(a, b));
        TriId cand = -1;
        if (inc)
            for (int k = 0; k < inc->count; ++k)
                if (!st.is_absorbed(inc->ids[static_cast<std::size_t>(k)]))
                    cand = inc->ids[static_cast<std::size_t>(k)];
        if (cand < 0) {
            st.boundary.set_cursor(b);
            continue;
        }
        const Triangle& tri = d.triangles[static_cast<std::size_t>(cand)];
        VertId c = tri[0];
        for (VertId v : tri)
            if (v != a && v != b) c = v;
        const AdjacencyCategory cat = classify_adjacency(st, tri);
        if (cat == AdjacencyCategory::ThreePtsOneEdge) {
            merge_triangle(st, idx, d, cand, a, b, c, cat);
            continue;
        }
        REQUIRE((cat == AdjacencyCategory::TwoPtsOneEdge || cat == AdjacencyCategory::ThreePtsTwoEdges));
        REQUIRE(verify_adjacent_triangle(d, st, idx, a, b, c).code == VerifyResult::Code::Ok);
        merge_triangle(st, idx, d, cand, a, b, c, cat);
        REQUIRE(invariants_hold());
    }
    CHECK(boundary_cycles_equivalent(st.boundary.to_sequence(), d.boundary));
}

TEST_CASE("brute force oracle matches the worked examples") {
    CHECK(brute_force_valid(minimal_triangle()));
    CHECK(brute_force_valid(fan_dataset()));
    CHECK_FALSE(brute_force_valid(dart_with_crossing_spear()));
    CHECK_FALSE(brute_force_valid(dart_with_thread_spear()));
    MeshDataset d = fan_dataset();
    std::swap(d.boundary[0], d.boundary[1]);
    CHECK_FALSE(brute_force_valid(d));
}

TEST_CASE("validate is deterministic") {
    const MeshDataset d = dart_with_crossing_spear();
    const ValidationReport a = validate(d);
    const ValidationReport b = validate(d);
    CHECK(a.verdict == b.verdict);
    CHECK(a.failure->kind == b.failure->kind);
    CHECK(a.failure->triangle == b.failure->triangle);
    CHECK(a.stats.ot_calls == b.stats.ot_calls);
}

TEST_CASE("validate agrees with brute force on small random meshes and mutations") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        DistributionSpec spec{Distribution::Uniform, 40 + (seed % 4) * 30, seed};
        const MeshDataset mesh = reference_delaunay(generate_points(spec));
        REQUIRE(validate(mesh).verdict == Verdict::Valid);
        REQUIRE(brute_force_valid(mesh));

        for (MutationKind mk :
             {MutationKind::FlipTriangleOrientation, MutationKind::DuplicateTriangle,
              MutationKind::RemoveTriangle, MutationKind::OverlapTriangle,
              MutationKind::CorruptBoundary}) {
            MeshDataset bad;
            try {
                bad = mutate(mesh, MutationSpec{mk, seed * 1000 + static_cast<std::uint64_t>(mk)});
            } catch (const MutationInapplicableError&) {
                continue;
            }
            const ValidationReport r = validate(bad);
            CHECK(r.verdict == Verdict::Invalid);
            CHECK_FALSE(brute_force_valid(bad));
            const auto kinds = mutation_expected_kinds(mk);
            CHECK(std::find(kinds.begin(), kinds.end(), r.failure->kind) != kinds.end());
            ++checked;
        }
    }
    CHECK(checked > 100);
}
