#include <catch2/catch_amalgamated.hpp>

#include <cstring>

#include "tricheck/io.hpp"
#include "tricheck/testkit.hpp"

using namespace tricheck;

namespace {

bool bit_equal(double a, double b) {
    std::uint64_t ba, bb;
    std::memcpy(&ba, &a, 8);
    std::memcpy(&bb, &b, 8);
    return ba == bb;
}

bool datasets_bit_equal(const MeshDataset& a, const MeshDataset& b) {
    if (a.nodes.size() != b.nodes.size() || a.triangles != b.triangles || a.boundary != b.boundary)
        return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i)
        if (!bit_equal(a.nodes[i].x, b.nodes[i].x) || !bit_equal(a.nodes[i].y, b.nodes[i].y))
            return false;
    return true;
}

}  // namespace

TEST_CASE("native json parses nodes, triangles, boundary") {
    const std::string text = R"({
        "nodes": [[0, 0], [1, 0], [0, 1]],
        "triangles": [[0, 1, 2]],
        "boundary": [0, 2, 1]
    })";
    const MeshFile f = parse_native_json(text);
    CHECK(f.dataset.nodes.size() == 3);
    CHECK(f.dataset.triangles.size() == 1);
    CHECK(f.dataset.boundary == std::vector<VertId>{0, 2, 1});
    CHECK(f.constrainedEdges.empty());
}

TEST_CASE("hex literal coordinates parse exactly") {
    const std::string text = R"({
        "nodes": [["0x1.8p1", 0], [1, 0], [0, "-0x1p-1074"]],
        "triangles": [[0, 1, 2]],
        "boundary": [0, 2, 1]
    })";
    const MeshFile f = parse_native_json(text);
    CHECK(f.dataset.nodes[0].x == 3.0);
    CHECK(bit_equal(f.dataset.nodes[2].y, -std::numeric_limits<double>::denorm_min()));
}

TEST_CASE("parse errors carry a location") {
    try {
        parse_native_json("{\n  \"nodes\": [[0, 0],\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line >= 2);
    }
    CHECK_THROWS_AS(parse_native_json("[1,2,3]"), ParseError);
    CHECK_THROWS_AS(parse_native_json(R"({"nodes": [], "triangles": []})"), ParseError);
}

TEST_CASE("decimal and hexfloat emission round-trip bit-exactly") {
    MeshFile f;
    f.dataset.nodes = {{0.1, -0.25},
                       {1e-300, std::numeric_limits<double>::denorm_min()},
                       {-1.7976931348623157e308, 3.0},
                       {-0.0, -3.5e-270}};
    f.dataset.triangles = {{0, 1, 2}, {0, 2, 3}};
    f.dataset.boundary = {0, 1, 2, 3};
    f.constrainedEdges = {Edge(0, 1)};

    for (CoordinateEncoding enc : {CoordinateEncoding::Decimal, CoordinateEncoding::HexFloat}) {
        f.encoding = enc;
        const MeshFile back = parse_native_json(emit_native_json(f));
        CHECK(datasets_bit_equal(f.dataset, back.dataset));
        CHECK(back.constrainedEdges.size() == 1);
        CHECK(back.encoding == enc);
    }
}

TEST_CASE("random meshes round-trip through the native format") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        MeshFile f;
        f.dataset = reference_delaunay(
            generate_points(DistributionSpec{Distribution::Normal, 60, seed}));
        f.encoding = seed % 2 ? CoordinateEncoding::Decimal : CoordinateEncoding::HexFloat;
        const MeshFile back = parse_native_json(emit_native_json(f));
        CHECK(datasets_bit_equal(f.dataset, back.dataset));
    }
}

TEST_CASE("node/ele pair with 1-based indices converts to 0-based") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tricheck_io_test";
    fs::create_directories(dir);
    {
        std::ofstream n(dir / "m.node");
        n << "# comment line\n3 2 0 0\n1 0.0 0.0\n2 1.0 0.0\n3 0.0 1.0\n";
        std::ofstream e(dir / "m.ele");
        e << "1 3 0\n1 1 2 3\n";
        std::ofstream b(dir / "m.bnd");
        b << "1 3 2\n";
    }
    const MeshFile f = parse_node_ele(dir / "m.node");
    CHECK(f.dataset.nodes.size() == 3);
    CHECK(f.dataset.triangles == std::vector<Triangle>{{0, 1, 2}});
    CHECK(f.dataset.boundary == std::vector<VertId>{0, 2, 1});

    // mixed index bases are rejected
    {
        std::ofstream e(dir / "m.ele");
        e << "1 3 0\n0 1 2 3\n";
    }
    CHECK_THROWS_AS(parse_node_ele(dir / "m.node"), IndexBaseMismatchError);
}

TEST_CASE("report document round-trips") {
    ReportFile r;
    r.inputPath = "fixture.json";
    r.inputDigest = fnv1a64_hex("hello");
    ValidationReport v;
    v.verdict = Verdict::Invalid;
    v.failure = ValidationFailure{FailureKind::Overlap, 7, Edge(2, 3), std::nullopt,
                                  "edge of triangle 7 intersects boundary edge (2,3)"};
    v.stats = PredicateStats{100, 1, 50, 2};
    v.trianglesAbsorbed = 12;
    v.boundaryLength = 9;
    v.elapsedSeconds = 0.00195;  // stable under the 3-significant-digit emission
    r.validation = v;
    DelaunayReport dl;
    dl.verdict = DelaunayVerdict::ViolationsFound;
    dl.violatingEdges = {Edge(1, 5), Edge(2, 3)};
    dl.flipsPerformed = 4;
    r.delaunay = dl;

    const ReportFile back = parse_report_json(emit_report_json(r));
    CHECK(emit_report_json(back) == emit_report_json(r));  // document-level lossless
    CHECK(back.tool == r.tool);
    CHECK(back.version == r.version);
    CHECK(back.inputDigest == r.inputDigest);
    REQUIRE(back.validation.has_value());
    CHECK(back.validation->verdict == Verdict::Invalid);
    CHECK(back.validation->failure->kind == FailureKind::Overlap);
    CHECK(back.validation->failure->triangle == 7);
    CHECK(back.validation->failure->edge == Edge(2, 3));
    CHECK(back.validation->stats.ot_calls == 100);
    CHECK(back.validation->elapsedSeconds == v.elapsedSeconds);
    REQUIRE(back.delaunay.has_value());
    CHECK(back.delaunay->violatingEdges == dl.violatingEdges);
    CHECK(back.delaunay->flipsPerformed == 4);
}

TEST_CASE("digest is stable") {
    CHECK(fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(fnv1a64_hex("a") == fnv1a64_hex("a"));
    CHECK(fnv1a64_hex("a") != fnv1a64_hex("b"));
}
