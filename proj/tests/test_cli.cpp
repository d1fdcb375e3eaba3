#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tricheck/cli.hpp"

using namespace tricheck;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "tricheck_cli_test") {
        fs::create_directories(path);
    }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

std::string write_mesh(const fs::path& p, const MeshDataset& d,
                       const std::vector<Edge>& constrained = {}) {
    MeshFile f;
    f.dataset = d;
    f.constrainedEdges = constrained;
    const std::string text = emit_native_json(f);
    write_file(p, text);
    return text;
}

MeshDataset kite() {
    MeshDataset d;
    d.nodes = {{0, 0}, {2, 0}, {1, 2}, {1, -0.1}};
    d.triangles = {{0, 1, 2}, {1, 0, 3}};
    d.boundary = {0, 2, 1, 3};
    return d;
}

MeshDataset dart_overlap() {
    MeshDataset d;
    d.nodes = {{0, 0}, {4, 0}, {1, 1}, {0, 4}, {0.5, 2}};
    d.triangles = {{0, 1, 2}, {0, 2, 3}, {2, 1, 4}};
    d.boundary = {0, 3, 2, 1};
    return d;
}

int run(std::vector<std::string> args, std::string* outText = nullptr, std::string* errText = nullptr) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (outText) *outText = out.str();
    if (errText) *errText = err.str();
    return code;
}

}  // namespace

TEST_CASE("validate exits 0 on a good mesh and emits a report") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "good.json";
    MeshDataset d;
    d.nodes = {{0, 0}, {1, 0}, {0, 1}};
    d.triangles = {{0, 1, 2}};
    d.boundary = {0, 2, 1};
    write_mesh(mesh, d);

    std::string out;
    CHECK(run({"validate", mesh.string()}, &out) == 0);
    const ReportFile r = parse_report_json(out);
    REQUIRE(r.validation.has_value());
    CHECK(r.validation->verdict == Verdict::Valid);
    CHECK(r.inputDigest.size() == 16);
}

TEST_CASE("check exits 2 on the kite and lists the violating edge") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "kite.json";
    write_mesh(mesh, kite());

    std::string out;
    CHECK(run({"check", mesh.string()}, &out) == 2);
    const ReportFile r = parse_report_json(out);
    REQUIRE(r.delaunay.has_value());
    REQUIRE(r.delaunay->violatingEdges.size() == 1);
    CHECK(r.delaunay->violatingEdges[0] == Edge(0, 1));
}

TEST_CASE("check respects constrained edges from the file") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "kite_constrained.json";
    write_mesh(mesh, kite(), {Edge(0, 1)});
    CHECK(run({"check", mesh.string()}) == 0);
}

TEST_CASE("validate exits 3 with kind overlap on the overlapping fixture") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "fig_overlap.json";
    write_mesh(mesh, dart_overlap());

    std::string out;
    CHECK(run({"validate", mesh.string()}, &out) == 3);
    const ReportFile r = parse_report_json(out);
    CHECK(r.validation->failure->kind == FailureKind::Overlap);
}

TEST_CASE("precondition failures exit 4") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "dup.json";
    MeshDataset d;
    d.nodes = {{0, 0}, {0, 0}, {0, 1}};
    d.triangles = {{0, 1, 2}};
    d.boundary = {0, 2, 1};
    write_mesh(mesh, d);
    CHECK(run({"validate", mesh.string()}) == 4);

    write_file(tmp.path / "garbage.json", "not json at all");
    CHECK(run({"validate", (tmp.path / "garbage.json").string()}) == 4);
    CHECK(run({"validate", (tmp.path / "does_not_exist.json").string()}) == 4);
}

TEST_CASE("repair writes a Delaunay mesh") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "kite2.json";
    const fs::path outPath = tmp.path / "repaired.json";
    write_mesh(mesh, kite());

    std::string out;
    CHECK(run({"repair", mesh.string(), "-o", outPath.string()}, &out) == 0);
    const ReportFile r = parse_report_json(out);
    REQUIRE(r.delaunay.has_value());
    CHECK(r.delaunay->flipsPerformed == 1);

    const MeshFile repaired = parse_native_json(detail::read_file(outPath));
    CHECK(validate(repaired.dataset).verdict == Verdict::Valid);
    const EdgeMap em = std::get<EdgeMap>(build_edge_map(repaired.dataset));
    CHECK(check_delaunay(repaired.dataset, em, boundary_constrained_edges(repaired.dataset)).verdict ==
          DelaunayVerdict::AllDelaunay);
}

TEST_CASE("generate produces a mesh that validates through the CLI") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "gen.json";
    CHECK(run({"generate", "--dist", "grid", "--n", "300", "--seed", "5", "-o", mesh.string()}) == 0);
    CHECK(run({"check", mesh.string()}) == 0);
    CHECK(run({"oracle", mesh.string()}) == 0);
}

TEST_CASE("oracle refuses oversized datasets unless the cap is raised") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "gen2.json";
    CHECK(run({"generate", "--dist", "uniform", "--n", "120", "--seed", "6", "-o", mesh.string()}) == 0);
    CHECK(run({"oracle", mesh.string(), "--max-triangles", "10"}) == 4);
    CHECK(run({"oracle", mesh.string(), "--max-triangles", "100000"}) == 0);
}

TEST_CASE("report can be written to a file and normalization flag works") {
    TempDir tmp;
    const fs::path mesh = tmp.path / "cw.json";
    MeshDataset d;
    d.nodes = {{0, 0}, {1, 0}, {0, 1}};
    d.triangles = {{0, 2, 1}};  // clockwise
    d.boundary = {0, 2, 1};
    write_mesh(mesh, d);

    CHECK(run({"validate", mesh.string()}) == 3);
    const fs::path report = tmp.path / "report.json";
    CHECK(run({"validate", mesh.string(), "--normalize-orientation", "--report", report.string()}) == 0);
    const ReportFile r = parse_report_json(detail::read_file(report));
    CHECK(r.validation->verdict == Verdict::Valid);
}

TEST_CASE("bad usage exits 4") {
    CHECK(run({"validate"}) == 4);
    CHECK(run({"frobnicate", "x"}) == 4);
    CHECK(run({}) == 4);
}
