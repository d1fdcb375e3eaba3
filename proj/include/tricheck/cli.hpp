#pragma once

// Command-line surface. One mesh per invocation; subcommands:
//   validate  tiling check only
//   check     tiling check, then local Delaunay verification
//   repair    tiling check, then flip repair; writes the repaired mesh
//   generate  distribution fixture through the reference triangulator
//   oracle    brute-force pairwise validation (size-capped)
// Exit codes: 0 valid (and Delaunay where checked), 2 valid with Delaunay
// violations, 3 invalid triangulation, 4 input/precondition error,
// 5 internal defect.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tricheck/io.hpp"
#include "tricheck/testkit.hpp"

namespace tricheck {

namespace cli_detail {

struct CommonArgs {
    std::string meshPath;
    std::string format = "auto";
    std::string reportPath;
    bool normalizeOrientation = false;
    bool printStats = false;
};

inline MeshFormat resolve_format(const CommonArgs& a) {
    if (a.format == "json") return MeshFormat::NativeJson;
    if (a.format == "node-ele") return MeshFormat::TriangleNodeEle;
    const auto ext = std::filesystem::path(a.meshPath).extension();
    return ext == ".node" ? MeshFormat::TriangleNodeEle : MeshFormat::NativeJson;
}

inline void add_common(CLI::App* cmd, CommonArgs& a, bool withMesh = true) {
    if (withMesh) cmd->add_option("mesh", a.meshPath, "mesh file (native JSON, or a .node file)")->required();
    cmd->add_option("--format", a.format, "mesh format: auto|json|node-ele")
        ->check(CLI::IsMember({"auto", "json", "node-ele"}));
    cmd->add_option("--report", a.reportPath, "write the JSON report to this path instead of stdout");
    cmd->add_flag("--normalize-orientation", a.normalizeOrientation,
                  "reorder clockwise triangles on ingest instead of rejecting them");
    cmd->add_flag("--stats", a.printStats, "print predicate call/fallback counters to stderr");
}

inline void write_report(const CommonArgs& a, const ReportFile& r, std::ostream& out) {
    const std::string text = emit_report_json(r);
    if (a.reportPath.empty()) {
        out << text;
    } else {
        std::ofstream f(a.reportPath, std::ios::binary);
        f << text;
    }
}

inline void print_stats(const CommonArgs& a, const PredicateStats& s, std::ostream& err) {
    if (!a.printStats) return;
    err << "stats: ot_calls=" << s.ot_calls << " ot_fallbacks=" << s.ot_fallbacks
        << " ict_calls=" << s.ict_calls << " ict_fallbacks=" << s.ict_fallbacks << "\n";
}

inline ReportFile base_report(const CommonArgs& a) {
    ReportFile r;
    r.inputPath = a.meshPath;
    r.inputDigest = fnv1a64_hex(detail::read_file(a.meshPath));
    return r;
}

inline int exit_code_for(const ValidationReport& v) {
    if (v.verdict == Verdict::Valid) return 0;
    return v.failure && v.failure->kind == FailureKind::Precondition ? 4 : 3;
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"a-posteriori 2D triangulation validation and Delaunay repair"};
    app.require_subcommand(1);

    cli_detail::CommonArgs common;

    auto* cmdValidate = app.add_subcommand("validate", "verify that the dataset tiles its region");
    cli_detail::add_common(cmdValidate, common);

    auto* cmdCheck = app.add_subcommand("check", "validate, then verify the local Delaunay property");
    cli_detail::add_common(cmdCheck, common);

    auto* cmdRepair = app.add_subcommand("repair", "validate, then flip non-Delaunay edges");
    cli_detail::add_common(cmdRepair, common);
    std::string repairOut;
    std::string repairEncoding = "decimal";
    cmdRepair->add_option("-o,--output", repairOut, "path for the repaired mesh")->required();
    cmdRepair->add_option("--encoding", repairEncoding, "coordinate encoding: decimal|hexfloat")
        ->check(CLI::IsMember({"decimal", "hexfloat"}));

    auto* cmdGenerate = app.add_subcommand("generate", "generate a reference Delaunay fixture");
    std::string dist = "uniform";
    std::size_t genN = 100;
    std::uint64_t genSeed = 1;
    std::string genOut;
    std::string genEncoding = "decimal";
    cmdGenerate->add_option("--dist", dist, "point distribution")
        ->check(CLI::IsMember({"uniform", "normal", "cluster", "grid"}));
    cmdGenerate->add_option("--n", genN, "number of points")->required();
    cmdGenerate->add_option("--seed", genSeed, "random seed");
    cmdGenerate->add_option("-o,--output", genOut, "output mesh path")->required();
    cmdGenerate->add_option("--encoding", genEncoding, "coordinate encoding: decimal|hexfloat")
        ->check(CLI::IsMember({"decimal", "hexfloat"}));

    auto* cmdOracle = app.add_subcommand("oracle", "brute-force pairwise validation (test oracle)");
    cli_detail::add_common(cmdOracle, common);
    std::size_t oracleCap = 2000;
    cmdOracle->add_option("--max-triangles", oracleCap, "refuse datasets larger than this");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream msg;
        const int code = app.exit(e, msg, msg);
        (code == 0 ? out : err) << msg.str();
        return code == 0 ? 0 : 4;
    }

    try {
        if (cmdGenerate->parsed()) {
            DistributionSpec spec;
            spec.kind = dist == "uniform"   ? Distribution::Uniform
                        : dist == "normal"  ? Distribution::Normal
                        : dist == "cluster" ? Distribution::Cluster
                                            : Distribution::Grid;
            spec.n = genN;
            spec.seed = genSeed;
            MeshFile f;
            f.dataset = reference_delaunay(generate_points(spec));
            f.encoding = genEncoding == "hexfloat" ? CoordinateEncoding::HexFloat
                                                   : CoordinateEncoding::Decimal;
            std::ofstream o(genOut, std::ios::binary);
            if (!o) {
                err << "cannot write " << genOut << "\n";
                return 4;
            }
            o << emit_native_json(f);
            err << "wrote " << f.dataset.triangles.size() << " triangles to " << genOut << "\n";
            return 0;
        }

        const MeshFile mesh = load_mesh_file(common.meshPath, cli_detail::resolve_format(common));
        ReportFile report = cli_detail::base_report(common);

        if (cmdOracle->parsed()) {
            if (mesh.dataset.triangles.size() > oracleCap) {
                err << "oracle refused: " << mesh.dataset.triangles.size() << " triangles exceeds cap "
                    << oracleCap << " (raise with --max-triangles)\n";
                return 4;
            }
            PredicateStats stats;
            const bool ok = brute_force_valid(mesh.dataset, &stats);
            ValidationReport v;
            v.verdict = ok ? Verdict::Valid : Verdict::Invalid;
            if (!ok)
                v.failure = ValidationFailure{FailureKind::Overlap, -1, std::nullopt, std::nullopt,
                                              "brute-force check failed (no site attribution)"};
            v.stats = stats;
            report.validation = v;
            cli_detail::write_report(common, report, out);
            cli_detail::print_stats(common, stats, err);
            return ok ? 0 : 3;
        }

        ValidateOptions opt;
        opt.normalizeOrientation = common.normalizeOrientation;
        ValidationReport v = validate(mesh.dataset, opt);
        report.validation = v;

        if (cmdValidate->parsed() || v.verdict == Verdict::Invalid) {
            cli_detail::write_report(common, report, out);
            cli_detail::print_stats(common, v.stats, err);
            if (v.verdict == Verdict::Invalid)
                err << "invalid: " << v.failure->detail << "\n";
            return cli_detail::exit_code_for(v);
        }

        // check / repair need the edge map and the constrained set
        MeshDataset working = mesh.dataset;
        if (common.normalizeOrientation) {
            for (Triangle& t : working.triangles)
                if (orientation(working.nodes[static_cast<std::size_t>(t[0])],
                                working.nodes[static_cast<std::size_t>(t[1])],
                                working.nodes[static_cast<std::size_t>(t[2])]) == Sign::Negative)
                    std::swap(t[1], t[2]);
        }
        EdgeMap em = std::get<EdgeMap>(build_edge_map(working));
        EdgeSet constrained = boundary_constrained_edges(working);
        for (const Edge& e : mesh.constrainedEdges) constrained.insert(e);

        PredicateStats dstats;
        if (cmdCheck->parsed()) {
            const DelaunayReport dl = check_delaunay(working, em, constrained, &dstats);
            report.delaunay = dl;
            cli_detail::write_report(common, report, out);
            v.stats += dstats;
            cli_detail::print_stats(common, v.stats, err);
            return dl.verdict == DelaunayVerdict::AllDelaunay ? 0 : 2;
        }

        // repair
        auto [repairedTris, dl] = repair_flip(working, em, constrained, &dstats);
        MeshFile outFile = mesh;
        outFile.dataset.triangles = std::move(repairedTris);
        outFile.encoding = repairEncoding == "hexfloat" ? CoordinateEncoding::HexFloat
                                                        : CoordinateEncoding::Decimal;
        std::ofstream o(repairOut, std::ios::binary);
        if (!o) {
            err << "cannot write " << repairOut << "\n";
            return 4;
        }
        o << emit_native_json(outFile);
        report.delaunay = dl;
        cli_detail::write_report(common, report, out);
        v.stats += dstats;
        cli_detail::print_stats(common, v.stats, err);
        err << "performed " << dl.flipsPerformed << " flips\n";
        return 0;
    } catch (const ParseError& e) {
        err << common.meshPath << ": " << e.what() << "\n";
        return 4;
    } catch (const std::ios_base::failure& e) {
        err << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 5;
    }
}

}  // namespace tricheck
