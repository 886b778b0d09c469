#include "flowtri/errors.hpp"
#include "flowtri/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace flowtri;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

ParsedInstance load_instance(const std::string& path) {
    return parse_instance(read_file(path));
}

// Validation failures exit 1; data goes to stdout, diagnostics to stderr.
struct Options {
    long long limit = 1000000;
    bool json = false;
    bool quiet = false;
};

void note(const Options& opt, const std::string& message) {
    if (!opt.quiet) std::cerr << message << "\n";
}

int run_validate(const Options& opt, const std::string& file) {
    ParsedInstance inst = load_instance(file);
    ValidationReport report = validate_strong_planarity(inst.dag);
    if (report.ok && inst.netflow) {
        ValidationReport nd = check_nondegenerate(inst.dag, *inst.netflow);
        for (const auto& v : nd.violations) report.add(v.rule, v.detail);
    }
    if (opt.json) {
        std::cout << validation_json(report);
    } else if (report.ok) {
        std::cout << "ok\n";
    } else {
        for (const auto& v : report.violations)
            std::cout << v.rule << ": " << v.detail << "\n";
    }
    return report.ok ? 0 : 1;
}

int run_reduce(const Options& opt, const std::string& file, const std::string& placement) {
    ParsedInstance inst = load_instance(file);
    NetflowVector a = inst.netflow ? *inst.netflow : unit_netflow(inst.dag);
    if (!inst.netflow) note(opt, "no netflow in instance; using the unit netflow");
    ReductionMap map = decontract(inst.dag, a,
                                  placement == "above" ? Placement::Above : Placement::Below);
    NetflowVector unit = unit_netflow(map.reduced);
    std::cout << serialize_instance(map.reduced, &unit);
    note(opt, "decontracted " + std::to_string(map.decontracted_vertices.size()) + " vertices");
    return 0;
}

int run_routes(const Options& opt, const std::string& file) {
    ParsedInstance inst = load_instance(file);
    ValidationReport report = validate_strong_planarity(inst.dag);
    if (!report.ok) {
        std::cerr << "instance is not strongly planar (" << report.violations.front().rule
                  << ")\n";
        return 1;
    }
    std::vector<Route> routes = enumerate_routes(inst.dag, opt.limit);
    if (opt.json) {
        std::cout << routes_json(inst.dag, routes);
    } else {
        std::cout << routes.size() << " routes\n";
        for (const Route& r : routes) {
            for (size_t k = 0; k < r.edges.size(); ++k)
                std::cout << (k ? " " : "") << inst.dag.edges[r.edges[k]].name;
            std::cout << "\n";
        }
    }
    return 0;
}

int run_layerings(const Options& opt, const std::string& file) {
    ParsedInstance inst = load_instance(file);
    std::vector<Layering> layerings = enumerate_layerings(inst.dag, opt.limit);
    if (opt.json) {
        std::cout << layerings_json(inst.dag, layerings);
    } else {
        std::cout << layerings.size() << " layerings\n";
        for (size_t i = 0; i < layerings.size(); ++i) {
            std::cout << "[" << i << "]";
            for (const Route& r : layerings[i].routes) {
                std::cout << " ";
                for (size_t k = 0; k < r.edges.size(); ++k)
                    std::cout << (k ? "." : "") << inst.dag.edges[r.edges[k]].name;
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int run_decompose(const Options& opt, const std::string& file, const std::string& flow_arg) {
    ParsedInstance inst = load_instance(file);
    std::string flow_text =
        (!flow_arg.empty() && flow_arg[0] == '{') ? flow_arg : read_file(flow_arg);
    FlowVector f = parse_flow(inst.dag, flow_text);
    LayeringDecomposition dec = decompose_flow(inst.dag, f);
    if (opt.json) {
        std::cout << decomposition_json(inst.dag, dec);
    } else {
        std::cout << dec.terms.size() << " terms\n";
        for (const auto& [l, coeff] : dec.terms) {
            std::cout << rat_to_string(coeff) << " *";
            for (const Route& r : l.routes) {
                std::cout << " ";
                for (size_t k = 0; k < r.edges.size(); ++k)
                    std::cout << (k ? "." : "") << inst.dag.edges[r.edges[k]].name;
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int run_triangulate(const Options& opt, const std::string& file) {
    ParsedInstance inst = load_instance(file);
    Triangulation tri = build_triangulation(inst.dag, opt.limit);
    if (opt.json) {
        std::cout << triangulation_json(inst.dag, tri);
    } else {
        std::cout << "dimension " << tri.dimension << ", " << tri.cells.size()
                  << " unimodular cells, normalized volume " << tri.cells.size() << "\n";
    }
    return 0;
}

int run_poset(const Options& opt, const std::string& file, bool dot) {
    ParsedInstance inst = load_instance(file);
    FramingPoset poset = build_framing_poset(inst.dag, opt.limit);
    if (dot) {
        std::cout << emit_dot(poset);
    } else if (opt.json) {
        std::cout << poset_json(inst.dag, poset);
    } else {
        std::cout << poset.nodes.size() << " maximal cliques, " << poset.down_edges.size()
                  << " mutation edges, " << poset.reduction.size() << " cover relations\n";
    }
    return 0;
}

int run_verify(const Options& opt, const std::string& file, int cutoff, int samples,
               std::uint64_t seed) {
    ParsedInstance inst = load_instance(file);
    Triangulation tri = build_triangulation(inst.dag, opt.limit);
    VerificationReport report = verify_triangulation(inst.dag, tri, cutoff, samples, seed);
    if (opt.json) {
        std::cout << verification_json(report);
    } else {
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                      << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    }
    return report.overall ? 0 : 1;
}

int run_k33(const Options& opt) {
    VerificationReport report = k33_obstruction_check();
    if (opt.json) {
        std::cout << verification_json(report);
    } else {
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                      << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    }
    return report.overall ? 0 : 4;
}

int run_generate(const Options&, std::uint64_t seed, int max_edges, int max_sources) {
    EmbeddedDag dag = random_instance(seed, max_edges, max_sources);
    std::cout << serialize_instance(dag);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"framing triangulations and framing posets of flow polytopes "
                 "of strongly planar DAGs"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--limit", opt.limit, "enumeration cap")->capture_default_str();
    app.add_flag("--json", opt.json, "emit JSON documents");
    app.add_flag("--quiet", opt.quiet, "suppress diagnostics");

    std::string file, placement = "below", flow_arg;
    bool dot = false;
    int cutoff = 5, samples = 20, max_edges = 12, max_sources = 3;
    std::uint64_t seed = 1;

    CLI::App* validate = app.add_subcommand("validate", "check strong planarity");
    validate->add_option("file", file)->required();
    CLI::App* reduce = app.add_subcommand("reduce", "decontract to a balanced instance");
    reduce->add_option("file", file)->required();
    reduce->add_option("--placement", placement)->check(CLI::IsMember({"below", "above"}));
    CLI::App* routes = app.add_subcommand("routes", "enumerate routes");
    routes->add_option("file", file)->required();
    CLI::App* layerings = app.add_subcommand("layerings", "enumerate layerings");
    layerings->add_option("file", file)->required();
    CLI::App* decompose =
        app.add_subcommand("decompose", "decompose a rational flow into layerings");
    decompose->add_option("file", file)->required();
    decompose->add_option("--flow", flow_arg, "flow JSON (inline or a path)")->required();
    CLI::App* triangulate = app.add_subcommand("triangulate", "build the framing triangulation");
    triangulate->add_option("file", file)->required();
    CLI::App* poset = app.add_subcommand("poset", "build the framing poset");
    poset->add_option("file", file)->required();
    poset->add_flag("--dot", dot, "emit the Hasse diagram as DOT");
    CLI::App* verify = app.add_subcommand("verify", "verify the triangulation axioms");
    verify->add_option("file", file)->required();
    verify->add_option("--face-cutoff", cutoff)->capture_default_str();
    verify->add_option("--samples", samples)->capture_default_str();
    verify->add_option("--seed", seed)->capture_default_str();
    CLI::App* k33 = app.add_subcommand("k33-check", "run the non-planar obstruction checks");
    CLI::App* generate = app.add_subcommand("generate", "generate a random instance");
    generate->add_option("--seed", seed)->required();
    generate->add_option("--max-edges", max_edges)->capture_default_str();
    generate->add_option("--max-sources", max_sources)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return run_validate(opt, file);
        if (reduce->parsed()) return run_reduce(opt, file, placement);
        if (routes->parsed()) return run_routes(opt, file);
        if (layerings->parsed()) return run_layerings(opt, file);
        if (decompose->parsed()) return run_decompose(opt, file, flow_arg);
        if (triangulate->parsed()) return run_triangulate(opt, file);
        if (poset->parsed()) return run_poset(opt, file, dot);
        if (verify->parsed()) return run_verify(opt, file, cutoff, samples, seed);
        if (k33->parsed()) return run_k33(opt);
        if (generate->parsed()) return run_generate(opt, seed, max_edges, max_sources);
    } catch (const LimitExceededError& err) {
        std::cerr << "limit exceeded: " << err.what() << "\n";
        return 3;
    } catch (const InternalInvariantViolation& err) {
        std::cerr << "internal invariant violated: " << err.what() << "\n";
        return 4;
    } catch (const FlowtriError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const CLI::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;
}
