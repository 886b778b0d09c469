#include "flowtri/reduction.hpp"

#include "flowtri/errors.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace flowtri {

namespace {

std::string unique_name(const std::string& base, std::set<std::string>& taken) {
    std::string name = base;
    int k = 2;
    while (!taken.insert(name).second) name = base + "#" + std::to_string(k++);
    return name;
}

// Reads reduced source/sink orders off the outer-face walks, component by
// component, keeping the original component stacking order.
void derive_terminal_orders(EmbeddedDag& dag, const std::vector<int>& component_rank) {
    FaceStructure fs = trace_faces(dag);
    std::vector<int> comps(fs.component_count);
    for (int c = 0; c < fs.component_count; ++c) comps[c] = c;
    std::sort(comps.begin(), comps.end(),
              [&](int a, int b) { return component_rank[a] < component_rank[b]; });

    dag.sources.clear();
    dag.sinks.clear();
    for (int c : comps) {
        int f = fs.outer_face_of_component[c];
        if (f < 0)
            throw InvalidInputError(
                "decontraction placement buries a pendant vertex in an interior face");
        std::vector<int> walk;
        std::set<int> seen;
        for (int dart : fs.faces[f]) {
            int v = dart_base_vertex(dag, dart);
            bool is_source = dag.vertices[v].in_edges.empty();
            bool is_sink = dag.vertices[v].out_edges.empty();
            if ((is_source || is_sink) && seen.insert(v).second) walk.push_back(v);
        }
        // Rotate to the start of the source block; sources read top-to-bottom.
        const size_t n = walk.size();
        size_t start = 0;
        for (size_t i = 0; i < n; ++i) {
            bool prev_source = dag.vertices[walk[(i + n - 1) % n]].in_edges.empty();
            if (dag.vertices[walk[i]].in_edges.empty() && !prev_source) {
                start = i;
                break;
            }
        }
        std::vector<int> comp_sources, comp_sinks;
        for (size_t i = 0; i < n; ++i) {
            int v = walk[(start + i) % n];
            if (dag.vertices[v].in_edges.empty())
                comp_sources.push_back(v);
            else
                comp_sinks.push_back(v);
        }
        std::reverse(comp_sources.begin(), comp_sources.end());
        dag.sources.insert(dag.sources.end(), comp_sources.begin(), comp_sources.end());
        dag.sinks.insert(dag.sinks.end(), comp_sinks.begin(), comp_sinks.end());
    }
}

}  // namespace

ReductionMap decontract(const EmbeddedDag& dag, const NetflowVector& a, Placement placement) {
    ValidationReport planar = validate_strong_planarity(dag);
    if (!planar.ok)
        throw InvalidInputError("decontract: dag is not strongly planar (" +
                                planar.violations.front().rule + ")");
    ValidationReport nondeg = check_nondegenerate(dag, a);
    if (!nondeg.ok)
        throw InvalidInputError("decontract: netflow is not nondegenerate (" +
                                nondeg.violations.front().rule + ": " +
                                nondeg.violations.front().detail + ")");

    ReductionMap map;
    map.original = dag;
    map.netflow = a;
    EmbeddedDag& out = map.reduced;
    out.vertices = dag.vertices;
    out.edges = dag.edges;

    std::set<std::string> vnames, enames;
    for (const auto& v : out.vertices) vnames.insert(v.name);
    for (const auto& e : out.edges) enames.insert(e.name);

    for (int v = 0; v < dag.vertex_count(); ++v) {
        const Int& net = a.values[v];
        if (net == 0) continue;
        long long count = abs(net).convert_to<long long>();
        std::vector<int> block;  // pendant edge ids, bottom-to-top within the block
        for (long long j = 1; j <= count; ++j) {
            int nv = out.vertex_count();
            std::string label = dag.vertices[v].name + "." + std::to_string(j);
            out.vertices.push_back({unique_name(label, vnames), {}, {}});
            int ne = out.edge_count();
            out.edges.push_back({unique_name(label + "e", enames), -1, -1});
            if (net > 0) {
                out.edges[ne].tail = nv;
                out.edges[ne].head = v;
                out.vertices[nv].out_edges = {ne};
            } else {
                out.edges[ne].tail = v;
                out.edges[ne].head = nv;
                out.vertices[nv].in_edges = {ne};
            }
            block.push_back(ne);
            map.decontracted_vertices[{v, static_cast<int>(j)}] = nv;
            map.decontracted_edges.insert(ne);
        }
        auto& list = net > 0 ? out.vertices[v].in_edges : out.vertices[v].out_edges;
        list.insert(placement == Placement::Below ? list.begin() : list.end(), block.begin(),
                    block.end());
    }

    // Stacking order of components is inherited from the original dag.
    FaceStructure orig_fs = trace_faces(dag);
    std::vector<int> rank(orig_fs.component_count, 1 << 30);
    int next = 0;
    for (int v : dag.sources)
        if (rank[orig_fs.component[v]] == (1 << 30)) rank[orig_fs.component[v]] = next++;
    FaceStructure red_fs = trace_faces(out);
    std::vector<int> component_rank(red_fs.component_count, 0);
    for (int c = 0; c < red_fs.component_count; ++c) {
        // Any original vertex of the reduced component identifies it.
        for (int v = 0; v < dag.vertex_count(); ++v)
            if (red_fs.component[v] == c) {
                component_rank[c] = rank[orig_fs.component[v]];
                break;
            }
    }
    derive_terminal_orders(out, component_rank);

    ValidationReport check = validate_strong_planarity(out);
    if (!check.ok)
        throw InvalidInputError("decontract: placement does not yield a strongly planar dag (" +
                                check.violations.front().rule + ": " +
                                check.violations.front().detail + ")");
    ValidationReport balanced = check_nondegenerate(out, unit_netflow(out));
    if (!balanced.ok)
        throw InternalInvariantViolation("decontract: reduced dag is not balanced (" +
                                         balanced.violations.front().rule + ")");
    return map;
}

FlowVector restrict_flow(const ReductionMap& map, const FlowVector& f) {
    const EmbeddedDag& red = map.reduced;
    if (static_cast<int>(f.values.size()) != red.edge_count())
        throw InvalidInputError("restrict_flow: flow has wrong length");
    for (const Rat& x : f.values)
        if (x < 0) throw InvalidInputError("restrict_flow: flow is negative on an edge");
    if (!satisfies_netflow(red, f.values, unit_netflow(red)))
        throw InvalidInputError("restrict_flow: flow does not conserve the unit netflow");

    FlowVector out;
    out.values.assign(f.values.begin(), f.values.begin() + map.original.edge_count());
    out.netflow = map.netflow;
    if (!satisfies_netflow(map.original, out.values, map.netflow))
        throw InternalInvariantViolation("restrict_flow: restriction violates the netflow");
    return out;
}

FlowVector lift_flow(const ReductionMap& map, const FlowVector& f) {
    const EmbeddedDag& orig = map.original;
    if (static_cast<int>(f.values.size()) != orig.edge_count())
        throw InvalidInputError("lift_flow: flow has wrong length");
    for (const Rat& x : f.values)
        if (x < 0) throw InvalidInputError("lift_flow: flow is negative on an edge");
    if (!satisfies_netflow(orig, f.values, map.netflow))
        throw InvalidInputError("lift_flow: flow does not satisfy the original netflow");

    FlowVector out;
    out.values = f.values;
    out.values.resize(map.reduced.edge_count(), Rat(1));  // pendant edges carry one unit
    out.netflow = unit_netflow(map.reduced);
    return out;
}

TwoPointExtension two_point_extend(const EmbeddedDag& dag) {
    require_valid_balanced(dag);

    TwoPointExtension ext;
    ext.base = dag;
    EmbeddedDag& out = ext.extended;
    out.vertices = dag.vertices;
    out.edges = dag.edges;

    std::set<std::string> vnames, enames;
    for (const auto& v : out.vertices) vnames.insert(v.name);
    for (const auto& e : out.edges) enames.insert(e.name);

    ext.zero_vertex = out.vertex_count();
    out.vertices.push_back({unique_name("0^", vnames), {}, {}});
    ext.one_vertex = out.vertex_count();
    out.vertices.push_back({unique_name("1^", vnames), {}, {}});

    for (int s : dag.sources) {
        int e = out.edge_count();
        out.edges.push_back({unique_name("0>" + dag.vertices[s].name, enames), ext.zero_vertex, s});
        out.vertices[ext.zero_vertex].out_edges.push_back(e);
        out.vertices[s].in_edges = {e};
        ext.extension_edges.insert(e);
    }
    for (int t : dag.sinks) {
        int e = out.edge_count();
        out.edges.push_back({unique_name(dag.vertices[t].name + ">1", enames), t, ext.one_vertex});
        out.vertices[ext.one_vertex].in_edges.push_back(e);
        out.vertices[t].out_edges = {e};
        ext.extension_edges.insert(e);
    }
    out.sources = {ext.zero_vertex};
    out.sinks = {ext.one_vertex};

    ValidationReport check = validate_strong_planarity(out);
    if (!check.ok)
        throw InternalInvariantViolation("two_point_extend: extension is not strongly planar (" +
                                         check.violations.front().rule + ": " +
                                         check.violations.front().detail + ")");
    return ext;
}

FlowVector hat_flow(const TwoPointExtension& ext, const FlowVector& f) {
    Rat strength = scaled_unit_strength(ext.base, f);
    FlowVector out;
    out.values = f.values;
    out.values.resize(ext.extended.edge_count(), strength);
    out.netflow.values.assign(ext.extended.vertex_count(), 0);
    Rat total = strength * Rat(static_cast<int>(ext.base.sources.size()));
    if (!is_integer(total)) {
        out.netflow.values.clear();  // rational strength: netflow kept empty
    } else {
        out.netflow.values[ext.zero_vertex] = numerator(total);
        out.netflow.values[ext.one_vertex] = -numerator(total);
    }
    return out;
}

FlowVector restrict_layered_flow(const TwoPointExtension& ext, const FlowVector& f) {
    if (static_cast<int>(f.values.size()) != ext.extended.edge_count())
        throw InvalidInputError("flow has wrong length");
    Rat level;
    bool first = true;
    for (int e : ext.extension_edges) {
        if (first) {
            level = f.values[e];
            first = false;
        } else if (f.values[e] != level) {
            throw InvalidInputError("flow is not layered (extension edges carry unequal values)");
        }
    }
    FlowVector out;
    out.values.assign(f.values.begin(), f.values.begin() + ext.base.edge_count());
    scaled_unit_strength(ext.base, out);  // validates conservation
    out.netflow = unit_netflow(ext.base);
    return out;
}

Route hat_route(const TwoPointExtension& ext, const Route& p) {
    require_route(ext.base, p);
    int s = route_source(ext.base, p);
    int t = route_sink(ext.base, p);
    Route out;
    out.edges.push_back(ext.extended.vertices[s].in_edges.front());
    out.edges.insert(out.edges.end(), p.edges.begin(), p.edges.end());
    out.edges.push_back(ext.extended.vertices[t].out_edges.front());
    return out;
}

Route unhat_route(const TwoPointExtension& ext, const Route& p) {
    require_route(ext.extended, p);
    if (p.edges.size() < 3 || !ext.extension_edges.count(p.edges.front()) ||
        !ext.extension_edges.count(p.edges.back()))
        throw InvalidInputError("route is not an extension of a base route");
    return Route{std::vector<int>(p.edges.begin() + 1, p.edges.end() - 1)};
}

}  // namespace flowtri
