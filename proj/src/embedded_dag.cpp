#include "flowtri/embedded_dag.hpp"

#include "flowtri/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace flowtri {

namespace {

std::string vname(const EmbeddedDag& dag, int v) { return dag.vertices[v].name; }

// Endpoint/partition consistency: in/out lists agree with edge tails/heads
// and every edge appears in exactly one in-list and one out-list slot.
std::optional<std::string> partition_problem(const EmbeddedDag& dag) {
    std::vector<int> in_seen(dag.edge_count(), 0), out_seen(dag.edge_count(), 0);
    for (int v = 0; v < dag.vertex_count(); ++v) {
        for (int e : dag.vertices[v].in_edges) {
            if (dag.edges[e].head != v)
                return "edge '" + dag.edges[e].name + "' listed as incoming at '" +
                       vname(dag, v) + "' but its head is '" +
                       vname(dag, dag.edges[e].head) + "'";
            ++in_seen[e];
        }
        for (int e : dag.vertices[v].out_edges) {
            if (dag.edges[e].tail != v)
                return "edge '" + dag.edges[e].name + "' listed as outgoing at '" +
                       vname(dag, v) + "' but its tail is '" +
                       vname(dag, dag.edges[e].tail) + "'";
            ++out_seen[e];
        }
    }
    for (int e = 0; e < dag.edge_count(); ++e) {
        if (in_seen[e] != 1)
            return "edge '" + dag.edges[e].name + "' appears " +
                   std::to_string(in_seen[e]) + " times in in-lists";
        if (out_seen[e] != 1)
            return "edge '" + dag.edges[e].name + "' appears " +
                   std::to_string(out_seen[e]) + " times in out-lists";
    }
    return std::nullopt;
}

std::vector<int> undirected_components(const EmbeddedDag& dag, int& count) {
    std::vector<int> comp(dag.vertex_count(), -1);
    count = 0;
    for (int start = 0; start < dag.vertex_count(); ++start) {
        if (comp[start] != -1) continue;
        int c = count++;
        std::deque<int> q{start};
        comp[start] = c;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            auto visit = [&](int w) {
                if (comp[w] == -1) {
                    comp[w] = c;
                    q.push_back(w);
                }
            };
            for (int e : dag.vertices[v].in_edges) visit(dag.edges[e].tail);
            for (int e : dag.vertices[v].out_edges) visit(dag.edges[e].head);
        }
    }
    return comp;
}

// Transshipment feasibility with unbounded edge capacities: route the supply
// (positive netflows) to the demands through the directed edges of the dag.
// Edmonds-Karp on a super-source/super-sink network.
bool flow_exists(const EmbeddedDag& dag, const NetflowVector& a) {
    Int supply = 0, demand = 0;
    for (const Int& x : a.values) {
        if (x > 0) supply += x;
        if (x < 0) demand -= x;
    }
    if (supply != demand) return false;
    if (supply == 0) return true;

    const int n = dag.vertex_count();
    const int s = n, t = n + 1;
    struct Arc {
        int to;
        Int cap;
        int rev;
    };
    std::vector<std::vector<Arc>> adj(n + 2);
    auto add_arc = [&](int u, int v, Int cap) {
        adj[u].push_back({v, std::move(cap), static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
    };
    const Int inf = supply;
    for (int v = 0; v < n; ++v) {
        if (a.values[v] > 0) add_arc(s, v, a.values[v]);
        if (a.values[v] < 0) add_arc(v, t, -a.values[v]);
    }
    for (const auto& e : dag.edges) add_arc(e.tail, e.head, inf);

    Int pushed = 0;
    while (true) {
        std::vector<std::pair<int, int>> pred(n + 2, {-1, -1});  // vertex, arc idx
        std::deque<int> q{s};
        pred[s] = {s, -1};
        while (!q.empty() && pred[t].first == -1) {
            int u = q.front();
            q.pop_front();
            for (int i = 0; i < static_cast<int>(adj[u].size()); ++i) {
                const Arc& arc = adj[u][i];
                if (arc.cap > 0 && pred[arc.to].first == -1) {
                    pred[arc.to] = {u, i};
                    q.push_back(arc.to);
                }
            }
        }
        if (pred[t].first == -1) break;
        Int bottleneck = inf;
        for (int v = t; v != s;) {
            auto [u, i] = pred[v];
            bottleneck = std::min(bottleneck, adj[u][i].cap);
            v = u;
        }
        for (int v = t; v != s;) {
            auto [u, i] = pred[v];
            adj[u][i].cap -= bottleneck;
            adj[adj[u][i].to][adj[u][i].rev].cap += bottleneck;
            v = u;
        }
        pushed += bottleneck;
    }
    return pushed == supply;
}

bool vertex_is_source(const EmbeddedDag& dag, int v) {
    return dag.vertices[v].in_edges.empty() && !dag.vertices[v].out_edges.empty();
}
bool vertex_is_sink(const EmbeddedDag& dag, int v) {
    return dag.vertices[v].out_edges.empty() && !dag.vertices[v].in_edges.empty();
}

}  // namespace

int EmbeddedDag::find_vertex(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (vertices[v].name == name) return v;
    return -1;
}

int EmbeddedDag::find_edge(const std::string& name) const {
    for (int e = 0; e < edge_count(); ++e)
        if (edges[e].name == name) return e;
    return -1;
}

void check_ids(const EmbeddedDag& dag) {
    std::set<std::string> names;
    for (const auto& v : dag.vertices) {
        if (v.name.empty()) throw StructuralError("empty vertex id");
        if (!names.insert("v:" + v.name).second)
            throw StructuralError("duplicate vertex id '" + v.name + "'");
        for (int e : v.in_edges)
            if (e < 0 || e >= dag.edge_count())
                throw StructuralError("in-edge index out of range at '" + v.name + "'");
        for (int e : v.out_edges)
            if (e < 0 || e >= dag.edge_count())
                throw StructuralError("out-edge index out of range at '" + v.name + "'");
    }
    std::set<std::string> enames;
    for (const auto& e : dag.edges) {
        if (e.name.empty()) throw StructuralError("empty edge id");
        if (!enames.insert(e.name).second)
            throw StructuralError("duplicate edge id '" + e.name + "'");
        if (e.tail < 0 || e.tail >= dag.vertex_count() || e.head < 0 ||
            e.head >= dag.vertex_count())
            throw StructuralError("edge '" + e.name + "' has endpoint out of range");
    }
    for (int v : dag.sources)
        if (v < 0 || v >= dag.vertex_count())
            throw StructuralError("source index out of range");
    for (int v : dag.sinks)
        if (v < 0 || v >= dag.vertex_count())
            throw StructuralError("sink index out of range");
}

std::vector<std::vector<int>> derive_rotation_system(const EmbeddedDag& dag) {
    check_ids(dag);
    if (auto problem = partition_problem(dag)) throw StructuralError(*problem);
    std::vector<std::vector<int>> rot(dag.vertex_count());
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const auto& rec = dag.vertices[v];
        rot[v].reserve(rec.in_edges.size() + rec.out_edges.size());
        for (int e : rec.out_edges) rot[v].push_back(e);
        for (auto it = rec.in_edges.rbegin(); it != rec.in_edges.rend(); ++it)
            rot[v].push_back(*it);
    }
    return rot;
}

int dart_base_vertex(const EmbeddedDag& dag, int dart) {
    const EdgeRecord& e = dag.edges[dart / 2];
    return (dart % 2 == 0) ? e.tail : e.head;
}

FaceStructure trace_faces(const EmbeddedDag& dag) {
    check_ids(dag);
    if (auto problem = partition_problem(dag)) throw StructuralError(*problem);

    // Counterclockwise dart rotation at each vertex: forward darts of
    // out-edges bottom-to-top, then backward darts of in-edges top-to-bottom.
    std::vector<std::vector<int>> rot(dag.vertex_count());
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const auto& rec = dag.vertices[v];
        for (int e : rec.out_edges) rot[v].push_back(2 * e);
        for (auto it = rec.in_edges.rbegin(); it != rec.in_edges.rend(); ++it)
            rot[v].push_back(2 * *it + 1);
    }
    const int dart_count = 2 * dag.edge_count();
    std::vector<int> next_at_vertex(dart_count, -1);
    for (int v = 0; v < dag.vertex_count(); ++v) {
        const auto& r = rot[v];
        for (size_t i = 0; i < r.size(); ++i)
            next_at_vertex[r[i]] = r[(i + 1) % r.size()];
    }

    FaceStructure fs;
    fs.face_of_dart.assign(dart_count, -1);
    for (int d = 0; d < dart_count; ++d) {
        if (fs.face_of_dart[d] != -1) continue;
        std::vector<int> cycle;
        int cur = d;
        while (fs.face_of_dart[cur] == -1) {
            fs.face_of_dart[cur] = static_cast<int>(fs.faces.size());
            cycle.push_back(cur);
            cur = next_at_vertex[cur ^ 1];  // successor of the reversed dart
        }
        fs.faces.push_back(std::move(cycle));
    }
    fs.component = undirected_components(dag, fs.component_count);

    fs.outer_face_of_component.assign(fs.component_count, -1);
    for (int c = 0; c < fs.component_count; ++c) {
        std::vector<int> terminals;
        for (int v = 0; v < dag.vertex_count(); ++v)
            if (fs.component[v] == c && (vertex_is_source(dag, v) || vertex_is_sink(dag, v)))
                terminals.push_back(v);
        if (terminals.empty()) continue;
        for (int f = 0; f < static_cast<int>(fs.faces.size()); ++f) {
            if (fs.component[dart_base_vertex(dag, fs.faces[f][0])] != c) continue;
            // First visits of terminal vertices along the face walk.
            std::vector<int> walk;
            std::set<int> seen;
            for (int dart : fs.faces[f]) {
                int v = dart_base_vertex(dag, dart);
                if ((vertex_is_source(dag, v) || vertex_is_sink(dag, v)) &&
                    seen.insert(v).second)
                    walk.push_back(v);
            }
            if (walk.size() != terminals.size()) continue;
            // The boundary of a strongly planar drawing reads, cyclically,
            // sources top-to-bottom then sinks bottom-to-top. Demand that
            // sources form one contiguous cyclic arc.
            const size_t n = walk.size();
            size_t arcs = 0;
            for (size_t i = 0; i < n; ++i) {
                bool a = vertex_is_source(dag, walk[i]);
                bool b = vertex_is_source(dag, walk[(i + 1) % n]);
                if (a && !b) ++arcs;
            }
            bool has_source = false, has_sink = false;
            for (int v : walk) (vertex_is_source(dag, v) ? has_source : has_sink) = true;
            if (has_source && has_sink && arcs != 1) continue;
            fs.outer_face_of_component[c] = f;
            break;
        }
    }
    return fs;
}

namespace {

// Per component the rotation system must be a sphere embedding, which in the
// plane drawing (outer faces merged into the one unbounded face) amounts to
// V - E + F = 1 + c.
void check_euler(const EmbeddedDag& dag, const FaceStructure& fs, ValidationReport& report) {
    std::vector<int> v_count(fs.component_count, 0), e_count(fs.component_count, 0),
        f_count(fs.component_count, 0);
    for (int v = 0; v < dag.vertex_count(); ++v) ++v_count[fs.component[v]];
    for (const auto& e : dag.edges) ++e_count[fs.component[e.tail]];
    for (const auto& face : fs.faces) ++f_count[fs.component[dart_base_vertex(dag, face[0])]];
    for (int c = 0; c < fs.component_count; ++c) {
        if (e_count[c] == 0) continue;  // isolated vertex, reported elsewhere
        if (v_count[c] - e_count[c] + f_count[c] != 2)
            report.add("euler", "component " + std::to_string(c) + " face count gives V-E+F = " +
                                    std::to_string(v_count[c] - e_count[c] + f_count[c]) +
                                    ", embedding is not planar");
    }
}

// Reads the component's source/sink orders off its outer-face walk:
// sources appear top-to-bottom, then sinks bottom-to-top.
struct DerivedOrder {
    std::vector<int> sources, sinks;  // bottom-to-top
};

std::optional<DerivedOrder> derive_component_order(const EmbeddedDag& dag,
                                                   const FaceStructure& fs, int c) {
    int f = fs.outer_face_of_component[c];
    if (f < 0) return std::nullopt;
    std::vector<int> walk;
    std::set<int> seen;
    for (int dart : fs.faces[f]) {
        int v = dart_base_vertex(dag, dart);
        if ((vertex_is_source(dag, v) || vertex_is_sink(dag, v)) && seen.insert(v).second)
            walk.push_back(v);
    }
    const size_t n = walk.size();
    size_t start = 0;  // rotate so the walk starts with the source block
    for (size_t i = 0; i < n; ++i) {
        bool prev_sink = !vertex_is_source(dag, walk[(i + n - 1) % n]);
        if (vertex_is_source(dag, walk[i]) && prev_sink) {
            start = i;
            break;
        }
    }
    DerivedOrder order;
    for (size_t i = 0; i < n; ++i) {
        int v = walk[(start + i) % n];
        if (vertex_is_source(dag, v)) {
            if (!order.sinks.empty()) return std::nullopt;  // interleaved
            order.sources.push_back(v);
        } else {
            order.sinks.push_back(v);
        }
    }
    std::reverse(order.sources.begin(), order.sources.end());
    return order;
}

}  // namespace

ValidationReport validate_strong_planarity(const EmbeddedDag& dag) {
    ValidationReport report;
    try {
        check_ids(dag);
    } catch (const StructuralError& err) {
        report.add("ids", err.what());
        return report;
    }

    for (int v = 0; v < dag.vertex_count(); ++v)
        if (dag.vertices[v].in_edges.empty() && dag.vertices[v].out_edges.empty())
            report.add("incidence", "vertex '" + vname(dag, v) + "' is incident to no edge");

    bool partition_ok = true;
    if (auto problem = partition_problem(dag)) {
        report.add("partition", *problem);
        partition_ok = false;
    }

    if (!topological_order(dag))
        report.add("acyclic", "the directed graph contains a cycle");

    if (partition_ok) {
        auto check_exact = [&](const std::vector<int>& listed, bool want_source,
                               const char* rule) {
            std::set<int> listed_set(listed.begin(), listed.end());
            if (listed_set.size() != listed.size())
                report.add(rule, "list contains a vertex twice");
            for (int v = 0; v < dag.vertex_count(); ++v) {
                bool is_term = want_source ? vertex_is_source(dag, v) : vertex_is_sink(dag, v);
                if (is_term && !listed_set.count(v))
                    report.add(rule, "vertex '" + vname(dag, v) + "' missing from list");
                if (!is_term && listed_set.count(v))
                    report.add(rule, "vertex '" + vname(dag, v) + "' listed but is not one");
            }
        };
        check_exact(dag.sources, true, "sources-exact");
        check_exact(dag.sinks, false, "sinks-exact");
    }

    if (!partition_ok || !report.ok) {
        // Face tracing needs the partition; order checks need exact lists.
        if (partition_ok) {
            FaceStructure fs = trace_faces(dag);
            check_euler(dag, fs, report);
        }
        return report;
    }

    FaceStructure fs = trace_faces(dag);
    check_euler(dag, fs, report);

    // Outer face per component, and agreement of declared orders with it.
    std::vector<std::vector<int>> declared_sources(fs.component_count),
        declared_sinks(fs.component_count);
    std::vector<int> source_block, sink_block;  // component of each list entry
    for (int v : dag.sources) {
        declared_sources[fs.component[v]].push_back(v);
        if (source_block.empty() || source_block.back() != fs.component[v])
            source_block.push_back(fs.component[v]);
    }
    for (int v : dag.sinks) {
        declared_sinks[fs.component[v]].push_back(v);
        if (sink_block.empty() || sink_block.back() != fs.component[v])
            sink_block.push_back(fs.component[v]);
    }

    for (int c = 0; c < fs.component_count; ++c) {
        if (fs.outer_face_of_component[c] < 0) {
            report.add("outer-face",
                       "component " + std::to_string(c) +
                           " has no face holding all its sources and sinks in boundary order");
            continue;
        }
        auto order = derive_component_order(dag, fs, c);
        if (!order) {
            report.add("outer-face", "component " + std::to_string(c) +
                                         " outer boundary interleaves sources and sinks");
            continue;
        }
        if (order->sources != declared_sources[c])
            report.add("boundary-order", "source order of component " + std::to_string(c) +
                                             " does not match its outer-face order");
        if (order->sinks != declared_sinks[c])
            report.add("boundary-order", "sink order of component " + std::to_string(c) +
                                             " does not match its outer-face order");
    }

    // Components are stacked: each occupies a contiguous block of the global
    // source and sink orders, in the same relative order on both sides.
    std::set<int> sb(source_block.begin(), source_block.end());
    if (sb.size() != source_block.size())
        report.add("component-stacking", "sources of different components interleave");
    std::set<int> tb(sink_block.begin(), sink_block.end());
    if (tb.size() != sink_block.size())
        report.add("component-stacking", "sinks of different components interleave");
    else if (sb.size() == source_block.size() && source_block != sink_block)
        report.add("component-stacking",
                   "components appear in different orders among sources and sinks");

    return report;
}

ValidationReport check_nondegenerate(const EmbeddedDag& dag, const NetflowVector& a) {
    ValidationReport report;
    ValidationReport planarity = validate_strong_planarity(dag);
    if (!planarity.ok) {
        report.add("dag-invalid", "dag fails strong-planarity validation (" +
                                      planarity.violations.front().rule + ": " +
                                      planarity.violations.front().detail + ")");
        return report;
    }
    if (static_cast<int>(a.values.size()) != dag.vertex_count()) {
        report.add("netflow-domain", "netflow vector has " + std::to_string(a.values.size()) +
                                         " entries for " + std::to_string(dag.vertex_count()) +
                                         " vertices");
        return report;
    }
    for (int v : dag.sources)
        if (a.values[v] <= 0)
            report.add("source-positive", "source '" + vname(dag, v) + "' has netflow " +
                                              a.values[v].str());
    for (int v : dag.sinks)
        if (a.values[v] >= 0)
            report.add("sink-negative",
                       "sink '" + vname(dag, v) + "' has netflow " + a.values[v].str());
    Int sum = 0;
    for (const Int& x : a.values) sum += x;
    if (sum != 0) report.add("netflow-sum", "netflow entries sum to " + sum.str());

    if (!flow_exists(dag, a)) report.add("flow-exists", "no nonnegative flow has this netflow");

    FaceStructure fs = trace_faces(dag);
    for (int v = 0; v < dag.vertex_count(); ++v) {
        if (a.values[v] == 0) continue;
        int f = fs.outer_face_of_component[fs.component[v]];
        bool on_outer = false;
        if (f >= 0)
            for (int dart : fs.faces[f])
                if (dart_base_vertex(dag, dart) == v) on_outer = true;
        if (!on_outer)
            report.add("outer-face-netflow", "vertex '" + vname(dag, v) +
                                                 "' has nonzero netflow but is not on the outer face");
    }
    return report;
}

NetflowVector unit_netflow(const EmbeddedDag& dag) {
    NetflowVector a;
    a.values.assign(dag.vertex_count(), 0);
    for (int v : dag.sources) a.values[v] = 1;
    for (int v : dag.sinks) a.values[v] = -1;
    return a;
}

bool is_balanced(const EmbeddedDag& dag) {
    if (!validate_strong_planarity(dag).ok) return false;
    return check_nondegenerate(dag, unit_netflow(dag)).ok;
}

void require_valid_balanced(const EmbeddedDag& dag) {
    ValidationReport v = validate_strong_planarity(dag);
    if (!v.ok)
        throw InvalidInputError("dag is not strongly planar (" + v.violations.front().rule +
                                ": " + v.violations.front().detail + ")");
    ValidationReport n = check_nondegenerate(dag, unit_netflow(dag));
    if (!n.ok)
        throw InvalidInputError("dag is not balanced (" + n.violations.front().rule + ": " +
                                n.violations.front().detail + ")");
}

std::optional<std::vector<int>> topological_order(const EmbeddedDag& dag) {
    std::vector<int> indegree(dag.vertex_count(), 0);
    for (const auto& e : dag.edges) ++indegree[e.head];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < dag.vertex_count(); ++v)
        if (indegree[v] == 0) ready.push(v);
    std::vector<int> order;
    order.reserve(dag.vertex_count());
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int e : dag.vertices[v].out_edges)
            if (--indegree[dag.edges[e].head] == 0) ready.push(dag.edges[e].head);
    }
    if (static_cast<int>(order.size()) != dag.vertex_count()) return std::nullopt;
    return order;
}

Rat scaled_unit_strength(const EmbeddedDag& dag, const FlowVector& f) {
    if (static_cast<int>(f.values.size()) != dag.edge_count())
        throw InvalidInputError("flow has wrong length");
    for (const Rat& x : f.values)
        if (x < 0) throw InvalidInputError("flow is negative on an edge");
    Rat strength = 0;
    bool first = true;
    for (int s : dag.sources) {
        Rat out = 0;
        for (int e : dag.vertices[s].out_edges) out += f.values[e];
        if (first) {
            strength = out;
            first = false;
        } else if (out != strength) {
            throw InvalidInputError("flow is not a scaled unit flow (uneven source strengths)");
        }
    }
    for (int v = 0; v < dag.vertex_count(); ++v) {
        Rat net = 0;
        for (int e : dag.vertices[v].out_edges) net += f.values[e];
        for (int e : dag.vertices[v].in_edges) net -= f.values[e];
        Rat want = 0;
        if (dag.vertices[v].in_edges.empty()) want = strength;
        if (dag.vertices[v].out_edges.empty()) want = -strength;
        if (net != want)
            throw InvalidInputError("flow does not conserve a multiple of the unit netflow");
    }
    return strength;
}

bool satisfies_netflow(const EmbeddedDag& dag, const RatVec& f, const NetflowVector& a) {
    if (static_cast<int>(f.size()) != dag.edge_count()) return false;
    if (static_cast<int>(a.values.size()) != dag.vertex_count()) return false;
    for (int v = 0; v < dag.vertex_count(); ++v) {
        Rat net = 0;
        for (int e : dag.vertices[v].out_edges) net += f[e];
        for (int e : dag.vertices[v].in_edges) net -= f[e];
        if (net != Rat(a.values[v])) return false;
    }
    return true;
}

}  // namespace flowtri
