#include "flowtri/routes.hpp"

#include "flowtri/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace flowtri {

namespace {

int position_of(const std::vector<int>& list, int value) {
    for (size_t i = 0; i < list.size(); ++i)
        if (list[i] == value) return static_cast<int>(i);
    throw InvalidInputError("edge does not occur in the expected embedding order list");
}

bool listed(const std::vector<int>& list, int value) {
    return std::find(list.begin(), list.end(), value) != list.end();
}

}  // namespace

int route_source(const EmbeddedDag& dag, const Route& r) {
    if (r.edges.empty()) throw InvalidInputError("empty route");
    return dag.edges[r.edges.front()].tail;
}

int route_sink(const EmbeddedDag& dag, const Route& r) {
    if (r.edges.empty()) throw InvalidInputError("empty route");
    return dag.edges[r.edges.back()].head;
}

std::vector<int> route_vertices(const EmbeddedDag& dag, const Route& r) {
    std::vector<int> vs;
    vs.reserve(r.edges.size() + 1);
    for (int e : r.edges) vs.push_back(dag.edges[e].tail);
    vs.push_back(dag.edges[r.edges.back()].head);
    return vs;
}

void require_route(const EmbeddedDag& dag, const Route& r) {
    if (r.edges.empty()) throw InvalidInputError("empty route");
    for (int e : r.edges)
        if (e < 0 || e >= dag.edge_count()) throw InvalidInputError("route edge out of range");
    for (size_t k = 0; k + 1 < r.edges.size(); ++k)
        if (dag.edges[r.edges[k]].head != dag.edges[r.edges[k + 1]].tail)
            throw InvalidInputError("route edges are not contiguous");
    if (!listed(dag.sources, route_source(dag, r)))
        throw InvalidInputError("route does not start at a source");
    if (!listed(dag.sinks, route_sink(dag, r)))
        throw InvalidInputError("route does not end at a sink");
    auto vs = route_vertices(dag, r);
    std::set<int> dedup(vs.begin(), vs.end());
    if (dedup.size() != vs.size()) throw InvalidInputError("route repeats a vertex");
}

Cmp cmp_post(const EmbeddedDag& dag, int v, const std::vector<int>& path_a,
             const std::vector<int>& path_b) {
    auto start_of = [&](const std::vector<int>& p) {
        return p.empty() ? v : dag.edges[p.front()].tail;
    };
    if (start_of(path_a) != v || start_of(path_b) != v)
        throw InvalidInputError("cmp_post: path does not start at the given vertex");
    size_t k = 0;
    int at = v;
    while (true) {
        if (k == path_a.size() && k == path_b.size()) return Cmp::Equal;
        if (k == path_a.size() || k == path_b.size())
            throw InvalidInputError("cmp_post: one path ends where the other continues");
        if (path_a[k] != path_b[k]) {
            int pa = position_of(dag.vertices[at].out_edges, path_a[k]);
            int pb = position_of(dag.vertices[at].out_edges, path_b[k]);
            return pa < pb ? Cmp::Less : Cmp::Greater;
        }
        at = dag.edges[path_a[k]].head;
        ++k;
    }
}

Cmp cmp_pre(const EmbeddedDag& dag, int v, const std::vector<int>& path_a,
            const std::vector<int>& path_b) {
    auto end_of = [&](const std::vector<int>& p) {
        return p.empty() ? v : dag.edges[p.back()].head;
    };
    if (end_of(path_a) != v || end_of(path_b) != v)
        throw InvalidInputError("cmp_pre: path does not end at the given vertex");
    size_t k = 0;
    int at = v;
    while (true) {
        if (k == path_a.size() && k == path_b.size()) return Cmp::Equal;
        if (k == path_a.size() || k == path_b.size())
            throw InvalidInputError("cmp_pre: one path begins where the other continues");
        int ea = path_a[path_a.size() - 1 - k];
        int eb = path_b[path_b.size() - 1 - k];
        if (ea != eb) {
            int pa = position_of(dag.vertices[at].in_edges, ea);
            int pb = position_of(dag.vertices[at].in_edges, eb);
            return pa < pb ? Cmp::Less : Cmp::Greater;
        }
        at = dag.edges[ea].tail;
        ++k;
    }
}

namespace {

// Splits a route at v into (prefix ending at v, suffix starting at v).
std::pair<std::vector<int>, std::vector<int>> split_at(const EmbeddedDag& dag, const Route& r,
                                                       int v) {
    size_t cut = r.edges.size() + 1;
    if (dag.edges[r.edges.front()].tail == v) cut = 0;
    for (size_t k = 0; k < r.edges.size(); ++k)
        if (dag.edges[r.edges[k]].head == v) cut = k + 1;
    if (cut > r.edges.size()) throw InvalidInputError("route does not pass through the vertex");
    return {std::vector<int>(r.edges.begin(), r.edges.begin() + cut),
            std::vector<int>(r.edges.begin() + cut, r.edges.end())};
}

}  // namespace

Cmp cmp_post_at(const EmbeddedDag& dag, int v, const Route& p, const Route& q) {
    return cmp_post(dag, v, split_at(dag, p, v).second, split_at(dag, q, v).second);
}

Cmp cmp_pre_at(const EmbeddedDag& dag, int v, const Route& p, const Route& q) {
    return cmp_pre(dag, v, split_at(dag, p, v).first, split_at(dag, q, v).first);
}

CompatibilityResult are_compatible(const EmbeddedDag& dag, const Route& p, const Route& q) {
    auto pv = route_vertices(dag, p);
    std::set<int> qv_set;
    for (int v : route_vertices(dag, q)) qv_set.insert(v);
    for (int v : pv) {
        if (!qv_set.count(v)) continue;
        Cmp pre = cmp_pre_at(dag, v, p, q);
        Cmp post = cmp_post_at(dag, v, p, q);
        if ((pre == Cmp::Less && post == Cmp::Greater) ||
            (pre == Cmp::Greater && post == Cmp::Less))
            return {false, v};
    }
    return {true, std::nullopt};
}

std::optional<int> horizontal_index(const EmbeddedDag& dag, const Route& r) {
    int s = route_source(dag, r);
    int t = route_sink(dag, r);
    for (size_t i = 0; i < dag.sources.size(); ++i)
        if (dag.sources[i] == s)
            return (i < dag.sinks.size() && dag.sinks[i] == t)
                       ? std::optional<int>(static_cast<int>(i))
                       : std::nullopt;
    return std::nullopt;
}

std::vector<Route> enumerate_routes(const EmbeddedDag& dag, long long limit) {
    std::vector<Route> out;
    std::vector<int> stack;
    auto dfs = [&](auto&& self, int v) -> void {
        if (dag.vertices[v].out_edges.empty()) {
            if (static_cast<long long>(out.size()) >= limit)
                throw LimitExceededError("more than " + std::to_string(limit) + " routes");
            out.push_back(Route{stack});
            return;
        }
        for (int e : dag.vertices[v].out_edges) {
            stack.push_back(e);
            self(self, dag.edges[e].head);
            stack.pop_back();
        }
    };
    for (int s : dag.sources) dfs(dfs, s);
    return out;
}

IntVec indicator(const EmbeddedDag& dag, const Route& r) {
    IntVec x(dag.edge_count(), 0);
    for (int e : r.edges) x[e] = 1;
    return x;
}

RouteDecomposition dkk_decompose(const EmbeddedDag& dag, const FlowVector& f) {
    if (dag.sources.size() != 1 || dag.sinks.size() != 1)
        throw InvalidInputError("dkk_decompose requires one source and one sink");
    if (static_cast<int>(f.values.size()) != dag.edge_count())
        throw InvalidInputError("flow vector has wrong length");
    for (const Rat& x : f.values) {
        if (!is_integer(x)) throw InvalidInputError("dkk_decompose requires an integer flow");
        if (x < 0) throw InvalidInputError("flow is negative on an edge");
    }
    const int source = dag.sources[0];
    Int strength = 0;
    for (int e : dag.vertices[source].out_edges) strength += numerator(f.values[e]);
    NetflowVector want;
    want.values.assign(dag.vertex_count(), 0);
    want.values[source] = strength;
    want.values[dag.sinks[0]] = -strength;
    if (!satisfies_netflow(dag, f.values, want))
        throw InvalidInputError("flow does not conserve a multiple of the unit netflow");

    // One history per flow unit; units are matched at each vertex in
    // topological order, k-th arrival (in the pre-v order of histories) to
    // the k-th departure slot (out-edges bottom-to-top).
    std::vector<std::vector<int>> arriving_on_edge(dag.edge_count());
    std::vector<std::vector<int>> histories;
    std::vector<std::vector<int>> finished;

    auto order = topological_order(dag);
    if (!order) throw InvalidInputError("graph has a cycle");
    for (int v : *order) {
        std::vector<int> units;
        if (v == source) {
            for (Int j = 0; j < strength; ++j) {
                units.push_back(static_cast<int>(histories.size()));
                histories.emplace_back();
            }
        }
        for (int e : dag.vertices[v].in_edges)
            for (int u : arriving_on_edge[e]) units.push_back(u);
        std::stable_sort(units.begin(), units.end(), [&](int a, int b) {
            return cmp_pre(dag, v, histories[a], histories[b]) == Cmp::Less;
        });
        if (dag.vertices[v].out_edges.empty()) {
            for (int u : units) finished.push_back(histories[u]);
            continue;
        }
        size_t k = 0;
        for (int e : dag.vertices[v].out_edges) {
            for (Int j = 0; j < numerator(f.values[e]); ++j) {
                if (k >= units.size())
                    throw InternalInvariantViolation("unit matching ran out of arrivals");
                histories[units[k]].push_back(e);
                arriving_on_edge[e].push_back(units[k]);
                ++k;
            }
        }
        if (k != units.size())
            throw InternalInvariantViolation("unit matching left arrivals unassigned");
    }

    // Collapse the multiset and assert that it is a clique.
    std::map<std::vector<int>, Int> multiplicity;
    for (auto& h : finished) ++multiplicity[h];
    RouteDecomposition result;
    for (auto& [edges, count] : multiplicity) result.terms.push_back({Route{edges}, count});
    std::sort(result.terms.begin(), result.terms.end(), [&](const auto& a, const auto& b) {
        return cmp_post(dag, source, a.first.edges, b.first.edges) == Cmp::Less;
    });
    for (size_t i = 0; i < result.terms.size(); ++i)
        for (size_t j = i + 1; j < result.terms.size(); ++j)
            if (!are_compatible(dag, result.terms[i].first, result.terms[j].first).compatible)
                throw InternalInvariantViolation(
                    "unit matching produced an incompatible pair of routes");
    return result;
}

}  // namespace flowtri
