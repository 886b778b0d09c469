#pragma once

#include "flowtri/embedded_dag.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace flowtri {

/// A source-to-sink directed path, as a contiguous edge sequence.
struct Route {
    std::vector<int> edges;

    bool operator==(const Route& other) const { return edges == other.edges; }
    bool operator<(const Route& other) const { return edges < other.edges; }
};

int route_source(const EmbeddedDag& dag, const Route& r);
int route_sink(const EmbeddedDag& dag, const Route& r);

/// Vertices along the route: tails of the edges, then the final head.
std::vector<int> route_vertices(const EmbeddedDag& dag, const Route& r);

/// Throws InvalidInputError unless r is a route of dag (contiguous, starts at
/// a source, ends at a sink, repeats no vertex).
void require_route(const EmbeddedDag& dag, const Route& r);

enum class Cmp { Less, Equal, Greater };

/// Post-v order on paths from v to a sink: first divergent out-edges after
/// the maximal common prefix, compared bottom-to-top. A strict total order on
/// the distinct v-to-sink paths.
Cmp cmp_post(const EmbeddedDag& dag, int v, const std::vector<int>& path_a,
             const std::vector<int>& path_b);

/// Pre-v order on paths from a source to v, dual to cmp_post: first divergent
/// in-edges of the maximal common suffix.
Cmp cmp_pre(const EmbeddedDag& dag, int v, const std::vector<int>& path_a,
            const std::vector<int>& path_b);

/// Compare two routes through the shared vertex v by their subpaths from v
/// (post) or up to v (pre).
Cmp cmp_post_at(const EmbeddedDag& dag, int v, const Route& p, const Route& q);
Cmp cmp_pre_at(const EmbeddedDag& dag, int v, const Route& p, const Route& q);

struct CompatibilityResult {
    bool compatible = true;
    std::optional<int> witness;  // a vertex where the two routes cross
};

/// Routes are incompatible iff at some shared vertex the pre- and post-orders
/// disagree (the routes cross transversally there).
CompatibilityResult are_compatible(const EmbeddedDag& dag, const Route& p, const Route& q);

/// Source index i (0-based) if the route runs from sources[i] to sinks[i].
std::optional<int> horizontal_index(const EmbeddedDag& dag, const Route& r);

/// All routes, sources bottom-to-top, out-edges bottom-to-top within the DFS.
/// Throws LimitExceededError once more than `limit` routes are found.
std::vector<Route> enumerate_routes(const EmbeddedDag& dag, long long limit = 1000000);

/// 0/1 vector over edges.
IntVec indicator(const EmbeddedDag& dag, const Route& r);

struct RouteDecomposition {
    std::vector<std::pair<Route, Int>> terms;  // coefficients positive
};

/// Unique positive clique decomposition of a nonnegative integer flow on a
/// one-source-one-sink validated dag, computed by order-preserving matching
/// of flow units at each vertex in topological order. The pairwise
/// compatibility of the result is asserted, not assumed.
RouteDecomposition dkk_decompose(const EmbeddedDag& dag, const FlowVector& f);

}  // namespace flowtri
