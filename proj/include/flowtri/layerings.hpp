#pragma once

#include "flowtri/embedded_dag.hpp"
#include "flowtri/routes.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace flowtri {

/// One horizontal i-route per source index, pairwise compatible.
struct Layering {
    std::vector<Route> routes;

    bool operator==(const Layering& other) const { return routes == other.routes; }
};

/// Throws InvalidInputError unless l is a layering of dag.
void require_layering(const EmbeddedDag& dag, const Layering& l);

/// The indicator flow of a layering: the sum of its routes' indicators, an
/// integer unit flow.
FlowVector layering_indicator(const EmbeddedDag& dag, const Layering& l);

/// Inverse of layering_indicator on integer unit flows, computed through the
/// two-point extension and the unit-matching decomposition.
Layering layering_from_flow(const EmbeddedDag& dag, const FlowVector& f);

/// Enumerates integer flows with the given netflow by assigning out-edge
/// values vertex by vertex in topological order, pruning on conservation.
/// Deterministic; throws LimitExceededError past `limit` flows.
void for_each_integer_flow(const EmbeddedDag& dag, const NetflowVector& netflow,
                           long long limit, const std::function<void(const IntVec&)>& fn);

/// All layerings, in the order of the underlying integer-unit-flow
/// enumeration.
std::vector<Layering> enumerate_layerings(const EmbeddedDag& dag, long long limit = 1000000);

enum class LayeringOrder { Below, Equal, Above, Incompatible };

/// Compatibility comparison: Below iff the pair is route-compatible and every
/// component satisfies p_i below-or-equal q_i with at least one strict.
/// Incompatible covers both route crossings and conflicting components.
LayeringOrder cmp_layerings(const EmbeddedDag& dag, const Layering& p, const Layering& q);

/// All layerings plus the full pairwise comparison table.
struct LayeringUniverse {
    std::vector<Layering> layerings;
    std::vector<std::vector<LayeringOrder>> relation;

    bool compatible(int a, int b) const { return relation[a][b] != LayeringOrder::Incompatible; }
    int size() const { return static_cast<int>(layerings.size()); }
};

LayeringUniverse build_layering_universe(const EmbeddedDag& dag, long long limit = 1000000);

/// Exact dimension of the unit flow polytope: the rank of the differences of
/// the layering indicator vectors.
int unit_polytope_dimension(const EmbeddedDag& dag, const LayeringUniverse& universe);

/// Maximal cliques of the layering compatibility graph (Bron-Kerbosch with
/// pivoting). Each clique is returned as indices into the universe, sorted
/// ascending by the chain order; the clique list is sorted by the post-source
/// order. Purity (every clique has dimension+1 members) is asserted.
std::vector<std::vector<int>> maximal_layering_cliques(const EmbeddedDag& dag,
                                                       const LayeringUniverse& universe,
                                                       long long limit = 1000000);

struct LayeringCliqueSet {
    LayeringUniverse universe;
    std::vector<std::vector<int>> cliques;
};

LayeringCliqueSet enumerate_maximal_layering_cliques(const EmbeddedDag& dag,
                                                     long long limit = 1000000);

struct LayeringDecomposition {
    std::vector<std::pair<Layering, Rat>> terms;  // coefficients positive, chain order
};

/// The unique layering-clique combination equal to a nonnegative rational
/// flow of rational strength: scale to integers, push through the two-point
/// extension and the unit-matching decomposition, regroup units by source in
/// post-source order, and rescale.
LayeringDecomposition decompose_flow(const EmbeddedDag& dag, const FlowVector& f);

}  // namespace flowtri
