#pragma once

#include "flowtri/layerings.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace flowtri {

enum class MutationType { Shuffle, Rotation, Realignment };
enum class MutationDirection { Up, Down };

struct MutationKind {
    MutationType kind;
    MutationDirection direction;
};

/// For a layering at `position` of a chain-sorted maximal clique: the source
/// index where it differs from the member covering it (up), from the member
/// it covers (down), and the common value when the two coincide or only one
/// exists (updown). The updown route occurs in no other member of the clique.
struct UpDownIndex {
    std::optional<int> up, down, updown;
};

UpDownIndex up_down_indices(const LayeringUniverse& universe, const std::vector<int>& clique,
                            int position);

/// Cliques are adjacent when they exchange exactly one layering.
bool adjacent(const std::vector<int>& a, const std::vector<int>& b);

/// Classification of the move turning K into the adjacent clique L: a
/// shuffle when the exchanged layering's routes all survive in K, otherwise a
/// rotation (interior position) or realignment (extreme position). The
/// structural consequences (matching positions, updown offsets, the route
/// exchange) are asserted, not assumed.
MutationKind classify_mutation(const EmbeddedDag& dag, const LayeringUniverse& universe,
                               const std::vector<int>& k, const std::vector<int>& l);

/// The unique adjacent maximal clique exchanging the member at `position`, or
/// nullopt when that facet lies on the polytope boundary.
std::optional<std::vector<int>> mutate(const EmbeddedDag& dag, const LayeringUniverse& universe,
                                       const std::vector<int>& clique, int position);

/// Total lexicographic order on layerings, highest differing source first.
Cmp cmp_post_source(const EmbeddedDag& dag, const Layering& p, const Layering& q);

/// Total lexicographic order on equal-size chain-sorted cliques, highest
/// differing position first. Strictly decreases along down-mutations.
Cmp cmp_post_source_cliques(const EmbeddedDag& dag, const LayeringUniverse& universe,
                            const std::vector<int>& k, const std::vector<int>& l);

struct PosetEdge {
    int from = -1, to = -1;  // `to` is a down-mutation of `from`
    MutationType kind = MutationType::Rotation;
};

struct FramingPoset {
    LayeringUniverse universe;
    std::vector<std::vector<int>> nodes;  // maximal cliques, post-source order
    std::vector<PosetEdge> down_edges;
    std::vector<std::pair<int, int>> reduction;  // transitive reduction of down_edges
};

/// All maximal cliques with one directed edge per adjacent pair, oriented
/// down; acyclicity is certified by the strict post-source decrease along
/// every edge.
FramingPoset build_framing_poset(const EmbeddedDag& dag, long long limit = 1000000);

}  // namespace flowtri
