#include "flowtri/mutation_poset.hpp"

#include "flowtri/errors.hpp"

#include <algorithm>
#include <set>

namespace flowtri {

namespace {

// The unique source index at which two chain-adjacent members of a maximal
// clique differ.
int differing_source_index(const LayeringUniverse& u, int a, int b) {
    const Layering& p = u.layerings[a];
    const Layering& q = u.layerings[b];
    int found = -1;
    for (size_t i = 0; i < p.routes.size(); ++i) {
        if (p.routes[i] == q.routes[i]) continue;
        if (found != -1)
            throw InternalInvariantViolation(
                "covering layerings of a maximal clique differ at two sources");
        found = static_cast<int>(i);
    }
    if (found == -1)
        throw InternalInvariantViolation("distinct layerings with identical routes");
    return found;
}

bool route_in_other_member(const LayeringUniverse& u, const std::vector<int>& clique,
                           int position, int source_index) {
    const Route& r = u.layerings[clique[position]].routes[source_index];
    for (size_t k = 0; k < clique.size(); ++k) {
        if (static_cast<int>(k) == position) continue;
        if (u.layerings[clique[k]].routes[source_index] == r) return true;
    }
    return false;
}

std::set<std::vector<int>> route_set(const LayeringUniverse& u, const std::vector<int>& clique) {
    std::set<std::vector<int>> routes;
    for (int idx : clique)
        for (const Route& r : u.layerings[idx].routes) routes.insert(r.edges);
    return routes;
}

}  // namespace

UpDownIndex up_down_indices(const LayeringUniverse& universe, const std::vector<int>& clique,
                            int position) {
    const int s = static_cast<int>(clique.size());
    if (s < 2) throw InvalidInputError("clique has no covering pairs (dimension 0)");
    if (position < 0 || position >= s) throw InvalidInputError("position out of range");

    UpDownIndex idx;
    if (position + 1 < s)
        idx.up = differing_source_index(universe, clique[position], clique[position + 1]);
    if (position > 0)
        idx.down = differing_source_index(universe, clique[position], clique[position - 1]);
    if (!idx.up)
        idx.updown = idx.down;
    else if (!idx.down)
        idx.updown = idx.up;
    else if (*idx.up == *idx.down)
        idx.updown = idx.up;
    return idx;
}

bool adjacent(const std::vector<int>& a, const std::vector<int>& b) {
    std::set<int> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    int only_a = 0, only_b = 0;
    for (int x : sa) only_a += sb.count(x) ? 0 : 1;
    for (int x : sb) only_b += sa.count(x) ? 0 : 1;
    return only_a == 1 && only_b == 1;
}

MutationKind classify_mutation(const EmbeddedDag& dag, const LayeringUniverse& universe,
                               const std::vector<int>& k, const std::vector<int>& l) {
    if (!adjacent(k, l)) throw InvalidInputError("cliques are not adjacent");
    const int s = static_cast<int>(k.size());
    if (s < 2) throw InvalidInputError("adjacent cliques cannot exist in dimension 0");

    std::set<int> in_l(l.begin(), l.end()), in_k(k.begin(), k.end());
    int pos_i = -1, pos_j = -1;
    for (int idx = 0; idx < s; ++idx) {
        if (!in_l.count(k[idx])) pos_i = idx;
        if (!in_k.count(l[idx])) pos_j = idx;
    }
    const Layering& exchanged = universe.layerings[k[pos_i]];
    const int m = static_cast<int>(dag.sources.size());

    bool all_survive = true;
    for (int i = 0; i < m; ++i)
        if (!route_in_other_member(universe, k, pos_i, i)) all_survive = false;

    if (all_survive) {
        UpDownIndex ud = up_down_indices(universe, k, pos_i);
        if (pos_i == 0 || pos_i == s - 1 || !ud.up || !ud.down || *ud.up == *ud.down)
            throw InternalInvariantViolation(
                "shuffled layering is not interior with distinct up/down indices");
        return {MutationType::Shuffle,
                *ud.up < *ud.down ? MutationDirection::Down : MutationDirection::Up};
    }

    // One route of the exchanged layering is unique to it; the replacement
    // layering contributes exactly one new route, incompatible with it.
    UpDownIndex ud_k = up_down_indices(universe, k, pos_i);
    UpDownIndex ud_l = up_down_indices(universe, l, pos_j);
    if (!ud_k.updown || !ud_l.updown)
        throw InternalInvariantViolation("updown index undefined for a non-shuffle exchange");
    const int u_idx = *ud_k.updown, v_idx = *ud_l.updown;
    const Route& removed = exchanged.routes[u_idx];
    const Route& added = universe.layerings[l[pos_j]].routes[v_idx];
    if (are_compatible(dag, removed, added).compatible)
        throw InternalInvariantViolation("exchanged routes are compatible");
    std::set<std::vector<int>> expected = route_set(universe, k);
    expected.erase(removed.edges);
    expected.insert(added.edges);
    if (route_set(universe, l) != expected)
        throw InternalInvariantViolation("route sets differ by more than one exchange");

    if (pos_i > 0 && pos_i < s - 1) {
        if (pos_j != pos_i || u_idx != v_idx)
            throw InternalInvariantViolation("rotation positions or updown indices disagree");
        Cmp c = cmp_post(dag, dag.sources[u_idx], removed.edges, added.edges);
        return {MutationType::Rotation,
                c == Cmp::Greater ? MutationDirection::Down : MutationDirection::Up};
    }
    if (pos_i == s - 1) {
        if (pos_j != 0 || v_idx != u_idx + 1)
            throw InternalInvariantViolation("realignment indices disagree (top exchange)");
        return {MutationType::Realignment, MutationDirection::Down};
    }
    if (pos_j != s - 1 || u_idx != v_idx + 1)
        throw InternalInvariantViolation("realignment indices disagree (bottom exchange)");
    return {MutationType::Realignment, MutationDirection::Up};
}

std::optional<std::vector<int>> mutate(const EmbeddedDag& dag, const LayeringUniverse& universe,
                                       const std::vector<int>& clique, int position) {
    if (position < 0 || position >= static_cast<int>(clique.size()))
        throw InvalidInputError("position out of range");
    const int s = static_cast<int>(clique.size());
    if (s < 2) return std::nullopt;  // dimension 0: the single cell has no neighbours

    const Layering& p = universe.layerings[clique[position]];
    const int m = static_cast<int>(dag.sources.size());
    bool all_survive = true;
    for (int i = 0; i < m; ++i)
        if (!route_in_other_member(universe, clique, position, i)) all_survive = false;

    int replacement = -1;
    if (all_survive) {
        UpDownIndex ud = up_down_indices(universe, clique, position);
        if (!ud.up || !ud.down || *ud.up == *ud.down)
            throw InternalInvariantViolation("shuffle precondition without distinct up/down");
        Layering r = p;
        r.routes[*ud.up] = universe.layerings[clique[position + 1]].routes[*ud.up];
        r.routes[*ud.down] = universe.layerings[clique[position - 1]].routes[*ud.down];
        for (int idx = 0; idx < universe.size(); ++idx)
            if (universe.layerings[idx] == r) replacement = idx;
        if (replacement < 0)
            throw InternalInvariantViolation("shuffled layering missing from the universe");
    } else {
        // Facet completion: at most one other layering extends the facet.
        std::set<int> members(clique.begin(), clique.end());
        for (int idx = 0; idx < universe.size(); ++idx) {
            if (members.count(idx)) continue;
            bool fits = true;
            for (int other : clique) {
                if (other == clique[position]) continue;
                if (!universe.compatible(idx, other)) fits = false;
            }
            if (!fits) continue;
            if (replacement != -1)
                throw InternalInvariantViolation("facet is shared by more than two cells");
            replacement = idx;
        }
        if (replacement < 0) return std::nullopt;  // boundary facet
    }

    std::vector<int> result;
    for (int idx : clique)
        if (idx != clique[position]) result.push_back(idx);
    result.push_back(replacement);
    std::sort(result.begin(), result.end(), [&](int a, int b) {
        return universe.relation[a][b] == LayeringOrder::Below;
    });
    for (size_t i = 0; i + 1 < result.size(); ++i)
        if (universe.relation[result[i]][result[i + 1]] != LayeringOrder::Below)
            throw InternalInvariantViolation("mutated clique is not a chain");
    return result;
}

Cmp cmp_post_source(const EmbeddedDag& dag, const Layering& p, const Layering& q) {
    if (p.routes.size() != q.routes.size())
        throw InvalidInputError("layerings have mismatched sizes");
    for (int i = static_cast<int>(p.routes.size()) - 1; i >= 0; --i) {
        if (p.routes[i] == q.routes[i]) continue;
        return cmp_post(dag, dag.sources[i], p.routes[i].edges, q.routes[i].edges);
    }
    return Cmp::Equal;
}

Cmp cmp_post_source_cliques(const EmbeddedDag& dag, const LayeringUniverse& universe,
                            const std::vector<int>& k, const std::vector<int>& l) {
    if (k.size() != l.size()) throw InvalidInputError("cliques have different cardinalities");
    for (int j = static_cast<int>(k.size()) - 1; j >= 0; --j) {
        if (k[j] == l[j]) continue;
        Cmp c = cmp_post_source(dag, universe.layerings[k[j]], universe.layerings[l[j]]);
        if (c != Cmp::Equal) return c;
    }
    return Cmp::Equal;
}

FramingPoset build_framing_poset(const EmbeddedDag& dag, long long limit) {
    FramingPoset poset;
    LayeringCliqueSet set = enumerate_maximal_layering_cliques(dag, limit);
    poset.universe = std::move(set.universe);
    poset.nodes = std::move(set.cliques);
    const int n = static_cast<int>(poset.nodes.size());

    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (!adjacent(poset.nodes[a], poset.nodes[b])) continue;
            MutationKind ab = classify_mutation(dag, poset.universe, poset.nodes[a], poset.nodes[b]);
            MutationKind ba = classify_mutation(dag, poset.universe, poset.nodes[b], poset.nodes[a]);
            if (ab.kind != ba.kind || ab.direction == ba.direction)
                throw InternalInvariantViolation(
                    "mutation classification is not direction-symmetric");
            PosetEdge edge;
            edge.kind = ab.kind;
            if (ab.direction == MutationDirection::Down) {
                edge.from = a;
                edge.to = b;
            } else {
                edge.from = b;
                edge.to = a;
            }
            if (cmp_post_source_cliques(dag, poset.universe, poset.nodes[edge.from],
                                        poset.nodes[edge.to]) != Cmp::Greater)
                throw InternalInvariantViolation(
                    "down-mutation does not decrease the post-source order");
            poset.down_edges.push_back(edge);
        }
    }

    // Transitive reduction of the (acyclic) down-edge digraph.
    std::vector<std::vector<int>> succ(n);
    for (const PosetEdge& e : poset.down_edges) succ[e.from].push_back(e.to);
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) {
        std::vector<int> stack{v};
        while (!stack.empty()) {
            int w = stack.back();
            stack.pop_back();
            for (int x : succ[w])
                if (!reach[v][x]) {
                    reach[v][x] = true;
                    stack.push_back(x);
                }
        }
    }
    for (const PosetEdge& e : poset.down_edges) {
        bool redundant = false;
        for (int w : succ[e.from])
            if (w != e.to && reach[w][e.to]) redundant = true;
        if (!redundant) poset.reduction.push_back({e.from, e.to});
    }
    return poset;
}

}  // namespace flowtri
