#include "flowtri/layerings.hpp"

#include "flowtri/errors.hpp"
#include "flowtri/linalg.hpp"
#include "flowtri/mutation_poset.hpp"
#include "flowtri/reduction.hpp"

#include <algorithm>
#include <map>

namespace flowtri {

void require_layering(const EmbeddedDag& dag, const Layering& l) {
    if (l.routes.size() != dag.sources.size())
        throw InvalidInputError("layering must hold one route per source");
    for (size_t i = 0; i < l.routes.size(); ++i) {
        require_route(dag, l.routes[i]);
        auto h = horizontal_index(dag, l.routes[i]);
        if (!h || *h != static_cast<int>(i))
            throw InvalidInputError("route " + std::to_string(i) + " is not a horizontal " +
                                    std::to_string(i) + "-route");
    }
    for (size_t i = 0; i < l.routes.size(); ++i)
        for (size_t j = i + 1; j < l.routes.size(); ++j)
            if (!are_compatible(dag, l.routes[i], l.routes[j]).compatible)
                throw InvalidInputError("routes of the layering cross each other");
}

FlowVector layering_indicator(const EmbeddedDag& dag, const Layering& l) {
    FlowVector f;
    f.values.assign(dag.edge_count(), Rat(0));
    for (const Route& r : l.routes)
        for (int e : r.edges) f.values[e] += 1;
    f.netflow = unit_netflow(dag);
    return f;
}

namespace {

// J-inverse with a precomputed two-point extension, for enumeration loops.
Layering layering_from_flow_impl(const EmbeddedDag& dag, const TwoPointExtension& ext,
                                 const FlowVector& f) {
    for (const Rat& x : f.values)
        if (!is_integer(x)) throw InvalidInputError("flow is not integer");
    Rat strength = scaled_unit_strength(dag, f);
    if (strength != 1) throw InvalidInputError("flow is not a unit flow");

    RouteDecomposition dec = dkk_decompose(ext.extended, hat_flow(ext, f));
    Layering l;
    l.routes.assign(dag.sources.size(), Route{});
    std::vector<bool> filled(dag.sources.size(), false);
    for (const auto& [hat, coeff] : dec.terms) {
        Route base = unhat_route(ext, hat);
        auto h = horizontal_index(dag, base);
        if (!h || coeff != 1 || filled[*h])
            throw InternalInvariantViolation(
                "unit flow did not decompose into one horizontal route per source");
        l.routes[*h] = base;
        filled[*h] = true;
    }
    for (bool b : filled)
        if (!b)
            throw InternalInvariantViolation(
                "unit flow did not decompose into one horizontal route per source");
    return l;
}

}  // namespace

Layering layering_from_flow(const EmbeddedDag& dag, const FlowVector& f) {
    return layering_from_flow_impl(dag, two_point_extend(dag), f);
}

void for_each_integer_flow(const EmbeddedDag& dag, const NetflowVector& netflow,
                           long long limit, const std::function<void(const IntVec&)>& fn) {
    if (static_cast<int>(netflow.values.size()) != dag.vertex_count())
        throw InvalidInputError("netflow vector has wrong length");
    auto order = topological_order(dag);
    if (!order) throw InvalidInputError("graph has a cycle");

    IntVec flow(dag.edge_count(), 0);
    long long count = 0;

    // Assign out-edge values vertex by vertex; when a vertex is reached its
    // in-flow is already fixed, so its out-edges must distribute exactly
    // netflow + in-flow.
    auto at_vertex = [&](auto&& self, size_t pos) -> void {
        if (pos == order->size()) {
            if (++count > limit)
                throw LimitExceededError("more than " + std::to_string(limit) +
                                         " integer flows");
            fn(flow);
            return;
        }
        int v = (*order)[pos];
        Int supply = netflow.values[v];
        for (int e : dag.vertices[v].in_edges) supply += flow[e];
        const auto& out = dag.vertices[v].out_edges;
        if (out.empty()) {
            if (supply == 0) self(self, pos + 1);
            return;
        }
        if (supply < 0) return;
        auto distribute = [&](auto&& dself, size_t k, Int left) -> void {
            if (k + 1 == out.size()) {
                flow[out[k]] = left;
                self(self, pos + 1);
                flow[out[k]] = 0;
                return;
            }
            for (Int x = 0; x <= left; ++x) {
                flow[out[k]] = x;
                dself(dself, k + 1, left - x);
            }
            flow[out[k]] = 0;
        };
        distribute(distribute, 0, supply);
    };
    at_vertex(at_vertex, 0);
}

std::vector<Layering> enumerate_layerings(const EmbeddedDag& dag, long long limit) {
    require_valid_balanced(dag);
    TwoPointExtension ext = two_point_extend(dag);
    std::vector<Layering> out;
    for_each_integer_flow(dag, unit_netflow(dag), limit, [&](const IntVec& values) {
        FlowVector f;
        f.values.reserve(values.size());
        for (const Int& x : values) f.values.emplace_back(x);
        f.netflow = unit_netflow(dag);
        out.push_back(layering_from_flow_impl(dag, ext, f));
    });
    return out;
}

LayeringOrder cmp_layerings(const EmbeddedDag& dag, const Layering& p, const Layering& q) {
    if (p.routes.size() != q.routes.size() || p.routes.size() != dag.sources.size())
        throw InvalidInputError("layerings have mismatched sizes");
    if (p == q) return LayeringOrder::Equal;
    for (size_t i = 0; i < p.routes.size(); ++i)
        for (size_t j = 0; j < q.routes.size(); ++j)
            if (!are_compatible(dag, p.routes[i], q.routes[j]).compatible)
                return LayeringOrder::Incompatible;
    bool any_less = false, any_greater = false;
    for (size_t i = 0; i < p.routes.size(); ++i) {
        Cmp c = cmp_post(dag, dag.sources[i], p.routes[i].edges, q.routes[i].edges);
        if (c == Cmp::Less) any_less = true;
        if (c == Cmp::Greater) any_greater = true;
    }
    if (any_less && any_greater) return LayeringOrder::Incompatible;
    return any_less ? LayeringOrder::Below : LayeringOrder::Above;
}

LayeringUniverse build_layering_universe(const EmbeddedDag& dag, long long limit) {
    LayeringUniverse u;
    u.layerings = enumerate_layerings(dag, limit);
    const int n = u.size();
    u.relation.assign(n, std::vector<LayeringOrder>(n, LayeringOrder::Equal));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            LayeringOrder r = cmp_layerings(dag, u.layerings[a], u.layerings[b]);
            u.relation[a][b] = r;
            u.relation[b][a] = r == LayeringOrder::Below    ? LayeringOrder::Above
                               : r == LayeringOrder::Above  ? LayeringOrder::Below
                                                            : r;
        }
    return u;
}

int unit_polytope_dimension(const EmbeddedDag& dag, const LayeringUniverse& universe) {
    if (universe.layerings.empty())
        throw InvalidInputError("flow polytope is empty (no layerings)");
    IntMat diffs;
    FlowVector base = layering_indicator(dag, universe.layerings[0]);
    for (int i = 1; i < universe.size(); ++i) {
        FlowVector f = layering_indicator(dag, universe.layerings[i]);
        IntVec row(dag.edge_count());
        for (int e = 0; e < dag.edge_count(); ++e)
            row[e] = numerator(Rat(f.values[e] - base.values[e]));
        diffs.push_back(std::move(row));
    }
    return linalg::rank(diffs);
}

namespace {

void bron_kerbosch(const LayeringUniverse& u, std::vector<int>& r, std::vector<int> p,
                   std::vector<int> x, long long limit,
                   std::vector<std::vector<int>>& out) {
    if (p.empty() && x.empty()) {
        if (static_cast<long long>(out.size()) >= limit)
            throw LimitExceededError("more than " + std::to_string(limit) + " maximal cliques");
        out.push_back(r);
        return;
    }
    // Pivot on the candidate with the most neighbours in p.
    int pivot = -1, best = -1;
    for (const std::vector<int>* side : {&p, &x})
        for (int cand : *side) {
            int deg = 0;
            for (int w : p) deg += (w != cand && u.compatible(cand, w)) ? 1 : 0;
            if (deg > best) {
                best = deg;
                pivot = cand;
            }
        }
    std::vector<int> branch;
    for (int v : p)
        if (v == pivot || !u.compatible(pivot, v)) branch.push_back(v);
    for (int v : branch) {
        std::vector<int> p2, x2;
        for (int w : p)
            if (w != v && u.compatible(v, w)) p2.push_back(w);
        for (int w : x)
            if (u.compatible(v, w)) x2.push_back(w);
        r.push_back(v);
        bron_kerbosch(u, r, std::move(p2), std::move(x2), limit, out);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

}  // namespace

std::vector<std::vector<int>> maximal_layering_cliques(const EmbeddedDag& dag,
                                                       const LayeringUniverse& universe,
                                                       long long limit) {
    std::vector<std::vector<int>> cliques;
    std::vector<int> r, p, x;
    for (int i = 0; i < universe.size(); ++i) p.push_back(i);
    if (!p.empty()) bron_kerbosch(universe, r, std::move(p), x, limit, cliques);

    const int expected = universe.layerings.empty()
                             ? 0
                             : unit_polytope_dimension(dag, universe) + 1;
    for (auto& clique : cliques) {
        std::sort(clique.begin(), clique.end(), [&](int a, int b) {
            return universe.relation[a][b] == LayeringOrder::Below;
        });
        for (size_t k = 0; k + 1 < clique.size(); ++k)
            if (universe.relation[clique[k]][clique[k + 1]] != LayeringOrder::Below)
                throw InternalInvariantViolation("chain order inside a clique is not total");
        if (static_cast<int>(clique.size()) != expected)
            throw InternalInvariantViolation(
                "purity fails: maximal clique of size " + std::to_string(clique.size()) +
                " where dimension+1 = " + std::to_string(expected));
    }
    std::sort(cliques.begin(), cliques.end(), [&](const auto& a, const auto& b) {
        return cmp_post_source_cliques(dag, universe, a, b) == Cmp::Less;
    });
    return cliques;
}

LayeringCliqueSet enumerate_maximal_layering_cliques(const EmbeddedDag& dag, long long limit) {
    LayeringCliqueSet set;
    set.universe = build_layering_universe(dag, limit);
    set.cliques = maximal_layering_cliques(dag, set.universe, limit);
    return set;
}

LayeringDecomposition decompose_flow(const EmbeddedDag& dag, const FlowVector& f) {
    require_valid_balanced(dag);
    Rat strength = scaled_unit_strength(dag, f);  // throws on bad shape

    LayeringDecomposition result;
    if (strength == 0) return result;

    Int scale = 1;
    for (const Rat& x : f.values) scale = lcm(scale, denominator(x));
    FlowVector g;
    g.values.reserve(f.values.size());
    for (const Rat& x : f.values) g.values.push_back(x * Rat(scale));
    Int units_per_source = numerator(strength * Rat(scale));

    TwoPointExtension ext = two_point_extend(dag);
    RouteDecomposition dec = dkk_decompose(ext.extended, hat_flow(ext, g));

    // Expand the decomposition into unit slots per source, each source's
    // slots ascending in the post-source order.
    const int m = static_cast<int>(dag.sources.size());
    std::vector<std::vector<Route>> slots(m);
    for (const auto& [hat, coeff] : dec.terms) {
        Route base = unhat_route(ext, hat);
        auto h = horizontal_index(dag, base);
        if (!h)
            throw InternalInvariantViolation("layered flow decomposed into a diagonal route");
        long long reps = coeff.convert_to<long long>();
        for (long long k = 0; k < reps; ++k) slots[*h].push_back(base);
    }
    for (int i = 0; i < m; ++i) {
        if (Int(slots[i].size()) != units_per_source)
            throw InternalInvariantViolation("uneven slot counts across sources");
        std::stable_sort(slots[i].begin(), slots[i].end(), [&](const Route& a, const Route& b) {
            return cmp_post(dag, dag.sources[i], a.edges, b.edges) == Cmp::Less;
        });
    }

    long long rows = units_per_source.convert_to<long long>();
    Layering prev;
    long long run = 0;
    auto flush = [&](const Layering& l, long long count) {
        if (count == 0) return;
        result.terms.push_back({l, Rat(count) / Rat(scale)});
    };
    for (long long j = 0; j < rows; ++j) {
        Layering l;
        for (int i = 0; i < m; ++i) l.routes.push_back(slots[i][j]);
        require_layering(dag, l);
        if (run > 0 && l == prev) {
            ++run;
            continue;
        }
        if (run > 0 && cmp_layerings(dag, prev, l) != LayeringOrder::Below)
            throw InternalInvariantViolation("assembled layerings do not form a chain");
        flush(prev, run);
        prev = l;
        run = 1;
    }
    flush(prev, run);

    // Exact recombination check.
    RatVec sum(dag.edge_count(), Rat(0));
    for (const auto& [l, coeff] : result.terms) {
        FlowVector ind = layering_indicator(dag, l);
        for (int e = 0; e < dag.edge_count(); ++e) sum[e] += coeff * ind.values[e];
    }
    if (sum != f.values)
        throw InternalInvariantViolation("decomposition does not recombine to the input flow");
    return result;
}

}  // namespace flowtri
