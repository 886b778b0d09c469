#include "flowtri/oracle.hpp"

#include "flowtri/errors.hpp"
#include "flowtri/linalg.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace flowtri {

Int count_lattice_points(const EmbeddedDag& dag, int dilation) {
    if (dilation < 0) throw InvalidInputError("dilation must be nonnegative");
    NetflowVector netflow = unit_netflow(dag);
    for (Int& x : netflow.values) x *= dilation;
    Int count = 0;
    constexpr long long kNoLimit = 1LL << 62;
    for_each_integer_flow(dag, netflow, kNoLimit, [&](const IntVec&) { ++count; });
    return count;
}

std::vector<EhrhartSample> ehrhart_samples(const EmbeddedDag& dag, int max_dilation) {
    std::vector<EhrhartSample> samples;
    for (int t = 0; t <= max_dilation; ++t)
        samples.push_back({t, count_lattice_points(dag, t)});
    return samples;
}

Int ehrhart_normalized_volume(const EmbeddedDag& dag) {
    require_valid_balanced(dag);
    const int d = polytope_dimension(dag);
    std::vector<EhrhartSample> samples = ehrhart_samples(dag, d);

    // d! times the leading coefficient of the interpolating polynomial equals
    // the d-th finite difference sum_i (-1)^(d-i) C(d,i) count(i).
    Int volume = 0;
    Int binom = 1;
    for (int i = 0; i <= d; ++i) {
        Int term = binom * samples[i].lattice_count;
        volume += ((d - i) % 2 == 0) ? term : -term;
        binom = binom * (d - i) / (i + 1);
    }
    if (volume <= 0)
        throw InternalInvariantViolation("Ehrhart leading coefficient is not positive");
    return volume;
}

namespace {

IntVec layering_indicator_int(const EmbeddedDag& dag, const Layering& l) {
    IntVec x(dag.edge_count(), 0);
    for (const Route& r : l.routes)
        for (int e : r.edges) x[e] += 1;
    return x;
}

// Finds a cell whose clique contains every layering of the decomposition
// support; -1 if none does.
int supporting_cell(const EmbeddedDag& dag, const Triangulation& tri,
                    const LayeringDecomposition& dec) {
    for (size_t c = 0; c < tri.cells.size(); ++c) {
        bool covers = true;
        for (const auto& [l, coeff] : dec.terms) {
            bool found = false;
            for (int idx : tri.cells[c].clique)
                if (tri.universe.layerings[idx] == l) found = true;
            if (!found) covers = false;
        }
        if (covers) return static_cast<int>(c);
    }
    return -1;
}

// Exact barycentric re-solve within one cell: coefficients of f over the
// cell's indicator vectors, or nullopt if f is not in the cell's affine hull.
std::optional<RatVec> barycentric_in_cell(const EmbeddedDag& dag, const Triangulation& tri,
                                          int cell, const RatVec& f) {
    const auto& simplex = tri.cells[cell].simplex.vertices;
    const int n = dag.edge_count();
    RatMat a(n + 1, RatVec(simplex.size()));
    RatVec b(n + 1);
    for (int r = 0; r < n; ++r) {
        for (size_t c = 0; c < simplex.size(); ++c) a[r][c] = Rat(simplex[c][r]);
        b[r] = f[r];
    }
    for (size_t c = 0; c < simplex.size(); ++c) a[n][c] = 1;
    Rat strength_rows = 0;  // sum of coefficients equals the flow's strength
    FlowVector fv;
    fv.values = f;
    strength_rows = scaled_unit_strength(dag, fv);
    b[n] = strength_rows;
    return linalg::solve_unique(std::move(a), std::move(b));
}

void check_coverage_point(const EmbeddedDag& dag, const Triangulation& tri, const RatVec& f,
                          const std::string& label, bool& ok, std::string& detail) {
    LayeringDecomposition dec = decompose_flow(dag, [&] {
        FlowVector fv;
        fv.values = f;
        fv.netflow = unit_netflow(dag);
        return fv;
    }());
    int cell = supporting_cell(dag, tri, dec);
    if (cell < 0) {
        ok = false;
        detail = label + ": decomposition support lies in no single cell";
        return;
    }
    auto bary = barycentric_in_cell(dag, tri, cell, f);
    if (!bary) {
        ok = false;
        detail = label + ": barycentric re-solve failed in the supporting cell";
        return;
    }
    // The re-solved coefficients must match the decomposition exactly.
    for (size_t k = 0; k < tri.cells[cell].clique.size(); ++k) {
        const Layering& member = tri.universe.layerings[tri.cells[cell].clique[k]];
        Rat expected = 0;
        for (const auto& [l, coeff] : dec.terms)
            if (l == member) expected = coeff;
        if ((*bary)[k] != expected) {
            ok = false;
            detail = label + ": clique coefficients disagree with the barycentric solve";
            return;
        }
    }
}

// Inverse of a square rational matrix; nullopt when singular.
std::optional<RatMat> invert(const RatMat& m) {
    const size_t n = m.size();
    RatMat a = m;
    RatMat inv(n, RatVec(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0, r = 0; c < n; ++c, ++r) {
        size_t piv = r;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[r]);
        std::swap(inv[piv], inv[r]);
        Rat scale = a[r][c];
        for (size_t j = 0; j < n; ++j) {
            a[r][j] /= scale;
            inv[r][j] /= scale;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (size_t j = 0; j < n; ++j) {
                a[i][j] -= f * a[r][j];
                inv[i][j] -= f * inv[r][j];
            }
        }
    }
    return inv;
}

// Vertices of {x : rows[i].a . x + rows[i].b >= 0}, by exhausting active
// subsets of size d. Exact; intended for small d only.
struct HalfSpace {
    RatVec normal;
    Rat offset;
};

std::set<RatVec> enumerate_polytope_vertices(const std::vector<HalfSpace>& rows, int d) {
    std::set<RatVec> vertices;
    if (d == 0) {
        bool feasible = true;
        for (const auto& h : rows)
            if (h.offset < 0) feasible = false;
        if (feasible) vertices.insert(RatVec{});
        return vertices;
    }
    std::vector<int> pick(d);
    auto recurse = [&](auto&& self, int start, int k) -> void {
        if (k == d) {
            RatMat a(d, RatVec(d));
            RatVec b(d);
            for (int i = 0; i < d; ++i) {
                a[i] = rows[pick[i]].normal;
                b[i] = -rows[pick[i]].offset;
            }
            auto x = linalg::solve_unique(std::move(a), std::move(b));
            if (!x) return;
            for (const auto& h : rows) {
                Rat value = h.offset;
                for (int j = 0; j < d; ++j) value += h.normal[j] * (*x)[j];
                if (value < 0) return;
            }
            vertices.insert(*x);
            return;
        }
        for (int i = start; i < static_cast<int>(rows.size()); ++i) {
            pick[k] = i;
            self(self, i + 1, k + 1);
        }
    };
    recurse(recurse, 0, 0);
    return vertices;
}

}  // namespace

VerificationReport verify_triangulation(const EmbeddedDag& dag, const Triangulation& tri,
                                        int face_check_dim_cutoff, int samples,
                                        std::uint64_t seed) {
    VerificationReport report;
    require_valid_balanced(dag);
    LayeringUniverse universe = build_layering_universe(dag);
    const int d = unit_polytope_dimension(dag, universe);

    // (V) total volume against the Ehrhart oracle.
    Int ehrhart = ehrhart_normalized_volume(dag);
    Int total = 0;
    bool cells_measurable = true;
    std::string volume_detail;
    for (const auto& cell : tri.cells) {
        try {
            total += simplex_normalized_volume(cell.simplex, tri.basis);
        } catch (const FlowtriError& err) {
            cells_measurable = false;
            volume_detail = err.what();
        }
    }
    report.add("volume", cells_measurable && total == ehrhart,
               cells_measurable
                   ? "cells sum to " + total.str() + ", Ehrhart volume " + ehrhart.str()
                   : volume_detail);

    // (U) unimodularity per cell.
    {
        bool ok = cells_measurable;
        std::string detail = volume_detail;
        for (size_t c = 0; ok && c < tri.cells.size(); ++c) {
            Int v = simplex_normalized_volume(tri.cells[c].simplex, tri.basis);
            if (v != 1) {
                ok = false;
                detail = "cell " + std::to_string(c) + " has volume " + v.str();
            }
        }
        report.add("unimodular", ok, detail);
    }

    // (P) purity: every cell spans dimension+1 vertices.
    {
        bool ok = true;
        std::string detail;
        for (size_t c = 0; c < tri.cells.size(); ++c)
            if (static_cast<int>(tri.cells[c].simplex.vertices.size()) != d + 1) {
                ok = false;
                detail = "cell " + std::to_string(c) + " has " +
                         std::to_string(tri.cells[c].simplex.vertices.size()) +
                         " vertices, expected " + std::to_string(d + 1);
            }
        report.add("purity", ok, detail);
    }

    // (C) coverage: every lattice point and a batch of random rational points
    // decompose with support inside a single cell, and the coefficients agree
    // with an independent barycentric solve there.
    {
        bool ok = true;
        std::string detail;
        for (int i = 0; ok && i < universe.size(); ++i) {
            IntVec p = layering_indicator_int(dag, universe.layerings[i]);
            RatVec f(p.size());
            for (size_t e = 0; e < p.size(); ++e) f[e] = Rat(p[e]);
            check_coverage_point(dag, tri, f, "lattice point " + std::to_string(i), ok, detail);
        }
        std::mt19937_64 rng(seed);
        for (int s = 0; ok && s < samples && universe.size() > 0; ++s) {
            int support = 1 + static_cast<int>(rng() % std::min(universe.size(), d + 2));
            std::vector<int> chosen;
            while (static_cast<int>(chosen.size()) < support) {
                int cand = static_cast<int>(rng() % universe.size());
                if (std::find(chosen.begin(), chosen.end(), cand) == chosen.end())
                    chosen.push_back(cand);
            }
            RatVec f(dag.edge_count(), Rat(0));
            Rat weight_sum = 0;
            std::vector<Rat> weights;
            for (size_t k = 0; k < chosen.size(); ++k) {
                Rat w = Rat(1 + static_cast<int>(rng() % 9));
                weights.push_back(w);
                weight_sum += w;
            }
            for (size_t k = 0; k < chosen.size(); ++k) {
                IntVec p = layering_indicator_int(dag, universe.layerings[chosen[k]]);
                for (int e = 0; e < dag.edge_count(); ++e)
                    f[e] += weights[k] / weight_sum * Rat(p[e]);
            }
            check_coverage_point(dag, tri, f, "random point " + std::to_string(s), ok, detail);
        }
        report.add("coverage", ok, detail);
    }

    // (F) face-to-face by exact pairwise intersection, gated on dimension.
    if (d > face_check_dim_cutoff) {
        report.add("face-to-face", true,
                   "skipped: dimension " + std::to_string(d) + " above cutoff " +
                       std::to_string(face_check_dim_cutoff));
        return report;
    }
    {
        bool ok = true;
        std::string detail;
        std::vector<std::vector<IntVec>> coords(tri.cells.size());
        std::vector<RatMat> bary(tri.cells.size());
        for (size_t c = 0; ok && c < tri.cells.size(); ++c) {
            for (const IntVec& v : tri.cells[c].simplex.vertices) {
                try {
                    coords[c].push_back(lattice_coordinates(tri.basis, v));
                } catch (const FlowtriError& err) {
                    ok = false;
                    detail = err.what();
                    break;
                }
            }
            if (!ok || static_cast<int>(coords[c].size()) != d + 1) {
                if (ok) {
                    ok = false;
                    detail = "cell " + std::to_string(c) + " has wrong vertex count";
                }
                break;
            }
            RatMat m(d + 1, RatVec(d + 1));
            for (int col = 0; col <= d; ++col) {
                for (int row = 0; row < d; ++row) m[row][col] = Rat(coords[c][col][row]);
                m[d][col] = 1;
            }
            auto inv = invert(m);
            if (!inv) {
                ok = false;
                detail = "cell " + std::to_string(c) + " is degenerate";
                break;
            }
            bary[c] = *inv;
        }
        for (size_t a = 0; ok && a < tri.cells.size(); ++a) {
            for (size_t b = a + 1; ok && b < tri.cells.size(); ++b) {
                std::vector<HalfSpace> rows;
                for (size_t c : {a, b})
                    for (int r = 0; r <= d; ++r) {
                        HalfSpace h;
                        h.normal.assign(bary[c][r].begin(), bary[c][r].begin() + d);
                        h.offset = bary[c][r][d];
                        rows.push_back(std::move(h));
                    }
                std::set<RatVec> got = enumerate_polytope_vertices(rows, d);
                std::set<RatVec> expected;
                std::set<IntVec> b_vertices(tri.cells[b].simplex.vertices.begin(),
                                            tri.cells[b].simplex.vertices.end());
                for (int col = 0; col <= d; ++col) {
                    if (!b_vertices.count(tri.cells[a].simplex.vertices[col])) continue;
                    RatVec x(d);
                    for (int row = 0; row < d; ++row) x[row] = Rat(coords[a][col][row]);
                    expected.insert(std::move(x));
                }
                if (got != expected) {
                    ok = false;
                    detail = "cells " + std::to_string(a) + " and " + std::to_string(b) +
                             " intersect outside their shared face";
                }
            }
        }
        report.add("face-to-face", ok, detail);
    }
    return report;
}

EmbeddedDag k33_dag() {
    EmbeddedDag dag;
    for (int i = 1; i <= 3; ++i) dag.vertices.push_back({"s" + std::to_string(i), {}, {}});
    for (int j = 1; j <= 3; ++j) dag.vertices.push_back({"t" + std::to_string(j), {}, {}});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int e = dag.edge_count();
            dag.edges.push_back(
                {"g" + std::to_string(i + 1) + std::to_string(j + 1), i, 3 + j});
            dag.vertices[i].out_edges.push_back(e);
            dag.vertices[3 + j].in_edges.push_back(e);
        }
    dag.sources = {0, 1, 2};
    dag.sinks = {3, 4, 5};
    return dag;
}

VerificationReport k33_obstruction_check() {
    VerificationReport report;
    EmbeddedDag dag = k33_dag();

    // (a) the lattice points are exactly the six matching indicators.
    std::vector<IntVec> points;
    for_each_integer_flow(dag, unit_netflow(dag), 1000, [&](const IntVec& f) {
        points.push_back(f);
    });
    std::set<IntVec> matchings;
    int perm[3] = {0, 1, 2};
    std::sort(perm, perm + 3);
    do {
        IntVec f(9, 0);
        for (int i = 0; i < 3; ++i) f[3 * i + perm[i]] = 1;
        matchings.insert(f);
    } while (std::next_permutation(perm, perm + 3));
    report.add("lattice-points-are-matchings",
               points.size() == 6 &&
                   std::set<IntVec>(points.begin(), points.end()) == matchings,
               std::to_string(points.size()) + " lattice points at dilation 1");

    // (b) even and odd matchings sum to the same all-ones flow.
    auto matching_flow = [](int a0, int a1, int a2) {
        IntVec f(9, 0);
        f[3 * 0 + a0] = 1;
        f[3 * 1 + a1] = 1;
        f[3 * 2 + a2] = 1;
        return f;
    };
    IntVec even(9, 0), odd(9, 0);
    for (const IntVec& f : {matching_flow(0, 1, 2), matching_flow(1, 2, 0),
                            matching_flow(2, 0, 1)})
        for (int e = 0; e < 9; ++e) even[e] += f[e];
    for (const IntVec& f : {matching_flow(0, 2, 1), matching_flow(1, 0, 2),
                            matching_flow(2, 1, 0)})
        for (int e = 0; e < 9; ++e) odd[e] += f[e];
    bool ones = even == odd;
    for (int e = 0; e < 9; ++e) ones = ones && even[e] == 1;
    report.add("affine-dependence", ones,
               "even and odd matching sums agree coordinatewise with the all-ones flow");

    // (c) for each pair of matchings, no third matching lives on their union.
    std::vector<IntVec> all(matchings.begin(), matchings.end());
    bool pairs_ok = true;
    int pair_count = 0;
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = i + 1; j < all.size(); ++j) {
            ++pair_count;
            for (const IntVec& c : all) {
                bool supported = true;
                for (int e = 0; e < 9; ++e)
                    if (c[e] == 1 && all[i][e] == 0 && all[j][e] == 0) supported = false;
                if (supported && c != all[i] && c != all[j]) pairs_ok = false;
            }
        }
    report.add("pairwise-containment", pairs_ok && pair_count == 15,
               "checked " + std::to_string(pair_count) + " pairs");

    // Together: every pair would have to be compatible in any lattice
    // triangulation, forcing a single 5-simplex, while (b) exhibits an affine
    // dependence among the six would-be vertices.
    report.add("no-lattice-triangulation",
               report.checks[0].pass && report.checks[1].pass && report.checks[2].pass,
               "compatibility graph is complete yet the six points are affinely dependent");
    return report;
}

EmbeddedDag random_instance(std::uint64_t seed, int max_edges, int max_sources) {
    if (max_edges < 1 || max_sources < 1)
        throw InvalidInputError("bounds must be positive");
    std::mt19937_64 rng(seed);
    EmbeddedDag dag;
    int next_vertex = 0, next_edge = 0;
    auto new_vertex = [&] {
        dag.vertices.push_back({"v" + std::to_string(next_vertex++), {}, {}});
        return dag.vertex_count() - 1;
    };
    auto new_edge = [&](int tail, int head) {
        dag.edges.push_back({"e" + std::to_string(next_edge++), tail, head});
        return dag.edge_count() - 1;
    };
    auto stack_component = [&] {
        int s = new_vertex();
        int t = new_vertex();
        int e = new_edge(s, t);
        dag.vertices[s].out_edges = {e};
        dag.vertices[t].in_edges = {e};
        dag.sources.push_back(s);
        dag.sinks.push_back(t);
    };
    auto position_in = [](const std::vector<int>& list, int value) {
        return static_cast<int>(std::find(list.begin(), list.end(), value) - list.begin());
    };
    stack_component();

    while (dag.edge_count() < max_edges) {
        std::vector<int> moves = {0, 1};  // subdivide, duplicate
        if (dag.edge_count() + 2 <= max_edges) moves.push_back(2);  // parallel path
        if (static_cast<int>(dag.sources.size()) < max_sources) moves.push_back(3);  // stack
        int move = moves[rng() % moves.size()];
        int e = static_cast<int>(rng() % dag.edge_count());
        int tail = dag.edges[e].tail, head = dag.edges[e].head;
        switch (move) {
            case 0: {  // subdivide e into tail->w->head
                int w = new_vertex();
                int e2 = new_edge(w, head);
                dag.vertices[head].in_edges[position_in(dag.vertices[head].in_edges, e)] = e2;
                dag.edges[e].head = w;
                dag.vertices[w].in_edges = {e};
                dag.vertices[w].out_edges = {e2};
                break;
            }
            case 1: {  // parallel copy just above e
                int e2 = new_edge(tail, head);
                auto& out = dag.vertices[tail].out_edges;
                out.insert(out.begin() + position_in(out, e) + 1, e2);
                auto& in = dag.vertices[head].in_edges;
                in.insert(in.begin() + position_in(in, e) + 1, e2);
                break;
            }
            case 2: {  // parallel two-edge path just above e
                int w = new_vertex();
                int e2 = new_edge(tail, w);
                int e3 = new_edge(w, head);
                dag.vertices[w].in_edges = {e2};
                dag.vertices[w].out_edges = {e3};
                auto& out = dag.vertices[tail].out_edges;
                out.insert(out.begin() + position_in(out, e) + 1, e2);
                auto& in = dag.vertices[head].in_edges;
                in.insert(in.begin() + position_in(in, e) + 1, e3);
                break;
            }
            default:
                stack_component();
        }
    }

    ValidationReport check = validate_strong_planarity(dag);
    if (!check.ok)
        throw InternalInvariantViolation("random instance fails validation: " +
                                         check.violations.front().rule);
    if (!is_balanced(dag))
        throw InternalInvariantViolation("random instance is not balanced");
    return dag;
}

}  // namespace flowtri
