#include "flowtri/triangulation.hpp"

#include "flowtri/errors.hpp"
#include "flowtri/linalg.hpp"

#include <utility>

namespace flowtri {

namespace {

IntVec indicator_int(const EmbeddedDag& dag, const Layering& l) {
    IntVec x(dag.edge_count(), 0);
    for (const Route& r : l.routes)
        for (int e : r.edges) x[e] += 1;
    return x;
}

IntMat difference_rows(const EmbeddedDag& dag, const LayeringUniverse& universe) {
    IntMat rows;
    if (universe.layerings.empty()) return rows;
    IntVec base = indicator_int(dag, universe.layerings[0]);
    for (int i = 1; i < universe.size(); ++i) {
        IntVec v = indicator_int(dag, universe.layerings[i]);
        for (int e = 0; e < dag.edge_count(); ++e) v[e] -= base[e];
        rows.push_back(std::move(v));
    }
    return rows;
}

}  // namespace

int polytope_dimension(const EmbeddedDag& dag) {
    return polytope_dimension(dag, build_layering_universe(dag));
}

int polytope_dimension(const EmbeddedDag& dag, const LayeringUniverse& universe) {
    return unit_polytope_dimension(dag, universe);
}

AffineLatticeBasis affine_lattice_basis(const EmbeddedDag& dag) {
    return affine_lattice_basis(dag, build_layering_universe(dag));
}

AffineLatticeBasis affine_lattice_basis(const EmbeddedDag& dag,
                                        const LayeringUniverse& universe) {
    if (universe.layerings.empty())
        throw InvalidInputError("flow polytope is empty (no layerings)");
    AffineLatticeBasis out;
    out.origin = indicator_int(dag, universe.layerings[0]);

    IntMat diffs = difference_rows(dag, universe);
    if (linalg::rank(diffs) == 0) return out;  // a point; empty basis

    // Saturation: the difference lattice's rational span intersected with
    // Z^E, obtained as the integer kernel of the kernel.
    IntMat ker = linalg::kernel(diffs);
    IntMat saturated = ker.empty()
                           ? [&] {
                                 IntMat id(dag.edge_count(), IntVec(dag.edge_count(), 0));
                                 for (int e = 0; e < dag.edge_count(); ++e) id[e][e] = 1;
                                 return id;
                             }()
                           : linalg::kernel(ker);
    out.basis = linalg::hnf_rows(std::move(saturated));
    if (static_cast<int>(out.basis.size()) != linalg::rank(diffs))
        throw InternalInvariantViolation("saturated lattice rank mismatch");
    return out;
}

IntVec lattice_coordinates(const AffineLatticeBasis& basis, const IntVec& point) {
    if (point.size() != basis.origin.size())
        throw InvalidInputError("point has wrong dimension");
    const int d = basis.dimension();
    const int n = static_cast<int>(point.size());
    if (d == 0) {
        if (point != basis.origin)
            throw InvalidInputError("point is not the origin of a zero-dimensional lattice");
        return {};
    }
    RatMat a(n, RatVec(d));
    RatVec b(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < d; ++c) a[r][c] = Rat(basis.basis[c][r]);
        b[r] = Rat(point[r] - basis.origin[r]);
    }
    auto x = linalg::solve(std::move(a), std::move(b));
    if (!x) throw InvalidInputError("point lies outside the affine hull");
    IntVec coords(d);
    for (int c = 0; c < d; ++c) {
        if (!is_integer((*x)[c]))
            throw InvalidInputError("point is not a lattice point of the basis");
        coords[c] = numerator((*x)[c]);
    }
    return coords;
}

Int simplex_normalized_volume(const Simplex& s, const AffineLatticeBasis& basis) {
    const int d = basis.dimension();
    if (static_cast<int>(s.vertices.size()) != d + 1)
        throw InvalidInputError("simplex must have dimension+1 vertices (" +
                                std::to_string(s.vertices.size()) + " given, expected " +
                                std::to_string(d + 1) + ")");
    std::vector<IntVec> coords;
    coords.reserve(s.vertices.size());
    for (const IntVec& v : s.vertices) coords.push_back(lattice_coordinates(basis, v));
    IntMat m(d, IntVec(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m[i][j] = coords[i + 1][j] - coords[0][j];
    Int v = linalg::det(std::move(m));
    return v < 0 ? -v : v;
}

Triangulation build_triangulation(const EmbeddedDag& dag, long long limit) {
    Triangulation tri;
    LayeringCliqueSet set = enumerate_maximal_layering_cliques(dag, limit);
    tri.universe = std::move(set.universe);
    tri.basis = affine_lattice_basis(dag, tri.universe);
    tri.dimension = tri.basis.dimension();

    for (const auto& clique : set.cliques) {
        TriangulationCell cell;
        cell.clique = clique;
        for (int idx : clique)
            cell.simplex.vertices.push_back(indicator_int(dag, tri.universe.layerings[idx]));
        Int volume = simplex_normalized_volume(cell.simplex, tri.basis);
        if (volume != 1)
            throw InternalInvariantViolation("cell has normalized volume " + volume.str() +
                                             ", triangulation is not unimodular");
        tri.cells.push_back(std::move(cell));
    }
    return tri;
}

}  // namespace flowtri
