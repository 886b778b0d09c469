#pragma once

#include "flowtri/layerings.hpp"

#include <vector>

namespace flowtri {

/// Lattice simplex spanned by the indicator flows of a clique's layerings,
/// in chain order.
struct Simplex {
    std::vector<IntVec> vertices;
};

/// Origin plus a Hermite-normal-form basis of the saturated difference
/// lattice of the unit flow polytope's lattice points. Normalized volumes are
/// measured against this lattice, which makes unimodularity well-defined for
/// polytopes that are not full-dimensional in edge space.
struct AffineLatticeBasis {
    IntVec origin;
    IntMat basis;  // one row per dimension

    int dimension() const { return static_cast<int>(basis.size()); }
};

int polytope_dimension(const EmbeddedDag& dag);
int polytope_dimension(const EmbeddedDag& dag, const LayeringUniverse& universe);

AffineLatticeBasis affine_lattice_basis(const EmbeddedDag& dag);
AffineLatticeBasis affine_lattice_basis(const EmbeddedDag& dag,
                                        const LayeringUniverse& universe);

/// Coordinates of a lattice point in the affine basis; throws
/// InvalidInputError if the point lies outside origin + lattice.
IntVec lattice_coordinates(const AffineLatticeBasis& basis, const IntVec& point);

/// |det| of the edge-vector matrix in lattice coordinates; 0 iff degenerate,
/// 1 iff unimodular. The simplex must have dimension+1 vertices.
Int simplex_normalized_volume(const Simplex& s, const AffineLatticeBasis& basis);

struct TriangulationCell {
    std::vector<int> clique;  // chain-sorted indices into the universe
    Simplex simplex;
};

struct Triangulation {
    LayeringUniverse universe;
    AffineLatticeBasis basis;
    int dimension = 0;
    std::vector<TriangulationCell> cells;  // post-source order
};

/// The framing triangulation: one cell per maximal layering-clique. Each
/// cell's unimodularity and affine independence is asserted.
Triangulation build_triangulation(const EmbeddedDag& dag, long long limit = 1000000);

}  // namespace flowtri
