#pragma once

#include "flowtri/triangulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flowtri {

struct EhrhartSample {
    int dilation = 0;
    Int lattice_count;
};

/// Number of integer flows with netflow t * a_1 (the lattice points of the
/// t-th dilate). Needs only acyclicity, not planarity, so it also serves the
/// non-planar obstruction fixture.
Int count_lattice_points(const EmbeddedDag& dag, int dilation);

std::vector<EhrhartSample> ehrhart_samples(const EmbeddedDag& dag, int max_dilation);

/// Normalized volume of the unit flow polytope, independent of the
/// triangulation machinery: interpolate the degree-d Ehrhart polynomial
/// through t = 0..d and take d! times its leading coefficient (the d-th
/// finite difference of the counts).
Int ehrhart_normalized_volume(const EmbeddedDag& dag);

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct VerificationReport {
    bool overall = true;
    std::vector<CheckResult> checks;

    void add(std::string name, bool pass, std::string detail) {
        overall = overall && pass;
        checks.push_back({std::move(name), pass, std::move(detail)});
    }
};

/// Independent checks of the triangulation axioms: total volume against the
/// Ehrhart oracle, per-cell unimodularity and purity, decomposition coverage
/// on all lattice points plus `samples` random rational interior points, and
/// (for dimension <= face_check_dim_cutoff) exact pairwise face-to-face
/// intersection tests by vertex enumeration.
VerificationReport verify_triangulation(const EmbeddedDag& dag, const Triangulation& tri,
                                        int face_check_dim_cutoff = 5, int samples = 20,
                                        std::uint64_t seed = 1);

/// The complete bipartite 3x3 dag, edges oriented source side to sink side.
EmbeddedDag k33_dag();

/// End-to-end certificate that the 3x3 bipartite flow polytope admits no
/// lattice triangulation: its lattice points are the six matching
/// indicators, the three even matchings and the three odd matchings sum to
/// the same flow (an affine dependence), and every pair of matchings is
/// forced compatible because no third matching lives on their union.
VerificationReport k33_obstruction_check();

/// Seeded random strongly planar balanced dag, grown from a single edge by
/// planarity-preserving moves: subdivide an edge, duplicate an edge, add a
/// parallel two-edge path, stack a fresh single-edge component on top.
EmbeddedDag random_instance(std::uint64_t seed, int max_edges, int max_sources);

}  // namespace flowtri
