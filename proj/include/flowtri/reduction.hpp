#pragma once

#include "flowtri/embedded_dag.hpp"
#include "flowtri/routes.hpp"

#include <map>
#include <set>
#include <utility>

namespace flowtri {

enum class Placement { Below, Above };

/// Result of decontracting (dag, a) to a balanced dag: each vertex with
/// netflow a_i != 0 gains |a_i| degree-one neighbours, one per unit of
/// netflow, spliced into the outer face next to it.
struct ReductionMap {
    EmbeddedDag original;
    NetflowVector netflow;  // the original netflow a
    EmbeddedDag reduced;
    // (original vertex, unit index 1..|a_i|) -> reduced vertex
    std::map<std::pair<int, int>, int> decontracted_vertices;
    std::set<int> decontracted_edges;  // edge ids in reduced
};

/// Decontraction (original edges keep their indices in `reduced`). The new
/// block of pendant edges is inserted at the bottom (Below) or top (Above) of
/// the vertex's edge order; an infeasible placement (one that would bury a
/// pendant vertex in an interior face) is rejected with InvalidInputError.
ReductionMap decontract(const EmbeddedDag& dag, const NetflowVector& a,
                        Placement placement = Placement::Below);

/// Restriction of a unit flow on `reduced` to the original edge set; the
/// result satisfies the original netflow.
FlowVector restrict_flow(const ReductionMap& map, const FlowVector& f);

/// Inverse of restrict_flow: extend an a-flow by flow 1 on every pendant edge.
FlowVector lift_flow(const ReductionMap& map, const FlowVector& f);

struct TwoPointExtension {
    EmbeddedDag base;
    EmbeddedDag extended;
    int zero_vertex = -1;  // the added community source
    int one_vertex = -1;   // the added community sink
    std::set<int> extension_edges;
};

/// Adds a community source wired to all sources bottom-to-top and a community
/// sink wired from all sinks, making a one-source-one-sink strongly planar
/// dag. Base edges keep their indices.
TwoPointExtension two_point_extend(const EmbeddedDag& dag);

/// A flow on the extension is layered when all extension edges carry the same
/// value. hat_flow sends a strength-S flow on the base to the layered flow
/// carrying S on every extension edge; restrict_layered_flow inverts it.
FlowVector hat_flow(const TwoPointExtension& ext, const FlowVector& f);
FlowVector restrict_layered_flow(const TwoPointExtension& ext, const FlowVector& f);

/// Wraps a base route with its two unique extension edges / strips them.
Route hat_route(const TwoPointExtension& ext, const Route& p);
Route unhat_route(const TwoPointExtension& ext, const Route& p);

}  // namespace flowtri
