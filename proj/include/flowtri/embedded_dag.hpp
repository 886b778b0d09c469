#pragma once

#include "flowtri/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace flowtri {

// A DAG together with a combinatorial strongly-planar embedding. The geometry
// of the paper-style drawing (left-to-right edges, terminals on the outer
// face) is carried by three pieces of data: per-vertex bottom-to-top edge
// orders, and the bottom-to-top order of sources and of sinks along the outer
// face. Everything downstream (framing orders, compatibility, layerings)
// consumes only these orders.

struct VertexRecord {
    std::string name;
    std::vector<int> in_edges;   // bottom-to-top
    std::vector<int> out_edges;  // bottom-to-top
};

struct EdgeRecord {
    std::string name;
    int tail = -1;
    int head = -1;
};

struct EmbeddedDag {
    std::vector<VertexRecord> vertices;
    std::vector<EdgeRecord> edges;
    std::vector<int> sources;  // bottom-to-top
    std::vector<int> sinks;    // bottom-to-top

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int find_vertex(const std::string& name) const;  // -1 if absent
    int find_edge(const std::string& name) const;
};

/// Integer vertex weights; a flow conserves up to values[v] at each vertex.
struct NetflowVector {
    IntVec values;  // indexed by vertex
};

/// Exact-rational edge flow together with the netflow it satisfies.
struct FlowVector {
    RatVec values;  // indexed by edge
    NetflowVector netflow;
};

struct Violation {
    std::string rule;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;

    void add(std::string rule, std::string detail) {
        ok = false;
        violations.push_back({std::move(rule), std::move(detail)});
    }
};

/// Throws StructuralError unless names are unique and nonempty and all
/// vertex/edge indices are in range. Deeper consistency is the business of
/// validate_strong_planarity, which reports instead of throwing.
void check_ids(const EmbeddedDag& dag);

/// Counterclockwise cyclic edge order at each vertex: out-edges bottom-to-top
/// followed by in-edges top-to-bottom. Throws StructuralError if the in/out
/// lists do not match edge endpoints.
std::vector<std::vector<int>> derive_rotation_system(const EmbeddedDag& dag);

// Faces of the rotation system, traced on darts (edge sides), so parallel
// edges and bigon faces are handled. Dart 2e runs tail->head of edge e,
// dart 2e+1 runs head->tail.
struct FaceStructure {
    std::vector<std::vector<int>> faces;      // dart cycles
    std::vector<int> face_of_dart;            // dart -> face index
    std::vector<int> component;               // vertex -> component id
    int component_count = 0;
    std::vector<int> outer_face_of_component; // component -> face index, or -1
};

int dart_base_vertex(const EmbeddedDag& dag, int dart);

/// Traces all faces. Requires a structurally consistent dag (same
/// precondition as derive_rotation_system).
FaceStructure trace_faces(const EmbeddedDag& dag);

/// Full report-based check of the strong-planarity invariants: acyclicity,
/// in/out partition consistency, source/sink exactness, the Euler face count
/// V - E + F = 1 + c, existence of a common outer face holding every source
/// and sink, and agreement of the source/sink sequences with the outer-face
/// boundary order.
ValidationReport validate_strong_planarity(const EmbeddedDag& dag);

/// Report-based nondegeneracy of (dag, a): positive on sources, negative on
/// sinks, zero sum, an a-flow exists (augmenting-path feasibility), and every
/// vertex with nonzero netflow lies on the outer face.
ValidationReport check_nondegenerate(const EmbeddedDag& dag, const NetflowVector& a);

/// +1 on sources, -1 on sinks, 0 elsewhere.
NetflowVector unit_netflow(const EmbeddedDag& dag);

/// True iff the unit netflow vector is nondegenerate on a validated dag.
bool is_balanced(const EmbeddedDag& dag);

/// Throws InvalidInputError unless dag validates and is balanced. Most of the
/// layering-level API calls this as its precondition gate.
void require_valid_balanced(const EmbeddedDag& dag);

/// Deterministic topological order (lowest vertex index first among ready
/// vertices); nullopt if the graph has a directed cycle.
std::optional<std::vector<int>> topological_order(const EmbeddedDag& dag);

/// Exact conservation check: does f satisfy netflow a on dag?
bool satisfies_netflow(const EmbeddedDag& dag, const RatVec& f, const NetflowVector& a);

/// Strength S of a nonnegative flow with netflow S * a_1 (S rational, >= 0).
/// Throws InvalidInputError if f is negative somewhere or is not a scaled
/// unit flow.
Rat scaled_unit_strength(const EmbeddedDag& dag, const FlowVector& f);

}  // namespace flowtri
