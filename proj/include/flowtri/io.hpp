#pragma once

#include "flowtri/embedded_dag.hpp"
#include "flowtri/layerings.hpp"
#include "flowtri/mutation_poset.hpp"
#include "flowtri/oracle.hpp"
#include "flowtri/reduction.hpp"
#include "flowtri/triangulation.hpp"

#include <optional>
#include <string>

namespace flowtri {

struct ParsedInstance {
    EmbeddedDag dag;
    std::optional<NetflowVector> netflow;
};

/// Strict parser for the instance format: {"vertices": [{"id","in","out"}],
/// "edges": [{"id","tail","head"}], "sources": [...], "sinks": [...],
/// "netflow": {id: int}?}. Unknown keys are rejected; edge ids in "in"/"out"
/// resolve against the edge list; indices follow file order.
ParsedInstance parse_instance(const std::string& json_text);

std::string serialize_instance(const EmbeddedDag& dag,
                               const NetflowVector* netflow = nullptr);

/// Flow values from {"edge id": "p/q" | number}; missing edges carry zero.
FlowVector parse_flow(const EmbeddedDag& dag, const std::string& json_text);

// Output documents, all carrying "schema_version": 1 and serializing
// deterministically for a fixed input.
std::string validation_json(const ValidationReport& report);
std::string routes_json(const EmbeddedDag& dag, const std::vector<Route>& routes);
std::string layerings_json(const EmbeddedDag& dag, const std::vector<Layering>& layerings);
std::string decomposition_json(const EmbeddedDag& dag, const LayeringDecomposition& dec);
std::string triangulation_json(const EmbeddedDag& dag, const Triangulation& tri);
std::string poset_json(const EmbeddedDag& dag, const FramingPoset& poset);
std::string verification_json(const VerificationReport& report);

/// Hasse diagram of the framing poset: one node per clique (post-source
/// index), one upward edge per transitive-reduction cover, labelled by the
/// mutation kind.
std::string emit_dot(const FramingPoset& poset);

}  // namespace flowtri
