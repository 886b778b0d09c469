#include "flowtri/io.hpp"

#include "flowtri/errors.hpp"

#include <json.hpp>

#include <map>

namespace flowtri {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known)
            throw InvalidInputError("unknown key '" + it.key() + "' in " + where);
    }
}

Int int_from_json(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Int(v.get<long long>());
    if (v.is_string()) {
        Rat r = rat_from_string(v.get<std::string>());
        if (!is_integer(r)) throw InvalidInputError(where + " must be an integer");
        return numerator(r);
    }
    throw InvalidInputError(where + " must be an integer or integer string");
}

json rat_to_json(const Rat& r) { return json(rat_to_string(r)); }

std::string mutation_name(MutationType t) {
    switch (t) {
        case MutationType::Shuffle: return "shuffle";
        case MutationType::Rotation: return "rotation";
        case MutationType::Realignment: return "realignment";
    }
    return "?";
}

json route_names(const EmbeddedDag& dag, const Route& r) {
    json out = json::array();
    for (int e : r.edges) out.push_back(dag.edges[e].name);
    return out;
}

json layering_names(const EmbeddedDag& dag, const Layering& l) {
    json out = json::array();
    for (const Route& r : l.routes) out.push_back(route_names(dag, r));
    return out;
}

json flow_object(const EmbeddedDag& dag, const RatVec& values) {
    json out = json::object();
    for (int e = 0; e < dag.edge_count(); ++e) out[dag.edges[e].name] = rat_to_string(values[e]);
    return out;
}

json int_vector_object(const EmbeddedDag& dag, const IntVec& values) {
    json out = json::object();
    for (int e = 0; e < dag.edge_count(); ++e) out[dag.edges[e].name] = values[e].str();
    return out;
}

}  // namespace

ParsedInstance parse_instance(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& err) {
        throw InvalidInputError(std::string("instance is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw InvalidInputError("instance must be a JSON object");
    reject_unknown_keys(doc, {"vertices", "edges", "sources", "sinks", "netflow"}, "instance");
    for (const char* key : {"vertices", "edges", "sources", "sinks"})
        if (!doc.contains(key))
            throw InvalidInputError(std::string("instance is missing '") + key + "'");

    ParsedInstance out;
    EmbeddedDag& dag = out.dag;

    std::map<std::string, int> edge_index, vertex_index;
    for (const json& e : doc["edges"]) {
        if (!e.is_object()) throw InvalidInputError("edge entries must be objects");
        reject_unknown_keys(e, {"id", "tail", "head"}, "edge");
        for (const char* key : {"id", "tail", "head"})
            if (!e.contains(key) || !e[key].is_string())
                throw InvalidInputError(std::string("edge needs string '") + key + "'");
        std::string id = e["id"].get<std::string>();
        if (!edge_index.emplace(id, dag.edge_count()).second)
            throw InvalidInputError("duplicate edge id '" + id + "'");
        dag.edges.push_back({id, -1, -1});
    }
    for (const json& v : doc["vertices"]) {
        if (!v.is_object()) throw InvalidInputError("vertex entries must be objects");
        reject_unknown_keys(v, {"id", "in", "out"}, "vertex");
        if (!v.contains("id") || !v["id"].is_string())
            throw InvalidInputError("vertex needs string 'id'");
        std::string id = v["id"].get<std::string>();
        if (!vertex_index.emplace(id, dag.vertex_count()).second)
            throw InvalidInputError("duplicate vertex id '" + id + "'");
        VertexRecord rec;
        rec.name = id;
        for (const char* key : {"in", "out"}) {
            if (!v.contains(key) || !v[key].is_array())
                throw InvalidInputError("vertex '" + id + "' needs array '" + key + "'");
            for (const json& en : v[key]) {
                if (!en.is_string())
                    throw InvalidInputError("edge reference in vertex '" + id +
                                            "' must be a string");
                auto it = edge_index.find(en.get<std::string>());
                if (it == edge_index.end())
                    throw InvalidInputError("vertex '" + id + "' references unknown edge '" +
                                            en.get<std::string>() + "'");
                (key[0] == 'i' ? rec.in_edges : rec.out_edges).push_back(it->second);
            }
        }
        dag.vertices.push_back(std::move(rec));
    }
    for (json& e : doc["edges"]) {
        int idx = edge_index[e["id"].get<std::string>()];
        for (const char* key : {"tail", "head"}) {
            auto it = vertex_index.find(e[key].get<std::string>());
            if (it == vertex_index.end())
                throw InvalidInputError("edge '" + dag.edges[idx].name +
                                        "' references unknown vertex '" +
                                        e[key].get<std::string>() + "'");
            (key[0] == 't' ? dag.edges[idx].tail : dag.edges[idx].head) = it->second;
        }
    }
    auto read_terminals = [&](const char* key, std::vector<int>& list) {
        if (!doc[key].is_array())
            throw InvalidInputError(std::string("'") + key + "' must be an array");
        for (const json& v : doc[key]) {
            if (!v.is_string())
                throw InvalidInputError(std::string("'") + key + "' entries must be strings");
            auto it = vertex_index.find(v.get<std::string>());
            if (it == vertex_index.end())
                throw InvalidInputError(std::string("unknown vertex '") + v.get<std::string>() +
                                        "' in '" + key + "'");
            list.push_back(it->second);
        }
    };
    read_terminals("sources", dag.sources);
    read_terminals("sinks", dag.sinks);
    check_ids(dag);

    if (doc.contains("netflow")) {
        if (!doc["netflow"].is_object())
            throw InvalidInputError("'netflow' must be an object");
        NetflowVector a;
        a.values.assign(dag.vertex_count(), 0);
        for (auto it = doc["netflow"].begin(); it != doc["netflow"].end(); ++it) {
            auto vi = vertex_index.find(it.key());
            if (vi == vertex_index.end())
                throw InvalidInputError("netflow references unknown vertex '" + it.key() + "'");
            a.values[vi->second] = int_from_json(it.value(), "netflow['" + it.key() + "']");
        }
        out.netflow = std::move(a);
    }
    return out;
}

std::string serialize_instance(const EmbeddedDag& dag, const NetflowVector* netflow) {
    json doc;
    doc["vertices"] = json::array();
    for (const auto& v : dag.vertices) {
        json rec;
        rec["id"] = v.name;
        rec["in"] = json::array();
        for (int e : v.in_edges) rec["in"].push_back(dag.edges[e].name);
        rec["out"] = json::array();
        for (int e : v.out_edges) rec["out"].push_back(dag.edges[e].name);
        doc["vertices"].push_back(std::move(rec));
    }
    doc["edges"] = json::array();
    for (const auto& e : dag.edges)
        doc["edges"].push_back({{"id", e.name},
                                {"tail", dag.vertices[e.tail].name},
                                {"head", dag.vertices[e.head].name}});
    doc["sources"] = json::array();
    for (int v : dag.sources) doc["sources"].push_back(dag.vertices[v].name);
    doc["sinks"] = json::array();
    for (int v : dag.sinks) doc["sinks"].push_back(dag.vertices[v].name);
    if (netflow) {
        json a = json::object();
        for (int v = 0; v < dag.vertex_count(); ++v)
            if (netflow->values[v] != 0)
                a[dag.vertices[v].name] = netflow->values[v].convert_to<long long>();
        doc["netflow"] = std::move(a);
    }
    return doc.dump(2) + "\n";
}

FlowVector parse_flow(const EmbeddedDag& dag, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& err) {
        throw InvalidInputError(std::string("flow is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw InvalidInputError("flow must be a JSON object");
    FlowVector f;
    f.values.assign(dag.edge_count(), Rat(0));
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        int e = dag.find_edge(it.key());
        if (e < 0) throw InvalidInputError("flow references unknown edge '" + it.key() + "'");
        if (it.value().is_string())
            f.values[e] = rat_from_string(it.value().get<std::string>());
        else if (it.value().is_number_integer())
            f.values[e] = Rat(it.value().get<long long>());
        else
            throw InvalidInputError("flow values must be integers or 'p/q' strings");
    }
    return f;
}

std::string validation_json(const ValidationReport& report) {
    json doc;
    doc["schema_version"] = 1;
    doc["ok"] = report.ok;
    doc["violations"] = json::array();
    for (const auto& v : report.violations)
        doc["violations"].push_back({{"rule", v.rule}, {"detail", v.detail}});
    return doc.dump(2) + "\n";
}

std::string routes_json(const EmbeddedDag& dag, const std::vector<Route>& routes) {
    json doc;
    doc["schema_version"] = 1;
    doc["count"] = routes.size();
    doc["routes"] = json::array();
    for (size_t i = 0; i < routes.size(); ++i) {
        json rec;
        rec["index"] = i;
        rec["edges"] = route_names(dag, routes[i]);
        rec["source"] = dag.vertices[route_source(dag, routes[i])].name;
        rec["sink"] = dag.vertices[route_sink(dag, routes[i])].name;
        auto h = horizontal_index(dag, routes[i]);
        rec["horizontal_index"] = h ? json(*h) : json(nullptr);
        doc["routes"].push_back(std::move(rec));
    }
    return doc.dump(2) + "\n";
}

std::string layerings_json(const EmbeddedDag& dag, const std::vector<Layering>& layerings) {
    json doc;
    doc["schema_version"] = 1;
    doc["count"] = layerings.size();
    doc["layerings"] = json::array();
    for (size_t i = 0; i < layerings.size(); ++i) {
        FlowVector f = layering_indicator(dag, layerings[i]);
        doc["layerings"].push_back({{"index", i},
                                    {"routes", layering_names(dag, layerings[i])},
                                    {"flow", flow_object(dag, f.values)}});
    }
    return doc.dump(2) + "\n";
}

std::string decomposition_json(const EmbeddedDag& dag, const LayeringDecomposition& dec) {
    json doc;
    doc["schema_version"] = 1;
    doc["terms"] = json::array();
    for (const auto& [l, coeff] : dec.terms)
        doc["terms"].push_back(
            {{"coefficient", rat_to_json(coeff)}, {"layering", layering_names(dag, l)}});
    return doc.dump(2) + "\n";
}

std::string triangulation_json(const EmbeddedDag& dag, const Triangulation& tri) {
    json doc;
    doc["schema_version"] = 1;
    doc["dimension"] = tri.dimension;
    doc["cell_count"] = tri.cells.size();
    doc["normalized_volume"] = tri.cells.size();
    doc["cells"] = json::array();
    for (size_t c = 0; c < tri.cells.size(); ++c) {
        json cell;
        cell["index"] = c;
        cell["layerings"] = json::array();
        for (int idx : tri.cells[c].clique)
            cell["layerings"].push_back(layering_names(dag, tri.universe.layerings[idx]));
        cell["vertices"] = json::array();
        for (const IntVec& v : tri.cells[c].simplex.vertices)
            cell["vertices"].push_back(int_vector_object(dag, v));
        cell["normalized_volume"] = 1;
        doc["cells"].push_back(std::move(cell));
    }
    return doc.dump(2) + "\n";
}

std::string poset_json(const EmbeddedDag& dag, const FramingPoset& poset) {
    json doc;
    doc["schema_version"] = 1;
    doc["node_count"] = poset.nodes.size();
    doc["nodes"] = json::array();
    for (size_t n = 0; n < poset.nodes.size(); ++n) {
        json rec;
        rec["index"] = n;
        rec["layerings"] = json::array();
        for (int idx : poset.nodes[n])
            rec["layerings"].push_back(layering_names(dag, poset.universe.layerings[idx]));
        doc["nodes"].push_back(std::move(rec));
    }
    doc["down_edges"] = json::array();
    for (const PosetEdge& e : poset.down_edges)
        doc["down_edges"].push_back(
            {{"from", e.from}, {"to", e.to}, {"kind", mutation_name(e.kind)}});
    doc["hasse"] = json::array();
    for (const auto& [from, to] : poset.reduction)
        doc["hasse"].push_back({{"from", from}, {"to", to}});
    return doc.dump(2) + "\n";
}

std::string verification_json(const VerificationReport& report) {
    json doc;
    doc["schema_version"] = 1;
    doc["overall"] = report.overall;
    doc["checks"] = json::array();
    for (const auto& c : report.checks)
        doc["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return doc.dump(2) + "\n";
}

std::string emit_dot(const FramingPoset& poset) {
    std::string out = "digraph framing_poset {\n  rankdir=BT;\n";
    for (size_t n = 0; n < poset.nodes.size(); ++n)
        out += "  n" + std::to_string(n) + " [label=\"K" + std::to_string(n) + "\"];\n";
    for (const auto& [from, to] : poset.reduction) {
        std::string label;
        for (const PosetEdge& e : poset.down_edges)
            if (e.from == from && e.to == to) label = mutation_name(e.kind);
        out += "  n" + std::to_string(to) + " -> n" + std::to_string(from) + " [label=\"" +
               label + "\"];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace flowtri
