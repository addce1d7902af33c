#ifndef GTRACE_IO_HPP
#define GTRACE_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "gtrace/graph.hpp"
#include "gtrace/measures.hpp"
#include "gtrace/pathspace.hpp"
#include "gtrace/rational.hpp"
#include "gtrace/traces.hpp"

namespace gtrace {

using Json = nlohmann::ordered_json;

namespace detail {

inline nlohmann::json parse_json(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

inline std::string require_string(const nlohmann::json& j, const char* what) {
    if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

}  // namespace detail

/// Graph document:
///   { "vertices": ["v","u"], "edges": [ {"id":"e","src":"v","rng":"u"} ] }
/// Edge endpoints are labeled src/rng; a path lists its edges range-first,
/// and extends by appending edges whose range equals the current source.
inline Graph parse_graph(const std::string& text) {
    const auto doc = detail::parse_json(text);
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges"))
        throw ParseError("graph document needs 'vertices' and 'edges'");
    if (!doc["vertices"].is_array() || !doc["edges"].is_array())
        throw ParseError("'vertices' and 'edges' must be arrays");
    std::vector<VertexId> vertices;
    for (const auto& v : doc["vertices"]) vertices.push_back(detail::require_string(v, "vertex id"));
    std::vector<EdgeSpec> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_object() || !e.contains("id") || !e.contains("src") || !e.contains("rng"))
            throw ParseError("edge entries need 'id', 'src' and 'rng'");
        edges.push_back({detail::require_string(e["id"], "edge id"),
                         detail::require_string(e["src"], "edge src"),
                         detail::require_string(e["rng"], "edge rng")});
    }
    return Graph::make(std::move(vertices), std::move(edges));
}

/// Canonical encoding: vertices and edges sorted by id.
inline std::string serialize_graph(const Graph& g) {
    Json doc;
    doc["vertices"] = g.vertex_ids();
    Json edges = Json::array();
    for (int e = 0; e < g.edge_count(); ++e) {
        Json entry;
        entry["id"] = g.edge_id(e);
        entry["src"] = g.vertex_id(g.src(e));
        entry["rng"] = g.vertex_id(g.rng(e));
        edges.push_back(entry);
    }
    doc["edges"] = edges;
    return doc.dump(2) + "\n";
}

/// Measure document: { "measure": { "v": "1/2", "u": "3" } }
inline VertexMeasure parse_vertex_measure(const Graph& g, const std::string& text) {
    const auto doc = detail::parse_json(text);
    if (!doc.is_object() || !doc.contains("measure") || !doc["measure"].is_object())
        throw ParseError("measure document needs a 'measure' object");
    std::map<VertexId, Rational> entries;
    for (const auto& [key, value] : doc["measure"].items())
        entries[key] = Rational::parse(detail::require_string(value, "measure entry"));
    for (const auto& [key, value] : entries) g.vertex(key);  // unknown ids -> ValidationError
    return VertexMeasure::from_entries(g, entries);
}

inline Json measure_json(const Graph& g, const VertexMeasure& mu) {
    Json obj;
    for (int v = 0; v < g.vertex_count(); ++v) obj[g.vertex_id(v)] = mu.at(v).str();
    return obj;
}

inline std::string serialize_vertex_measure(const Graph& g, const VertexMeasure& mu) {
    Json doc;
    doc["measure"] = measure_json(g, mu);
    return doc.dump(2) + "\n";
}

/// Paths in documents: an array of edge ids in path order, or
/// {"vertex": "v"} for a length-zero path.
inline Path parse_path(const Graph& g, const nlohmann::json& j) {
    if (j.is_object() && j.contains("vertex"))
        return Path::at_vertex(g.vertex(detail::require_string(j["vertex"], "path vertex")));
    if (!j.is_array()) throw ParseError("a path is an edge-id array or {\"vertex\": id}");
    std::vector<EdgeId> ids;
    for (const auto& e : j) ids.push_back(detail::require_string(e, "path edge id"));
    if (ids.empty()) throw ParseError("edge-id path arrays must be nonempty");
    return path_from_edge_ids(g, ids);
}

inline Json path_json(const Graph& g, const Path& p) {
    if (p.is_vertex()) {
        Json obj;
        obj["vertex"] = g.vertex_id(p.base);
        return obj;
    }
    return Json(p.edge_id_list(g));
}

/// Atomic measure document:
///   { "atoms": [ {"vertex":"v","weight":"1"},
///                {"path":["e"],"weight":"1"},
///                {"prefix":["f"],"cycle":["a"],"weight":"1"} ] }
/// "path" atoms are finite boundary paths; "cycle" atoms are eventually
/// cyclic, with an optional "prefix" (default: the cycle's base vertex).
inline std::vector<WeightedAtom> parse_atoms(const Graph& g, const std::string& text) {
    const auto doc = detail::parse_json(text);
    if (!doc.is_object() || !doc.contains("atoms") || !doc["atoms"].is_array())
        throw ParseError("atomic measure document needs an 'atoms' array");
    std::vector<WeightedAtom> atoms;
    for (const auto& entry : doc["atoms"]) {
        if (!entry.is_object() || !entry.contains("weight"))
            throw ParseError("atom entries need a 'weight'");
        const Rational weight = Rational::parse(detail::require_string(entry["weight"], "weight"));
        if (entry.contains("cycle")) {
            const Path cycle = parse_path(g, entry["cycle"]);
            Path prefix = entry.contains("prefix") && !entry["prefix"].empty()
                              ? parse_path(g, entry["prefix"])
                              : Path::at_vertex(cycle.range(g));
            atoms.push_back({BoundaryPath::eventually_cyclic(g, prefix, cycle), weight});
        } else if (entry.contains("path")) {
            atoms.push_back({BoundaryPath::finite(g, parse_path(g, entry["path"])), weight});
        } else if (entry.contains("vertex")) {
            const int v = g.vertex(detail::require_string(entry["vertex"], "atom vertex"));
            atoms.push_back({BoundaryPath::finite(g, Path::at_vertex(v)), weight});
        } else {
            throw ParseError("atom entries need 'path', 'vertex' or 'cycle'");
        }
    }
    return atoms;
}

/// Functional document:
///   { "terms": [ {"beta": ["f","a"], "gamma": ["f"], "coeff": "1"} ] }
/// Coefficients are rational strings or {"re": "1", "im": "-2/3"}.
inline std::vector<CylinderTerm<RationalComplex>> parse_functional(const Graph& g,
                                                                   const std::string& text) {
    const auto doc = detail::parse_json(text);
    if (!doc.is_object() || !doc.contains("terms") || !doc["terms"].is_array())
        throw ParseError("functional document needs a 'terms' array");
    std::vector<CylinderTerm<RationalComplex>> terms;
    for (const auto& entry : doc["terms"]) {
        if (!entry.is_object() || !entry.contains("beta") || !entry.contains("gamma"))
            throw ParseError("term entries need 'beta' and 'gamma'");
        RationalComplex coeff = RationalComplex::one();
        if (entry.contains("coeff")) {
            const auto& c = entry["coeff"];
            if (c.is_string()) {
                coeff = RationalComplex(Rational::parse(c.get<std::string>()));
            } else if (c.is_object()) {
                Rational re(0), im(0);
                if (c.contains("re")) re = Rational::parse(detail::require_string(c["re"], "re"));
                if (c.contains("im")) im = Rational::parse(detail::require_string(c["im"], "im"));
                coeff = RationalComplex(re, im);
            } else {
                throw ParseError("'coeff' must be a rational string or {re, im}");
            }
        }
        terms.push_back(
            make_term(g, parse_path(g, entry["beta"]), parse_path(g, entry["gamma"]), coeff));
    }
    return terms;
}

}  // namespace gtrace

#endif  // GTRACE_IO_HPP
