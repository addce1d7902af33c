#ifndef GTRACE_REPORT_HPP
#define GTRACE_REPORT_HPP

#include <sstream>
#include <string>
#include <vector>

#include "gtrace/io.hpp"
#include "gtrace/measures.hpp"
#include "gtrace/structure.hpp"

namespace gtrace {

/// Full analysis of one graph: taxonomy, verdicts, extremal measures,
/// polytope extreme points with classifications, and the compact-algebra
/// diagnostic.
struct AnalysisReport {
    Graph graph;
    std::vector<LoopClass> isolated;
    std::vector<VertexCounts> isolated_counts;  // aligned with `isolated`
    bool free = true;
    bool free_direct = true;
    Verdict verdict;
    std::vector<AtomicInvariantMeasure> boundary;
    std::vector<AtomicInvariantMeasure> cyclic_harmonic;
    std::vector<VertexMeasure> extreme_points;
    std::vector<Classification> classifications;  // aligned with extreme_points

    // When the whole extreme-point set is one boundary class, the algebra
    // is the compacts on the square-summable sequences over that path set
    // whenever it is simple. Reported as a conditional diagnostic only.
    bool unique_boundary_trace = false;
    VertexId unique_boundary_vertex;
    Natural unique_boundary_path_count;
};

inline AnalysisReport analyze(const Graph& g, int max_polytope_vertices = 12) {
    AnalysisReport report;
    report.graph = g;
    report.isolated = enumerate_isolated_loop_classes(g);
    for (const auto& c : report.isolated)
        report.isolated_counts.push_back(count_reduced_paths(g, c));
    report.free = is_free(g);
    report.free_direct = is_free_direct(g);
    if (report.free != report.free_direct)
        throw InternalInconsistency("the two freeness implementations disagree");
    report.verdict = gauge_invariance_verdict(g);
    if (report.verdict.free && !report.verdict.weights_gauge_invariant)
        throw InternalInconsistency("free graph with non-gauge-invariant weights verdict");
    report.boundary = enumerate_extremal_boundary(g);
    report.cyclic_harmonic = enumerate_extremal_cyclic_harmonic(g);
    report.extreme_points = enumerate_polytope_vertices(g, max_polytope_vertices);
    for (const auto& mu : report.extreme_points)
        report.classifications.push_back(classify_extreme_point(g, mu));

    if (report.boundary.size() == 1 && report.extreme_points.size() == 1 &&
        report.classifications.front().kind == Classification::Kind::Boundary) {
        report.unique_boundary_trace = true;
        report.unique_boundary_vertex = g.vertex_id(report.boundary.front().base_vertex());
        report.unique_boundary_path_count =
            total_count(report.boundary.front().atom_counts()).count;
    }
    return report;
}

namespace detail {

inline Json counts_json(const VertexCounts& counts) {
    Json obj;
    for (const auto& [v, c] : counts) obj[v] = c.str();
    return obj;
}

inline Json loop_json(const Graph& g, const LoopClass& c) {
    return Json(c.representative().edge_id_list(g));
}

inline Json classification_json(const Graph& g, const Classification& c) {
    Json obj;
    switch (c.kind) {
        case Classification::Kind::Boundary:
            obj["kind"] = "boundary";
            obj["vertex"] = *c.vertex;
            break;
        case Classification::Kind::CyclicHarmonic:
            obj["kind"] = "cyclic_harmonic";
            obj["loop"] = loop_json(g, *c.loop);
            break;
        case Classification::Kind::HarmonicOther:
            obj["kind"] = "harmonic_other";
            break;
    }
    return obj;
}

}  // namespace detail

inline Json report_json(const AnalysisReport& r) {
    const Graph& g = r.graph;
    Json doc;
    {
        Json summary;
        summary["vertices"] = g.vertex_count();
        summary["edges"] = g.edge_count();
        Json reg = Json::array(), sng = Json::array();
        for (int v : regular_vertices(g)) reg.push_back(g.vertex_id(v));
        for (int v : singular_vertices(g)) sng.push_back(g.vertex_id(v));
        summary["regular"] = reg;
        summary["singular"] = sng;
        doc["graph"] = summary;
    }
    {
        Json loops = Json::array();
        for (std::size_t i = 0; i < r.isolated.size(); ++i) {
            const auto& c = r.isolated[i];
            const auto& counts = r.isolated_counts[i];
            Json entry;
            entry["representative"] = detail::loop_json(g, c);
            entry["base"] = g.vertex_id(c.base(g));
            entry["length"] = c.length();
            entry["summable"] = all_finite(counts);
            entry["reduced_path_counts"] = detail::counts_json(counts);
            entry["total"] = total_count(counts).str();
            loops.push_back(entry);
        }
        doc["isolated_loops"] = loops;
    }
    {
        Json freeness;
        freeness["free"] = r.free;
        freeness["free_direct"] = r.free_direct;
        doc["freeness"] = freeness;
    }
    {
        Json gauge;
        gauge["states"] = r.verdict.states_gauge_invariant;
        gauge["weights"] = r.verdict.weights_gauge_invariant;
        Json witnesses = Json::array();
        for (const auto& w : r.verdict.witnesses) witnesses.push_back(detail::loop_json(g, w));
        gauge["witnesses"] = witnesses;
        doc["gauge_invariance"] = gauge;
    }
    {
        Json measures;
        Json boundary = Json::array();
        for (const auto& m : r.boundary) {
            Json entry;
            entry["vertex"] = g.vertex_id(m.base_vertex());
            entry["pushforward"] = measure_json(g, m.pushforward());
            entry["total_mass"] = m.total_mass().str();
            boundary.push_back(entry);
        }
        Json cyclic = Json::array();
        for (const auto& m : r.cyclic_harmonic) {
            Json entry;
            entry["loop"] = detail::loop_json(g, m.loop());
            entry["pushforward"] = measure_json(g, m.pushforward());
            entry["total_mass"] = m.total_mass().str();
            cyclic.push_back(entry);
        }
        measures["boundary"] = boundary;
        measures["cyclic_harmonic"] = cyclic;
        doc["extremal_measures"] = measures;
    }
    {
        Json polytope = Json::array();
        for (std::size_t i = 0; i < r.extreme_points.size(); ++i) {
            Json entry;
            entry["measure"] = measure_json(g, r.extreme_points[i]);
            entry["classification"] = detail::classification_json(g, r.classifications[i]);
            polytope.push_back(entry);
        }
        doc["polytope"] = polytope;
    }
    {
        Json diag;
        Json unique;
        unique["applies"] = r.unique_boundary_trace;
        if (r.unique_boundary_trace) {
            unique["vertex"] = r.unique_boundary_vertex;
            unique["path_count"] = r.unique_boundary_path_count.get_str();
            unique["note"] = "single boundary extreme point: if the algebra is simple it is "
                             "the compact operators on l2 of the paths into '" +
                             r.unique_boundary_vertex + "'";
        }
        diag["unique_boundary_trace"] = unique;
        doc["diagnostics"] = diag;
    }
    return doc;
}

inline std::string report_text(const AnalysisReport& r) {
    const Graph& g = r.graph;
    std::ostringstream out;
    out << "graph: " << g.vertex_count() << " vertices, " << g.edge_count() << " edges\n";
    out << "  regular:";
    for (int v : regular_vertices(g)) out << " " << g.vertex_id(v);
    out << "\n  singular:";
    for (int v : singular_vertices(g)) out << " " << g.vertex_id(v);
    out << "\n";
    out << "isolated loops: " << r.isolated.size() << "\n";
    for (std::size_t i = 0; i < r.isolated.size(); ++i) {
        out << "  - [" << path_label(g, r.isolated[i].representative()) << "] base "
            << g.vertex_id(r.isolated[i].base(g))
            << (all_finite(r.isolated_counts[i]) ? " summable" : " not summable")
            << ", reduced paths:";
        for (const auto& [v, c] : r.isolated_counts[i]) out << " " << v << "=" << c.str();
        out << "\n";
    }
    out << "free: " << (r.free ? "yes" : "no") << " (direct check agrees)\n";
    out << "gauge-invariant: states " << (r.verdict.states_gauge_invariant ? "yes" : "no")
        << ", weights " << (r.verdict.weights_gauge_invariant ? "yes" : "no") << "\n";
    if (!r.verdict.witnesses.empty()) {
        out << "  witnesses:";
        for (const auto& w : r.verdict.witnesses)
            out << " [" << path_label(g, w.representative()) << "]";
        out << "\n";
    }
    out << "extremal boundary measures: " << r.boundary.size() << "\n";
    for (const auto& m : r.boundary) {
        out << "  - vertex " << g.vertex_id(m.base_vertex()) << ", pushforward";
        for (const auto& [v, q] : m.pushforward().to_entries(g)) out << " " << v << "=" << q.str();
        out << "\n";
    }
    out << "extremal cyclic-harmonic measures: " << r.cyclic_harmonic.size() << "\n";
    for (const auto& m : r.cyclic_harmonic) {
        out << "  - loop [" << path_label(g, m.loop().representative()) << "], pushforward";
        for (const auto& [v, q] : m.pushforward().to_entries(g)) out << " " << v << "=" << q.str();
        out << "\n";
    }
    out << "polytope extreme points: " << r.extreme_points.size() << "\n";
    for (std::size_t i = 0; i < r.extreme_points.size(); ++i) {
        out << "  - (";
        bool first = true;
        for (const auto& [v, q] : r.extreme_points[i].to_entries(g)) {
            if (!first) out << ", ";
            out << v << ":" << q.str();
            first = false;
        }
        out << ") -> ";
        const auto& c = r.classifications[i];
        switch (c.kind) {
            case Classification::Kind::Boundary:
                out << "boundary(" << *c.vertex << ")";
                break;
            case Classification::Kind::CyclicHarmonic:
                out << "cyclic-harmonic([" << path_label(g, c.loop->representative()) << "])";
                break;
            case Classification::Kind::HarmonicOther:
                out << "HARMONIC-OTHER (unclassified; please report)";
                break;
        }
        out << "\n";
    }
    if (r.unique_boundary_trace)
        out << "note: single boundary extreme point at '" << r.unique_boundary_vertex
            << "' (path count " << r.unique_boundary_path_count.get_str()
            << "); if the algebra is simple it is the compacts on l2 of that path set\n";
    return out.str();
}

}  // namespace gtrace

#endif  // GTRACE_REPORT_HPP
