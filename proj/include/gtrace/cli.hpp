#ifndef GTRACE_CLI_HPP
#define GTRACE_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gtrace/io.hpp"
#include "gtrace/report.hpp"
#include "gtrace/traces.hpp"

namespace gtrace::cli {

// Exit-code contract: 0 ok, 2 bad input, 3 resource cap, 4 property
// violation found by a checker. 70 signals an internal inconsistency.
constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kSizeLimit = 3;
constexpr int kViolation = 4;
constexpr int kInternal = 70;

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::size_t enumeration_cap() {
    if (const char* env = std::getenv("GAUGE_TRACE_MAX_PATHS")) {
        try {
            const long long cap = std::stoll(env);
            if (cap > 0) return static_cast<std::size_t>(cap);
        } catch (...) {
            throw ParseError("GAUGE_TRACE_MAX_PATHS must be a positive integer");
        }
    }
    return kDefaultMaxPaths;
}

inline Json violations_json(const Graph&, const std::vector<InvarianceViolation>& violations) {
    Json arr = Json::array();
    for (const auto& v : violations) {
        Json entry;
        entry["set"] = v.set;
        entry["lhs"] = v.lhs.str();
        entry["rhs"] = v.rhs.str();
        arr.push_back(entry);
    }
    return arr;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"invariant measures and tracial weights of a finite directed multigraph"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    std::string graph_path, out_path;

    auto* analyze_cmd = app.add_subcommand("analyze", "full structure report for a graph");
    analyze_cmd->add_option("graph", graph_path, "graph document")->required();
    analyze_cmd->add_option("--out", out_path, "write the report to a file");
    int max_polytope = 12;
    analyze_cmd->add_option("--max-polytope", max_polytope,
                            "vertex-count cap for polytope enumeration");

    std::string measure_path;
    auto* riesz_cmd = app.add_subcommand("riesz", "harmonic/boundary decomposition of a measure");
    riesz_cmd->add_option("graph", graph_path, "graph document")->required();
    riesz_cmd->add_option("measure", measure_path, "measure document")->required();

    std::string check_path;
    int depth = 8;
    auto* check_cmd =
        app.add_subcommand("check", "brute-force shift-invariance check of a measure");
    check_cmd->add_option("graph", graph_path, "graph document")->required();
    check_cmd->add_option("measure", check_path, "measure or atomic-measure document")->required();
    check_cmd->add_option("--depth", depth, "cylinder depth (default 8)");

    auto* polytope_cmd = app.add_subcommand("polytope", "extreme invariant probability measures");
    polytope_cmd->add_option("graph", graph_path, "graph document")->required();
    polytope_cmd->add_option("--max-polytope", max_polytope,
                             "vertex-count cap for polytope enumeration");

    int space_depth = 4;
    auto* pathspace_cmd = app.add_subcommand("pathspace", "truncated boundary path space");
    pathspace_cmd->add_option("graph", graph_path, "graph document")->required();
    pathspace_cmd->add_option("--depth", space_depth, "truncation depth (default 4)");

    std::string functional_path, measure_spec, zeta = "1";
    int subgroup = -1;
    double zeta_re = 1.0, zeta_im = 0.0;
    auto* trace_cmd = app.add_subcommand("trace-eval", "evaluate a tracial weight on a functional");
    trace_cmd->add_option("graph", graph_path, "graph document")->required();
    trace_cmd->add_option("functional", functional_path, "functional document")->required();
    trace_cmd->add_option("--measure", measure_spec,
                          "extremal measure: boundary:<vertex> or cycle:<edge,edge,...>")
        ->required();
    trace_cmd->add_option("--d", subgroup, "character subgroup generator (default: measure period)");
    trace_cmd->add_option("--zeta", zeta, "exact character value: 1, -1, i or -i");
    auto* zeta_re_opt =
        trace_cmd->add_option("--zeta-re", zeta_re, "floating character value, real part");
    trace_cmd->add_option("--zeta-im", zeta_im, "floating character value, imaginary part");

    std::vector<const char*> argv;
    argv.push_back("gtrace");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kOk;
        }
        err << "error[usage]: " << e.what() << "\n";
        return kInputError;
    }

    auto fail = [&](const char* type, const std::string& message, int code) {
        if (format == "json") {
            Json doc;
            doc["error"]["type"] = type;
            doc["error"]["message"] = message;
            out << doc.dump(2) << "\n";
        } else {
            out << "error[" << type << "]: " << message << "\n";
        }
        return code;
    };

    try {
        const std::size_t cap = detail::enumeration_cap();

        if (*analyze_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const AnalysisReport report = analyze(g, max_polytope);
            const std::string rendered =
                format == "json" ? report_json(report).dump(2) + "\n" : report_text(report);
            if (!out_path.empty()) {
                std::ofstream f(out_path, std::ios::binary);
                if (!f) throw ParseError("cannot write '" + out_path + "'");
                f << rendered;
            } else {
                out << rendered;
            }
            return kOk;
        }

        if (*riesz_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const VertexMeasure mu = parse_vertex_measure(g, detail::read_file(measure_path));
            const RieszDecomposition parts = riesz_decompose(g, mu);
            const VertexMeasure eta = defect(g, parts.boundary);
            const auto norms = transfer_norm_trace(g, parts.boundary, 32);
            if (format == "json") {
                Json doc;
                doc["mu1"] = measure_json(g, parts.harmonic);
                doc["mu2"] = measure_json(g, parts.boundary);
                doc["eta"] = measure_json(g, eta);
                doc["defect_regular_support"] = defect_regular_support(g, eta);
                Json trace = Json::array();
                for (const auto& n : norms) trace.push_back(n.str());
                doc["iteration_norms"] = trace;
                out << doc.dump(2) << "\n";
            } else {
                auto print_measure = [&](const char* name, const VertexMeasure& m) {
                    out << name << ":";
                    for (const auto& [v, q] : m.to_entries(g)) out << " " << v << "=" << q.str();
                    out << "\n";
                };
                print_measure("mu1", parts.harmonic);
                print_measure("mu2", parts.boundary);
                print_measure("eta", eta);
                out << "iteration |T^k mu2|_1:";
                for (const auto& n : norms) out << " " << n.str();
                out << "\n";
            }
            return kOk;
        }

        if (*check_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const std::string text = detail::read_file(check_path);
            const auto probe = gtrace::detail::parse_json(text);
            std::vector<InvarianceViolation> violations;
            std::size_t checked = 0;
            if (probe.is_object() && probe.contains("measure")) {
                // A vertex measure extends to an invariant measure on the
                // boundary path space iff it is vertex-invariant; the
                // cylinder identities then hold by construction, so the
                // check reduces to the per-vertex mass balance.
                const VertexMeasure mu = parse_vertex_measure(g, text);
                const RVector t = vertex_matrix(g) * mu.values();
                for (int v = 0; v < g.vertex_count(); ++v) {
                    ++checked;
                    const Rational lhs = mu.at(v), rhs = t(v);
                    if (rhs > lhs || (is_regular(g, v) && rhs != lhs))
                        violations.push_back({"balance at (" + g.vertex_id(v) + ")", lhs, rhs});
                }
            } else {
                const auto atoms = parse_atoms(g, text);
                const InvarianceReport report = check_invariance_bruteforce(g, atoms, depth, cap);
                checked = report.checked;
                violations = report.violations;
            }
            if (format == "json") {
                Json doc;
                doc["checked"] = checked;
                doc["violations"] = detail::violations_json(g, violations);
                out << doc.dump(2) << "\n";
            } else {
                out << "checked " << checked << " identities, " << violations.size()
                    << " violation(s)\n";
                for (const auto& v : violations)
                    out << "  " << v.set << ": " << v.lhs.str() << " != " << v.rhs.str() << "\n";
            }
            return violations.empty() ? kOk : kViolation;
        }

        if (*polytope_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const auto points = enumerate_polytope_vertices(g, max_polytope);
            if (format == "json") {
                Json arr = Json::array();
                for (const auto& p : points) {
                    Json entry;
                    entry["measure"] = measure_json(g, p);
                    entry["classification"] =
                        gtrace::detail::classification_json(g, classify_extreme_point(g, p));
                    arr.push_back(entry);
                }
                Json doc;
                doc["extreme_points"] = arr;
                out << doc.dump(2) << "\n";
            } else {
                out << points.size() << " extreme point(s)\n";
                for (const auto& p : points) {
                    out << "  -";
                    for (const auto& [v, q] : p.to_entries(g)) out << " " << v << "=" << q.str();
                    out << "\n";
                }
            }
            return kOk;
        }

        if (*pathspace_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const auto space = truncated_space(g, space_depth, cap);
            if (format == "json") {
                Json arr = Json::array();
                for (const auto& p : space) arr.push_back(path_json(g, p));
                Json doc;
                doc["depth"] = space_depth;
                doc["elements"] = arr;
                out << doc.dump(2) << "\n";
            } else {
                out << "depth-" << space_depth << " boundary space, " << space.size()
                    << " element(s)\n";
                for (const auto& p : space) out << "  " << path_label(g, p) << "\n";
            }
            return kOk;
        }

        if (*trace_cmd) {
            const Graph g = parse_graph(detail::read_file(graph_path));
            const auto terms = parse_functional(g, detail::read_file(functional_path));

            AtomicInvariantMeasure nu = [&] {
                const auto colon = measure_spec.find(':');
                if (colon == std::string::npos)
                    throw ValidationError("--measure must be boundary:<vertex> or cycle:<edges>");
                const std::string kind = measure_spec.substr(0, colon);
                const std::string rest = measure_spec.substr(colon + 1);
                if (kind == "boundary") return AtomicInvariantMeasure::boundary(g, g.vertex(rest));
                if (kind == "cycle") {
                    std::vector<EdgeId> ids;
                    std::stringstream ss(rest);
                    std::string item;
                    while (std::getline(ss, item, ',')) ids.push_back(item);
                    const Path loop = path_from_edge_ids(g, ids);
                    return AtomicInvariantMeasure::cyclic_harmonic(g, LoopClass(g, loop));
                }
                throw ValidationError("--measure must be boundary:<vertex> or cycle:<edges>");
            }();
            const int d = subgroup >= 0 ? subgroup : nu.period();

            const bool floating = zeta_re_opt->count() > 0;
            std::string value;
            if (floating) {
                using C = std::complex<double>;
                std::vector<CylinderTerm<C>> fterms;
                for (const auto& t : terms)
                    fterms.push_back(
                        {t.beta, t.gamma, C(t.coeff.re.to_double(), t.coeff.im.to_double())});
                TraceFunctional<C> psi(g, nu, Character<C>::make(d, C(zeta_re, zeta_im)));
                const C v = evaluate_trace(g, psi, fterms);
                std::ostringstream ss;
                ss.precision(12);
                ss << v.real() << (v.imag() >= 0 ? "+" : "") << v.imag() << "i";
                value = ss.str();
            } else {
                RationalComplex z;
                if (zeta == "1") z = RationalComplex::one();
                else if (zeta == "-1") z = RationalComplex(Rational(-1));
                else if (zeta == "i") z = RationalComplex::i();
                else if (zeta == "-i") z = RationalComplex(Rational(0), Rational(-1));
                else throw ValidationError("--zeta must be one of 1, -1, i, -i");
                TraceFunctional<RationalComplex> psi(g, nu,
                                                     Character<RationalComplex>::make(d, z));
                value = evaluate_trace(g, psi, terms).str();
            }
            if (format == "json") {
                Json doc;
                doc["value"] = value;
                doc["exact"] = !floating;
                out << doc.dump(2) << "\n";
            } else {
                out << value << "\n";
            }
            return kOk;
        }

        err << "error[usage]: no subcommand\n";
        return kInputError;
    } catch (const SizeLimit& e) {
        return fail("SizeLimit", e.what(), kSizeLimit);
    } catch (const ParseError& e) {
        return fail("ParseError", e.what(), kInputError);
    } catch (const ValidationError& e) {
        return fail("ValidationError", e.what(), kInputError);
    } catch (const NotInvariant& e) {
        return fail("NotInvariant", e.what(), kInputError);
    } catch (const MalformedFunctional& e) {
        return fail("MalformedFunctional", e.what(), kInputError);
    } catch (const CompositionError& e) {
        return fail("CompositionError", e.what(), kInputError);
    } catch (const NotALoop& e) {
        return fail("NotALoop", e.what(), kInputError);
    } catch (const NegativeDefect& e) {
        return fail("NegativeDefect", e.what(), kInputError);
    } catch (const ShiftOfVertex& e) {
        return fail("ShiftOfVertex", e.what(), kInputError);
    } catch (const InternalInconsistency& e) {
        return fail("InternalInconsistency", e.what(), kInternal);
    } catch (const Error& e) {
        return fail("Error", e.what(), kInputError);
    }
}

}  // namespace gtrace::cli

#endif  // GTRACE_CLI_HPP
