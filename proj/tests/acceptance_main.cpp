// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any criterion fails.

#include <chrono>
#include <complex>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtrace/cli.hpp"
#include "gtrace/measures.hpp"
#include "gtrace/pathspace.hpp"
#include "gtrace/report.hpp"
#include "gtrace/structure.hpp"
#include "gtrace/traces.hpp"
#include "oracles.hpp"

using namespace gtrace;
using gtrace::testing::load_corpus_graph;

namespace {

struct Failure : std::runtime_error {
    explicit Failure(const std::string& what) : std::runtime_error(what) {}
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Failure(what);
}

const std::vector<std::string> kCorpus{"G1", "G2", "G3", "G4", "G5"};

// --- criterion 1: canonical verdict table ---------------------------------

struct Expected {
    bool free;
    std::vector<std::string> summable;  // witness representatives, edge ids joined
    bool gauge_invariant;               // states and weights agree on finite graphs
    std::vector<std::map<VertexId, Rational>> polytope;
    std::vector<std::string> classes;  // "boundary:v" / "cyclic:a"
};

std::string loop_key(const Graph& g, const LoopClass& c) {
    std::string key;
    for (const auto& id : c.representative().edge_id_list(g)) {
        if (!key.empty()) key += ",";
        key += id;
    }
    return key;
}

void criterion_verdict_table() {
    const auto started = std::chrono::steady_clock::now();

    std::map<std::string, Expected> table;
    table["G1"] = {false, {"a"}, false, {{{"v", Rational(1)}}}, {"cyclic:a"}};
    table["G2"] = {true, {}, true, {}, {}};
    table["G3"] = {true,
                   {},
                   true,
                   {{{"v", Rational(1, 2)}, {"u", Rational(1, 2)}}},
                   {"boundary:v"}};
    table["G4"] = {false,
                   {"a"},
                   false,
                   {{{"v", Rational(1, 2)}, {"u", Rational(1, 2)}}},
                   {"cyclic:a"}};
    table["G5"] = {false, {}, true, {}, {}};

    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        const Expected& want = table.at(name);
        const AnalysisReport report = analyze(g);

        require(report.free == want.free, name + ": freeness mismatch");
        require(report.free_direct == want.free, name + ": direct freeness mismatch");

        std::vector<std::string> summable;
        for (const auto& w : report.verdict.witnesses) summable.push_back(loop_key(g, w));
        require(summable == want.summable, name + ": summable witness mismatch");
        require(report.verdict.states_gauge_invariant == want.gauge_invariant,
                name + ": states verdict mismatch");
        require(report.verdict.weights_gauge_invariant == want.gauge_invariant,
                name + ": weights verdict mismatch");

        require(report.extreme_points.size() == want.polytope.size(),
                name + ": polytope size mismatch");
        for (std::size_t i = 0; i < want.polytope.size(); ++i) {
            require(report.extreme_points[i] == VertexMeasure::from_entries(g, want.polytope[i]),
                    name + ": polytope point mismatch");
            const Classification& c = report.classifications[i];
            const std::string key =
                c.kind == Classification::Kind::Boundary
                    ? "boundary:" + *c.vertex
                    : (c.kind == Classification::Kind::CyclicHarmonic
                           ? "cyclic:" + loop_key(g, *c.loop)
                           : "other");
            require(key == want.classes[i], name + ": classification mismatch (" + key + ")");
        }

        if (name == "G3") {
            require(report.unique_boundary_trace, "G3: compact-algebra diagnostic not set");
            require(report.unique_boundary_vertex == "v", "G3: diagnostic vertex mismatch");
            require(report.unique_boundary_path_count == 2, "G3: diagnostic path count mismatch");
        }
        if (name == "G4") {
            require(report.verdict.witnesses.size() == 1 &&
                        total_count(count_reduced_paths(g, report.verdict.witnesses.front())) ==
                            CountOrInfinite::of(2),
                    "G4: reduced path total mismatch");
        }
    }

    const auto elapsed = std::chrono::steady_clock::now() - started;
    require(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 1000,
            "verdict table exceeded 1 s");
}

// --- criterion 2: Riesz suite on random invariant measures ----------------

void criterion_riesz_suite() {
    const auto started = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240);
    int tested = 0;
    while (tested < 200) {
        const Graph g = gtrace::testing::random_graph(rng, 8, 16);
        const auto points = enumerate_polytope_vertices(g);
        if (points.empty()) continue;
        ++tested;
        RVector combo = RVector::Zero(g.vertex_count());
        bool any = false;
        for (const auto& p : points) {
            const Rational c = gtrace::testing::random_rational(rng);
            if (c.sign() > 0) any = true;
            combo += p.values() * c;
        }
        if (!any) combo += points.front().values();
        const VertexMeasure mu{combo};
        require(is_vertex_invariant(g, mu), "generated measure is not vertex-invariant");

        const auto parts = riesz_decompose(g, mu);
        require(VertexMeasure(RVector(parts.harmonic.values() + parts.boundary.values())) == mu,
                "mu1 + mu2 != mu");
        require(apply_transfer(vertex_matrix(g), parts.harmonic) == parts.harmonic,
                "T mu1 != mu1");
        for (int v = 0; v < g.vertex_count(); ++v)
            require(parts.harmonic.at(v) <= mu.at(v), "mu1 > mu somewhere");

        const auto norms = transfer_norm_trace(g, parts.boundary, 64 * g.vertex_count());
        for (std::size_t k = 1; k < norms.size(); ++k)
            require(norms[k] <= norms[k - 1], "|T^k mu2| is not monotone");
        if (!norms.front().is_zero())
            require(norms.back() < norms.front() * Rational(1, 1 << 20),
                    "|T^(64 |V|) mu2| tail bound failed");

        const auto again = riesz_decompose(g, parts.harmonic);
        require(again.harmonic == parts.harmonic && again.boundary == VertexMeasure::zero(g),
                "riesz(mu1) != (mu1, 0)");
        const auto again2 = riesz_decompose(g, parts.boundary);
        require(again2.boundary == parts.boundary && again2.harmonic == VertexMeasure::zero(g),
                "riesz(mu2) != (0, mu2)");
    }
    const auto elapsed = std::chrono::steady_clock::now() - started;
    require(std::chrono::duration_cast<std::chrono::seconds>(elapsed).count() < 30,
            "riesz suite exceeded 30 s");
}

// --- criterion 3: oracle equivalence for the path counters ----------------

void criterion_count_oracles() {
    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        require(12 >= 2 * g.vertex_count(), "oracle horizon too small for " + name);
        for (int v = 0; v < g.vertex_count(); ++v) {
            const auto oracle = gtrace::testing::oracle_count_paths(g, v, 12);
            require(gtrace::testing::oracle_matches(oracle, count_paths_into_vertex(g, v)),
                    name + ": count_paths_into_vertex disagrees with the oracle at " +
                        g.vertex_id(v));
        }
        for (const LoopClass& c : enumerate_isolated_loop_classes(g)) {
            require(12 >= 2 * g.vertex_count() * (c.length() + 2) - 1,
                    "oracle horizon too small for loop in " + name);
            const auto oracle = gtrace::testing::oracle_count_reduced(g, c.representative(), 12);
            require(gtrace::testing::oracle_matches(oracle, count_reduced_paths(g, c)),
                    name + ": count_reduced_paths disagrees with the oracle");
        }
    }
}

// --- criterion 4: freeness double implementation ---------------------------

void criterion_freeness() {
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 500; ++i) {
        const Graph g = gtrace::testing::random_graph(rng, 8, 16);
        require(is_free(g) == is_free_direct(g),
                "freeness implementations disagree on sample " + std::to_string(i));
    }
}

// --- criterion 5: invariance oracle and perturbations ----------------------

void criterion_invariance_oracle() {
    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        std::vector<AtomicInvariantMeasure> measures = enumerate_extremal_boundary(g);
        for (auto& m : enumerate_extremal_cyclic_harmonic(g)) measures.push_back(m);
        for (const auto& nu : measures) {
            const auto atoms = expand_atoms(g, nu);
            const auto report = check_invariance_bruteforce(g, atoms, 8);
            require(report.ok(), name + ": extremal measure failed the brute-force check");
            require(report.checked > 0, name + ": no identities checked");

            if (atoms.size() < 2) {
                // A single atom is a shift fixed point; scaling it stays
                // invariant, so there is nothing to perturb.
                auto scaled = atoms;
                scaled.front().weight *= Rational(2);
                require(check_invariance_bruteforce(g, scaled, 8).ok(),
                        name + ": scaled single-atom measure should stay invariant");
                continue;
            }
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                auto perturbed = atoms;
                perturbed[i].weight *= Rational(2);
                require(!check_invariance_bruteforce(g, perturbed, 8).ok(),
                        name + ": perturbation of atom " + std::to_string(i) + " not caught");
            }
        }
    }
}

// --- criterion 6: polytope / classification bijection ----------------------

void criterion_polytope_bijection() {
    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        const auto points = enumerate_polytope_vertices(g);
        std::vector<VertexMeasure> normalized;
        for (const auto& m : enumerate_extremal_boundary(g))
            normalized.push_back(
                VertexMeasure(RVector(m.pushforward().values() / m.total_mass())));
        for (const auto& m : enumerate_extremal_cyclic_harmonic(g))
            normalized.push_back(
                VertexMeasure(RVector(m.pushforward().values() / m.total_mass())));
        require(points.size() == normalized.size(), name + ": extreme point count mismatch");
        for (const auto& p : points) {
            require(std::count(normalized.begin(), normalized.end(), p) == 1,
                    name + ": extreme point without a matching extremal measure");
            require(classify_extreme_point(g, p).kind != Classification::Kind::HarmonicOther,
                    name + ": HarmonicOther reached");
        }
    }
}

// --- criterion 7: trace functional suite -----------------------------------

Path random_path_from(const Graph& g, std::mt19937_64& rng, int source, int max_len) {
    Path p = Path::at_vertex(source);
    const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
    for (int i = 0; i < len; ++i) {
        const auto& out = g.edges_out_of(p.range(g));
        if (out.empty()) break;
        const int e = out[rng() % out.size()];
        p.edges.insert(p.edges.begin(), e);
        p.base = g.rng(e);
    }
    return p;
}

template <typename Scalar>
CylinderTerm<Scalar> random_term(const Graph& g, std::mt19937_64& rng, Scalar coeff,
                                 int max_len = 4) {
    const int s = static_cast<int>(rng() % static_cast<unsigned>(g.vertex_count()));
    return make_term(g, random_path_from(g, rng, s, max_len), random_path_from(g, rng, s, max_len),
                     coeff);
}

void criterion_trace_suite() {
    std::mt19937_64 rng(777);
    int exact_pairs = 0;
    const std::vector<RationalComplex> zetas{
        RationalComplex::one(), RationalComplex(Rational(-1)), RationalComplex::i(),
        RationalComplex(Rational(0), Rational(-1))};

    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        std::vector<AtomicInvariantMeasure> measures = enumerate_extremal_boundary(g);
        for (auto& m : enumerate_extremal_cyclic_harmonic(g)) measures.push_back(m);
        for (const auto& nu : measures) {
            for (const auto& zeta : zetas) {
                if (nu.period() == 0 && zeta != RationalComplex::one()) continue;
                const TraceFunctional<RationalComplex> psi(
                    g, nu, Character<RationalComplex>::make(nu.period(), zeta));
                for (int trial = 0; trial < 60; ++trial) {
                    const Rational re = gtrace::testing::random_rational(rng, 4, 4);
                    const Rational im = gtrace::testing::random_rational(rng, 4, 4);
                    const std::vector<CylinderTerm<RationalComplex>> f{
                        random_term<RationalComplex>(g, rng, RationalComplex(re, im))};
                    const std::vector<CylinderTerm<RationalComplex>> h{
                        random_term<RationalComplex>(g, rng, RationalComplex(im, re))};
                    require(evaluate_trace(g, psi, convolve(g, f, h)) ==
                                evaluate_trace(g, psi, convolve(g, h, f)),
                            name + ": exact trace identity failed");
                    const RationalComplex pos = evaluate_trace(g, psi, convolve(g, adjoint(f), f));
                    require(pos.im == Rational(0) && pos.re >= Rational(0),
                            name + ": exact positivity failed");
                    ++exact_pairs;
                }
            }
        }
    }

    // floating mode with a generic character value
    using C = std::complex<double>;
    int floating_pairs = 0;
    for (const auto& name : {"G1", "G4"}) {
        const Graph g = load_corpus_graph(name);
        const auto nu = enumerate_extremal_cyclic_harmonic(g).front();
        const TraceFunctional<C> psi(g, nu,
                                     Character<C>::make(nu.period(), std::polar(1.0, 1.234)));
        for (int trial = 0; trial < 250; ++trial) {
            const std::vector<CylinderTerm<C>> f{random_term<C>(g, rng, C(0.5, -0.25))};
            const std::vector<CylinderTerm<C>> h{random_term<C>(g, rng, C(-1.5, 2.0))};
            const C fg = evaluate_trace(g, psi, convolve(g, f, h));
            const C gf = evaluate_trace(g, psi, convolve(g, h, f));
            require(std::abs(fg - gf) < 1e-9, std::string(name) + ": floating trace identity");
            const C pos = evaluate_trace(g, psi, convolve(g, adjoint(f), f));
            require(pos.real() > -1e-9 && std::abs(pos.imag()) < 1e-9,
                    std::string(name) + ": floating positivity");
            ++floating_pairs;
        }
    }
    require(exact_pairs + floating_pairs >= 1000, "fewer than 1000 random term pairs exercised");

    // gauge verdict consistency on every corpus graph
    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        const Verdict verdict = gauge_invariance_verdict(g);
        bool some_noninvariant = false;
        std::vector<AtomicInvariantMeasure> measures = enumerate_extremal_boundary(g);
        for (auto& m : enumerate_extremal_cyclic_harmonic(g)) measures.push_back(m);
        for (const auto& nu : measures) {
            const TraceFunctional<RationalComplex> psi(
                g, nu, Character<RationalComplex>::trivial(nu.period()));
            if (!is_gauge_invariant_functional(g, psi, 3)) some_noninvariant = true;
        }
        require(verdict.weights_gauge_invariant == !some_noninvariant,
                name + ": verdict does not match the functional-level gauge tests");
    }

    // the degree-1 witness on the circle graph
    const Graph g1 = load_corpus_graph("G1");
    const auto nu1 = enumerate_extremal_cyclic_harmonic(g1).front();
    const TraceFunctional<RationalComplex> psi(
        g1, nu1, Character<RationalComplex>::make(1, RationalComplex(Rational(-1))));
    const std::vector<CylinderTerm<RationalComplex>> witness{
        make_term(g1, Path::single(g1, g1.edge("a")), Path::at_vertex(0), RationalComplex::one())};
    const RationalComplex base = evaluate_trace(g1, psi, witness);
    require(base == RationalComplex(Rational(-1)), "witness value is not -1");
    for (const auto& z : gauge_test_values<RationalComplex>()) {
        const RationalComplex rotated = evaluate_trace(g1, psi, gauge_rotate(witness, z));
        require(rotated == z * base, "rotated witness is not z psi(f)");
        if (z != RationalComplex::one())
            require(rotated != base, "rotation fixed the degree-1 witness");
    }
}

// --- criterion 8: free graphs carry only gauge-invariant weights -----------

void criterion_free_graph_regression() {
    for (const auto& name : kCorpus) {
        const Graph g = load_corpus_graph(name);
        if (!is_free(g)) continue;
        const Verdict verdict = gauge_invariance_verdict(g);
        require(verdict.weights_gauge_invariant,
                name + ": free graph with a non-gauge-invariant weight");
        require(verdict.states_gauge_invariant,
                name + ": free graph with a non-gauge-invariant state");
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria{
        {"1 canonical verdict table (G1..G5, exact, < 1 s)", criterion_verdict_table},
        {"2 Riesz suite on 200 random invariant measures (< 30 s)", criterion_riesz_suite},
        {"3 path counters agree with the brute-force oracle", criterion_count_oracles},
        {"4 freeness double implementation on 500 random graphs", criterion_freeness},
        {"5 invariance oracle at depth 8 and perturbation detection", criterion_invariance_oracle},
        {"6 polytope extreme points biject with extremal measures", criterion_polytope_bijection},
        {"7 trace functional suite (identity, positivity, gauge)", criterion_trace_suite},
        {"8 free graphs have gauge-invariant weights", criterion_free_graph_regression},
    };

    int failures = 0;
    for (const auto& [name, body] : criteria) {
        try {
            body();
            std::cout << "PASS  criterion " << name << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL  criterion " << name << ": " << e.what() << "\n";
        }
    }
    if (failures != 0) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
