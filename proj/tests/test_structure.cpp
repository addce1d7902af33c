#include <doctest.h>

#include <random>

#include "gtrace/structure.hpp"
#include "oracles.hpp"

using namespace gtrace;
using gtrace::testing::load_corpus_graph;

namespace {

CountOrInfinite fin(long n) { return CountOrInfinite::of(Natural(n)); }

}  // namespace

TEST_CASE("strongly connected components") {
    const Graph g4 = load_corpus_graph("G4");
    CHECK(scc(g4) == std::vector<std::vector<int>>{{g4.vertex("u")}, {g4.vertex("v")}});
    const Graph g5 = load_corpus_graph("G5");
    CHECK(scc(g5).size() == 2);
    const Graph g1 = load_corpus_graph("G1");
    CHECK(scc(g1) == std::vector<std::vector<int>>{{0}});

    const Graph two = Graph::make({"u", "v"}, {{"p", "v", "u"}, {"q", "u", "v"}});
    CHECK(scc(two).size() == 1);
}

TEST_CASE("isolated loop classes") {
    const Graph g1 = load_corpus_graph("G1");
    const auto c1 = enumerate_isolated_loop_classes(g1);
    REQUIRE(c1.size() == 1);
    CHECK(c1.front().representative().edge_id_list(g1) == std::vector<EdgeId>{"a"});

    CHECK(enumerate_isolated_loop_classes(load_corpus_graph("G2")).empty());

    const Graph g5 = load_corpus_graph("G5");
    const auto c5 = enumerate_isolated_loop_classes(g5);
    REQUIRE(c5.size() == 1);  // the two-loop component of u is not a simple cycle
    CHECK(c5.front().representative().edge_id_list(g5) == std::vector<EdgeId>{"a"});
}

TEST_CASE("count_paths_into_vertex") {
    const Graph g3 = load_corpus_graph("G3");
    const auto counts3 = count_paths_into_vertex(g3, VertexId("v"));
    CHECK(counts3.at("v") == fin(1));
    CHECK(counts3.at("u") == fin(1));

    const Graph g1 = load_corpus_graph("G1");
    CHECK(count_paths_into_vertex(g1, VertexId("v")).at("v") == CountOrInfinite::infinite());

    const Graph lone = Graph::make({"w"}, {});
    CHECK(count_paths_into_vertex(lone, VertexId("w")).at("w") == fin(1));
}

TEST_CASE("count_reduced_paths") {
    const Graph g4 = load_corpus_graph("G4");
    const LoopClass a4(g4, Path::single(g4, g4.edge("a")));
    const auto counts4 = count_reduced_paths(g4, a4);
    CHECK(counts4.at("v") == fin(1));
    CHECK(counts4.at("u") == fin(1));
    CHECK(total_count(counts4) == fin(2));

    const Graph g1 = load_corpus_graph("G1");
    const LoopClass a1(g1, Path::single(g1, g1.edge("a")));
    CHECK(count_reduced_paths(g1, a1).at("v") == fin(1));
    CHECK(total_count(count_reduced_paths(g1, a1)) == fin(1));

    const Graph g5 = load_corpus_graph("G5");
    const LoopClass a5(g5, Path::single(g5, g5.edge("a")));
    const auto counts5 = count_reduced_paths(g5, a5);
    CHECK(counts5.at("v") == fin(1));
    CHECK(counts5.at("u") == CountOrInfinite::infinite());

    CHECK_THROWS_AS(count_reduced_paths(g5, Path::at_vertex(0)), NotALoop);
}

TEST_CASE("is_summable") {
    const Graph g4 = load_corpus_graph("G4");
    CHECK(is_summable(g4, LoopClass(g4, Path::single(g4, g4.edge("a")))));
    const Graph g5 = load_corpus_graph("G5");
    CHECK_FALSE(is_summable(g5, LoopClass(g5, Path::single(g5, g5.edge("a")))));
    const Graph g2 = load_corpus_graph("G2");
    CHECK_FALSE(is_summable(g2, LoopClass(g2, Path::single(g2, g2.edge("b1")))));
}

TEST_CASE("freeness, both implementations, on the corpus") {
    CHECK(is_free(load_corpus_graph("G2")));
    CHECK_FALSE(is_free(load_corpus_graph("G1")));
    CHECK(is_free(load_corpus_graph("G3")));

    CHECK_FALSE(is_free_direct(load_corpus_graph("G1")));
    CHECK_FALSE(is_free_direct(load_corpus_graph("G5")));
    CHECK(is_free_direct(load_corpus_graph("G2")));

    for (const char* name : {"G1", "G2", "G3", "G4", "G5"}) {
        const Graph g = load_corpus_graph(name);
        CHECK(is_free(g) == is_free_direct(g));
    }
}

TEST_CASE("freeness agreement on random multigraphs") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 200; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        CHECK(is_free(g) == is_free_direct(g));
    }
}

TEST_CASE("gauge invariance verdicts") {
    const Graph g4 = load_corpus_graph("G4");
    const Verdict v4 = gauge_invariance_verdict(g4);
    CHECK_FALSE(v4.free);
    CHECK_FALSE(v4.states_gauge_invariant);
    CHECK_FALSE(v4.weights_gauge_invariant);
    REQUIRE(v4.witnesses.size() == 1);
    CHECK(v4.witnesses.front().representative().edge_id_list(g4) == std::vector<EdgeId>{"a"});

    const Verdict v5 = gauge_invariance_verdict(load_corpus_graph("G5"));
    CHECK_FALSE(v5.free);
    CHECK(v5.states_gauge_invariant);
    CHECK(v5.weights_gauge_invariant);
    CHECK(v5.witnesses.empty());

    const Verdict v3 = gauge_invariance_verdict(load_corpus_graph("G3"));
    CHECK(v3.free);
    CHECK(v3.states_gauge_invariant);
    CHECK(v3.weights_gauge_invariant);
}

TEST_CASE("verdict invariant on random graphs: free implies gauge-invariant weights") {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 100; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        const Verdict v = gauge_invariance_verdict(g);
        if (v.free) CHECK(v.weights_gauge_invariant);
        CHECK(v.states_gauge_invariant == v.weights_gauge_invariant);
    }
}

TEST_CASE("summable implies isolated implies simple and primitive") {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 100; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        for (const LoopClass& c : enumerate_isolated_loop_classes(g)) {
            CHECK(c.primitive());
            // simple: the ranges along the loop are pairwise distinct
            std::set<int> ranges;
            const Path& rep = c.representative();
            for (int e : rep.edges) ranges.insert(g.rng(e));
            CHECK(static_cast<int>(ranges.size()) == rep.length());
            CHECK(is_isolated(g, c));
        }
        for (const LoopClass& c : enumerate_summable_loop_classes(g)) CHECK(is_isolated(g, c));
    }
}

TEST_CASE("reduced-path counts are rotation invariants") {
    const Graph two = Graph::make({"u", "v"}, {{"p", "v", "u"}, {"q", "u", "v"}});
    const Path qp = path_from_edge_ids(two, {"q", "p"});
    const Path pq = path_from_edge_ids(two, {"p", "q"});
    const auto counts_qp = count_reduced_paths(two, qp);
    const auto counts_pq = count_reduced_paths(two, pq);
    CHECK(total_count(counts_qp) == total_count(counts_pq));
    CHECK(counts_qp.at("u") == counts_pq.at("u"));
    CHECK(counts_qp.at("v") == counts_pq.at("v"));

    // whisker on the two-cycle: rotations still agree
    const Graph whisk = Graph::make(
        {"u", "v", "w"}, {{"p", "v", "u"}, {"q", "u", "v"}, {"h", "v", "w"}});
    const Path qp2 = path_from_edge_ids(whisk, {"q", "p"});
    const Path pq2 = path_from_edge_ids(whisk, {"p", "q"});
    CHECK(total_count(count_reduced_paths(whisk, qp2)) ==
          total_count(count_reduced_paths(whisk, pq2)));
}

TEST_CASE("count operations agree with the explicit oracle on the corpus") {
    for (const char* name : {"G1", "G2", "G3", "G4", "G5"}) {
        const Graph g = load_corpus_graph(name);
        REQUIRE(12 >= 2 * g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v) {
            const auto oracle = gtrace::testing::oracle_count_paths(g, v, 12);
            CHECK(gtrace::testing::oracle_matches(oracle, count_paths_into_vertex(g, v)));
        }
        for (const LoopClass& c : enumerate_isolated_loop_classes(g)) {
            REQUIRE(12 >= 2 * g.vertex_count() * (c.length() + 2) - 1);
            const auto oracle = gtrace::testing::oracle_count_reduced(g, c.representative(), 12);
            CHECK(gtrace::testing::oracle_matches(oracle, count_reduced_paths(g, c)));
        }
    }
}

namespace {

// Second, stratified route: walks of length L from a fixed vertex, per
// endpoint, via repeated multiplication with the src->rng step matrix
// over big integers. Independent of the reachability analysis.
std::vector<std::vector<Natural>> walk_counts_by_length(const Graph& g, int from, int max_len) {
    const int n = g.vertex_count();
    std::vector<Natural> cur(n, 0);
    cur[from] = 1;
    std::vector<std::vector<Natural>> by_length{cur};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Natural> next(n, 0);
        for (int e = 0; e < g.edge_count(); ++e) next[g.rng(e)] += cur[g.src(e)];
        by_length.push_back(next);
        cur = std::move(next);
    }
    return by_length;
}

}  // namespace

TEST_CASE("count_paths_into_vertex agrees with stratified walk counts on random graphs") {
    std::mt19937_64 rng(909);
    for (int i = 0; i < 120; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        const int n = g.vertex_count();
        for (int v = 0; v < n; ++v) {
            const auto counts = count_paths_into_vertex(g, v);
            const auto walks = walk_counts_by_length(g, v, 2 * n - 1);
            for (int w = 0; w < n; ++w) {
                bool long_walk = false;
                Natural total = 0;
                for (int len = 0; len <= 2 * n - 1; ++len) {
                    if (walks[len][w] == 0) continue;
                    if (len >= n)
                        long_walk = true;
                    else
                        total += walks[len][w];
                }
                const auto& got = counts.at(g.vertex_id(w));
                CHECK(got.finite == !long_walk);
                if (got.finite) CHECK(got.count == total);
            }
        }
    }
}

TEST_CASE("count_reduced_paths agrees with stratified walk counts on random graphs") {
    // Stripping one loop copy off a path that ends with the loop is a
    // bijection onto the paths shorter by the loop length, so the number
    // of reduced paths of length L ending at w is W_w(L) - W_w(L - k).
    std::mt19937_64 rng(910);
    int loops_checked = 0;
    for (int i = 0; i < 200 && loops_checked < 60; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        for (const LoopClass& c : enumerate_isolated_loop_classes(g)) {
            ++loops_checked;
            const int n = g.vertex_count();
            const int k = c.length();
            const int bound = n * (k + 2);
            const auto walks = walk_counts_by_length(g, c.base(g), 2 * bound - 1);
            const auto counts = count_reduced_paths(g, c);
            for (int w = 0; w < n; ++w) {
                bool long_reduced = false;
                Natural total = 0;
                for (int len = 0; len <= 2 * bound - 1; ++len) {
                    Natural reduced = walks[len][w];
                    if (len >= k) reduced -= walks[len - k][w];
                    if (reduced == 0) continue;
                    if (len >= bound)
                        long_reduced = true;
                    else
                        total += reduced;
                }
                const auto& got = counts.at(g.vertex_id(w));
                CHECK(got.finite == !long_reduced);
                if (got.finite) CHECK(got.count == total);
            }
        }
    }
    CHECK(loops_checked >= 60);
}
