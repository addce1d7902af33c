#include <doctest.h>

#include <random>

#include "gtrace/graph.hpp"
#include "gtrace/io.hpp"
#include "oracles.hpp"

using namespace gtrace;
using gtrace::testing::load_corpus_graph;

TEST_CASE("parse_graph on the corpus documents") {
    const Graph g1 = load_corpus_graph("G1");
    CHECK(g1.vertex_count() == 1);
    CHECK(g1.edge_count() == 1);

    const Graph g3 = load_corpus_graph("G3");
    CHECK(g3.vertex_count() == 2);
    CHECK(g3.edge_count() == 1);
    CHECK(g3.src(g3.edge("e")) == g3.vertex("v"));
    CHECK(g3.rng(g3.edge("e")) == g3.vertex("u"));
}

TEST_CASE("parse_graph rejects bad documents") {
    CHECK_THROWS_AS(parse_graph("{"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": ["v"]})"), ParseError);
    // edge referencing an undeclared vertex
    CHECK_THROWS_AS(
        parse_graph(R"({"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"w"}]})"),
        ValidationError);
    CHECK_THROWS_AS(
        parse_graph(
            R"({"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"v"},{"id":"e","src":"v","rng":"v"}]})"),
        ValidationError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices":["v","v"],"edges":[]})"), ValidationError);
}

TEST_CASE("regular and singular vertices") {
    const Graph g3 = load_corpus_graph("G3");
    CHECK(regular_vertices(g3) == std::set<int>{g3.vertex("u")});
    CHECK(singular_vertices(g3) == std::set<int>{g3.vertex("v")});

    const Graph g1 = load_corpus_graph("G1");
    CHECK(regular_vertices(g1) == std::set<int>{g1.vertex("v")});
    CHECK(singular_vertices(g1).empty());

    const Graph lone = Graph::make({"w"}, {});
    CHECK(regular_vertices(lone).empty());
    CHECK(singular_vertices(lone) == std::set<int>{lone.vertex("w")});
}

TEST_CASE("compose") {
    const Graph g4 = load_corpus_graph("G4");
    const Path f = Path::single(g4, g4.edge("f"));
    const Path a = Path::single(g4, g4.edge("a"));

    const Path fa = compose(g4, f, a);
    CHECK(fa.length() == 2);
    CHECK(fa.edge_id_list(g4) == std::vector<EdgeId>{"f", "a"});
    CHECK(fa.range(g4) == g4.vertex("u"));
    CHECK(fa.source(g4) == g4.vertex("v"));

    const Path at_v = Path::at_vertex(g4.vertex("v"));
    CHECK(compose(g4, at_v, a) == a);
    CHECK(compose(g4, a, at_v) == a);

    const Graph g3 = load_corpus_graph("G3");
    const Path e = Path::single(g3, g3.edge("e"));
    CHECK_THROWS_AS(compose(g3, e, e), CompositionError);
}

TEST_CASE("compose is associative where defined") {
    const Graph g5 = load_corpus_graph("G5");
    const Path f = Path::single(g5, g5.edge("f"));
    const Path a = Path::single(g5, g5.edge("a"));
    const Path g1e = Path::single(g5, g5.edge("g1"));
    // g1 f a: r(g1)=u, junctions u<-f, v<-a
    CHECK(compose(g5, compose(g5, g1e, f), a) == compose(g5, g1e, compose(g5, f, a)));
}

TEST_CASE("serialize / parse round trip") {
    for (const char* name : {"G1", "G2", "G3", "G4", "G5"}) {
        const Graph g = load_corpus_graph(name);
        CHECK(parse_graph(serialize_graph(g)) == g);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        CHECK(parse_graph(serialize_graph(g)) == g);
    }
}

TEST_CASE("regular/singular partition on random graphs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Graph g = gtrace::testing::random_graph(rng);
        const auto reg = regular_vertices(g);
        const auto sng = singular_vertices(g);
        CHECK(static_cast<int>(reg.size() + sng.size()) == g.vertex_count());
        for (int v : reg) CHECK(sng.count(v) == 0);
    }
}

TEST_CASE("loop classes identify rotations") {
    const Graph two = Graph::make({"u", "v"}, {{"p", "v", "u"}, {"q", "u", "v"}});
    // loop based at v: q then p in path order (range v)
    const Path qp = path_from_edge_ids(two, {"q", "p"});
    const Path pq = path_from_edge_ids(two, {"p", "q"});
    CHECK(LoopClass(two, qp) == LoopClass(two, pq));
    CHECK(LoopClass(two, qp).primitive());
    // canonical representative is based at the lexicographically least vertex
    CHECK(LoopClass(two, qp).representative().range(two) == two.vertex("u"));

    const Graph g1 = load_corpus_graph("G1");
    const Path a = Path::single(g1, g1.edge("a"));
    const Path aa = compose(g1, a, a);
    CHECK(LoopClass(g1, a).primitive());
    CHECK_FALSE(LoopClass(g1, aa).primitive());
    CHECK(LoopClass(g1, a) != LoopClass(g1, aa));
}

TEST_CASE("path invariants") {
    const Graph g4 = load_corpus_graph("G4");
    CHECK_THROWS_AS(path_from_edge_ids(g4, {"a", "f"}), CompositionError);  // s(a)=v != r(f)=u
    const Path fa = path_from_edge_ids(g4, {"f", "a"});
    CHECK(fa.is_loop(g4) == false);
    const Path a = path_from_edge_ids(g4, {"a"});
    CHECK(a.is_loop(g4));
}
