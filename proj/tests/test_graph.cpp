#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "tw/elimination.hpp"
#include "tw/gr_io.hpp"
#include "tw/graph.hpp"

using namespace tw;

TEST_CASE("generate_er basic shapes") {
    SUBCASE("single node has no edges") {
        Graph g = generate_er({1, 1.0, 0});
        CHECK(g.node_count() == 1);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("p=1 gives the complete graph") {
        Graph g = generate_er({5, 1.0, 7});
        CHECK(g.node_count() == 5);
        CHECK(g.edge_count() == 10);
    }
    SUBCASE("p=0 gives no edges") {
        Graph g = generate_er({8, 0.0, 3});
        CHECK(g.edge_count() == 0);
    }
}

TEST_CASE("generate_er edge count is near the binomial mean") {
    // binomial(4950, 0.05): mean 247.5, sigma ~15.3; bounds are mean +- 4 sigma
    Graph g = generate_er({100, 0.05, 42});
    CHECK(g.edge_count() >= 150);
    CHECK(g.edge_count() <= 345);
}

TEST_CASE("generate_er is deterministic per seed") {
    Graph a = generate_er({50, -1.0, 123});
    Graph b = generate_er({50, -1.0, 123});
    Graph c = generate_er({50, -1.0, 124});
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("er default probability is 5/n") {
    ErConfig cfg{50, -1.0, 0};
    CHECK(cfg.resolved_probability() == doctest::Approx(0.1));
    ErConfig tiny{4, -1.0, 0};
    CHECK(tiny.resolved_probability() == 1.0);
}

TEST_CASE("generate_er rejects bad configs") {
    CHECK_THROWS_AS(generate_er({0, 0.5, 0}), std::invalid_argument);
    CHECK_THROWS_AS(generate_er({5, 1.5, 0}), std::invalid_argument);
}

TEST_CASE("eliminate_node") {
    SUBCASE("star center leaves a triangle") {
        Graph g = fixtures::star_graph(3);
        Graph h = eliminate_node(g, 1);
        CHECK(h.node_count() == 3);
        CHECK(h.edge_count() == 3);
        CHECK(h.has_edge(2, 3));
        CHECK(h.has_edge(2, 4));
        CHECK(h.has_edge(3, 4));
        CHECK(g.node_count() == 4);  // input untouched
    }
    SUBCASE("path leaf adds no fill") {
        Graph g = fixtures::path_graph(4);
        Graph h = eliminate_node(g, 1);
        CHECK(h.node_count() == 3);
        CHECK(h.edge_count() == 2);
    }
    SUBCASE("widest step of the suboptimal tree ordering forms a 3-clique") {
        Graph g = fixtures::seven_node_tree();
        int max_clique = 0;
        for (int u : fixtures::tree_order_width2().order) {
            const std::set<int> nbrs = g.neighbors(u);
            g.eliminate_in_place(u);
            CHECK(g.is_clique(nbrs));
            max_clique = std::max(max_clique, static_cast<int>(nbrs.size()) + 1);
        }
        CHECK(max_clique == 3);
    }
    SUBCASE("absent node throws") {
        Graph g = fixtures::path_graph(3);
        CHECK_THROWS_AS(eliminate_node(g, 9), std::invalid_argument);
    }
}

TEST_CASE("elimination leaves former neighborhood a clique") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = generate_er({12, 0.3, seed});
        Rng rng(seed);
        const int u = 1 + static_cast<int>(rng.below(12));
        const std::set<int> nbrs = g.neighbors(u);
        g.eliminate_in_place(u);
        CHECK(g.is_clique(nbrs));
        CHECK_FALSE(g.has_node(u));
    }
}

TEST_CASE("node ids stay stable across elimination") {
    Graph g = fixtures::path_graph(5);
    g.eliminate_in_place(3);
    CHECK(g.nodes() == std::vector<int>{1, 2, 4, 5});
    CHECK(g.has_edge(2, 4));
}

TEST_CASE("parse_gr") {
    SUBCASE("path on 3 nodes") {
        Graph g = parse_gr("p tw 3 2\n1 2\n2 3\n");
        CHECK(g.node_count() == 3);
        CHECK(g.edge_count() == 2);
        CHECK(g.has_edge(1, 2));
        CHECK(g.has_edge(2, 3));
        CHECK_FALSE(g.has_edge(1, 3));
    }
    SUBCASE("comments are skipped") {
        Graph g = parse_gr("c comment\np tw 2 1\n1 2\n");
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("duplicate edges and self-loops are dropped") {
        Graph g = parse_gr("p tw 3 4\n1 2\n2 1\n3 3\n1 2\n");
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("no trailing newline required") {
        Graph g = parse_gr("p tw 2 1\n1 2");
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("endpoint out of range") {
        CHECK_THROWS_WITH_AS(parse_gr("p tw 2 1\n1 3\n"), doctest::Contains("out of range"),
                             ParseError);
    }
    SUBCASE("errors carry line numbers") {
        try {
            parse_gr("c ok\np tw 2 1\n1 junk\n");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 3);
        }
    }
    SUBCASE("missing header") {
        CHECK_THROWS_AS(parse_gr("1 2\n"), ParseError);
        CHECK_THROWS_AS(parse_gr(""), ParseError);
    }
    SUBCASE("malformed header") {
        CHECK_THROWS_AS(parse_gr("p cnf 3 2\n"), ParseError);
        CHECK_THROWS_AS(parse_gr("p tw -1 0\n"), ParseError);
    }
    SUBCASE("duplicate header") {
        CHECK_THROWS_AS(parse_gr("p tw 2 0\np tw 2 0\n"), ParseError);
    }
}

TEST_CASE("write_gr") {
    SUBCASE("triangle") {
        const std::string text = write_gr(fixtures::complete_graph(3));
        CHECK(text == "p tw 3 3\n1 2\n1 3\n2 3\n");
    }
    SUBCASE("edgeless graph") {
        CHECK(write_gr(Graph::with_nodes(4)) == "p tw 4 0\n");
    }
}

TEST_CASE("gr round trip preserves the edge set") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Graph g = generate_er({1 + static_cast<int>(seed % 40), 0.2, seed});
        Graph back = parse_gr(write_gr(g));
        CHECK(back == g);
    }
}
