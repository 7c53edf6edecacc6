#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include "fixtures.hpp"
#include "tw/gcn.hpp"
#include "tw/graph.hpp"

using namespace tw;

TEST_CASE("build_inputs") {
    SUBCASE("single isolated node") {
        const GcnInputs in = build_inputs(Graph::with_nodes(1));
        REQUIRE(in.a_norm.rows == 1);
        CHECK(in.a_norm.at(0, 0) == doctest::Approx(1.0));
        CHECK(in.features.at(0, 0) == 1.0);
    }
    SUBCASE("K2 normalizes every entry to one half") {
        const GcnInputs in = build_inputs(fixtures::complete_graph(2));
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(in.a_norm.at(i, j) == doctest::Approx(0.5));
            }
        }
        CHECK(in.features.at(0, 0) == 1.0);  // degree 1
    }
    SUBCASE("rows of a regular graph sum to exactly 1") {
        const GcnInputs in = build_inputs(fixtures::cycle_graph(4));
        for (int i = 0; i < 4; ++i) {
            double s = 0.0;
            for (int j = 0; j < 4; ++j) {
                s += in.a_norm.at(i, j);
            }
            CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("isolated nodes among others get feature 1") {
        Graph g = Graph::with_nodes(3);
        g.add_edge(1, 2);
        const GcnInputs in = build_inputs(g);
        CHECK(in.features.at(0, 0) == 1.0);
        CHECK(in.features.at(1, 0) == 1.0);
        CHECK(in.features.at(2, 0) == 1.0);  // isolated
        CHECK(in.a_norm.at(2, 2) == doctest::Approx(1.0));
        CHECK(in.a_norm.at(2, 0) == 0.0);
    }
    SUBCASE("features are inverse degrees") {
        const GcnInputs in = build_inputs(fixtures::star_graph(4));
        CHECK(in.features.at(0, 0) == doctest::Approx(0.25));  // center, degree 4
        CHECK(in.features.at(1, 0) == doctest::Approx(1.0));
    }
    SUBCASE("empty graph throws") {
        CHECK_THROWS_AS(build_inputs(Graph{}), std::invalid_argument);
    }
}

TEST_CASE("logits are permutation equivariant and the value is invariant") {
    const PolicyNet net = PolicyNet::init(7);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Graph g = fixtures::random_small_graph(12, seed);
        const auto [h, map_to] = fixtures::relabeled(g, seed + 5000);

        const ForwardResult a = forward(net, g);
        const ForwardResult b = forward(net, h);
        CHECK(std::abs(a.value - b.value) <= 1e-9);

        std::map<int, double> relabeled_logits;
        for (std::size_t i = 0; i < b.node_ids.size(); ++i) {
            relabeled_logits[b.node_ids[i]] = b.logits[i];
        }
        for (std::size_t i = 0; i < a.node_ids.size(); ++i) {
            const double expect = relabeled_logits.at(map_to[a.node_ids[i]]);
            CHECK(std::abs(a.logits[i] - expect) <= 1e-9);
        }
    }
}

TEST_CASE("vertex-transitive graphs produce equal logits") {
    const PolicyNet net = PolicyNet::init(3);
    const ForwardResult r = forward(net, fixtures::cycle_graph(5));
    for (double logit : r.logits) {
        CHECK(std::abs(logit - r.logits[0]) <= 1e-9);
    }
}

TEST_CASE("complete graphs get a uniform action distribution") {
    const PolicyNet net = PolicyNet::init(123);
    for (int m = 3; m <= 10; ++m) {
        const ForwardResult r = forward(net, fixtures::complete_graph(m));
        const std::vector<double> probs = softmax(r.logits);
        for (double p : probs) {
            CHECK(p == doctest::Approx(1.0 / m).epsilon(1e-9));
        }
        const double normalized = entropy_of(probs) / std::log(static_cast<double>(m));
        CHECK(std::abs(normalized - 1.0) <= 1e-6);
    }
}

TEST_CASE("a logit depends only on the 3-hop neighborhood") {
    // Path 1..9: node 1's logit must ignore changes among nodes 5..9.
    const PolicyNet net = PolicyNet::init(21);
    Graph g = fixtures::path_graph(9);
    const ForwardResult before = forward(net, g);

    Graph far = g;
    far.add_edge(6, 9);
    far.add_edge(5, 7);
    const ForwardResult after = forward(net, far);

    CHECK(std::abs(after.logits[0] - before.logits[0]) <= 1e-12);
    // ...while a node within 3 hops of the change does move.
    bool some_change = false;
    for (std::size_t i = 0; i < after.logits.size(); ++i) {
        some_change = some_change || std::abs(after.logits[i] - before.logits[i]) > 1e-9;
    }
    CHECK(some_change);
}

TEST_CASE("act") {
    const PolicyNet net = PolicyNet::init(5);
    SUBCASE("single-node graph is forced") {
        Rng rng(0);
        const ActResult a = act(net, Graph::with_nodes(1), ActMode::Sample, rng);
        CHECK(a.node == 1);
        CHECK(a.log_prob == 0.0);
        CHECK(a.entropy == 0.0);
    }
    SUBCASE("greedy ties resolve to the lowest node id") {
        Rng rng(0);
        const ActResult a = act(net, fixtures::cycle_graph(5), ActMode::Greedy, rng);
        CHECK(a.node == 1);
    }
    SUBCASE("entropy equals the distribution entropy") {
        Rng rng(0);
        const Graph g = fixtures::star_graph(3);
        const ActResult a = act(net, g, ActMode::Sample, rng);
        const ForwardResult f = forward(net, g);
        CHECK(a.entropy == doctest::Approx(entropy_of(softmax(f.logits))));
        CHECK(a.value == doctest::Approx(f.value));
    }
    SUBCASE("sample frequencies match the softmax within 3 sigma") {
        const Graph g = fixtures::star_graph(4);  // asymmetric distribution
        const ForwardResult f = forward(net, g);
        const std::vector<double> p = softmax(f.logits);
        std::map<int, int> counts;
        Rng rng(2718);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            counts[act(net, g, ActMode::Sample, rng).node]++;
        }
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double mean = draws * p[i];
            const double sigma = std::sqrt(draws * p[i] * (1.0 - p[i]));
            CHECK(std::abs(counts[f.node_ids[i]] - mean) <= 3.0 * sigma);
        }
    }
}

TEST_CASE("policy checkpoints round trip with their sidecar") {
    namespace fs = std::filesystem;
    const std::string path = (fs::temp_directory_path() / "twsolve_policy_test.ckpt").string();
    const PolicyNet net = PolicyNet::init(42);
    save_policy(path, net);
    CHECK(fs::exists(path + ".json"));

    const PolicyNet loaded = load_policy(path);
    const Graph g = fixtures::random_small_graph(10, 4);
    const ForwardResult a = forward(net, g);
    const ForwardResult b = forward(loaded, g);
    CHECK(a.value == b.value);
    for (std::size_t i = 0; i < a.logits.size(); ++i) {
        CHECK(a.logits[i] == b.logits[i]);
    }
    fs::remove(path);
    fs::remove(path + ".json");
}

TEST_CASE("net initialization is seeded and finite") {
    const PolicyNet a = PolicyNet::init(10);
    const PolicyNet b = PolicyNet::init(10);
    const PolicyNet c = PolicyNet::init(11);
    REQUIRE(a.params.size() == b.params.size());
    bool all_equal = true, any_diff_seed = false;
    for (std::size_t i = 0; i < a.params.size(); ++i) {
        for (int k = 0; k < a.params[i].second->value.size(); ++k) {
            const double va = a.params[i].second->value.a[k];
            CHECK(std::isfinite(va));
            all_equal = all_equal && va == b.params[i].second->value.a[k];
            any_diff_seed = any_diff_seed || va != c.params[i].second->value.a[k];
        }
    }
    CHECK(all_equal);
    CHECK(any_diff_seed);
}
