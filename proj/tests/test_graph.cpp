#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qsemis/errors.hpp"
#include "qsemis/graph.hpp"

using namespace qsemis;

namespace {

// Independent reference for the maximum-independent-set size: textbook
// branching recursion max(alpha(G - v), 1 + alpha(G - N[v])), organized over
// bitmasks.  Deliberately a different algorithm from the exhaustive scan.
int alpha_recursive(const std::vector<std::uint64_t>& adj, std::uint64_t avail) {
    if (avail == 0) return 0;
    const int v = std::countr_zero(avail);
    const std::uint64_t without = avail & ~(1ULL << v);
    const int skip = alpha_recursive(adj, without);
    const int take = 1 + alpha_recursive(adj, without & ~adj[v]);
    return std::max(skip, take);
}

int alpha_recursive(const Graph& g) {
    std::vector<std::uint64_t> adj(g.n, 0);
    for (const auto& [i, j] : g.edges) {
        adj[i] |= 1ULL << j;
        adj[j] |= 1ULL << i;
    }
    return alpha_recursive(adj, (1ULL << g.n) - 1);
}

}  // namespace

TEST_CASE("parse_graph handles comments, blanks, and canonical ordering") {
    const Graph g = parse_graph("# header comment\n\n3\n2 0\n0 1 # trailing comment\n");
    CHECK(g.n == 3);
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == std::pair<int, int>{0, 1});
    CHECK(g.edges[1] == std::pair<int, int>{0, 2});
}

TEST_CASE("parse_graph accepts an edgeless graph") {
    const Graph g = parse_graph("2\n");
    CHECK(g.n == 2);
    CHECK(g.edges.empty());
}

TEST_CASE("parse_graph rejects malformed input with line context") {
    CHECK_THROWS_WITH_AS(parse_graph("2\n0 2\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_graph("3\n1 1\n"), doctest::Contains("self-loop"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_graph("3\n0 1\n1 0\n"), doctest::Contains("duplicate"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_graph("3\n0\n"), doctest::Contains("two endpoints"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_graph("3\n0 1 2\n"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_graph("# only comments\n"), ConfigError);
    CHECK_THROWS_AS(parse_graph("0\n"), ConfigError);
}

TEST_CASE("serialize_graph round-trips and drives a stable hash") {
    const Graph g = parse_graph("4\n2 3\n0 1\n");
    const Graph h = parse_graph(serialize_graph(g));
    CHECK(g.n == h.n);
    CHECK(g.edges == h.edges);
    // Same graph presented in a different edge order hashes identically.
    const Graph g2 = parse_graph("4\n0 1\n3 2\n");
    CHECK(graph_hash(g) == graph_hash(g2));
    CHECK(graph_hash(g).size() == 16);
    const Graph other = parse_graph("4\n0 1\n");
    CHECK(graph_hash(g) != graph_hash(other));
}

TEST_CASE("generate_er covers the density extremes") {
    const Graph empty = generate_er(5, 0.0, 7);
    CHECK(empty.edges.empty());
    const Graph full = generate_er(5, 1.0, 7);
    CHECK(full.edge_count() == 10);
    CHECK(full.density() == doctest::Approx(1.0));
}

TEST_CASE("generate_er is deterministic in the seed") {
    const Graph a = generate_er(10, 0.5, 42);
    const Graph b = generate_er(10, 0.5, 42);
    CHECK(a.edges == b.edges);
    const Graph c = generate_er(10, 0.5, 43);
    CHECK(a.edges != c.edges);
}

TEST_CASE("generate_er empirical density matches the target") {
    double total = 0.0;
    const int trials = 500;
    for (int s = 0; s < trials; ++s) total += generate_er(10, 0.5, 1000 + s).density();
    CHECK(total / trials == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("is_independent on hand-checked subsets") {
    const Graph triangle = parse_graph("3\n0 1\n1 2\n0 2\n");
    CHECK(is_independent(triangle, 0b000));
    CHECK(is_independent(triangle, 0b100));
    CHECK_FALSE(is_independent(triangle, 0b011));
    const Graph path = parse_graph("3\n0 1\n1 2\n");
    CHECK(is_independent(path, 0b101));
    CHECK_FALSE(is_independent(path, 0b110));
    CHECK_THROWS_AS(is_independent(path, 0b1000), ConfigError);
}

TEST_CASE("brute_force_mis on named fixtures") {
    SUBCASE("cube graph: two complementary optima") {
        const Graph g = load_graph_file(FIXTURE_DIR "/g3.edges");
        CHECK(g.n == 8);
        CHECK(g.edge_count() == 12);
        const MisResult mis = brute_force_mis(g);
        CHECK(mis.size == 4);
        REQUIRE(mis.count() == 2);
        CHECK(mis.solutions[0] == 0b01011010ULL);  // vertices {1,3,4,6}
        CHECK(mis.solutions[1] == 0b10100101ULL);  // vertices {0,2,5,7}
    }
    SUBCASE("k33p graph: unique optimum") {
        const Graph g = load_graph_file(FIXTURE_DIR "/k33p.edges");
        CHECK(g.n == 7);
        CHECK(g.edge_count() == 14);
        const MisResult mis = brute_force_mis(g);
        CHECK(mis.size == 3);
        REQUIRE(mis.count() == 1);
        CHECK(mis.solutions[0] == 0b0001110ULL);  // vertices {1,2,3}
    }
    SUBCASE("complete graph K5: five singletons") {
        const MisResult mis = brute_force_mis(generate_er(5, 1.0, 0));
        CHECK(mis.size == 1);
        CHECK(mis.count() == 5);
    }
    SUBCASE("edgeless graph: the full vertex set") {
        const MisResult mis = brute_force_mis(parse_graph("3\n"));
        CHECK(mis.size == 3);
        REQUIRE(mis.count() == 1);
        CHECK(mis.solutions[0] == 0b111ULL);
    }
}

TEST_CASE("brute_force_mis rejects oversized graphs") {
    Graph g;
    g.n = 25;
    CHECK_THROWS_AS(brute_force_mis(g), InfeasibleError);
    CHECK_NOTHROW(brute_force_mis(generate_er(4, 0.5, 1), 4));
    CHECK_THROWS_AS(brute_force_mis(generate_er(5, 0.5, 1), 4), InfeasibleError);
}

TEST_CASE("brute_force_mis agrees with an independent branching recursion") {
    for (int n = 2; n <= 12; n += 2) {
        for (int s = 0; s < 8; ++s) {
            const Graph g = generate_er(n, 0.5, 100 * n + s);
            const MisResult mis = brute_force_mis(g);
            CHECK(mis.size == alpha_recursive(g));
            CHECK(mis.count() >= 1);
            for (std::uint64_t x : mis.solutions) {
                CHECK(is_independent(g, x));
                CHECK(std::popcount(x) == mis.size);
            }
            CHECK(std::is_sorted(mis.solutions.begin(), mis.solutions.end()));
        }
    }
}
