#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <algorithm>
#include <cstdint>
#include <vector>

#include "qsemis/errors.hpp"
#include "qsemis/graph.hpp"
#include "qsemis/hamiltonian.hpp"

using namespace qsemis;

TEST_CASE("cost_diagonal on hand-evaluated instances") {
    SUBCASE("single edge") {
        const DiagonalOperator d = cost_diagonal(parse_graph("2\n0 1\n"));
        REQUIRE(d.values.size() == 4);
        CHECK(d.values[0b00] == 0.0);
        CHECK(d.values[0b01] == -1.0);
        CHECK(d.values[0b10] == -1.0);
        CHECK(d.values[0b11] == -1.0);  // -2 vertices + 1 violated edge
    }
    SUBCASE("triangle all-ones cancels exactly") {
        const DiagonalOperator d = cost_diagonal(parse_graph("3\n0 1\n1 2\n0 2\n"));
        CHECK(d.values[0b111] == 0.0);
        CHECK(d.values[0b011] == -1.0);
    }
    SUBCASE("edgeless counts vertices") {
        const DiagonalOperator d = cost_diagonal(parse_graph("3\n"));
        CHECK(d.values[0b111] == -3.0);
        CHECK(d.values[0b101] == -2.0);
    }
}

TEST_CASE("cost_diagonal respects the dense bound") {
    Graph g;
    g.n = 25;
    CHECK_THROWS_AS(cost_diagonal(g), InfeasibleError);
}

TEST_CASE("pauli_terms on hand-evaluated instances") {
    SUBCASE("single edge") {
        const PauliDecomposition p = pauli_terms(parse_graph("2\n0 1\n"));
        CHECK(p.constant == -0.75);
        REQUIRE(p.z.size() == 2);
        CHECK(p.z[0] == 0.25);
        CHECK(p.z[1] == 0.25);
        REQUIRE(p.zz.size() == 1);
        CHECK(p.zz[0] == 0.25);
        CHECK(p.term_count() == 3);
        CHECK(p.one_norm() == 0.75);
    }
    SUBCASE("edgeless pair") {
        const PauliDecomposition p = pauli_terms(parse_graph("2\n"));
        CHECK(p.constant == -1.0);
        CHECK(p.z[0] == 0.5);
        CHECK(p.z[1] == 0.5);
        CHECK(p.zz.empty());
    }
    SUBCASE("complete graph term count is n(n+1)/2") {
        for (int n = 2; n <= 6; ++n) {
            const PauliDecomposition p = pauli_terms(generate_er(n, 1.0, 0));
            CHECK(p.term_count() == n * (n + 1) / 2);
        }
    }
}

TEST_CASE("pauli reconstruction is bit-exact") {
    // All coefficients are quarter-integers, so double arithmetic is exact
    // and the two routes must agree with == comparison.
    for (int s = 0; s < 20; ++s) {
        const int n = 2 + s % 11;
        const Graph g = generate_er(n, 0.5, 7000 + s);
        const DiagonalOperator d = cost_diagonal(g);
        const PauliDecomposition p = pauli_terms(g);
        for (std::uint64_t x = 0; x < d.values.size(); ++x) {
            REQUIRE(pauli_value(p, x) == d.values[x]);
        }
    }
}

TEST_CASE("spectrum bounds and zero entry") {
    for (int s = 0; s < 10; ++s) {
        const Graph g = generate_er(8, 0.4, 900 + s);
        const DiagonalOperator d = cost_diagonal(g);
        CHECK(d.values[0] == 0.0);
        for (double v : d.values) {
            CHECK(v >= -g.n);
            CHECK(v <= g.edge_count());
        }
    }
}

TEST_CASE("ground_manifold on named fixtures") {
    SUBCASE("cube graph: doubly degenerate minimum") {
        const GroundManifold gm = ground_manifold(cost_diagonal(load_graph_file(FIXTURE_DIR "/g3.edges")));
        CHECK(gm.emin == -4.0);
        REQUIRE(gm.indices.size() == 2);
        CHECK(gm.indices[0] == 0b01011010ULL);
        CHECK(gm.indices[1] == 0b10100101ULL);
    }
    SUBCASE("k33p graph: unique minimum") {
        const GroundManifold gm = ground_manifold(cost_diagonal(load_graph_file(FIXTURE_DIR "/k33p.edges")));
        CHECK(gm.emin == -3.0);
        REQUIRE(gm.indices.size() == 1);
        CHECK(gm.indices[0] == 0b0001110ULL);
    }
    SUBCASE("edgeless graph: all-ones") {
        const GroundManifold gm = ground_manifold(cost_diagonal(parse_graph("3\n")));
        CHECK(gm.emin == -3.0);
        REQUIRE(gm.indices.size() == 1);
        CHECK(gm.indices[0] == 0b111ULL);
    }
}

TEST_CASE("ground level matches the exhaustive oracle") {
    // The minimum always equals -(MIS size) and every MIS lies in the
    // manifold.  The manifold may also contain *non-independent* ties: adding
    // to an MIS a vertex with exactly one neighbour inside costs -1 + 1 = 0.
    // Restricted to maximum-cardinality entries the two sets must coincide.
    for (int s = 0; s < 12; ++s) {
        const int n = 2 + s;
        const Graph g = generate_er(n, 0.5, 4200 + s);
        const MisResult mis = brute_force_mis(g);
        const GroundManifold gm = ground_manifold(cost_diagonal(g));
        CHECK(gm.emin == -static_cast<double>(mis.size));
        std::vector<std::uint64_t> top_cardinality;
        for (std::uint64_t x : gm.indices) {
            CHECK(std::popcount(x) <= mis.size + static_cast<int>(g.edges.size()));
            if (std::popcount(x) == mis.size) top_cardinality.push_back(x);
        }
        CHECK(top_cardinality == mis.solutions);
        for (std::uint64_t x : mis.solutions) {
            CHECK(std::find(gm.indices.begin(), gm.indices.end(), x) != gm.indices.end());
        }
    }
}

TEST_CASE("single edge ground manifold includes the energy-neutral tie") {
    const GroundManifold gm = ground_manifold(cost_diagonal(parse_graph("2\n0 1\n")));
    CHECK(gm.emin == -1.0);
    // Spectrum {0, -1, -1, -1}: both singletons and the violating pair tie.
    REQUIRE(gm.indices.size() == 3);
    CHECK(gm.indices[0] == 0b01ULL);
    CHECK(gm.indices[1] == 0b10ULL);
    CHECK(gm.indices[2] == 0b11ULL);
}
