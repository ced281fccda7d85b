#include "generators.hpp"

#include "polyton/errors.hpp"
#include "polyton/structure.hpp"

#include <doctest.h>

using namespace polyton;
using namespace polyton::testing;

namespace {

// Plain enumeration of every map [v] -> [k] in mpq; no pruning, no scaling.
Rational brute_density(const FiniteGraph& f, const StepGraphon& w)
{
    const std::size_t v = f.vertices(), k = w.size();
    std::vector<std::size_t> phi(v, 0);
    Rational total = 0;
    while (true) {
        Rational term = 1;
        for (auto b : phi) term *= w.measure(b);
        for (auto [a, b] : f.edges()) term *= w.value(phi[a], phi[b]);
        total += term;
        std::size_t pos = 0;
        while (pos < v && ++phi[pos] == k) phi[pos++] = 0;
        if (pos == v) break;
    }
    return total;
}

StepGraphon complete_bipartite()
{
    return make_graphon({q(1, 2), q(1, 2)}, {{0, 1}, {1, 0}});
}

}  // namespace

TEST_CASE("motif parsing")
{
    CHECK(FiniteGraph::parse("C5").edges().size() == 5);
    CHECK(FiniteGraph::parse("K4").edges().size() == 6);
    CHECK(FiniteGraph::parse("P3").edges().size() == 2);
    auto g = FiniteGraph::parse("edges:0-1,1-2,2-0,0-1");
    CHECK(g.vertices() == 3);
    CHECK(g.edges().size() == 3);
    CHECK_THROWS_AS(FiniteGraph::parse("0-0"), ValidationError);
    CHECK_THROWS_AS(FiniteGraph::parse("C2"), ValidationError);
    CHECK_THROWS_AS(FiniteGraph::parse("Cx"), ValidationError);
    CHECK_THROWS_AS(FiniteGraph::parse("1-"), ValidationError);
}

TEST_CASE("density examples")
{
    CHECK(density(FiniteGraph::single_edge(), StepGraphon::constant(1)) == 1);
    CHECK(density(FiniteGraph::cycle(3), complete_bipartite()) == 0);
    auto w = make_graphon({q(1, 3), q(2, 3)}, {{1, q(1, 2)}, {q(1, 2), 0}});
    CHECK(density(FiniteGraph::single_edge(), w) == w.edge_density());
    // K_{1,2} with measures 1/3,2/3: brute force gives 1/9 + 2*(1/3)(2/3)(1/2) = 1/3
    CHECK(w.edge_density() == q(1, 3));
    CHECK_THROWS_AS(density(FiniteGraph::cycle(9), w), CapacityError);
}

TEST_CASE("density matches brute force and serial reference")
{
    Rng rng(11);
    const std::vector<FiniteGraph> motifs{FiniteGraph::cycle(3), FiniteGraph::cycle(4), FiniteGraph::cycle(5),
                                          FiniteGraph::complete(4), FiniteGraph::path(4),
                                          FiniteGraph(4, {{0, 1}, {2, 3}})};
    for (int trial = 0; trial < 40; ++trial) {
        auto w = random_graphon(rng, uniform_index(rng, 1, 4));
        for (const auto& f : motifs) {
            const Rational expected = brute_density(f, w);
            CHECK(density(f, w) == expected);
            CHECK(density_serial(f, w) == expected);
        }
    }
}

TEST_CASE("odd cycle density")
{
    CHECK(odd_cycle_density(3, StepGraphon::constant(1)) == 1);
    CHECK(odd_cycle_density(3, complete_bipartite()) == 0);
    CHECK(odd_cycle_density(5, complete_bipartite()) == 0);
    CHECK_THROWS_AS(odd_cycle_density(4, complete_bipartite()), ValidationError);
    CHECK_THROWS_AS(odd_cycle_density(1, complete_bipartite()), ValidationError);

    Rng rng(12);
    for (int trial = 0; trial < 40; ++trial) {
        auto w = random_graphon(rng, uniform_index(rng, 1, 5));
        for (std::size_t k : {3u, 5u, 7u})
            CHECK(odd_cycle_density(k, w) == density(FiniteGraph::cycle(k), w));
    }
}

TEST_CASE("bipartite examples")
{
    auto zero = make_graphon({q(1, 2), q(1, 2)}, {{0, 0}, {0, 0}});
    auto r = is_bipartite(zero);
    CHECK(r.bipartite);
    CHECK(r.side[0] != r.side[1]);

    auto kb = is_bipartite(complete_bipartite());
    CHECK(kb.bipartite);
    CHECK(kb.side[0] != kb.side[1]);

    Rng rng(13);
    auto tri = graphon_with_support(rng, cycle_support(3));
    auto t = is_bipartite(tri);
    REQUIRE_FALSE(t.bipartite);
    REQUIRE(t.witness);
    CHECK(t.witness->length() == 3);
    CHECK(witness_valid(tri, *t.witness));

    auto loop = make_graphon({q(1, 4), q(3, 4)}, {{q(1, 2), 0}, {0, 0}});
    auto l = is_bipartite(loop);
    REQUIRE(l.witness);
    CHECK(l.witness->from_self_loop);
    CHECK(l.witness->alpha == q(1, 12));
    CHECK(witness_valid(loop, *l.witness));
}

TEST_CASE("bipartite verdict agrees with odd cycle densities")
{
    Rng rng(14);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t b = uniform_index(rng, 1, 7);
        auto adj = trial % 2 ? random_bipartite_support(rng, b, 0.6) : random_support(rng, b, 0.35, trial % 3 == 0);
        auto w = graphon_with_support(rng, adj);
        auto r = is_bipartite(w);
        bool all_zero = true;
        for (std::size_t j = 3; j <= 2 * b + 1; j += 2)
            if (odd_cycle_density(j, w) != 0) all_zero = false;
        CHECK(r.bipartite == all_zero);
        if (r.bipartite) {
            for (std::size_t i = 0; i < b; ++i)
                for (std::size_t j = 0; j < b; ++j)
                    if (w.adjacent(i, j)) CHECK(r.side[i] != r.side[j]);
        } else {
            REQUIRE(r.witness);
            CHECK(witness_valid(w, *r.witness));
        }
    }
}

TEST_CASE("witness validation rejects broken witnesses")
{
    Rng rng(15);
    auto c5 = graphon_with_support(rng, cycle_support(5));
    CHECK(witness_valid(c5, OddCycleWitness{{0, 1, 2, 3, 4}, Rational(q(1, 100)), false}));
    CHECK_FALSE(witness_valid(c5, OddCycleWitness{{0, 1, 2, 3}, Rational(q(1, 100)), false}));
    CHECK_FALSE(witness_valid(c5, OddCycleWitness{{0, 2, 1, 3, 4}, Rational(q(1, 100)), false}));
    CHECK_FALSE(witness_valid(c5, OddCycleWitness{{0, 1, 2, 3, 4}, Rational(0), false}));
}

TEST_CASE("k-partite examples")
{
    CHECK(is_k_partite(complete_bipartite(), 2).colorable);
    Rng rng(16);
    auto c5 = graphon_with_support(rng, cycle_support(5));
    CHECK_FALSE(is_k_partite(c5, 2).colorable);
    auto three = is_k_partite(c5, 3);
    REQUIRE(three.colorable);
    for (std::size_t i = 0; i < 5; ++i) CHECK(three.colors[i] != three.colors[(i + 1) % 5]);

    auto loop = make_graphon({q(1, 2), q(1, 2)}, {{q(1, 3), 0}, {0, 0}});
    for (int k = 1; k <= 4; ++k) CHECK_FALSE(is_k_partite(loop, k).colorable);

    auto big = graphon_with_support(rng, cycle_support(13), true);
    CHECK_THROWS_AS(is_k_partite(big, 3), CapacityError);
    CHECK_THROWS_AS(is_k_partite(c5, 0), ValidationError);
}

TEST_CASE("k-partite colouring kills high chromatic densities")
{
    Rng rng(17);
    for (int trial = 0; trial < 60; ++trial) {
        auto w = graphon_with_support(rng, random_support(rng, uniform_index(rng, 2, 6), 0.5, false));
        for (int k = 2; k <= 3; ++k) {
            auto r = is_k_partite(w, k);
            if (!r.colorable) continue;
            CHECK(density(FiniteGraph::complete(static_cast<std::size_t>(k + 1)), w) == 0);
            if (k == 2)
                for (std::size_t j : {3u, 5u}) CHECK(odd_cycle_density(j, w) == 0);
        }
        // colorable by 2 exactly when bipartite
        CHECK(is_k_partite(w, 2).colorable == is_bipartite(w).bipartite);
    }
}
