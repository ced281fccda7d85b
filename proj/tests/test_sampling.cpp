#include "generators.hpp"

#include "polyton/covers.hpp"
#include "polyton/errors.hpp"
#include "polyton/matchings.hpp"
#include "polyton/sampling.hpp"

#include <doctest.h>

#include <cmath>

using namespace polyton;
using namespace polyton::testing;

namespace {

SampledGraph graph_of(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges)
{
    return SampledGraph{n, 0, std::vector<std::size_t>(n, 0), std::move(edges)};
}

// Fractional matching number of a small graph by brute force over half-integral
// edge weights (optimal fractional matchings are half-integral).
Rational brute_fractional_matching(const SampledGraph& g)
{
    const std::size_t m = g.edges.size();
    std::vector<int> x(m, 0);
    int best = 0;
    while (true) {
        std::vector<int> load(g.n, 0);
        int total = 0;
        for (std::size_t e = 0; e < m; ++e) {
            load[g.edges[e].first] += x[e];
            load[g.edges[e].second] += x[e];
            total += x[e];
        }
        if (std::all_of(load.begin(), load.end(), [](int l) { return l <= 2; })) best = std::max(best, total);
        std::size_t pos = 0;
        while (pos < m && ++x[pos] == 3) x[pos++] = 0;
        if (pos == m) break;
    }
    return make_rational(best, 2);
}

}  // namespace

TEST_CASE("sample_wrandom examples")
{
    auto empty = sample_wrandom(StepGraphon::constant(0), 30, 5);
    CHECK(empty.edges.empty());
    auto full = sample_wrandom(StepGraphon::constant(1), 30, 5);
    CHECK(full.edges.size() == 30 * 29 / 2);
    CHECK_THROWS_AS(sample_wrandom(StepGraphon::constant(1), 0, 5), ValidationError);

    // vertices only land in blocks of positive measure, edges follow block values
    auto w = make_graphon({q(1, 3), q(2, 3)}, {{0, 1}, {1, 0}});
    auto g = sample_wrandom(w, 60, 9);
    std::size_t cross = 0;
    for (std::size_t v = 0; v < 60; ++v)
        for (std::size_t u = v + 1; u < 60; ++u) cross += g.blocks[u] != g.blocks[v];
    CHECK(g.edges.size() == cross);
    for (auto [i, j] : g.edges) CHECK(g.blocks[i] != g.blocks[j]);
}

TEST_CASE("sampling is deterministic per seed")
{
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        auto w = random_graphon(rng, uniform_index(rng, 1, 4));
        const std::uint64_t seed = rng();
        CHECK(sample_wrandom(w, 40, seed) == sample_wrandom(w, 40, seed));
    }
    auto w = StepGraphon::constant(q(1, 2));
    CHECK_FALSE(sample_wrandom(w, 40, 1).edges == sample_wrandom(w, 40, 2).edges);
}

TEST_CASE("edge density of W = 1/2 concentrates")
{
    const auto w = StepGraphon::constant(q(1, 2));
    int close = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto g = sample_wrandom(w, 1000, seed);
        const double p = static_cast<double>(g.edges.size()) / (1000.0 * 999.0 / 2.0);
        if (std::abs(p - 0.5) < 0.05) ++close;
    }
    CHECK(close >= 99);
}

TEST_CASE("graph_to_stepgraphon examples")
{
    auto e = graph_to_stepgraphon(graph_of(2, {}));
    CHECK(e.size() == 2);
    CHECK(e.values() == RationalMatrix(2, 2));
    auto s = graph_to_stepgraphon(graph_of(2, {{0, 1}}));
    CHECK(s.values() == RationalMatrix::from_rows({{0, 1}, {1, 0}}));

    Rng rng(52);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = sample_wrandom(random_graphon(rng, 3), uniform_index(rng, 1, 25), rng());
        CHECK(graph_to_stepgraphon(g).edge_density() == edge_density(g));
        CHECK(edge_density(g) == make_rational(2 * static_cast<long>(g.edges.size()), static_cast<long>(g.n * g.n)));
    }
}

TEST_CASE("fractional duality agrees with the LP and brute force")
{
    CHECK(fractional_duality(graph_of(3, {{0, 1}, {1, 2}, {0, 2}})).nu == q(1, 2));
    CHECK(fractional_duality(graph_of(2, {{0, 1}})).nu == q(1, 2));
    CHECK(fractional_duality(graph_of(4, {})).tau == 0);

    Rng rng(53);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = uniform_index(rng, 1, 7);
        auto g = sample_wrandom(random_graphon(rng, 3, 0.3), n, rng());
        if (g.edges.size() > 10) continue;
        auto d = fractional_duality(g);
        CHECK(d.nu == d.tau);
        CHECK(d.nu * static_cast<long>(n) == brute_fractional_matching(g));
        auto w = graph_to_stepgraphon(g);
        CHECK(matching_ratio(w).value == d.nu);
        CHECK(is_cover(StepCover(w.partition(), d.cover), w));
    }
}

TEST_CASE("duality on every sampled instance")
{
    Rng rng(54);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = sample_wrandom(random_graphon(rng, uniform_index(rng, 1, 5)), uniform_index(rng, 1, 120), rng());
        auto d = fractional_duality(g);
        CHECK(d.nu == d.tau);
        CHECK(classify(d.cover) != CoverClass::neither);
    }
}

TEST_CASE("convergence experiment examples")
{
    auto zero = convergence_experiment(StepGraphon::constant(0), {10, 20}, {1, 2, 3});
    CHECK(zero.rows.size() == 6);
    for (const auto& r : zero.rows) {
        CHECK(r.nu == 0);
        CHECK(r.cover_slack == 0);
    }

    auto kb = make_graphon({q(1, 2), q(1, 2)}, {{0, 1}, {1, 0}});
    auto rep = convergence_experiment(kb, {200, 50}, {3, 1, 2});
    CHECK(rep.nu_w == q(1, 2));
    REQUIRE(rep.rows.size() == 6);
    CHECK(rep.rows.front().n == 50);
    CHECK(rep.rows.front().seed == 1);
    CHECK(rep.rows.back().n == 200);
    for (const auto& r : rep.rows) {
        CHECK(r.nu == r.tau);
        CHECK(r.abs_error == abs(Rational(r.nu - q(1, 2))));
    }

    auto serial = convergence_experiment_serial(kb, {200, 50}, {3, 1, 2});
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(serial.rows[i].nu == rep.rows[i].nu);
        CHECK(serial.rows[i].cover_slack == rep.rows[i].cover_slack);
    }
    CHECK_THROWS_AS(convergence_experiment(kb, {6000}, {1}), CapacityError);
}
