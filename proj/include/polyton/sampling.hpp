#pragma once

// W-random graphs G(n, W) and the empirical matching/cover convergence harness.
//
// Randomness: std::mt19937_64 seeded with the given seed. Vertex i takes the
// 53-bit dyadic u = (draw >> 11) / 2^53 and lands in the first block whose
// cumulative measure exceeds u. Pair i < j (row-major) is an edge iff a fresh
// u is below V(block i, block j); both comparisons are exact.

#include "polyton/step.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace polyton {

struct SampledGraph {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    /// Block of W each vertex was drawn from.
    std::vector<std::size_t> blocks;
    /// Pairs i < j in increasing order.
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    bool operator==(const SampledGraph&) const = default;
};

/// ValidationError when n < 1.
SampledGraph sample_wrandom(const StepGraphon& w, std::size_t n, std::uint64_t seed);

/// n blocks of measure 1/n with the 0/1 adjacency matrix as values.
StepGraphon graph_to_stepgraphon(const SampledGraph& g);

/// Edge density of the graphon representation: 2|E| / n^2.
Rational edge_density(const SampledGraph& g);

struct FractionalDuality {
    /// Matching ratio and cover ratio of graph_to_stepgraphon(g), i.e. nu*(G)/n and tau*(G)/n.
    Rational nu;
    Rational tau;
    /// Half-integral optimal fractional matching on edges, parallel to g.edges.
    std::vector<Rational> matching;
    /// Half-integral optimal fractional vertex cover.
    std::vector<Rational> cover;
};

/// Maximum matching of the bipartite double cover and its König cover, halved.
/// Both certificates are checked; std::logic_error if nu != tau.
FractionalDuality fractional_duality(const SampledGraph& g);

struct ConvergenceRow {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    Rational nu;
    Rational tau;
    Rational abs_error;  // |nu - nu(W)|
    /// Largest violation max(0, 1 - c_i - c_j) over pairs of W's support after
    /// averaging the optimal cover over the vertices of each W-block.
    Rational cover_slack;
};

struct ConvergenceReport {
    Rational nu_w;
    std::vector<ConvergenceRow> rows;  // sorted by (n, seed)
};

/// Parallel over (n, seed) jobs. CapacityError when some n exceeds max_n.
ConvergenceReport convergence_experiment(const StepGraphon& w, const std::vector<std::size_t>& ns,
                                         const std::vector<std::uint64_t>& seeds, std::size_t max_n = 5000);
ConvergenceReport convergence_experiment_serial(const StepGraphon& w, const std::vector<std::size_t>& ns,
                                                const std::vector<std::uint64_t>& seeds, std::size_t max_n = 5000);

}  // namespace polyton
