#pragma once

// Homomorphism densities and colouring properties of the block support graph.

#include "polyton/step.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace polyton {

/// Simple graph on vertices 0..vertices-1.
class FiniteGraph {
public:
    FiniteGraph() = default;
    /// Rejects loops and out-of-range endpoints; duplicate edges are merged.
    FiniteGraph(std::size_t vertices, std::vector<std::pair<std::size_t, std::size_t>> edges);

    static FiniteGraph cycle(std::size_t k);
    static FiniteGraph complete(std::size_t k);
    static FiniteGraph path(std::size_t k);
    static FiniteGraph single_edge() { return complete(2); }

    /// "C5", "K4", "P3", or an edge list "0-1,1-2,2-0" (optionally prefixed by "edges:").
    static FiniteGraph parse(std::string_view motif);

    std::size_t vertices() const { return vertices_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

private:
    std::size_t vertices_ = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

struct DensityOptions {
    std::size_t max_vertices = 8;
};

/// t(F, W): sum over block assignments of prod measures * prod edge values.
Rational density(const FiniteGraph& f, const StepGraphon& w, const DensityOptions& options = {});
/// Single-threaded reference for density().
Rational density_serial(const FiniteGraph& f, const StepGraphon& w, const DensityOptions& options = {});

/// trace((diag(measures) * values)^k); k must be odd and at least 3.
Rational odd_cycle_density(std::size_t k, const StepGraphon& w);

/// Odd cycle in the support. Blocks are cyclically adjacent; each holds a piece of
/// measure `alpha`. A self-loop block yields three disjoint thirds of that block.
struct OddCycleWitness {
    std::vector<std::size_t> blocks;
    Rational alpha;
    bool from_self_loop = false;

    std::size_t length() const { return blocks.size(); }
};

struct BipartiteResult {
    bool bipartite = false;
    /// Side (0 or 1) per block, when bipartite.
    std::vector<int> side;
    std::optional<OddCycleWitness> witness;
};

BipartiteResult is_bipartite(const StepGraphon& w);

/// Checks the witness invariants against W directly.
bool witness_valid(const StepGraphon& w, const OddCycleWitness& witness);

struct ColoringResult {
    bool colorable = false;
    std::vector<int> colors;
};

/// Exact k-colouring of the support graph by backtracking; blocks with W_ii > 0 are never colourable.
ColoringResult is_k_partite(const StepGraphon& w, int k, std::size_t max_blocks = 12);

}  // namespace polyton
