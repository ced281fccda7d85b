#pragma once

// Cut norm of step kernels and block-permutation cut distance.
//
// For a step kernel the integral over S x T is affine in each block's
// fractional membership, so the supremum over measurable S, T is attained at
// unions of whole blocks. Enumerating block subsets is therefore exact.

#include "polyton/step.hpp"

#include <cstdint>
#include <vector>

namespace polyton {

struct CutNormResult {
    Rational value;
    /// Row blocks (S) and column blocks (T) of an optimal rectangle.
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

struct CutNormOptions {
    /// Cap on the smaller side after merging identical rows and identical columns (that side is enumerated).
    std::size_t max_blocks = 20;
};

/// Exact: identical rows and columns are merged, then a Gray-code walk over
/// subsets of the smaller side keeps column sums and reads the best T off their
/// signs. Ties go to the smallest subset mask.
CutNormResult cut_norm(const StepKernel& f, const CutNormOptions& options = {});
/// Single-threaded reference: recomputes the sums for every subset.
CutNormResult cut_norm_serial(const StepKernel& f, const CutNormOptions& options = {});

/// Alternating maximization started from all rows, each single row and
/// restarts - 1 seeded random row sets; never exceeds cut_norm(f).
CutNormResult cut_norm_lower_bound(const StepKernel& f, int restarts, std::uint64_t seed);

/// Signed integral of f over the union of the given row and column blocks.
Rational rectangle_integral(const StepKernel& f, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols);

struct CutDistanceResult {
    /// Upper bound on the cut distance: only block permutations are tried.
    Rational value;
    /// Block i of `a` is compared with block permutation[i] of `b`.
    std::vector<std::size_t> permutation;
};

/// Requires identical measure multisets (ValidationError otherwise); at most
/// `max_blocks` blocks (CapacityError otherwise).
CutDistanceResult cut_distance_blocks(const StepGraphon& a, const StepGraphon& b, std::size_t max_blocks = 9);

}  // namespace polyton
