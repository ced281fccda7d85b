#pragma once

// Matchings in step graphons: nonnegative kernels supported in supp W whose
// row-plus-column marginal is at most 1 everywhere.

#include "polyton/step.hpp"
#include "polyton/verdict.hpp"

#include <vector>

namespace polyton {

struct MatchingWitness {
    StepKernel matching;
    Rational size;
    /// Per block of the matching's partition: integral of m(x,.) + m(.,x).
    std::vector<Rational> degrees;
};

struct MatchingRatio {
    Rational value;
    MatchingWitness witness;
};

/// Checks m >= 0, supp m inside supp W and degree <= 1 on the common refinement.
Verdict is_matching(const StepKernel& m, const StepGraphon& w);

/// Integral of m over the unit square.
Rational matching_size(const StepKernel& m);

struct DegreeProfile {
    /// Partition both degree vectors live on (common refinement of rows and columns).
    Partition partition;
    std::vector<Rational> row;  // integral of m(x, .)
    std::vector<Rational> col;  // integral of m(., x)
};

DegreeProfile degree_profile(const StepKernel& m);

/// Maximum matching size. The LP ranges over symmetric step matchings on W's
/// partition; symmetrizing any step matching keeps it feasible with the same
/// size, and the optimum is checked against cover_ratio(W), which bounds every
/// measurable matching by weak duality. Throws std::logic_error if the two differ.
MatchingRatio matching_ratio(const StepGraphon& w);

/// k-block staircase approximation of the half graphon 1[x + y <= 1] with the
/// anti-diagonal matching of height k/2: size 1/2, sup norm k/2.
struct HalfGraphonDemo {
    StepGraphon graphon;
    StepKernel matching;
};

HalfGraphonDemo half_graphon_demo(std::size_t k);

}  // namespace polyton
