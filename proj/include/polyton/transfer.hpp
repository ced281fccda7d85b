#pragma once

// Moving a matching of W to a matching of a cut-norm-close graphon U.
//
// Given W, a matching m in W and eps, plan_transfer fixes the constant chain
// (M, eps~, s, r, eta, k, delta). For any U with ||U - W||_cut < delta,
// transfer_matching builds m_U in U with ||m_U - m||_cut < eps: rescale block
// means of m by U/W on an equal-measure grid, drop the rows and columns whose
// degree grew too much, and shrink the rest by 1/(1 + 2 sqrt(eps~)).

#include "polyton/step.hpp"
#include "polyton/verdict.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace polyton {

struct TruncatedMatching {
    StepKernel matching;
    /// Max block value of m, or 1 when m is zero.
    Rational bound;
    /// L1 distance between m and its truncation; always 0 for step kernels.
    Rational l1_gap;
};

TruncatedMatching truncate_matching(const StepKernel& m);

struct EqualMeasureRefinement {
    std::size_t k = 1;
    /// k blocks of measure 1/k.
    Partition partition;
    /// maps[s][p]: block of input s containing grid block p.
    std::vector<std::vector<std::size_t>> maps;
};

/// k is the least common denominator of all block measures, so the uniform
/// k-grid refines every input and block means reproduce the inputs exactly.
/// CapacityError above max_k.
EqualMeasureRefinement equal_measure_refinement(std::span<const Partition* const> inputs, std::size_t max_k = 240);

struct TransferPlan {
    Rational eps;
    Rational M;
    Rational eps_tilde;
    /// sqrt(eps_tilde), a power of 1/2 so that everything stays rational.
    Rational sqrt_eps_tilde;
    Rational s;
    Rational r;
    Rational eta;
    std::size_t k = 1;
    Rational delta;
    Partition partition;
};

/// Throws ValidationError when eps <= 0 or m is not a matching in W.
TransferPlan plan_transfer(const StepGraphon& w, const StepKernel& m, const Rational& eps, std::size_t max_k = 240);

/// Re-evaluates every defining inequality of the plan exactly.
Verdict verify_plan(const TransferPlan& plan);

struct TransferResult {
    StepKernel m_U;
    /// Stage-3 kernel before trimming and scaling.
    StepKernel t;
    TransferPlan plan;
    /// Grid blocks (i, j) whose mean approximation fails; empty for exact inputs.
    std::vector<std::pair<std::size_t, std::size_t>> bad_pairs;
    /// Blocks of m_U's partition that were zeroed (rows, then columns).
    std::vector<std::size_t> B1, B2;
    Rational B1_measure, B2_measure;

    /// Upper bounds; exact when the matching flag is set (otherwise L1 fallback).
    Rational perturbation;
    bool perturbation_exact = true;
    Rational achieved_cut_error;
    bool achieved_exact = true;
    Rational t_error;
    bool t_error_exact = true;

    bool precondition_held = false;
    Verdict matching;
    bool valid = false;
    std::string warning;
};

/// Runs even when ||U - W||_cut >= delta; then valid is false and warning says why.
/// Throws std::logic_error if a guaranteed property fails.
TransferResult transfer_matching(const StepGraphon& w, const StepKernel& m, const StepGraphon& u, const Rational& eps,
                                 std::size_t max_k = 240);

}  // namespace polyton
