#pragma once

// Fractional vertex covers: cover ratio, extreme points of the step cover
// polytope, decomposition witnesses, integral hull membership and the
// Erdos-Gallai bound with its extremal graphons.

#include "polyton/lp.hpp"
#include "polyton/step.hpp"
#include "polyton/verdict.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polyton {

enum class CoverClass { integral, half_integral, neither };
const char* to_string(CoverClass c);
CoverClass classify(const std::vector<Rational>& values);

struct CoverCertificate {
    StepCover cover;
    Rational size;
    CoverClass classification = CoverClass::neither;
    /// Support pairs i <= j with c_i + c_j = 1.
    std::vector<std::pair<std::size_t, std::size_t>> tight_pairs;
};

/// Certificate for a cover on W's partition.
CoverCertificate certify_cover(const StepCover& c, const StepGraphon& w);

/// c_i + c_j >= 1 on every support pair of the common refinement (0 <= c <= 1 holds by construction).
Verdict is_cover(const StepCover& c, const StepGraphon& w);

struct CoverRatio {
    Rational value;
    CoverCertificate certificate;
};

/// Minimum cover size; the witness is the lexicographically smallest optimal cover.
CoverRatio cover_ratio(const StepGraphon& w);

/// Variables c_i in [0,1]; rows c_i + c_j >= 1 for i < j in the support, 2 c_i >= 1 for loops.
lp::LinearProgram cover_polytope(const StepGraphon& w);

struct ExtremeCoverOptions {
    std::size_t max_blocks = 10;
    /// Basis enumeration cross-check runs when it needs at most this many candidate bases.
    std::uint64_t cross_check_budget = 2'000'000;
};

/// Vertices of the step cover polytope from the {0, 1/2, 1} grid, each kept
/// only if it is a vertex; cross-checked against basis enumeration within budget
/// (std::logic_error on disagreement). Lexicographic order.
std::vector<CoverCertificate> extreme_covers(const StepGraphon& w, const ExtremeCoverOptions& options = {});

/// The grid fast path alone (parallel) and its serial reference.
std::vector<std::vector<Rational>> half_integral_vertices(const StepGraphon& w, std::size_t max_blocks = 10);
std::vector<std::vector<Rational>> half_integral_vertices_serial(const StepGraphon& w, std::size_t max_blocks = 10);
/// Basis enumeration alone.
std::vector<std::vector<Rational>> basis_vertices(const StepGraphon& w, std::size_t max_blocks = 10);

struct DecomposeMode {
    enum class Kind { bipartite, half };
    Kind kind = Kind::half;
    /// For bipartite mode: side (0 = A, 1 = B) per block of W.
    std::vector<int> side;

    static DecomposeMode half() { return {}; }
    static DecomposeMode bipartite(std::vector<int> side) { return {Kind::bipartite, std::move(side)}; }
};

struct CoverPair {
    StepCover plus;   // c'
    StepCover minus;  // c''
};

/// c = (c' + c'')/2 with both halves covers. Bipartite mode shifts by
/// min(x, 1-x), up on A and down on B; half mode shifts by min(x, 1-x, |1/2-x|),
/// up where c <= 1/2 and down elsewhere. Both outputs live on the common
/// refinement of c and W. Throws ValidationError if c is not a cover or the
/// bipartition has a same-side support pair.
CoverPair decompose_cover(const StepCover& c, const StepGraphon& w, const DecomposeMode& mode);

/// Block subsets (bit i = block i) covering every support pair; loop blocks are always included.
std::vector<std::uint32_t> integral_covers(const StepGraphon& w, std::size_t max_blocks = 10);
std::vector<std::uint32_t> integral_covers_serial(const StepGraphon& w, std::size_t max_blocks = 10);

struct HullResult {
    bool member = false;
    /// Partition the test was carried out on (common refinement of target and W).
    Partition partition;
    /// When member: convex combination of integral covers.
    std::vector<std::pair<std::uint32_t, Rational>> combination;
    /// When not member: a . 1_S >= b for every integral cover S, a . target < b.
    std::vector<Rational> functional;
    Rational threshold;
};

HullResult in_integral_cover_hull(const StepCover& target, const StepGraphon& w, std::size_t max_blocks = 10);

/// Exact bracket of min{sqrt(e/4), 1 - sqrt(1-e)}. Below e = 16/25 the second
/// term is the smaller one, above it the first.
struct EgBound {
    Rational lower;
    Rational upper;
    bool exact = false;  // lower == upper == the bound
};

EgBound eg_lower_bound(const Rational& e);

/// tau >= min{sqrt(e/4), 1 - sqrt(1-e)}, decided exactly by squaring.
bool satisfies_eg_bound(const Rational& tau, const Rational& e);

/// Psi_e: blocks {1 - sqrt(1-e), sqrt(1-e)}, zero only on the second diagonal block.
/// Phi_e: blocks {sqrt(e), 1 - sqrt(e)}, one only on the first diagonal block.
/// With approximate = false an irrational root is a ValidationError; with
/// approximate = true the root is rounded down to 12 decimals. A block of measure 0 is always rejected.
StepGraphon build_psi(const Rational& e, bool approximate = false);
StepGraphon build_phi(const Rational& e, bool approximate = false);

struct GMaximizer {
    Rational a, b, value;
};

/// Maximizers of a^2 + 2b - b^2 subject to a/2 + b = D, a, b >= 0 (two at D = 2/5).
std::vector<GMaximizer> maxg(const Rational& d);

struct EgReport {
    Rational edge_density;
    EgBound bound;
    Rational tau_star;
    bool holds = false;
    bool tight = false;
    /// "bipartite-side", "clique-side" or "crossing".
    std::string regime;
    bool at_crossing = false;
    /// "psi" or "phi" when tight and W matches that extremal graphon.
    std::optional<std::string> extremal;
};

EgReport eg_check(const StepGraphon& w);

/// W up to block permutation and merging of twin blocks.
bool isomorphic_up_to_twins(const StepGraphon& a, const StepGraphon& b);

}  // namespace polyton
