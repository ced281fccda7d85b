#pragma once

// Exact dense simplex over the rationals and vertex enumeration for the small
// polytopes behind matching and cover ratios.

#include "polyton/json_io.hpp"
#include "polyton/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace polyton::lp {

enum class Sense { less_equal, greater_equal, equal };
enum class Direction { maximize, minimize };
enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

struct LinearProgram {
    Direction direction = Direction::maximize;
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> rows;
    std::vector<Sense> senses;
    std::vector<Rational> rhs;
    /// nullopt means unbounded in that direction.
    std::vector<std::optional<Rational>> lower;
    std::vector<std::optional<Rational>> upper;

    std::size_t variables() const { return objective.size(); }
    std::size_t constraints() const { return rows.size(); }

    /// Appends a variable with objective coefficient `cost`; existing rows get a zero coefficient.
    std::size_t add_variable(Rational cost, std::optional<Rational> lo = Rational(0),
                             std::optional<Rational> hi = std::nullopt);
    void add_row(std::vector<Rational> coefficients, Sense sense, Rational bound);

    /// Throws ValidationError on inconsistent dimensions or lo > hi.
    void validate() const;
};

struct Solution {
    Status status = Status::infeasible;
    Rational value;
    std::vector<Rational> point;
    /// One multiplier per row, signed as the sensitivity of the optimum to that row's bound.
    std::vector<Rational> dual;
    /// c_j - sum_i dual_i * a_ij, paired with whichever bound of x_j is active.
    std::vector<Rational> reduced_costs;
};

struct SolveOptions {
    /// Among optimal points return the lexicographically smallest one.
    bool lexicographic_tiebreak = true;
};

Solution solve(const LinearProgram& lp, const SolveOptions& options = {});

bool is_feasible(const LinearProgram& lp, std::span<const Rational> x);

/// Objective of the dual solution implied by `sol.dual` and `sol.reduced_costs`.
/// Returns nullopt when those multipliers are not dual feasible.
std::optional<Rational> dual_value(const LinearProgram& lp, const Solution& sol);

/// Primal feasibility, dual feasibility and equal objectives. On failure
/// `reason` (if given) describes the first broken condition.
bool certify_optimal(const LinearProgram& lp, const Solution& sol, std::string* reason = nullptr);

struct VertexOptions {
    std::size_t max_dimension = 12;
    /// Upper limit on candidate bases examined.
    std::uint64_t max_bases = 200'000'000;
};

/// Extreme points of the feasible region, lexicographically sorted, duplicate free.
/// Every candidate basis of tight constraints is solved exactly and kept when feasible.
std::vector<std::vector<Rational>> enumerate_vertices(const LinearProgram& lp,
                                                      const VertexOptions& options = {});
/// Single-threaded reference for enumerate_vertices.
std::vector<std::vector<Rational>> enumerate_vertices_serial(const LinearProgram& lp,
                                                             const VertexOptions& options = {});

/// Number of candidate bases enumerate_vertices would examine.
Integer candidate_basis_count(const LinearProgram& lp);

/// Rank of the constraints (rows and finite bounds) that hold with equality at x.
std::size_t tight_rank(const LinearProgram& lp, std::span<const Rational> x);

/// Feasible and the tight constraints have full rank.
bool is_vertex(const LinearProgram& lp, std::span<const Rational> x);

/// Debug dump; bounds use null for infinity.
Json to_json(const LinearProgram& lp);

}  // namespace polyton::lp
