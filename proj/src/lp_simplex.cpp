#include "polyton/errors.hpp"
#include "polyton/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyton::lp {

const char* to_string(Status s)
{
    switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    }
    return "unknown";
}

std::size_t LinearProgram::add_variable(Rational cost, std::optional<Rational> lo, std::optional<Rational> hi)
{
    objective.push_back(std::move(cost));
    lower.push_back(std::move(lo));
    upper.push_back(std::move(hi));
    for (auto& r : rows) r.emplace_back(0);
    return objective.size() - 1;
}

void LinearProgram::add_row(std::vector<Rational> coefficients, Sense sense, Rational bound)
{
    if (coefficients.size() != variables())
        throw ValidationError("constraint row has " + std::to_string(coefficients.size()) +
                              " coefficients, expected " + std::to_string(variables()));
    rows.push_back(std::move(coefficients));
    senses.push_back(sense);
    rhs.push_back(std::move(bound));
}

void LinearProgram::validate() const
{
    const std::size_t n = variables();
    if (lower.size() != n || upper.size() != n)
        throw ValidationError("bounds must have one entry per variable");
    if (senses.size() != rows.size() || rhs.size() != rows.size())
        throw ValidationError("every constraint row needs a sense and a right-hand side");
    for (const auto& r : rows)
        if (r.size() != n) throw ValidationError("constraint row width differs from variable count");
    for (std::size_t j = 0; j < n; ++j)
        if (lower[j] && upper[j] && *lower[j] > *upper[j])
            throw ValidationError("variable " + std::to_string(j) + " has lower bound above upper bound");
}

namespace {

// Dense tableau for: maximize cost . y  s.t.  A y = b (b >= 0), y >= 0.
// The last column of every row holds the right-hand side; `obj` holds reduced
// costs z_j - c_j and the current objective value in its last slot.
struct Tableau {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<Rational> a;
    std::vector<Rational> obj;
    std::vector<std::size_t> basis;
    std::vector<Rational> cost;

    Rational& at(std::size_t r, std::size_t c) { return a[r * (n + 1) + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return a[r * (n + 1) + c]; }

    void price()
    {
        obj.assign(n + 1, Rational(0));
        for (std::size_t j = 0; j <= n; ++j) {
            Rational z = 0;
            for (std::size_t r = 0; r < m; ++r)
                if (sgn(cost[basis[r]]) != 0) z += cost[basis[r]] * at(r, j);
            obj[j] = j < n ? Rational(z - cost[j]) : z;
        }
    }

    void pivot(std::size_t row, std::size_t col)
    {
        const Rational p = at(row, col);
        for (std::size_t j = 0; j <= n; ++j) at(row, j) /= p;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row) continue;
            const Rational f = at(r, col);
            if (sgn(f) == 0) continue;
            for (std::size_t j = 0; j <= n; ++j)
                if (sgn(at(row, j)) != 0) at(r, j) -= f * at(row, j);
        }
        const Rational f = obj[col];
        if (sgn(f) != 0)
            for (std::size_t j = 0; j <= n; ++j)
                if (sgn(at(row, j)) != 0) obj[j] -= f * at(row, j);
        basis[row] = col;
    }

    // Bland's rule: smallest eligible entering column, ties in the ratio test
    // broken by the smallest basic variable index.
    Status run(const std::vector<bool>& allowed)
    {
        for (;;) {
            std::size_t enter = n;
            for (std::size_t j = 0; j < n; ++j)
                if (allowed[j] && sgn(obj[j]) < 0) {
                    enter = j;
                    break;
                }
            if (enter == n) return Status::optimal;

            std::size_t leave = m;
            Rational best;
            for (std::size_t r = 0; r < m; ++r) {
                if (sgn(at(r, enter)) <= 0) continue;
                Rational ratio = at(r, n) / at(r, enter);
                if (leave == m || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = std::move(ratio);
                }
            }
            if (leave == m) return Status::unbounded;
            pivot(leave, enter);
        }
    }
};

// Original variable x_j = offset + sum coef * y_col.
struct VariableMap {
    Rational offset;
    std::vector<std::pair<std::size_t, int>> terms;
};

Solution solve_once(const LinearProgram& lp)
{
    const std::size_t nx = lp.variables();
    const bool maximize = lp.direction == Direction::maximize;

    std::vector<VariableMap> vars(nx);
    std::size_t ny = 0;
    // upper-bound rows: (structural column, bound width)
    std::vector<std::pair<std::size_t, Rational>> width_rows;
    for (std::size_t j = 0; j < nx; ++j) {
        if (lp.lower[j]) {
            vars[j].offset = *lp.lower[j];
            vars[j].terms.push_back({ny, 1});
            if (lp.upper[j]) width_rows.push_back({ny, Rational(*lp.upper[j] - *lp.lower[j])});
            ++ny;
        } else if (lp.upper[j]) {
            vars[j].offset = *lp.upper[j];
            vars[j].terms.push_back({ny++, -1});
        } else {
            vars[j].offset = 0;
            vars[j].terms.push_back({ny++, 1});
            vars[j].terms.push_back({ny++, -1});
        }
    }

    struct StdRow {
        std::vector<Rational> coef;
        Sense sense;
        Rational rhs;
        bool flipped = false;
    };
    std::vector<StdRow> std_rows;
    std_rows.reserve(lp.constraints() + width_rows.size());
    for (std::size_t i = 0; i < lp.constraints(); ++i) {
        StdRow row{std::vector<Rational>(ny), lp.senses[i], lp.rhs[i]};
        for (std::size_t j = 0; j < nx; ++j) {
            const Rational& aij = lp.rows[i][j];
            if (sgn(aij) == 0) continue;
            row.rhs -= aij * vars[j].offset;
            for (auto [col, c] : vars[j].terms) row.coef[col] += c > 0 ? aij : Rational(-aij);
        }
        std_rows.push_back(std::move(row));
    }
    for (auto& [col, width] : width_rows) {
        StdRow row{std::vector<Rational>(ny), Sense::less_equal, width};
        row.coef[col] = 1;
        std_rows.push_back(std::move(row));
    }
    for (auto& row : std_rows) {
        if (sgn(row.rhs) < 0) {
            for (auto& c : row.coef) c = -c;
            row.rhs = -row.rhs;
            row.flipped = true;
            if (row.sense == Sense::less_equal)
                row.sense = Sense::greater_equal;
            else if (row.sense == Sense::greater_equal)
                row.sense = Sense::less_equal;
        }
    }

    const std::size_t m = std_rows.size();
    std::size_t n_slack = 0, n_art = 0;
    for (const auto& row : std_rows) {
        if (row.sense != Sense::equal) ++n_slack;
        if (row.sense != Sense::less_equal) ++n_art;
    }

    Tableau t;
    t.m = m;
    t.n = ny + n_slack + n_art;
    t.a.assign(m * (t.n + 1), Rational(0));
    t.basis.assign(m, 0);
    std::vector<std::size_t> init_col(m);
    std::vector<bool> is_art(t.n, false);
    std::size_t next_slack = ny, next_art = ny + n_slack;
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = std_rows[r];
        for (std::size_t j = 0; j < ny; ++j) t.at(r, j) = row.coef[j];
        t.at(r, t.n) = row.rhs;
        if (row.sense == Sense::less_equal) {
            t.at(r, next_slack) = 1;
            t.basis[r] = init_col[r] = next_slack++;
        } else {
            if (row.sense == Sense::greater_equal) t.at(r, next_slack++) = -1;
            t.at(r, next_art) = 1;
            is_art[next_art] = true;
            t.basis[r] = init_col[r] = next_art++;
        }
    }

    Solution sol;

    // phase 1
    if (n_art > 0) {
        t.cost.assign(t.n, Rational(0));
        for (std::size_t j = 0; j < t.n; ++j)
            if (is_art[j]) t.cost[j] = -1;
        t.price();
        t.run(std::vector<bool>(t.n, true));
        if (sgn(t.obj[t.n]) < 0) {
            sol.status = Status::infeasible;
            return sol;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (!is_art[t.basis[r]]) continue;
            for (std::size_t j = 0; j < t.n; ++j)
                if (!is_art[j] && sgn(t.at(r, j)) != 0) {
                    t.pivot(r, j);
                    break;
                }
        }
    }

    // phase 2
    t.cost.assign(t.n, Rational(0));
    for (std::size_t j = 0; j < nx; ++j) {
        const Rational c = maximize ? lp.objective[j] : Rational(-lp.objective[j]);
        for (auto [col, s] : vars[j].terms) t.cost[col] += s > 0 ? c : Rational(-c);
    }
    t.price();
    std::vector<bool> allowed(t.n, true);
    for (std::size_t j = 0; j < t.n; ++j)
        if (is_art[j]) allowed[j] = false;
    if (t.run(allowed) == Status::unbounded) {
        sol.status = Status::unbounded;
        return sol;
    }

    std::vector<Rational> y(t.n, Rational(0));
    for (std::size_t r = 0; r < m; ++r) y[t.basis[r]] = t.at(r, t.n);

    sol.status = Status::optimal;
    sol.point.assign(nx, Rational(0));
    for (std::size_t j = 0; j < nx; ++j) {
        Rational x = vars[j].offset;
        for (auto [col, s] : vars[j].terms) x += s > 0 ? y[col] : Rational(-y[col]);
        sol.point[j] = std::move(x);
    }
    sol.value = 0;
    for (std::size_t j = 0; j < nx; ++j) sol.value += lp.objective[j] * sol.point[j];

    sol.dual.assign(lp.constraints(), Rational(0));
    for (std::size_t i = 0; i < lp.constraints(); ++i) {
        Rational d = 0;
        for (std::size_t r = 0; r < m; ++r)
            if (sgn(t.cost[t.basis[r]]) != 0) d += t.cost[t.basis[r]] * t.at(r, init_col[i]);
        if (std_rows[i].flipped) d = -d;
        if (!maximize) d = -d;
        sol.dual[i] = std::move(d);
    }
    sol.reduced_costs.assign(nx, Rational(0));
    for (std::size_t j = 0; j < nx; ++j) {
        Rational d = lp.objective[j];
        for (std::size_t i = 0; i < lp.constraints(); ++i)
            if (sgn(lp.rows[i][j]) != 0) d -= sol.dual[i] * lp.rows[i][j];
        sol.reduced_costs[j] = std::move(d);
    }
    return sol;
}

bool at_lower(const LinearProgram& lp, std::size_t j, const Rational& v)
{
    return lp.lower[j] && *lp.lower[j] == v;
}

}  // namespace

Solution solve(const LinearProgram& lp, const SolveOptions& options)
{
    lp.validate();
    Solution sol = solve_once(lp);
    if (sol.status != Status::optimal || !options.lexicographic_tiebreak) return sol;

    // Walk coordinates in order, minimizing each over the optimal face with the
    // earlier coordinates pinned. A coordinate already at its lower bound is minimal.
    const std::size_t n = lp.variables();
    LinearProgram face = lp;
    face.add_row(lp.objective, Sense::equal, sol.value);
    std::vector<Rational> current = sol.point;
    for (std::size_t j = 0; j < n; ++j) {
        if (!at_lower(face, j, current[j])) {
            LinearProgram sub = face;
            sub.direction = Direction::minimize;
            sub.objective.assign(n, Rational(0));
            sub.objective[j] = 1;
            Solution s = solve_once(sub);
            if (s.status == Status::infeasible)
                throw std::logic_error("lexicographic refinement lost feasibility");
            if (s.status == Status::optimal) current = std::move(s.point);
        }
        face.lower[j] = current[j];
        face.upper[j] = current[j];
    }
    sol.point = std::move(current);
    return sol;
}

bool is_feasible(const LinearProgram& lp, std::span<const Rational> x)
{
    if (x.size() != lp.variables()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (lp.lower[j] && x[j] < *lp.lower[j]) return false;
        if (lp.upper[j] && x[j] > *lp.upper[j]) return false;
    }
    for (std::size_t i = 0; i < lp.constraints(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (sgn(lp.rows[i][j]) != 0) s += lp.rows[i][j] * x[j];
        switch (lp.senses[i]) {
        case Sense::less_equal:
            if (s > lp.rhs[i]) return false;
            break;
        case Sense::greater_equal:
            if (s < lp.rhs[i]) return false;
            break;
        case Sense::equal:
            if (s != lp.rhs[i]) return false;
            break;
        }
    }
    return true;
}

std::optional<Rational> dual_value(const LinearProgram& lp, const Solution& sol)
{
    const bool maximize = lp.direction == Direction::maximize;
    if (sol.dual.size() != lp.constraints() || sol.reduced_costs.size() != lp.variables()) return std::nullopt;
    Rational total = 0;
    for (std::size_t i = 0; i < lp.constraints(); ++i) {
        const int s = sgn(sol.dual[i]);
        // a row that tightens the optimum when its bound grows has the wrong sign
        if (lp.senses[i] == Sense::less_equal && (maximize ? s < 0 : s > 0)) return std::nullopt;
        if (lp.senses[i] == Sense::greater_equal && (maximize ? s > 0 : s < 0)) return std::nullopt;
        total += sol.dual[i] * lp.rhs[i];
    }
    for (std::size_t j = 0; j < lp.variables(); ++j) {
        const Rational& d = sol.reduced_costs[j];
        // the expected reduced cost must equal c - A^T y; recompute to be safe
        Rational expect = lp.objective[j];
        for (std::size_t i = 0; i < lp.constraints(); ++i) expect -= sol.dual[i] * lp.rows[i][j];
        if (expect != d) return std::nullopt;
        const int s = sgn(d);
        if (s == 0) continue;
        const bool use_upper = maximize ? s > 0 : s < 0;
        const auto& bound = use_upper ? lp.upper[j] : lp.lower[j];
        if (!bound) return std::nullopt;
        total += d * *bound;
    }
    return total;
}

bool certify_optimal(const LinearProgram& lp, const Solution& sol, std::string* reason)
{
    auto fail = [&](const char* why) {
        if (reason) *reason = why;
        return false;
    };
    if (sol.status != Status::optimal) return fail("solution is not optimal");
    if (!is_feasible(lp, sol.point)) return fail("primal point is infeasible");
    Rational primal = 0;
    for (std::size_t j = 0; j < lp.variables(); ++j) primal += lp.objective[j] * sol.point[j];
    if (primal != sol.value) return fail("reported value differs from objective at point");
    auto dual = dual_value(lp, sol);
    if (!dual) return fail("dual multipliers are infeasible");
    if (*dual != primal) return fail("primal and dual objectives differ");
    return true;
}

Json to_json(const LinearProgram& lp)
{
    Json out;
    out["direction"] = lp.direction == Direction::maximize ? "max" : "min";
    out["objective"] = polyton::to_json(lp.objective);
    Json rows = Json::array();
    for (std::size_t i = 0; i < lp.constraints(); ++i) {
        Json r;
        r["coefficients"] = polyton::to_json(lp.rows[i]);
        r["sense"] = lp.senses[i] == Sense::less_equal ? "<=" : lp.senses[i] == Sense::greater_equal ? ">=" : "=";
        r["rhs"] = polyton::to_string(lp.rhs[i]);
        rows.push_back(std::move(r));
    }
    out["constraints"] = std::move(rows);
    Json bounds = Json::array();
    for (std::size_t j = 0; j < lp.variables(); ++j) {
        Json b = Json::array();
        b.push_back(lp.lower[j] ? Json(polyton::to_string(*lp.lower[j])) : Json(nullptr));
        b.push_back(lp.upper[j] ? Json(polyton::to_string(*lp.upper[j])) : Json(nullptr));
        bounds.push_back(std::move(b));
    }
    out["bounds"] = std::move(bounds);
    return out;
}

}  // namespace polyton::lp
