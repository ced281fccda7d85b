#include "polyton/transfer.hpp"

#include "polyton/cutnorm.hpp"
#include "polyton/errors.hpp"
#include "polyton/matchings.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyton {

namespace {

struct Bounded {
    Rational value;
    bool exact = true;
};

Rational l1_norm(const StepKernel& f)
{
    Rational total = 0;
    for (std::size_t i = 0; i < f.row_blocks(); ++i)
        for (std::size_t j = 0; j < f.col_blocks(); ++j)
            total += f.row_partition().measure(i) * f.col_partition().measure(j) * abs(f.value(i, j));
    return total;
}

// Exact cut norm, or the L1 norm when too many distinct rows remain.
Bounded cut_norm_or_l1(const StepKernel& f)
{
    try {
        return {cut_norm(f).value, true};
    } catch (const CapacityError&) {
        return {l1_norm(f), false};
    }
}

struct GridMeans {
    RationalMatrix mean;
    RationalMatrix deviation;  // integral of |f - mean| over the grid cell
};

// Means of f over the cells of the uniform k-grid and the L1 error of replacing f by them.
GridMeans grid_means(const StepKernel& f, std::size_t k)
{
    const auto grid = Partition::uniform(k);
    const auto rows = refine(grid, f.row_partition());
    const auto cols = refine(grid, f.col_partition());
    const Rational cell = Rational(1, k * k);
    GridMeans out{RationalMatrix(k, k), RationalMatrix(k, k)};
    for (std::size_t p = 0; p < rows.partition.size(); ++p)
        for (std::size_t q = 0; q < cols.partition.size(); ++q)
            out.mean(rows.maps[0][p], cols.maps[0][q]) +=
                rows.partition.measure(p) * cols.partition.measure(q) * f.value(rows.maps[1][p], cols.maps[1][q]);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out.mean(i, j) /= cell;
    for (std::size_t p = 0; p < rows.partition.size(); ++p)
        for (std::size_t q = 0; q < cols.partition.size(); ++q) {
            const std::size_t i = rows.maps[0][p], j = cols.maps[0][q];
            out.deviation(i, j) += rows.partition.measure(p) * cols.partition.measure(q) *
                                   abs(Rational(f.value(rows.maps[1][p], cols.maps[1][q]) - out.mean(i, j)));
        }
    return out;
}

Rational smallest_positive(const StepGraphon& w)
{
    Rational best = 1;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j < w.size(); ++j)
            if (w.adjacent(i, j)) best = std::min(best, w.value(i, j));
    return best;
}

Rational block_measure(const Partition& p, const std::vector<std::size_t>& blocks)
{
    Rational total = 0;
    for (auto b : blocks) total += p.measure(b);
    return total;
}

}  // namespace

TruncatedMatching truncate_matching(const StepKernel& m)
{
    Rational top = 0;
    for (std::size_t i = 0; i < m.row_blocks(); ++i)
        for (std::size_t j = 0; j < m.col_blocks(); ++j) top = std::max(top, m.value(i, j));
    if (sgn(top) == 0) top = 1;
    return {m, top, 0};
}

EqualMeasureRefinement equal_measure_refinement(std::span<const Partition* const> inputs, std::size_t max_k)
{
    if (inputs.empty()) return {1, Partition::uniform(1), {}};
    const auto common = refine(inputs);
    const Integer lcd = common_denominator(common.partition.measures());
    if (lcd > Integer(static_cast<unsigned long>(max_k)))
        throw CapacityError("equal-measure refinement needs k = " + lcd.get_str() + " > " + std::to_string(max_k));
    const std::size_t k = lcd.get_ui();
    EqualMeasureRefinement out{k, Partition::uniform(k), {}};
    for (const Partition* p : inputs) out.maps.push_back(refine(out.partition, *p).maps[1]);
    return out;
}

TransferPlan plan_transfer(const StepGraphon& w, const StepKernel& m, const Rational& eps, std::size_t max_k)
{
    if (sgn(eps) <= 0) throw ValidationError("eps must be positive, got " + to_string(eps));
    if (auto v = is_matching(m, w); !v) throw ValidationError("m is not a matching in W: " + v.reason);

    TransferPlan plan;
    plan.eps = eps;
    plan.M = truncate_matching(m).bound;
    const Rational& M = plan.M;

    // sqrt(eps~) runs over powers of 1/2, starting at the largest one with eps~ <= eps/8
    Rational sigma = 1;
    auto admissible = [&](const Rational& s) {
        const Rational e = s * s;
        return e <= eps / 8 && 3 * e + 6 * s * M + 2 * e * s < eps / 2;
    };
    while (sigma * sigma > eps / 8) sigma /= 2;
    while (!admissible(sigma)) sigma /= 2;
    plan.sqrt_eps_tilde = sigma;
    plan.eps_tilde = sigma * sigma;

    plan.s = smallest_positive(w);
    plan.r = plan.eps_tilde * plan.s / (4 * M);
    plan.eta = (plan.eps_tilde / 2) / (1 + 2 * M + 2 * M / plan.r);

    const Partition* parts[] = {&w.partition(), &m.row_partition(), &m.col_partition()};
    auto grid = equal_measure_refinement(parts, max_k);
    plan.k = grid.k;
    plan.partition = grid.partition;
    plan.delta = plan.eta / Rational(plan.k * plan.k);

    if (auto v = verify_plan(plan); !v) throw std::logic_error("transfer plan fails its own check: " + v.reason);
    return plan;
}

Verdict verify_plan(const TransferPlan& p)
{
    const Rational& e = p.eps_tilde;
    const Rational& s = p.sqrt_eps_tilde;
    if (sgn(s) <= 0 || s * s != e) return Verdict::fail("sqrt_eps_tilde^2 != eps_tilde");
    if (!(3 * e + 6 * s * p.M + 2 * e * s < p.eps / 2)) return Verdict::fail("eps_tilde inequality fails");
    if (sgn(p.M) <= 0) return Verdict::fail("M must be positive");
    if (p.r != e * p.s / (4 * p.M)) return Verdict::fail("r != eps_tilde s / 4M");
    if (p.eta != (e / 2) / (1 + 2 * p.M + 2 * p.M / p.r)) return Verdict::fail("eta formula");
    if (p.delta * Rational(p.k * p.k) != p.eta) return Verdict::fail("delta != eta / k^2");
    if (p.partition.size() != p.k) return Verdict::fail("partition does not have k blocks");
    for (const auto& mu : p.partition.measures())
        if (mu != Rational(1, p.k)) return Verdict::fail("grid block measure != 1/k");
    if (!(sgn(p.delta) > 0 && p.delta <= p.eta && p.eta <= e && e < p.eps))
        return Verdict::fail("chain 0 < delta <= eta <= eps_tilde < eps broken");
    return Verdict::pass();
}

TransferResult transfer_matching(const StepGraphon& w, const StepKernel& m, const StepGraphon& u, const Rational& eps,
                                 std::size_t max_k)
{
    TransferResult out;
    out.plan = plan_transfer(w, m, eps, max_k);
    const auto& plan = out.plan;
    const std::size_t k = plan.k;
    const Rational& sigma = plan.sqrt_eps_tilde;
    const auto mt = truncate_matching(m).matching;

    auto pert = cut_norm_or_l1(StepKernel::from_graphon(u) - StepKernel::from_graphon(w));
    out.perturbation = pert.value;
    out.perturbation_exact = pert.exact;
    out.precondition_held = pert.value < plan.delta;
    if (!out.precondition_held)
        out.warning = std::string(pert.exact ? "" : "L1 bound on ") + "||U - W||_cut = " + to_string(pert.value) +
                      " is not below delta = " + to_string(plan.delta);

    // stage 1: grid means
    const auto wg = grid_means(StepKernel::from_graphon(w), k);
    const auto mg = grid_means(mt, k);

    // stage 2: cells where the mean approximation is worse than eta / k^2
    const Rational cell_budget = plan.delta;
    std::vector<char> bad(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (wg.deviation(i, j) > cell_budget || mg.deviation(i, j) > cell_budget) {
                bad[i * k + j] = 1;
                out.bad_pairs.emplace_back(i, j);
            }

    // stage 3 on the common refinement of the grid, U and m
    const Partition* parts[] = {&plan.partition, &u.partition(), &mt.row_partition(), &mt.col_partition()};
    const auto fine = refine(parts);
    const auto& R = fine.partition;
    const auto& g = fine.maps[0];
    const auto& ub = fine.maps[1];
    const std::size_t n = R.size();

    RationalMatrix t(n, n), mr(n, n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            mr(p, q) = mt.value(fine.maps[2][p], fine.maps[3][q]);
            const std::size_t i = g[p], j = g[q];
            if (!bad[i * k + j] && wg.mean(i, j) >= plan.r)
                t(p, q) = mg.mean(i, j) / wg.mean(i, j) * u.value(ub[p], ub[q]);
        }

    // stage 4: trim rows/columns whose degree grew by more than sqrt(eps~), then shrink
    std::vector<char> trimmed(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        Rational t_row = 0, m_row = 0, t_col = 0, m_col = 0;
        for (std::size_t q = 0; q < n; ++q) {
            t_row += R.measure(q) * t(p, q);
            m_row += R.measure(q) * mr(p, q);
            t_col += R.measure(q) * t(q, p);
            m_col += R.measure(q) * mr(q, p);
        }
        if (t_row > m_row + sigma) out.B1.push_back(p), trimmed[p] = 1;
        if (t_col > m_col + sigma) out.B2.push_back(p), trimmed[p] = 1;
    }
    out.B1_measure = block_measure(R, out.B1);
    out.B2_measure = block_measure(R, out.B2);

    const Rational shrink = 1 / (1 + 2 * sigma);
    RationalMatrix mu(n, n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (!trimmed[p] && !trimmed[q]) mu(p, q) = t(p, q) * shrink;
    out.m_U = StepKernel(R, R, mu);
    out.t = StepKernel(R, R, t);

    auto achieved = cut_norm_or_l1(out.m_U - m);
    out.achieved_cut_error = achieved.value;
    out.achieved_exact = achieved.exact;
    auto t_err = cut_norm_or_l1(out.t - StepKernel(R, R, mr));
    out.t_error = t_err.value;
    out.t_error_exact = t_err.exact;

    out.matching = is_matching(out.m_U, u);
    // degree and support bounds hold by construction, whatever U is
    if (!out.matching) throw std::logic_error("transfer produced a non-matching: " + out.matching.reason);

    if (out.precondition_held) {
        if (out.t_error_exact && out.t_error > plan.eps_tilde)
            throw std::logic_error("||t - m~||_cut = " + to_string(out.t_error) + " exceeds eps~");
        if (out.t_error <= plan.eps_tilde && (out.B1_measure >= sigma || out.B2_measure >= sigma))
            throw std::logic_error("trimmed set has measure >= sqrt(eps~)");
        if (out.achieved_exact && out.achieved_cut_error >= eps)
            throw std::logic_error("||m_U - m||_cut = " + to_string(out.achieved_cut_error) + " is not below eps");
        if (!out.achieved_exact && out.achieved_cut_error >= eps)
            out.warning = "only an L1 bound on ||m_U - m||_cut was available and it is not below eps";
    }
    out.valid = out.precondition_held && out.achieved_cut_error < eps;
    return out;
}

}  // namespace polyton
