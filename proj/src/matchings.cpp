#include "polyton/matchings.hpp"

#include "polyton/covers.hpp"
#include "polyton/errors.hpp"
#include "polyton/lp.hpp"

#include <stdexcept>
#include <string>

namespace polyton {

namespace {

std::string block_pair(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

}  // namespace

Verdict is_matching(const StepKernel& m, const StepGraphon& w)
{
    for (std::size_t i = 0; i < m.row_blocks(); ++i)
        for (std::size_t j = 0; j < m.col_blocks(); ++j)
            if (sgn(m.value(i, j)) < 0)
                return Verdict::fail("negative value " + to_string(m.value(i, j)) + " on matching block " +
                                     block_pair(i, j));

    const Partition* parts[] = {&m.row_partition(), &m.col_partition(), &w.partition()};
    const auto r = refine(parts);
    const auto& rm = r.maps[0];
    const auto& cm = r.maps[1];
    const auto& wm = r.maps[2];
    const std::size_t k = r.partition.size();
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q)
            if (sgn(m.value(rm[p], cm[q])) > 0 && !w.adjacent(wm[p], wm[q]))
                return Verdict::fail("support violation: m > 0 on matching block " + block_pair(rm[p], cm[q]) +
                                     " where W = 0 on graphon block " + block_pair(wm[p], wm[q]));
    for (std::size_t p = 0; p < k; ++p) {
        Rational degree = 0;
        for (std::size_t q = 0; q < k; ++q)
            degree += r.partition.measure(q) * (m.value(rm[p], cm[q]) + m.value(rm[q], cm[p]));
        if (degree > 1)
            return Verdict::fail("degree " + to_string(degree) + " > 1 on refined block " + std::to_string(p));
    }
    return Verdict::pass();
}

Rational matching_size(const StepKernel& m)
{
    return m.integral();
}

DegreeProfile degree_profile(const StepKernel& m)
{
    const auto sq = m.squared();
    const std::size_t k = sq.row_blocks();
    DegreeProfile out{sq.row_partition(), std::vector<Rational>(k), std::vector<Rational>(k)};
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            out.row[i] += out.partition.measure(j) * sq.value(i, j);
            out.col[i] += out.partition.measure(j) * sq.value(j, i);
        }
    return out;
}

MatchingRatio matching_ratio(const StepGraphon& w)
{
    const std::size_t k = w.size();
    lp::LinearProgram program;
    program.direction = lp::Direction::maximize;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j)
            if (w.adjacent(i, j)) {
                pairs.push_back({i, j});
                const Rational weight = w.measure(i) * w.measure(j) * (i == j ? 1 : 2);
                program.add_variable(weight);
            }
    // degree of block i: 2 * sum_j nu_j x_ij
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Rational> row(pairs.size());
        bool any = false;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [a, b] = pairs[p];
            if (a == i) row[p] += 2 * w.measure(b);
            if (b == i && a != b) row[p] += 2 * w.measure(a);
            any = any || a == i || b == i;
        }
        if (any) program.add_row(std::move(row), lp::Sense::less_equal, 1);
    }

    RationalMatrix values(k, k);
    Rational value = 0;
    if (!pairs.empty()) {
        const auto sol = lp::solve(program);
        std::string why;
        if (sol.status != lp::Status::optimal || !lp::certify_optimal(program, sol, &why))
            throw std::logic_error("matching LP failed to certify: " + why);
        value = sol.value;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [a, b] = pairs[p];
            values(a, b) = sol.point[p];
            values(b, a) = sol.point[p];
        }
    }

    const auto cover = cover_ratio(w);
    if (cover.value != value)
        throw std::logic_error("duality check failed: matching ratio " + to_string(value) + " != cover ratio " +
                               to_string(cover.value));

    StepKernel m(w.partition(), w.partition(), std::move(values));
    MatchingRatio out;
    out.value = value;
    out.witness.size = matching_size(m);
    const auto profile = degree_profile(m);
    for (std::size_t i = 0; i < k; ++i) out.witness.degrees.push_back(profile.row[i] + profile.col[i]);
    out.witness.matching = std::move(m);
    if (out.witness.size != value || !is_matching(out.witness.matching, w))
        throw std::logic_error("matching witness does not reproduce the LP optimum");
    return out;
}

HalfGraphonDemo half_graphon_demo(std::size_t k)
{
    if (k < 1) throw ValidationError("half graphon demo needs at least one block");
    const auto p = Partition::uniform(k);
    RationalMatrix u(k, k), m(k, k);
    const Rational height = make_rational(static_cast<long>(k), 2);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            if (i + j + 1 <= k) u(i, j) = 1;
            if (i + j + 1 == k) m(i, j) = height;
        }
    return {StepGraphon(p, u), StepKernel(p, p, m)};
}

}  // namespace polyton
