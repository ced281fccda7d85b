#include "polyton/covers.hpp"

#include "polyton/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace polyton {

namespace {

const Rational half = make_rational(1, 2);
const Rational crossing = make_rational(16, 25);

std::string block_pair(std::size_t i, std::size_t j)
{
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void check_blocks(std::size_t k, std::size_t cap, const char* what)
{
    if (k > cap)
        throw CapacityError(std::string(what) + ": " + std::to_string(k) + " blocks exceed cap " + std::to_string(cap));
}

}  // namespace

const char* to_string(CoverClass c)
{
    switch (c) {
    case CoverClass::integral: return "integral";
    case CoverClass::half_integral: return "half-integral";
    case CoverClass::neither: return "neither";
    }
    return "neither";
}

CoverClass classify(const std::vector<Rational>& values)
{
    bool integral = true, halves = true;
    for (const auto& x : values) {
        const bool is_int = x == 0 || x == 1;
        integral = integral && is_int;
        halves = halves && (is_int || x == half);
    }
    if (integral) return CoverClass::integral;
    return halves ? CoverClass::half_integral : CoverClass::neither;
}

lp::LinearProgram cover_polytope(const StepGraphon& w)
{
    const std::size_t k = w.size();
    lp::LinearProgram program;
    program.direction = lp::Direction::minimize;
    for (std::size_t i = 0; i < k; ++i) program.add_variable(w.measure(i), Rational(0), Rational(1));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            if (!w.adjacent(i, j)) continue;
            std::vector<Rational> row(k);
            row[i] += 1;
            row[j] += 1;
            program.add_row(std::move(row), lp::Sense::greater_equal, 1);
        }
    return program;
}

Verdict is_cover(const StepCover& c, const StepGraphon& w)
{
    const auto r = refine(c.partition(), w.partition());
    const auto& cm = r.maps[0];
    const auto& wm = r.maps[1];
    const std::size_t k = r.partition.size();
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = p; q < k; ++q) {
            if (!w.adjacent(wm[p], wm[q])) continue;
            const Rational sum = c.value(cm[p]) + c.value(cm[q]);
            if (sum < 1)
                return Verdict::fail("c(" + std::to_string(cm[p]) + ") + c(" + std::to_string(cm[q]) + ") = " +
                                     to_string(sum) + " < 1 on support pair " + block_pair(wm[p], wm[q]));
        }
    return Verdict::pass();
}

CoverCertificate certify_cover(const StepCover& c, const StepGraphon& w)
{
    const auto r = common_refinement(StepCover::constant(w.partition(), 0), c);
    const StepGraphon wr = w.refined(r.a.partition(), r.map.a_rows);
    CoverCertificate cert;
    cert.cover = r.b;
    cert.size = r.b.integral();
    cert.classification = classify(r.b.values());
    for (std::size_t i = 0; i < wr.size(); ++i)
        for (std::size_t j = i; j < wr.size(); ++j)
            if (wr.adjacent(i, j) && r.b.value(i) + r.b.value(j) == 1) cert.tight_pairs.push_back({i, j});
    return cert;
}

CoverRatio cover_ratio(const StepGraphon& w)
{
    const auto program = cover_polytope(w);
    const auto sol = lp::solve(program);
    std::string why;
    if (sol.status != lp::Status::optimal || !lp::certify_optimal(program, sol, &why))
        throw std::logic_error("cover LP failed to certify: " + why);
    StepCover c(w.partition(), sol.point);
    if (!is_cover(c, w)) throw std::logic_error("cover LP returned a non-cover");
    return {sol.value, certify_cover(c, w)};
}

// ---------------------------------------------------------------------------
// extreme points

namespace {

std::vector<Rational> grid_point(std::uint64_t index, std::size_t k)
{
    static const Rational digits[3] = {Rational(0), half, Rational(1)};
    std::vector<Rational> x(k);
    for (std::size_t pos = k; pos-- > 0;) {
        x[pos] = digits[index % 3];
        index /= 3;
    }
    return x;
}

std::uint64_t power3(std::size_t k)
{
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < k; ++i) n *= 3;
    return n;
}

}  // namespace

std::vector<std::vector<Rational>> half_integral_vertices(const StepGraphon& w, std::size_t max_blocks)
{
    check_blocks(w.size(), max_blocks, "extreme covers");
    const auto program = cover_polytope(w);
    const std::size_t k = w.size();
    const std::uint64_t total = power3(k);
    std::vector<char> keep(total, 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::uint64_t idx = 0; idx < total; ++idx) keep[idx] = lp::is_vertex(program, grid_point(idx, k));
    std::vector<std::vector<Rational>> out;
    for (std::uint64_t idx = 0; idx < total; ++idx)
        if (keep[idx]) out.push_back(grid_point(idx, k));
    return out;
}

std::vector<std::vector<Rational>> half_integral_vertices_serial(const StepGraphon& w, std::size_t max_blocks)
{
    check_blocks(w.size(), max_blocks, "extreme covers");
    const auto program = cover_polytope(w);
    std::vector<std::vector<Rational>> out;
    for (std::uint64_t idx = 0; idx < power3(w.size()); ++idx) {
        auto x = grid_point(idx, w.size());
        if (lp::is_vertex(program, x)) out.push_back(std::move(x));
    }
    return out;
}

std::vector<std::vector<Rational>> basis_vertices(const StepGraphon& w, std::size_t max_blocks)
{
    check_blocks(w.size(), max_blocks, "extreme covers");
    return lp::enumerate_vertices(cover_polytope(w));
}

std::vector<CoverCertificate> extreme_covers(const StepGraphon& w, const ExtremeCoverOptions& options)
{
    const auto grid = half_integral_vertices(w, options.max_blocks);
    if (lp::candidate_basis_count(cover_polytope(w)) <= options.cross_check_budget) {
        if (basis_vertices(w, options.max_blocks) != grid)
            throw std::logic_error("half-integral grid and basis enumeration disagree on the cover polytope");
    }
    std::vector<CoverCertificate> out;
    out.reserve(grid.size());
    for (const auto& x : grid) out.push_back(certify_cover(StepCover(w.partition(), x), w));
    return out;
}

// ---------------------------------------------------------------------------
// decomposition

CoverPair decompose_cover(const StepCover& c, const StepGraphon& w, const DecomposeMode& mode)
{
    if (auto v = is_cover(c, w); !v) throw ValidationError("decompose_cover: input is not a cover: " + v.reason);
    if (mode.kind == DecomposeMode::Kind::bipartite) {
        if (mode.side.size() != w.size())
            throw ValidationError("bipartition names " + std::to_string(mode.side.size()) + " blocks, W has " +
                                  std::to_string(w.size()));
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = i; j < w.size(); ++j)
                if (w.adjacent(i, j) && mode.side[i] == mode.side[j])
                    throw ValidationError("invalid bipartition: support pair " + block_pair(i, j) +
                                          " lies on one side");
    }

    const auto r = refine(c.partition(), w.partition());
    const auto& cm = r.maps[0];
    const auto& wm = r.maps[1];
    std::vector<Rational> plus, minus;
    for (std::size_t p = 0; p < r.partition.size(); ++p) {
        const Rational& x = c.value(cm[p]);
        Rational d = std::min(x, Rational(1 - x));
        bool up;
        if (mode.kind == DecomposeMode::Kind::bipartite) {
            up = mode.side[wm[p]] == 0;
        } else {
            d = std::min(d, Rational(abs(Rational(half - x))));
            up = x <= half;
        }
        plus.push_back(up ? Rational(x + d) : Rational(x - d));
        minus.push_back(up ? Rational(x - d) : Rational(x + d));
    }
    CoverPair out{StepCover(r.partition, std::move(plus)), StepCover(r.partition, std::move(minus))};
    if (!is_cover(out.plus, w) || !is_cover(out.minus, w))
        throw std::logic_error("decomposition produced a non-cover");
    return out;
}

// ---------------------------------------------------------------------------
// integral hull

namespace {

std::vector<std::pair<std::size_t, std::size_t>> support_pairs(const StepGraphon& w)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = i; j < w.size(); ++j)
            if (w.adjacent(i, j)) pairs.push_back({i, j});
    return pairs;
}

bool covers_all(std::uint32_t mask, const std::vector<std::pair<std::size_t, std::size_t>>& pairs)
{
    for (auto [i, j] : pairs)
        if (!(((mask >> i) | (mask >> j)) & 1U)) return false;
    return true;
}

}  // namespace

std::vector<std::uint32_t> integral_covers(const StepGraphon& w, std::size_t max_blocks)
{
    check_blocks(w.size(), std::min<std::size_t>(max_blocks, 30), "integral covers");
    const auto pairs = support_pairs(w);
    const std::uint32_t total = std::uint32_t{1} << w.size();
    std::vector<char> keep(total, 0);
#pragma omp parallel for schedule(static)
    for (std::uint32_t mask = 0; mask < total; ++mask) keep[mask] = covers_all(mask, pairs);
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < total; ++mask)
        if (keep[mask]) out.push_back(mask);
    return out;
}

std::vector<std::uint32_t> integral_covers_serial(const StepGraphon& w, std::size_t max_blocks)
{
    check_blocks(w.size(), std::min<std::size_t>(max_blocks, 30), "integral covers");
    const auto pairs = support_pairs(w);
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << w.size()); ++mask)
        if (covers_all(mask, pairs)) out.push_back(mask);
    return out;
}

HullResult in_integral_cover_hull(const StepCover& target, const StepGraphon& w, std::size_t max_blocks)
{
    const auto r = refine(target.partition(), w.partition());
    const std::size_t k = r.partition.size();
    check_blocks(k, max_blocks, "integral hull");
    const StepGraphon wr = w.refined(r.partition, r.maps[1]);
    std::vector<Rational> t(k);
    for (std::size_t p = 0; p < k; ++p) t[p] = target.value(r.maps[0][p]);
    const auto covers = integral_covers(wr, max_blocks);

    // min sum(plus + minus) s.t. sum_S lambda_S 1_S + plus - minus = t, sum lambda = 1
    lp::LinearProgram program;
    program.direction = lp::Direction::minimize;
    for (std::size_t s = 0; s < covers.size(); ++s) program.add_variable(0);
    for (std::size_t p = 0; p < k; ++p) program.add_variable(1);
    for (std::size_t p = 0; p < k; ++p) program.add_variable(1);
    const std::size_t n = program.variables();
    for (std::size_t p = 0; p < k; ++p) {
        std::vector<Rational> row(n);
        for (std::size_t s = 0; s < covers.size(); ++s)
            if ((covers[s] >> p) & 1U) row[s] = 1;
        row[covers.size() + p] = 1;
        row[covers.size() + k + p] = -1;
        program.add_row(std::move(row), lp::Sense::equal, t[p]);
    }
    {
        std::vector<Rational> row(n);
        for (std::size_t s = 0; s < covers.size(); ++s) row[s] = 1;
        program.add_row(std::move(row), lp::Sense::equal, 1);
    }
    const auto sol = lp::solve(program, lp::SolveOptions{false});
    if (sol.status != lp::Status::optimal) throw std::logic_error("hull LP did not reach an optimum");

    HullResult out;
    out.partition = r.partition;
    if (sgn(sol.value) == 0) {
        out.member = true;
        std::vector<Rational> check(k);
        Rational mass = 0;
        for (std::size_t s = 0; s < covers.size(); ++s) {
            if (sgn(sol.point[s]) == 0) continue;
            out.combination.push_back({covers[s], sol.point[s]});
            mass += sol.point[s];
            for (std::size_t p = 0; p < k; ++p)
                if ((covers[s] >> p) & 1U) check[p] += sol.point[s];
        }
        if (mass != 1 || check != t) throw std::logic_error("hull combination does not reproduce the target");
        return out;
    }

    // row multipliers y, z give a = -y, b = z with a.1_S >= b > a.t
    out.functional.resize(k);
    for (std::size_t p = 0; p < k; ++p) out.functional[p] = -sol.dual[p];
    out.threshold = sol.dual[k];
    Rational at = 0;
    for (std::size_t p = 0; p < k; ++p) at += out.functional[p] * t[p];
    if (!(at < out.threshold)) throw std::logic_error("separating functional does not cut off the target");
    for (auto s : covers) {
        Rational as = 0;
        for (std::size_t p = 0; p < k; ++p)
            if ((s >> p) & 1U) as += out.functional[p];
        if (as < out.threshold) throw std::logic_error("separating functional cuts an integral cover");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Erdos-Gallai

namespace {

constexpr int bracket_digits = 30;

Rational ulp()
{
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, bracket_digits);
    return Rational(Integer(1), scale);
}

void check_density(const Rational& e)
{
    if (e < 0 || e > 1) throw ValidationError("edge density must lie in [0,1], got " + to_string(e));
}

}  // namespace

EgBound eg_lower_bound(const Rational& e)
{
    check_density(e);
    EgBound out;
    if (e <= crossing) {
        const Rational x = 1 - e;
        if (auto root = exact_sqrt(x)) {
            out.lower = out.upper = 1 - *root;
            out.exact = true;
        } else {
            const Rational f = sqrt_floor(x, bracket_digits);
            out.upper = 1 - f;
            out.lower = out.upper - ulp();
        }
    } else {
        if (auto root = exact_sqrt(e)) {
            out.lower = out.upper = *root / 2;
            out.exact = true;
        } else {
            const Rational f = sqrt_floor(e, bracket_digits);
            out.lower = f / 2;
            out.upper = (f + ulp()) / 2;
        }
    }
    return out;
}

bool satisfies_eg_bound(const Rational& tau, const Rational& e)
{
    check_density(e);
    const bool clique_term = sgn(tau) >= 0 && tau * tau * 4 >= e;
    const Rational gap = 1 - tau;
    const bool bipartite_term = sgn(gap) <= 0 || gap * gap <= 1 - e;
    return clique_term || bipartite_term;
}

namespace {

Rational root_or_throw(const Rational& x, bool approximate, const char* what)
{
    if (auto r = exact_sqrt(x)) return *r;
    if (!approximate)
        throw ValidationError(std::string(what) + ": square root of " + to_string(x) +
                              " is irrational; use the approximate mode");
    return sqrt_floor(x, 12);
}

}  // namespace

StepGraphon build_psi(const Rational& e, bool approximate)
{
    check_density(e);
    const Rational root = root_or_throw(1 - e, approximate, "build_psi");
    const Rational first = 1 - root;
    if (sgn(first) <= 0 || sgn(root) <= 0)
        throw ValidationError("build_psi: e = " + to_string(e) + " gives a block of measure 0");
    return StepGraphon(Partition({first, root}), RationalMatrix::from_rows({{1, 1}, {1, 0}}));
}

StepGraphon build_phi(const Rational& e, bool approximate)
{
    check_density(e);
    const Rational root = root_or_throw(e, approximate, "build_phi");
    const Rational second = 1 - root;
    if (sgn(root) <= 0 || sgn(second) <= 0)
        throw ValidationError("build_phi: e = " + to_string(e) + " gives a block of measure 0");
    return StepGraphon(Partition({root, second}), RationalMatrix::from_rows({{1, 0}, {0, 0}}));
}

std::vector<GMaximizer> maxg(const Rational& d)
{
    if (d < 0 || d > half) throw ValidationError("maxg: D must lie in [0, 1/2], got " + to_string(d));
    const Rational threshold = make_rational(2, 5);
    std::vector<GMaximizer> out;
    if (d <= threshold) out.push_back({Rational(0), d, Rational(2 * d - d * d)});
    if (d >= threshold) out.push_back({Rational(2 * d), Rational(0), Rational(4 * d * d)});
    return out;
}

namespace {

struct Merged {
    std::vector<Rational> measures;
    std::vector<std::vector<Rational>> values;
};

Merged merge_twins(const StepGraphon& w)
{
    const std::size_t k = w.size();
    std::vector<std::size_t> cls(k);
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < k; ++i) {
        bool found = false;
        for (std::size_t c = 0; c < reps.size() && !found; ++c) {
            bool same = true;
            for (std::size_t j = 0; j < k && same; ++j) same = w.value(i, j) == w.value(reps[c], j);
            if (same) {
                cls[i] = c;
                found = true;
            }
        }
        if (!found) {
            cls[i] = reps.size();
            reps.push_back(i);
        }
    }
    Merged m;
    m.measures.assign(reps.size(), 0);
    for (std::size_t i = 0; i < k; ++i) m.measures[cls[i]] += w.measure(i);
    m.values.assign(reps.size(), std::vector<Rational>(reps.size()));
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = 0; b < reps.size(); ++b) m.values[a][b] = w.value(reps[a], reps[b]);
    return m;
}

// Extremal shape with zero-measure blocks dropped, so e = 0 and e = 1 still have a form.
std::optional<StepGraphon> extremal_form(bool psi, const Rational& e)
{
    const auto root = exact_sqrt(psi ? Rational(1 - e) : e);
    if (!root) return std::nullopt;
    std::vector<Rational> measures = psi ? std::vector<Rational>{1 - *root, *root}
                                         : std::vector<Rational>{*root, 1 - *root};
    const std::vector<std::vector<Rational>> values =
        psi ? std::vector<std::vector<Rational>>{{1, 1}, {1, 0}} : std::vector<std::vector<Rational>>{{1, 0}, {0, 0}};
    if (sgn(measures[0]) == 0) return StepGraphon::constant(values[1][1]);
    if (sgn(measures[1]) == 0) return StepGraphon::constant(values[0][0]);
    return StepGraphon(Partition(std::move(measures)), RationalMatrix::from_rows(values));
}

}  // namespace

bool isomorphic_up_to_twins(const StepGraphon& a, const StepGraphon& b)
{
    const Merged ma = merge_twins(a), mb = merge_twins(b);
    const std::size_t n = ma.measures.size();
    if (n != mb.measures.size()) return false;
    check_blocks(n, 9, "isomorphism check");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            ok = ma.measures[i] == mb.measures[perm[i]];
            for (std::size_t j = 0; j < n && ok; ++j) ok = ma.values[i][j] == mb.values[perm[i]][perm[j]];
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

EgReport eg_check(const StepGraphon& w)
{
    EgReport r;
    r.edge_density = w.edge_density();
    r.bound = eg_lower_bound(r.edge_density);
    r.tau_star = cover_ratio(w).value;
    r.holds = satisfies_eg_bound(r.tau_star, r.edge_density);
    r.tight = r.bound.exact && r.tau_star == r.bound.lower;
    r.at_crossing = r.edge_density == crossing;
    if (r.tight) {
        const auto psi = extremal_form(true, r.edge_density);
        const auto phi = extremal_form(false, r.edge_density);
        const bool is_psi = psi && isomorphic_up_to_twins(w, *psi);
        const bool is_phi = phi && isomorphic_up_to_twins(w, *phi);
        if (is_psi && is_phi)
            r.extremal = r.edge_density > crossing ? "phi" : "psi";
        else if (is_psi)
            r.extremal = "psi";
        else if (is_phi)
            r.extremal = "phi";
    }
    if (r.extremal)
        r.regime = *r.extremal == "phi" ? "clique-side" : "bipartite-side";
    else if (r.at_crossing)
        r.regime = "crossing";
    else
        r.regime = r.edge_density < crossing ? "bipartite-side" : "clique-side";
    return r;
}

}  // namespace polyton
