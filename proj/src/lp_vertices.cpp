#include "polyton/errors.hpp"
#include "polyton/lp.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace polyton::lp {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

struct Hyperplane {
    std::vector<Rational> a;
    Rational b;
    Sense sense;
    // Same constraint scaled to integers, when every entry fits in 62 bits.
    std::vector<i64> ia;
    i64 ib = 0;
    bool integral = false;
};

bool fits(const Integer& z) { return mpz_sizeinbase(z.get_mpz_t(), 2) <= 62; }

void scale_to_integers(Hyperplane& h)
{
    std::vector<Rational> all = h.a;
    all.push_back(h.b);
    const Integer l = common_denominator(all);
    h.ia.resize(h.a.size());
    h.integral = true;
    for (std::size_t j = 0; j < h.a.size(); ++j) {
        Rational s = h.a[j] * l;
        if (!fits(s.get_num())) {
            h.integral = false;
            return;
        }
        h.ia[j] = s.get_num().get_si();
    }
    Rational s = h.b * l;
    if (!fits(s.get_num())) {
        h.integral = false;
        return;
    }
    h.ib = s.get_num().get_si();
}

// Rows first, then finite lower bounds, then finite upper bounds.
std::vector<Hyperplane> collect_hyperplanes(const LinearProgram& lp)
{
    const std::size_t n = lp.variables();
    std::vector<Hyperplane> out;
    for (std::size_t i = 0; i < lp.constraints(); ++i) out.push_back({lp.rows[i], lp.rhs[i], lp.senses[i], {}, 0, false});
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.lower[j]) continue;
        std::vector<Rational> a(n, Rational(0));
        a[j] = 1;
        out.push_back({std::move(a), *lp.lower[j], Sense::greater_equal, {}, 0, false});
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.upper[j]) continue;
        std::vector<Rational> a(n, Rational(0));
        a[j] = 1;
        out.push_back({std::move(a), *lp.upper[j], Sense::less_equal, {}, 0, false});
    }
    for (auto& h : out) scale_to_integers(h);
    return out;
}

// Indices of a maximal linearly independent subset, chosen greedily in order.
std::vector<std::size_t> independent_subset(const std::vector<const std::vector<Rational>*>& rows, std::size_t n)
{
    std::vector<std::vector<Rational>> basis;  // reduced rows
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> keep;
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
        std::vector<Rational> r = *rows[idx];
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const std::size_t p = pivots[b];
            if (sgn(r[p]) == 0) continue;
            const Rational f = r[p] / basis[b][p];
            for (std::size_t j = 0; j < n; ++j) r[j] -= f * basis[b][j];
        }
        std::size_t p = n;
        for (std::size_t j = 0; j < n; ++j)
            if (sgn(r[j]) != 0) {
                p = j;
                break;
            }
        if (p == n) continue;
        basis.push_back(std::move(r));
        pivots.push_back(p);
        keep.push_back(idx);
    }
    return keep;
}

std::optional<std::vector<Rational>> solve_square_rational(const std::vector<const Hyperplane*>& sys, std::size_t n)
{
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = sys[i]->a[j];
        m[i][n] = sys[i]->b;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && sgn(m[p][k]) == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(m[p], m[k]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || sgn(m[i][k]) == 0) continue;
            const Rational f = m[i][k] / m[k][k];
            for (std::size_t j = k; j <= n; ++j) m[i][j] -= f * m[k][j];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = m[i][n] / m[i][i];
    return x;
}

bool satisfies_rational(const std::vector<Hyperplane>& hs, const std::vector<Rational>& x)
{
    for (const auto& h : hs) {
        Rational s = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (sgn(h.a[j]) != 0) s += h.a[j] * x[j];
        if (h.sense == Sense::less_equal && s > h.b) return false;
        if (h.sense == Sense::greater_equal && s < h.b) return false;
        if (h.sense == Sense::equal && s != h.b) return false;
    }
    return true;
}

enum class IntOutcome { singular, infeasible, feasible, overflow };

struct IntWorkspace {
    std::vector<i64> m;  // n x (n+1)
    std::vector<i64> key;
};

bool narrow(i128 v, i64& out)
{
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN)) return false;
    out = static_cast<i64>(v);
    return true;
}

// Fraction-free Gauss-Jordan elimination: afterwards every diagonal entry equals
// the determinant d and column n holds d * x.
IntOutcome solve_square_integer(const std::vector<const Hyperplane*>& sys, const std::vector<Hyperplane>& all,
                                std::size_t n, IntWorkspace& ws)
{
    const std::size_t w = n + 1;
    auto& m = ws.m;
    m.assign(n * w, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i * w + j] = sys[i]->ia[j];
        m[i * w + n] = sys[i]->ib;
    }
    i64 prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p * w + k] == 0) ++p;
        if (p == n) return IntOutcome::singular;
        if (p != k)
            for (std::size_t j = 0; j < w; ++j) std::swap(m[p * w + j], m[k * w + j]);
        const i64 pivot = m[k * w + k];
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const i64 f = m[i * w + k];
            for (std::size_t j = 0; j < w; ++j) {
                if (j == k) continue;
                const i128 num = static_cast<i128>(pivot) * m[i * w + j] - static_cast<i128>(f) * m[k * w + j];
                if (num % prev != 0) return IntOutcome::overflow;
                if (!narrow(num / prev, m[i * w + j])) return IntOutcome::overflow;
            }
            m[i * w + k] = 0;
        }
        prev = pivot;
    }
    i64 d = m[0];
    for (std::size_t i = 1; i < n; ++i)
        if (m[i * w + i] != d) return IntOutcome::overflow;
    const int sign = d < 0 ? -1 : 1;

    for (const auto& h : all) {
        i128 s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (h.ia[j] == 0) continue;
            i128 term;
            if (__builtin_mul_overflow(static_cast<i128>(h.ia[j]), static_cast<i128>(m[j * w + n]) * sign, &term))
                return IntOutcome::overflow;
            if (__builtin_add_overflow(s, term, &s)) return IntOutcome::overflow;
        }
        const i128 rhs = static_cast<i128>(h.ib) * d * sign;
        if (h.sense == Sense::less_equal && s > rhs) return IntOutcome::infeasible;
        if (h.sense == Sense::greater_equal && s < rhs) return IntOutcome::infeasible;
        if (h.sense == Sense::equal && s != rhs) return IntOutcome::infeasible;
    }

    // normalized key (x numerators..., denominator)
    ws.key.resize(w);
    i64 g = d < 0 ? -d : d;
    for (std::size_t j = 0; j < n; ++j) g = std::gcd(g, m[j * w + n]);
    for (std::size_t j = 0; j < n; ++j) ws.key[j] = m[j * w + n] * sign / g;
    ws.key[n] = d * sign / g;
    return IntOutcome::feasible;
}

struct Setup {
    std::vector<Hyperplane> hyperplanes;
    std::vector<std::size_t> equalities;  // independent equality rows
    std::vector<std::size_t> pool;        // inequality hyperplanes
    std::size_t need = 0;
    bool all_integral = true;
    bool empty = false;  // equalities alone already overdetermine
};

Setup prepare(const LinearProgram& lp, const VertexOptions& options)
{
    lp.validate();
    const std::size_t n = lp.variables();
    if (n > options.max_dimension)
        throw CapacityError("vertex enumeration: dimension " + std::to_string(n) + " exceeds cap " +
                            std::to_string(options.max_dimension));
    Setup s;
    s.hyperplanes = collect_hyperplanes(lp);
    std::vector<const std::vector<Rational>*> eq_rows;
    std::vector<std::size_t> eq_index;
    for (std::size_t i = 0; i < s.hyperplanes.size(); ++i) {
        if (s.hyperplanes[i].sense == Sense::equal) {
            eq_rows.push_back(&s.hyperplanes[i].a);
            eq_index.push_back(i);
        } else {
            s.pool.push_back(i);
        }
    }
    for (auto k : independent_subset(eq_rows, n)) s.equalities.push_back(eq_index[k]);
    s.need = n - s.equalities.size();
    for (const auto& h : s.hyperplanes) s.all_integral = s.all_integral && h.integral;
    return s;
}

Integer binomial(std::size_t n, std::size_t k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

void check_budget(const Setup& s, const VertexOptions& options)
{
    if (s.need > s.pool.size()) return;
    const Integer count = binomial(s.pool.size(), s.need);
    if (count > Integer(std::to_string(options.max_bases)))
        throw CapacityError("vertex enumeration: " + count.get_str() + " candidate bases exceed cap " +
                            std::to_string(options.max_bases));
}

struct Collector {
    std::set<std::vector<i64>> integer_keys;
    std::set<std::vector<Rational>> rational_points;
};

void examine(const Setup& s, std::size_t n, const std::vector<std::size_t>& chosen, IntWorkspace& ws,
             std::vector<const Hyperplane*>& sys, Collector& out)
{
    sys.clear();
    for (auto e : s.equalities) sys.push_back(&s.hyperplanes[e]);
    for (auto c : chosen) sys.push_back(&s.hyperplanes[s.pool[c]]);
    if (s.all_integral) {
        switch (solve_square_integer(sys, s.hyperplanes, n, ws)) {
        case IntOutcome::singular:
        case IntOutcome::infeasible: return;
        case IntOutcome::feasible: out.integer_keys.insert(ws.key); return;
        case IntOutcome::overflow: break;
        }
    }
    auto x = solve_square_rational(sys, n);
    if (x && satisfies_rational(s.hyperplanes, *x)) out.rational_points.insert(std::move(*x));
}

// Calls f for every r-subset of {start, ..., limit-1} in lexicographic order.
template <class F>
void for_each_combination(std::size_t start, std::size_t limit, std::size_t r, std::vector<std::size_t>& idx, F&& f)
{
    idx.resize(r);
    if (limit < start || limit - start < r) return;
    std::iota(idx.begin(), idx.end(), start);
    for (;;) {
        f();
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == limit - r + (i - 1)) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<std::vector<Rational>> finish(std::size_t n, std::vector<Collector>& parts)
{
    std::set<std::vector<Rational>> points;
    for (auto& part : parts) {
        for (const auto& key : part.integer_keys) {
            std::vector<Rational> x(n);
            for (std::size_t j = 0; j < n; ++j) {
                x[j] = make_rational(key[j], key[n]);
            }
            points.insert(std::move(x));
        }
        for (auto& p : part.rational_points) points.insert(p);
    }
    return {points.begin(), points.end()};
}

}  // namespace

Integer candidate_basis_count(const LinearProgram& lp)
{
    VertexOptions unlimited;
    unlimited.max_dimension = lp.variables();
    const Setup s = prepare(lp, unlimited);
    if (s.need > s.pool.size()) return 0;
    return binomial(s.pool.size(), s.need);
}

std::vector<std::vector<Rational>> enumerate_vertices_serial(const LinearProgram& lp, const VertexOptions& options)
{
    const Setup s = prepare(lp, options);
    check_budget(s, options);
    const std::size_t n = lp.variables();
    std::vector<Collector> parts(1);
    IntWorkspace ws;
    std::vector<const Hyperplane*> sys;
    std::vector<std::size_t> idx;
    if (s.need <= s.pool.size())
        for_each_combination(0, s.pool.size(), s.need, idx, [&] { examine(s, n, idx, ws, sys, parts[0]); });
    return finish(n, parts);
}

std::vector<std::vector<Rational>> enumerate_vertices(const LinearProgram& lp, const VertexOptions& options)
{
    const Setup s = prepare(lp, options);
    check_budget(s, options);
    const std::size_t n = lp.variables();
    if (s.need == 0 || s.need > s.pool.size()) return enumerate_vertices_serial(lp, options);

    // Split by the smallest chosen pool index; each slice is independent.
    const std::size_t slices = s.pool.size() - s.need + 1;
    std::vector<Collector> parts(slices);
#pragma omp parallel
    {
        IntWorkspace ws;
        std::vector<const Hyperplane*> sys;
        std::vector<std::size_t> tail;
        std::vector<std::size_t> chosen;
#pragma omp for schedule(dynamic, 1)
        for (std::size_t first = 0; first < slices; ++first) {
            for_each_combination(first + 1, s.pool.size(), s.need - 1, tail, [&] {
                chosen.assign(1, first);
                chosen.insert(chosen.end(), tail.begin(), tail.end());
                examine(s, n, chosen, ws, sys, parts[first]);
            });
        }
    }
    return finish(n, parts);
}

std::size_t tight_rank(const LinearProgram& lp, std::span<const Rational> x)
{
    const auto hs = collect_hyperplanes(lp);
    std::vector<const std::vector<Rational>*> tight;
    for (const auto& h : hs) {
        Rational s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) s += h.a[j] * x[j];
        if (s == h.b) tight.push_back(&h.a);
    }
    return independent_subset(tight, lp.variables()).size();
}

bool is_vertex(const LinearProgram& lp, std::span<const Rational> x)
{
    return is_feasible(lp, x) && tight_rank(lp, x) == lp.variables();
}

}  // namespace polyton::lp
