#include "polyton/cutnorm.hpp"

#include "polyton/errors.hpp"

#include <algorithm>
#include <functional>
#include <tuple>
#include <numeric>
#include <random>
#include <string>

namespace polyton {

namespace {

template <class Int>
struct Scan {
    Int value = 0;
    std::uint64_t mask = 0;
    bool negative = false;
};

template <class Int>
bool better(const Scan<Int>& x, const Scan<Int>& y)
{
    if (x.value != y.value) return x.value > y.value;
    if (x.mask != y.mask) return x.mask < y.mask;
    return !x.negative && y.negative;
}

template <class Int>
void consider(const std::vector<Int>& col, std::uint64_t mask, Scan<Int>& best, Int& pos, Int& neg)
{
    pos = 0;
    neg = 0;
    for (const auto& c : col) {
        if (c > 0)
            pos += c;
        else
            neg -= c;
    }
    Scan<Int> a{pos, mask, false};
    if (better(a, best)) best = a;
    Scan<Int> b{neg, mask, true};
    if (better(b, best)) best = b;
}

// Rows [0, low) walk a Gray code; rows [low, n) are fixed by `prefix`.
template <class Int>
Scan<Int> scan_prefix(const std::vector<Int>& a, std::size_t n, std::size_t m, std::size_t low, std::uint64_t prefix)
{
    std::vector<Int> col(m, Int(0));
    for (std::size_t i = low; i < n; ++i)
        if ((prefix >> (i - low)) & 1U)
            for (std::size_t j = 0; j < m; ++j) col[j] += a[i * m + j];
    const std::uint64_t high = prefix << low;
    Scan<Int> best;
    Int pos = 0, neg = 0;
    consider(col, high, best, pos, neg);
    std::uint64_t gray = 0;
    const std::uint64_t steps = std::uint64_t{1} << low;
    for (std::uint64_t step = 1; step < steps; ++step) {
        const unsigned bit = static_cast<unsigned>(__builtin_ctzll(step));
        gray ^= std::uint64_t{1} << bit;
        const Int* row = &a[bit * m];
        if ((gray >> bit) & 1U)
            for (std::size_t j = 0; j < m; ++j) col[j] += row[j];
        else
            for (std::size_t j = 0; j < m; ++j) col[j] -= row[j];
        consider(col, high | gray, best, pos, neg);
    }
    return best;
}

template <class Int>
Scan<Int> scan_parallel(const std::vector<Int>& a, std::size_t n, std::size_t m)
{
    const std::size_t fixed = std::min<std::size_t>(n, 8);
    const std::size_t low = n - fixed;
    const std::uint64_t prefixes = std::uint64_t{1} << fixed;
    std::vector<Scan<Int>> partial(prefixes);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::uint64_t p = 0; p < prefixes; ++p) partial[p] = scan_prefix(a, n, m, low, p);
    Scan<Int> best;
    for (const auto& s : partial)
        if (better(s, best)) best = s;
    return best;
}

template <class Int>
Scan<Int> scan_serial(const std::vector<Int>& a, std::size_t n, std::size_t m)
{
    Scan<Int> best;
    std::vector<Int> col(m);
    Int pos = 0, neg = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::fill(col.begin(), col.end(), Int(0));
        for (std::size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1U)
                for (std::size_t j = 0; j < m; ++j) col[j] += a[i * m + j];
        consider(col, mask, best, pos, neg);
    }
    return best;
}

// Weighted entries mu_i nu_j F_ij scaled to integers. Identical rows (and
// columns) of F are merged first: for fixed T their contributions share a sign,
// so an optimal S takes all of them or none. The smaller merged side becomes the rows.
struct Prepared {
    std::vector<Integer> a;
    std::size_t n = 0, m = 0;
    bool transposed = false;
    Integer scale;  // true entry = a / scale
    std::vector<std::vector<std::size_t>> row_groups, col_groups;  // blocks of f behind each merged row/column
};

std::vector<std::vector<std::size_t>> twin_groups(std::size_t count, std::size_t len,
                                                  const std::function<const Rational&(std::size_t, std::size_t)>& at)
{
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < count; ++i) {
        bool placed = false;
        for (auto& g : groups) {
            bool same = true;
            for (std::size_t x = 0; x < len && same; ++x) same = at(i, x) == at(g.front(), x);
            if (same) {
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({i});
    }
    return groups;
}

Prepared prepare(const StepKernel& f, std::size_t max_blocks)
{
    Prepared p;
    const std::size_t r = f.row_blocks(), c = f.col_blocks();
    auto rows = twin_groups(r, c, [&](std::size_t i, std::size_t j) -> const Rational& { return f.value(i, j); });
    auto cols = twin_groups(c, r, [&](std::size_t j, std::size_t i) -> const Rational& { return f.value(i, j); });
    p.transposed = cols.size() < rows.size();
    if (p.transposed) std::swap(rows, cols);
    p.n = rows.size();
    p.m = cols.size();
    if (p.n > max_blocks)
        throw CapacityError("cut norm: " + std::to_string(p.n) + " distinct rows exceed cap " +
                            std::to_string(max_blocks));
    std::vector<Rational> w(p.n * p.m);
    for (std::size_t gi = 0; gi < p.n; ++gi)
        for (std::size_t gj = 0; gj < p.m; ++gj) {
            Rational total = 0;
            for (auto i : rows[gi])
                for (auto j : cols[gj]) {
                    const std::size_t fr = p.transposed ? j : i, fc = p.transposed ? i : j;
                    total += f.row_partition().measure(fr) * f.col_partition().measure(fc) * f.value(fr, fc);
                }
            w[gi * p.m + gj] = total;
        }
    p.scale = common_denominator(w);
    p.a.reserve(w.size());
    for (const auto& x : w) {
        Rational y = x * p.scale;
        p.a.push_back(y.get_num());
    }
    p.row_groups = std::move(rows);
    p.col_groups = std::move(cols);
    return p;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> expand(const Prepared& p, std::vector<std::size_t> s,
                                                                     std::vector<std::size_t> t)
{
    std::vector<std::size_t> rs, cs;
    for (auto i : s) rs.insert(rs.end(), p.row_groups[i].begin(), p.row_groups[i].end());
    for (auto j : t) cs.insert(cs.end(), p.col_groups[j].begin(), p.col_groups[j].end());
    std::sort(rs.begin(), rs.end());
    std::sort(cs.begin(), cs.end());
    if (p.transposed) std::swap(rs, cs);
    return {rs, cs};
}

bool fits_int64(const std::vector<Integer>& a)
{
    Integer total = 0;
    for (const auto& x : a) total += abs(x);
    return total < (Integer(1) << 62);
}

std::vector<std::int64_t> to_int64(const std::vector<Integer>& a)
{
    std::vector<std::int64_t> out;
    out.reserve(a.size());
    for (const auto& x : a) out.push_back(x.get_si());
    return out;
}

template <class Int>
CutNormResult finish(const Prepared& p, const std::vector<Int>& a, const Scan<Int>& best)
{
    std::vector<Int> col(p.m, Int(0));
    std::vector<std::size_t> s, t;
    for (std::size_t i = 0; i < p.n; ++i)
        if ((best.mask >> i) & 1U) {
            s.push_back(i);
            for (std::size_t j = 0; j < p.m; ++j) col[j] += a[i * p.m + j];
        }
    for (std::size_t j = 0; j < p.m; ++j)
        if (best.negative ? col[j] < 0 : col[j] > 0) t.push_back(j);
    CutNormResult out;
    out.value = Rational(Integer(best.value), p.scale);
    out.value.canonicalize();
    std::tie(out.rows, out.cols) = expand(p, std::move(s), std::move(t));
    return out;
}

CutNormResult run(const StepKernel& f, const CutNormOptions& options, bool parallel)
{
    const Prepared p = prepare(f, options.max_blocks);
    if (fits_int64(p.a)) {
        const auto a = to_int64(p.a);
        const auto best = parallel ? scan_parallel(a, p.n, p.m) : scan_serial(a, p.n, p.m);
        return finish(p, a, best);
    }
    const auto best = parallel ? scan_parallel(p.a, p.n, p.m) : scan_serial(p.a, p.n, p.m);
    return finish(p, p.a, best);
}

}  // namespace

CutNormResult cut_norm(const StepKernel& f, const CutNormOptions& options)
{
    return run(f, options, true);
}

CutNormResult cut_norm_serial(const StepKernel& f, const CutNormOptions& options)
{
    return run(f, options, false);
}

Rational rectangle_integral(const StepKernel& f, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols)
{
    Rational total = 0;
    for (auto i : rows)
        for (auto j : cols)
            total += f.row_partition().measure(i) * f.col_partition().measure(j) * f.value(i, j);
    return total;
}

CutNormResult cut_norm_lower_bound(const StepKernel& f, int restarts, std::uint64_t seed)
{
    if (restarts < 1) throw ValidationError("restarts must be at least 1");
    const Prepared p = prepare(f, static_cast<std::size_t>(-1));
    const std::size_t n = p.n, m = p.m;
    std::mt19937_64 rng(seed);

    // sign * sum over S x T, and the best response of the other side
    auto respond = [&](const std::vector<bool>& fixed, bool fixed_is_rows, int sign, std::vector<bool>& out) {
        const std::size_t len = fixed_is_rows ? m : n;
        std::vector<Integer> sums(len, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (!(fixed_is_rows ? fixed[i] : fixed[j])) continue;
                sums[fixed_is_rows ? j : i] += p.a[i * m + j];
            }
        Integer total = 0;
        out.assign(len, false);
        for (std::size_t x = 0; x < len; ++x)
            if (sign * sgn(sums[x]) > 0) {
                out[x] = true;
                total += sign > 0 ? sums[x] : Integer(-sums[x]);
            }
        return total;
    };

    Integer best_value = 0;
    std::vector<bool> best_s(n, false), best_t(m, false);
    // all rows, every single row, then restarts - 1 random subsets
    std::vector<std::vector<bool>> starts(1, std::vector<bool>(n, true));
    for (std::size_t i = 0; i < n; ++i) {
        starts.emplace_back(n, false);
        starts.back()[i] = true;
    }
    for (int restart = 1; restart < restarts; ++restart) {
        std::vector<bool> start(n);
        for (std::size_t i = 0; i < n; ++i) start[i] = (rng() & 1U) != 0;
        starts.push_back(std::move(start));
    }
    for (const auto& start : starts) {
        for (int sign : {1, -1}) {
            std::vector<bool> s = start, t, next_s;
            Integer value = -1;
            while (true) {
                const Integer with_t = respond(s, true, sign, t);
                if (with_t > best_value) {
                    best_value = with_t;
                    best_s = s;
                    best_t = t;
                }
                const Integer with_s = respond(t, false, sign, next_s);
                if (with_s > best_value) {
                    best_value = with_s;
                    best_s = next_s;
                    best_t = t;
                }
                if (with_s <= value) break;
                value = with_s;
                s = next_s;
            }
        }
    }

    CutNormResult out;
    out.value = Rational(best_value, p.scale);
    out.value.canonicalize();
    std::vector<std::size_t> rs, cs;
    for (std::size_t i = 0; i < n; ++i)
        if (best_s[i]) rs.push_back(i);
    for (std::size_t j = 0; j < m; ++j)
        if (best_t[j]) cs.push_back(j);
    std::tie(out.rows, out.cols) = expand(p, std::move(rs), std::move(cs));
    return out;
}

CutDistanceResult cut_distance_blocks(const StepGraphon& a, const StepGraphon& b, std::size_t max_blocks)
{
    const std::size_t k = a.size();
    auto ma = a.partition().measures(), mb = b.partition().measures();
    std::sort(ma.begin(), ma.end());
    std::sort(mb.begin(), mb.end());
    if (ma != mb)
        throw ValidationError("cut distance: block measure multisets differ; refine both to equal-measure blocks first");
    if (k > max_blocks)
        throw CapacityError("cut distance: " + std::to_string(k) + " blocks exceed cap " + std::to_string(max_blocks));

    std::vector<Rational> all;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            all.push_back(a.value(i, j));
            all.push_back(b.value(i, j));
        }
    const Integer dv = common_denominator(all);
    const Integer dm = common_denominator(a.partition().measures());
    std::vector<Integer> mu(k), va(k * k), vb(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        Rational x = a.measure(i) * dm;
        mu[i] = x.get_num();
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Rational x = a.value(i, j) * dv, y = b.value(i, j) * dv;
            va[i * k + j] = x.get_num();
            vb[i * k + j] = y.get_num();
        }
    Integer bound = 0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) bound += mu[i] * mu[j] * dv;
    const bool small = bound < (Integer(1) << 62);
    const Integer scale = dm * dm * dv;

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Integer best = -1;
    std::vector<std::size_t> best_perm;
    std::vector<Integer> cell(k * k);
    std::vector<std::int64_t> cell64(k * k);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < k && ok; ++i) ok = a.measure(i) == b.measure(perm[i]);
        if (!ok) continue;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                cell[i * k + j] = mu[i] * mu[j] * (va[i * k + j] - vb[perm[i] * k + perm[j]]);
        Integer value;
        if (small) {
            for (std::size_t x = 0; x < cell.size(); ++x) cell64[x] = cell[x].get_si();
            value = Integer(static_cast<long>(scan_prefix(cell64, k, k, k, 0).value));
        } else {
            value = scan_prefix(cell, k, k, k, 0).value;
        }
        if (best < 0 || value < best) {
            best = value;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    CutDistanceResult out;
    out.value = Rational(best, scale);
    out.value.canonicalize();
    out.permutation = std::move(best_perm);
    return out;
}

}  // namespace polyton
