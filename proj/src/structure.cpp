#include "polyton/structure.hpp"

#include "polyton/errors.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <set>
#include <string>

namespace polyton {

FiniteGraph::FiniteGraph(std::size_t vertices, std::vector<std::pair<std::size_t, std::size_t>> edges)
    : vertices_(vertices)
{
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto [a, b] : edges) {
        if (a >= vertices || b >= vertices)
            throw ValidationError("edge " + std::to_string(a) + "-" + std::to_string(b) + " references a missing vertex");
        if (a == b) throw ValidationError("motif graphs may not contain loops");
        if (a > b) std::swap(a, b);
        if (seen.insert({a, b}).second) edges_.push_back({a, b});
    }
}

FiniteGraph FiniteGraph::cycle(std::size_t k)
{
    if (k < 3) throw ValidationError("a cycle needs at least 3 vertices");
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < k; ++i) e.push_back({i, (i + 1) % k});
    return FiniteGraph(k, std::move(e));
}

FiniteGraph FiniteGraph::complete(std::size_t k)
{
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) e.push_back({i, j});
    return FiniteGraph(k, std::move(e));
}

FiniteGraph FiniteGraph::path(std::size_t k)
{
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t i = 0; i + 1 < k; ++i) e.push_back({i, i + 1});
    return FiniteGraph(k, std::move(e));
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view motif)
{
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ValidationError("cannot parse motif '" + std::string(motif) + "'");
    return value;
}

}  // namespace

FiniteGraph FiniteGraph::parse(std::string_view motif)
{
    if (motif.size() >= 2 && (motif[0] == 'C' || motif[0] == 'K' || motif[0] == 'P') &&
        motif.find('-') == std::string_view::npos) {
        const std::size_t k = parse_count(motif.substr(1), motif);
        if (motif[0] == 'C') return cycle(k);
        if (motif[0] == 'K') return complete(k);
        return path(k);
    }
    std::string_view body = motif;
    if (body.starts_with("edges:")) body.remove_prefix(6);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t max_vertex = 0;
    while (!body.empty()) {
        const auto comma = body.find(',');
        const auto item = body.substr(0, comma);
        const auto dash = item.find('-');
        if (dash == std::string_view::npos) throw ValidationError("cannot parse motif '" + std::string(motif) + "'");
        const std::size_t a = parse_count(item.substr(0, dash), motif);
        const std::size_t b = parse_count(item.substr(dash + 1), motif);
        edges.push_back({a, b});
        max_vertex = std::max({max_vertex, a, b});
        if (comma == std::string_view::npos) break;
        body.remove_prefix(comma + 1);
    }
    if (edges.empty()) throw ValidationError("motif '" + std::string(motif) + "' has no edges");
    return FiniteGraph(max_vertex + 1, std::move(edges));
}

// ---------------------------------------------------------------------------
// density

namespace {

// W scaled to integers: measures mu_i = nu_i * Dm, values v_ij = V_ij * Dv.
struct ScaledGraphon {
    std::vector<Integer> mu;
    std::vector<Integer> v;  // k x k
    std::size_t k = 0;
    Integer dm, dv;
};

ScaledGraphon scale(const StepGraphon& w)
{
    ScaledGraphon s;
    s.k = w.size();
    s.dm = common_denominator(w.partition().measures());
    std::vector<Rational> all;
    for (std::size_t i = 0; i < s.k; ++i)
        for (std::size_t j = 0; j < s.k; ++j) all.push_back(w.value(i, j));
    s.dv = common_denominator(all);
    for (std::size_t i = 0; i < s.k; ++i) {
        Rational m = w.measure(i) * s.dm;
        s.mu.push_back(m.get_num());
    }
    for (const auto& x : all) {
        Rational y = x * s.dv;
        s.v.push_back(y.get_num());
    }
    return s;
}

// For each vertex, its neighbours with a smaller index.
std::vector<std::vector<std::size_t>> earlier_neighbours(const FiniteGraph& f)
{
    std::vector<std::vector<std::size_t>> back(f.vertices());
    for (auto [a, b] : f.edges()) back[std::max(a, b)].push_back(std::min(a, b));
    return back;
}

void accumulate(const ScaledGraphon& s, const std::vector<std::vector<std::size_t>>& back, std::size_t vertex,
                std::vector<std::size_t>& assign, std::vector<Integer>& partial, Integer& total)
{
    const std::size_t n = back.size();
    if (vertex == n) {
        total += partial[n];
        return;
    }
    for (std::size_t b = 0; b < s.k; ++b) {
        Integer& p = partial[vertex + 1];
        p = partial[vertex] * s.mu[b];
        bool zero = false;
        for (auto u : back[vertex]) {
            const Integer& val = s.v[b * s.k + assign[u]];
            if (sgn(val) == 0) {
                zero = true;
                break;
            }
            p *= val;
        }
        if (zero) continue;
        assign[vertex] = b;
        accumulate(s, back, vertex + 1, assign, partial, total);
    }
}

Rational normalize(const Integer& total, const ScaledGraphon& s, const FiniteGraph& f)
{
    Integer den;
    Integer dmv, dvv;
    mpz_pow_ui(dmv.get_mpz_t(), s.dm.get_mpz_t(), f.vertices());
    mpz_pow_ui(dvv.get_mpz_t(), s.dv.get_mpz_t(), f.edges().size());
    den = dmv * dvv;
    Rational r(total, den);
    r.canonicalize();
    return r;
}

void check_density_caps(const FiniteGraph& f, const DensityOptions& options)
{
    if (f.vertices() > options.max_vertices)
        throw CapacityError("density: motif has " + std::to_string(f.vertices()) + " vertices, cap is " +
                            std::to_string(options.max_vertices));
}

}  // namespace

Rational density_serial(const FiniteGraph& f, const StepGraphon& w, const DensityOptions& options)
{
    check_density_caps(f, options);
    const auto s = scale(w);
    const auto back = earlier_neighbours(f);
    std::vector<std::size_t> assign(f.vertices());
    std::vector<Integer> partial(f.vertices() + 1);
    partial[0] = 1;
    Integer total = 0;
    accumulate(s, back, 0, assign, partial, total);
    return normalize(total, s, f);
}

Rational density(const FiniteGraph& f, const StepGraphon& w, const DensityOptions& options)
{
    check_density_caps(f, options);
    if (f.vertices() == 0) return 1;
    const auto s = scale(w);
    const auto back = earlier_neighbours(f);
    // one job per image of vertex 0; partial sums are exact so reduction order is irrelevant
    std::vector<Integer> sums(s.k);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t b = 0; b < s.k; ++b) {
        std::vector<std::size_t> assign(f.vertices());
        std::vector<Integer> partial(f.vertices() + 1);
        assign[0] = b;
        partial[0] = 1;
        partial[1] = s.mu[b];
        Integer total = 0;
        accumulate(s, back, 1, assign, partial, total);
        sums[b] = total;
    }
    Integer total = 0;
    for (const auto& x : sums) total += x;
    return normalize(total, s, f);
}

Rational odd_cycle_density(std::size_t k, const StepGraphon& w)
{
    if (k < 3 || k % 2 == 0) throw ValidationError("odd cycle length must be an odd integer >= 3");
    const std::size_t n = w.size();
    RationalMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = w.measure(i) * w.value(i, j);
    RationalMatrix power = a;
    for (std::size_t step = 1; step < k; ++step) {
        RationalMatrix next(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) {
                if (sgn(power(i, l)) == 0) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (sgn(a(l, j)) != 0) next(i, j) += power(i, l) * a(l, j);
            }
        power = std::move(next);
    }
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += power(i, i);
    return trace;
}

// ---------------------------------------------------------------------------
// bipartiteness

BipartiteResult is_bipartite(const StepGraphon& w)
{
    const std::size_t k = w.size();
    BipartiteResult result;
    for (std::size_t i = 0; i < k; ++i) {
        if (w.adjacent(i, i)) {
            result.witness = OddCycleWitness{{i, i, i}, Rational(w.measure(i) / 3), true};
            return result;
        }
    }

    std::vector<int> color(k, -1);
    std::vector<std::size_t> parent(k, k), depth(k, 0);
    std::vector<std::size_t> component_size;
    std::vector<std::size_t> component(k, 0);
    for (std::size_t root = 0; root < k; ++root) {
        if (color[root] >= 0) continue;
        const std::size_t comp = component_size.size();
        component_size.push_back(0);
        std::queue<std::size_t> queue;
        color[root] = 0;
        queue.push(root);
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop();
            component[u] = comp;
            ++component_size[comp];
            for (std::size_t v = 0; v < k; ++v) {
                if (v == u || !w.adjacent(u, v)) continue;
                if (color[v] < 0) {
                    color[v] = 1 - color[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push(v);
                } else if (color[v] == color[u]) {
                    // tree paths from u and v up to their common ancestor close an odd cycle
                    std::vector<std::size_t> left{u}, right{v};
                    std::size_t a = u, b = v;
                    while (depth[a] > depth[b]) left.push_back(a = parent[a]);
                    while (depth[b] > depth[a]) right.push_back(b = parent[b]);
                    while (a != b) {
                        left.push_back(a = parent[a]);
                        right.push_back(b = parent[b]);
                    }
                    right.pop_back();  // common ancestor already in `left`
                    std::vector<std::size_t> cycle(left.begin(), left.end());
                    cycle.insert(cycle.end(), right.rbegin(), right.rend());
                    Rational alpha = w.measure(cycle.front());
                    for (auto c : cycle) alpha = std::min(alpha, w.measure(c));
                    result.witness = OddCycleWitness{std::move(cycle), alpha, false};
                    return result;
                }
            }
        }
    }

    // Give the empty side an isolated block when one exists, so both sides have positive measure.
    const bool has_one = std::find(color.begin(), color.end(), 1) != color.end();
    if (!has_one && k >= 2)
        for (std::size_t i = 0; i < k; ++i)
            if (component_size[component[i]] == 1) {
                color[i] = 1;
                break;
            }
    result.bipartite = true;
    result.side = std::move(color);
    return result;
}

bool witness_valid(const StepGraphon& w, const OddCycleWitness& witness)
{
    const std::size_t len = witness.length();
    if (len < 3 || len % 2 == 0 || sgn(witness.alpha) <= 0) return false;
    for (auto b : witness.blocks)
        if (b >= w.size()) return false;
    for (std::size_t i = 0; i < len; ++i)
        if (!w.adjacent(witness.blocks[i], witness.blocks[(i + 1) % len])) return false;
    if (witness.from_self_loop) {
        const std::size_t b = witness.blocks.front();
        for (auto x : witness.blocks)
            if (x != b) return false;
        return witness.alpha * static_cast<long>(len) <= w.measure(b);
    }
    std::vector<std::size_t> sorted = witness.blocks;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    for (auto b : witness.blocks)
        if (witness.alpha > w.measure(b)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// k-partiteness

namespace {

bool color_rec(const std::vector<std::vector<bool>>& adj, const std::vector<std::size_t>& order, std::size_t pos,
               int k, std::vector<int>& colors, int used)
{
    if (pos == order.size()) return true;
    const std::size_t v = order[pos];
    // a fresh colour is interchangeable with any other unused one
    const int limit = std::min(k, used + 1);
    for (int c = 0; c < limit; ++c) {
        bool ok = true;
        for (std::size_t u = 0; u < adj.size() && ok; ++u)
            if (adj[v][u] && colors[u] == c) ok = false;
        if (!ok) continue;
        colors[v] = c;
        if (color_rec(adj, order, pos + 1, k, colors, std::max(used, c + 1))) return true;
        colors[v] = -1;
    }
    return false;
}

}  // namespace

ColoringResult is_k_partite(const StepGraphon& w, int k, std::size_t max_blocks)
{
    const std::size_t n = w.size();
    if (n > max_blocks)
        throw CapacityError("k-partiteness: " + std::to_string(n) + " blocks exceed cap " + std::to_string(max_blocks));
    if (k < 1) throw ValidationError("k must be a positive integer");
    ColoringResult result;
    for (std::size_t i = 0; i < n; ++i)
        if (w.adjacent(i, i)) return result;

    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::vector<std::size_t> degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && w.adjacent(i, j)) {
                adj[i][j] = true;
                ++degree[i];
            }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return degree[a] > degree[b]; });

    std::vector<int> colors(n, -1);
    if (color_rec(adj, order, 0, k, colors, 0)) {
        result.colorable = true;
        result.colors = std::move(colors);
    }
    return result;
}

}  // namespace polyton
