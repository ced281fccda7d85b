#include "polyton/sampling.hpp"

#include "polyton/errors.hpp"
#include "polyton/matchings.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

#include <algorithm>
#include <deque>
#include <exception>
#include <random>
#include <stdexcept>

namespace polyton {

namespace {

constexpr int kBits = 53;

// Smallest integer T with u < T  <=>  u / 2^53 < x, for integer u.
std::uint64_t dyadic_threshold(const Rational& x)
{
    Integer scaled = x.get_num();
    scaled <<= kBits;
    Integer t;
    mpz_cdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
    return static_cast<std::uint64_t>(t.get_ui());
}

std::uint64_t draw(std::mt19937_64& rng)
{
    return rng() >> (64 - kBits);
}

std::vector<std::pair<std::size_t, std::uint64_t>> jobs_of(const std::vector<std::size_t>& ns,
                                                          const std::vector<std::uint64_t>& seeds,
                                                          std::size_t max_n)
{
    std::vector<std::pair<std::size_t, std::uint64_t>> jobs;
    for (auto n : ns) {
        if (n < 1) throw ValidationError("n must be at least 1");
        if (n > max_n) throw CapacityError("n = " + std::to_string(n) + " exceeds cap " + std::to_string(max_n));
        for (auto s : seeds) jobs.emplace_back(n, s);
    }
    std::sort(jobs.begin(), jobs.end());
    jobs.erase(std::unique(jobs.begin(), jobs.end()), jobs.end());
    return jobs;
}

ConvergenceRow run_job(const StepGraphon& w, const Rational& nu_w, std::size_t n, std::uint64_t seed)
{
    const auto g = sample_wrandom(w, n, seed);
    const auto d = fractional_duality(g);
    ConvergenceRow row{n, seed, d.nu, d.tau, abs(Rational(d.nu - nu_w)), 0};

    const std::size_t b = w.size();
    std::vector<Rational> sum(b);
    std::vector<long> count(b, 0);
    for (std::size_t v = 0; v < n; ++v) {
        sum[g.blocks[v]] += d.cover[v];
        ++count[g.blocks[v]];
    }
    // an empty block keeps value 1, which never creates a violation
    std::vector<Rational> avg(b, Rational(1));
    for (std::size_t i = 0; i < b; ++i)
        if (count[i] > 0) avg[i] = sum[i] / count[i];
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = i; j < b; ++j)
            if (w.adjacent(i, j)) row.cover_slack = std::max(row.cover_slack, Rational(1 - avg[i] - avg[j]));
    return row;
}

}  // namespace

SampledGraph sample_wrandom(const StepGraphon& w, std::size_t n, std::uint64_t seed)
{
    if (n < 1) throw ValidationError("n must be at least 1");
    const std::size_t b = w.size();
    std::vector<std::uint64_t> cumulative(b);
    Rational acc = 0;
    for (std::size_t i = 0; i < b; ++i) {
        acc += w.measure(i);
        cumulative[i] = dyadic_threshold(acc);
    }
    std::vector<std::uint64_t> edge_threshold(b * b);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j) edge_threshold[i * b + j] = dyadic_threshold(w.value(i, j));

    std::mt19937_64 rng(seed);
    SampledGraph g{n, seed, std::vector<std::size_t>(n), {}};
    for (std::size_t v = 0; v < n; ++v) {
        const std::uint64_t u = draw(rng);
        g.blocks[v] = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                               cumulative.begin());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (draw(rng) < edge_threshold[g.blocks[i] * b + g.blocks[j]]) g.edges.emplace_back(i, j);
    return g;
}

StepGraphon graph_to_stepgraphon(const SampledGraph& g)
{
    RationalMatrix v(g.n, g.n);
    for (auto [i, j] : g.edges) v(i, j) = v(j, i) = 1;
    return StepGraphon(Partition::uniform(g.n), std::move(v));
}

Rational edge_density(const SampledGraph& g)
{
    Rational d(2 * g.edges.size(), g.n * g.n);
    d.canonicalize();
    return d;
}

FractionalDuality fractional_duality(const SampledGraph& g)
{
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
    const std::size_t n = g.n;
    // left copy v, right copy n + v
    Graph cover(2 * n);
    for (auto [u, v] : g.edges) {
        boost::add_edge(u, n + v, cover);
        boost::add_edge(v, n + u, cover);
    }
    const auto null = boost::graph_traits<Graph>::null_vertex();
    std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(2 * n, null);
    boost::edmonds_maximum_cardinality_matching(cover, &mate[0]);

    // König: alternate from unmatched left vertices
    std::vector<char> reached(2 * n, 0);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < n; ++v)
        if (mate[v] == null) reached[v] = 1, queue.push_back(v);
    while (!queue.empty()) {
        const std::size_t x = queue.front();
        queue.pop_front();
        if (x < n) {
            for (auto [e, end] = boost::out_edges(x, cover); e != end; ++e) {
                const std::size_t y = boost::target(*e, cover);
                if (!reached[y] && mate[x] != y) reached[y] = 1, queue.push_back(y);
            }
        } else if (mate[x] != null && !reached[mate[x]]) {
            reached[mate[x]] = 1;
            queue.push_back(mate[x]);
        }
    }

    FractionalDuality out;
    out.cover.resize(n);
    Rational cover_sum = 0;
    for (std::size_t v = 0; v < n; ++v) {
        out.cover[v] = make_rational((reached[v] ? 0 : 1) + (reached[n + v] ? 1 : 0), 2);
        cover_sum += out.cover[v];
    }
    out.matching.reserve(g.edges.size());
    std::vector<Rational> load(n);
    Rational matching_sum = 0;
    for (auto [u, v] : g.edges) {
        const Rational x = make_rational((mate[u] == n + v ? 1 : 0) + (mate[v] == n + u ? 1 : 0), 2);
        out.matching.push_back(x);
        load[u] += x;
        load[v] += x;
        matching_sum += x;
        if (out.cover[u] + out.cover[v] < 1)
            throw std::logic_error("König cover misses edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    for (const auto& l : load)
        if (l > 1) throw std::logic_error("fractional matching overloads a vertex");
    if (matching_sum != cover_sum)
        throw std::logic_error("matching " + to_string(matching_sum) + " != cover " + to_string(cover_sum));
    out.nu = matching_sum / n;
    out.tau = cover_sum / n;
    return out;
}

ConvergenceReport convergence_experiment(const StepGraphon& w, const std::vector<std::size_t>& ns,
                                         const std::vector<std::uint64_t>& seeds, std::size_t max_n)
{
    const auto jobs = jobs_of(ns, seeds, max_n);
    ConvergenceReport report{matching_ratio(w).value, std::vector<ConvergenceRow>(jobs.size())};
    const long count = static_cast<long>(jobs.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        try {
            report.rows[i] = run_job(w, report.nu_w, jobs[i].first, jobs[i].second);
        } catch (...) {
#pragma omp critical(polyton_convergence_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return report;
}

ConvergenceReport convergence_experiment_serial(const StepGraphon& w, const std::vector<std::size_t>& ns,
                                                const std::vector<std::uint64_t>& seeds, std::size_t max_n)
{
    const auto jobs = jobs_of(ns, seeds, max_n);
    ConvergenceReport report{matching_ratio(w).value, {}};
    for (auto [n, seed] : jobs) report.rows.push_back(run_job(w, report.nu_w, n, seed));
    return report;
}

}  // namespace polyton
