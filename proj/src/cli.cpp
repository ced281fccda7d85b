#include "polyton/cli.hpp"

#include "polyton/covers.hpp"
#include "polyton/cutnorm.hpp"
#include "polyton/errors.hpp"
#include "polyton/json_io.hpp"
#include "polyton/matchings.hpp"
#include "polyton/parallel.hpp"
#include "polyton/sampling.hpp"
#include "polyton/structure.hpp"
#include "polyton/transfer.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#ifndef POLYTON_VERSION
#define POLYTON_VERSION "0.0.0"
#endif

namespace polyton {

namespace {

struct Options {
    std::string graphon, cover, kernel, a, b, w, m, u, motif, out, csv_path, eps = "1/10", ns, seeds;
    bool classify = false, csv = false, exact = false, heuristic = false;
    int k = 2, restarts = 16, threads = 0;
    std::uint64_t seed = 0;
    std::size_t n = 100, max_blocks = 0, max_vertices = 8;
};

Json pairs_json(const std::vector<std::pair<std::size_t, std::size_t>>& pairs)
{
    Json out = Json::array();
    for (auto [i, j] : pairs) out.push_back({i, j});
    return out;
}

Json mask_json(std::uint32_t mask, std::size_t k)
{
    Json out = Json::array();
    for (std::size_t i = 0; i < k; ++i) out.push_back((mask >> i) & 1U);
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text, const char* field)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::logic_error&) {
            throw ValidationError(std::string("field '") + field + "': cannot read '" + item + "' as a count");
        }
    }
    if (out.empty()) throw ValidationError(std::string("field '") + field + "' is empty");
    return out;
}

// "1..20" or "3,5,8"
std::vector<std::uint64_t> parse_seeds(const std::string& text)
{
    std::vector<std::uint64_t> out;
    if (auto dots = text.find(".."); dots != std::string::npos) {
        const auto lo = parse_sizes(text.substr(0, dots), "seeds");
        const auto hi = parse_sizes(text.substr(dots + 2), "seeds");
        if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0])
            throw ValidationError("field 'seeds': bad range '" + text + "'");
        for (auto s = lo[0]; s <= hi[0]; ++s) out.push_back(s);
        return out;
    }
    for (auto s : parse_sizes(text, "seeds")) out.push_back(s);
    return out;
}

Json bound_json(const EgBound& b)
{
    Json out = {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}, {"exact", b.exact}};
    if (!b.exact) out["approx"] = to_decimal(b.lower, 12);
    return out;
}

Json plan_json(const TransferPlan& p)
{
    return {{"eps", to_json(p.eps)},
            {"M", to_json(p.M)},
            {"eps_tilde", to_json(p.eps_tilde)},
            {"sqrt_eps_tilde", to_json(p.sqrt_eps_tilde)},
            {"s", to_json(p.s)},
            {"r", to_json(p.r)},
            {"eta", to_json(p.eta)},
            {"k", p.k},
            {"delta", to_json(p.delta)},
            {"partition", to_json(p.partition.measures())}};
}

Json graph_json(const SampledGraph& g)
{
    Json edges = Json::array();
    for (auto [i, j] : g.edges) edges.push_back({i, j});
    return {{"n", g.n}, {"seed", g.seed}, {"blocks", g.blocks}, {"edges", edges}};
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write '" + path + "'");
    f << text;
}

std::size_t cap_or(std::size_t value, std::size_t fallback)
{
    return value == 0 ? fallback : value;
}

Json cmd_ratio(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto nu = matching_ratio(w);
    const auto tau = cover_ratio(w);
    return {{"nu", to_json(nu.value)},
            {"tau", to_json(tau.value)},
            {"witness",
             {{"matching", to_json(nu.witness.matching)},
              {"degrees", to_json(nu.witness.degrees)},
              {"cover", to_json(tau.certificate.cover)}}}};
}

void cmd_cover_vertices(const Options& o, std::ostream& out)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    ExtremeCoverOptions opts;
    opts.max_blocks = cap_or(o.max_blocks, opts.max_blocks);
    const auto vertices = extreme_covers(w, opts);
    if (o.csv) {
        for (std::size_t i = 0; i < w.size(); ++i) out << "c" << i << ",";
        out << "size" << (o.classify ? ",class" : "") << "\n";
        for (const auto& v : vertices) {
            for (const auto& x : v.cover.values()) out << to_string(x) << ",";
            out << to_string(v.size);
            if (o.classify) out << "," << to_string(v.classification);
            out << "\n";
        }
        return;
    }
    Json list = Json::array();
    for (const auto& v : vertices) {
        Json item = {{"values", to_json(v.cover.values())}, {"size", to_json(v.size)}};
        if (o.classify) item["class"] = to_string(v.classification);
        item["tight_pairs"] = pairs_json(v.tight_pairs);
        list.push_back(item);
    }
    out << Json{{"count", vertices.size()}, {"vertices", list}}.dump(2) << "\n";
}

Json cmd_hull(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto c = cover_from_json(read_json_file(o.cover));
    const auto h = in_integral_cover_hull(c, w, cap_or(o.max_blocks, 10));
    Json out = {{"member", h.member}, {"partition", to_json(h.partition.measures())}};
    if (h.member) {
        Json comb = Json::array();
        for (const auto& [mask, lambda] : h.combination)
            comb.push_back({{"cover", mask_json(mask, h.partition.size())}, {"lambda", to_json(lambda)}});
        out["combination"] = comb;
    } else {
        out["functional"] = to_json(h.functional);
        out["threshold"] = to_json(h.threshold);
    }
    return out;
}

Json cmd_eg(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto r = eg_check(w);
    Json out = {{"edge_density", to_json(r.edge_density)},
                {"tau", to_json(r.tau_star)},
                {"bound", bound_json(r.bound)},
                {"holds", r.holds},
                {"tight", r.tight},
                {"regime", r.regime},
                {"at_crossing", r.at_crossing}};
    out["extremal"] = r.extremal ? Json(*r.extremal) : Json(nullptr);
    return out;
}

void cmd_eg_csv(const Options& o, std::ostream& out)
{
    const auto r = eg_check(graphon_from_json(read_json_file(o.graphon)));
    out << "edge_density,tau,bound_lower,bound_upper,holds,tight,regime\n"
        << to_string(r.edge_density) << "," << to_string(r.tau_star) << "," << to_string(r.bound.lower) << ","
        << to_string(r.bound.upper) << "," << r.holds << "," << r.tight << "," << r.regime << "\n";
}

Json cmd_bipartite(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto r = is_bipartite(w);
    Json out = {{"bipartite", r.bipartite}};
    if (r.bipartite) out["side"] = r.side;
    if (r.witness)
        out["witness"] = {{"blocks", r.witness->blocks},
                          {"alpha", to_json(r.witness->alpha)},
                          {"from_self_loop", r.witness->from_self_loop},
                          {"cycle_density", to_json(odd_cycle_density(std::max<std::size_t>(r.witness->length(), 3), w))}};
    return out;
}

Json cmd_kpartite(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto r = is_k_partite(w, o.k, cap_or(o.max_blocks, 12));
    Json out = {{"k", o.k}, {"colorable", r.colorable}};
    if (r.colorable) out["colors"] = r.colors;
    return out;
}

Json cmd_density(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto f = FiniteGraph::parse(o.motif);
    DensityOptions opts;
    opts.max_vertices = o.max_vertices;
    return {{"motif", o.motif}, {"vertices", f.vertices()}, {"edges", f.edges().size()}, {"density", to_json(density(f, w, opts))}};
}

Json cmd_cutnorm(const Options& o)
{
    const auto f = kernel_from_json(read_json_file(o.kernel));
    if (o.heuristic) {
        const auto r = cut_norm_lower_bound(f, o.restarts, o.seed);
        return {{"method", "heuristic"}, {"lower_bound", to_json(r.value)}, {"rows", r.rows}, {"cols", r.cols}};
    }
    CutNormOptions opts;
    opts.max_blocks = cap_or(o.max_blocks, opts.max_blocks);
    const auto r = cut_norm(f, opts);
    return {{"method", "exact"}, {"value", to_json(r.value)}, {"rows", r.rows}, {"cols", r.cols}};
}

Json cmd_cutdist(const Options& o)
{
    const auto a = graphon_from_json(read_json_file(o.a));
    const auto b = graphon_from_json(read_json_file(o.b));
    const auto r = cut_distance_blocks(a, b, cap_or(o.max_blocks, 9));
    return {{"upper_bound", to_json(r.value)}, {"permutation", r.permutation}};
}

Json cmd_transfer(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.w));
    const auto m = kernel_from_json(read_json_file(o.m));
    const auto u = graphon_from_json(read_json_file(o.u));
    const auto r = transfer_matching(w, m, u, parse_decimal(o.eps));
    Json out = {{"plan", plan_json(r.plan)},
                {"m_U", to_json(r.m_U)},
                {"B1", r.B1},
                {"B2", r.B2},
                {"B1_measure", to_json(r.B1_measure)},
                {"B2_measure", to_json(r.B2_measure)},
                {"bad_pairs", pairs_json(r.bad_pairs)},
                {"perturbation", to_json(r.perturbation)},
                {"perturbation_exact", r.perturbation_exact},
                {"precondition_held", r.precondition_held},
                {"achieved_cut_error", to_json(r.achieved_cut_error)},
                {"achieved_exact", r.achieved_exact},
                {"t_error", to_json(r.t_error)},
                {"t_error_exact", r.t_error_exact},
                {"is_matching", static_cast<bool>(r.matching)},
                {"valid", r.valid}};
    if (!r.warning.empty()) out["warning"] = r.warning;
    return out;
}

Json cmd_sample(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto g = sample_wrandom(w, o.n, o.seed);
    if (o.out.empty()) return graph_json(g);
    write_file(o.out, graph_json(g).dump() + "\n");
    return {{"n", g.n}, {"seed", g.seed}, {"edges", g.edges.size()}, {"edge_density", to_json(edge_density(g))},
            {"out", o.out}};
}

Json cmd_converge(const Options& o)
{
    const auto w = graphon_from_json(read_json_file(o.graphon));
    const auto report = convergence_experiment(w, parse_sizes(o.ns, "ns"), parse_seeds(o.seeds));
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "n,seed,nu,tau,abs_error,cover_slack\n";
    for (const auto& r : report.rows) {
        rows.push_back({{"n", r.n},
                        {"seed", r.seed},
                        {"nu", to_json(r.nu)},
                        {"tau", to_json(r.tau)},
                        {"abs_error", to_json(r.abs_error)},
                        {"cover_slack", to_json(r.cover_slack)}});
        csv << r.n << "," << r.seed << "," << to_decimal(r.nu) << "," << to_decimal(r.tau) << ","
            << to_decimal(r.abs_error) << "," << to_decimal(r.cover_slack) << "\n";
    }
    if (!o.csv_path.empty()) write_file(o.csv_path, csv.str());
    return {{"nu_w", to_json(report.nu_w)}, {"rows", rows}};
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message)
{
    err << Json{{"error", message}, {"kind", kind}}.dump() << "\n";
}

}  // namespace

std::string version_string()
{
    return std::string("polyton ") + POLYTON_VERSION + " (GMP " + gmp_version + ", C++" +
           std::to_string(__cplusplus / 100 % 100) + ")";
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Exact matchings and fractional vertex covers of step graphons", "polyton"};
    app.set_version_flag("--version", version_string());
    app.add_option("--threads", o.threads, "Worker threads (default: POLYTON_THREADS or all cores)")
        ->check(CLI::NonNegativeNumber);
    app.require_subcommand(1, 1);
    app.fallthrough();

    auto graphon_opt = [&](CLI::App* sub) {
        sub->add_option("--graphon", o.graphon, "Step graphon JSON")->required();
    };
    auto* ratio = app.add_subcommand("ratio", "Matching ratio and cover ratio with witnesses");
    graphon_opt(ratio);

    auto* vertices = app.add_subcommand("cover-vertices", "Vertices of the step cover polytope");
    graphon_opt(vertices);
    vertices->add_flag("--classify", o.classify, "Label each vertex integral / half-integral");
    vertices->add_flag("--csv", o.csv, "Flat table instead of JSON");
    vertices->add_option("--max-blocks", o.max_blocks, "Block cap (default 10)");

    auto* hull = app.add_subcommand("hull-test", "Membership in the hull of integral covers");
    graphon_opt(hull);
    hull->add_option("--cover", o.cover, "Step cover JSON")->required();
    hull->add_option("--max-blocks", o.max_blocks, "Refined block cap (default 10)");

    auto* eg = app.add_subcommand("eg-check", "Graphon Erdos-Gallai bound and tightness");
    graphon_opt(eg);
    eg->add_flag("--csv", o.csv, "Flat table instead of JSON");

    auto* bip = app.add_subcommand("bipartite", "Bipartiteness with an odd cycle witness");
    graphon_opt(bip);

    auto* kpart = app.add_subcommand("kpartite", "k-colourability of the support graph");
    graphon_opt(kpart);
    kpart->add_option("-k", o.k, "Number of parts")->required();
    kpart->add_option("--max-blocks", o.max_blocks, "Block cap (default 12)");

    auto* dens = app.add_subcommand("density", "Homomorphism density t(F, W)");
    graphon_opt(dens);
    dens->add_option("--motif", o.motif, "C5, K4, P3 or edges:0-1,1-2,...")->required();
    dens->add_option("--max-vertices", o.max_vertices, "Motif size cap (default 8)");

    auto* cut = app.add_subcommand("cutnorm", "Cut norm of a step kernel");
    cut->add_option("--kernel", o.kernel, "Step kernel JSON")->required();
    auto* exact_flag = cut->add_flag("--exact", o.exact, "Exact subset enumeration (default)");
    auto* heur_flag = cut->add_flag("--heuristic", o.heuristic, "Alternating-maximization lower bound");
    exact_flag->excludes(heur_flag);
    cut->add_option("--restarts", o.restarts, "Heuristic restarts")->check(CLI::PositiveNumber);
    cut->add_option("--seed", o.seed, "Heuristic seed");
    cut->add_option("--max-blocks", o.max_blocks, "Cap on distinct rows (default 20)");

    auto* dist = app.add_subcommand("cutdist", "Cut distance over block permutations (upper bound)");
    dist->add_option("--a", o.a, "First graphon JSON")->required();
    dist->add_option("--b", o.b, "Second graphon JSON")->required();
    dist->add_option("--max-blocks", o.max_blocks, "Block cap (default 9)");

    auto* tr = app.add_subcommand("transfer", "Move a matching of W to a nearby graphon U");
    tr->add_option("--w", o.w, "Graphon W JSON")->required();
    tr->add_option("--m", o.m, "Matching kernel JSON")->required();
    tr->add_option("--u", o.u, "Graphon U JSON")->required();
    tr->add_option("--eps", o.eps, "Target cut error, e.g. 0.1 or 1/10");

    auto* samp = app.add_subcommand("sample", "Draw G(n, W)");
    graphon_opt(samp);
    samp->add_option("-n", o.n, "Vertices")->check(CLI::PositiveNumber);
    samp->add_option("--seed", o.seed, "Seed");
    samp->add_option("--out", o.out, "Write the graph JSON here");

    auto* conv = app.add_subcommand("converge", "nu(G_n) and projected covers over (n, seed)");
    graphon_opt(conv);
    conv->add_option("--ns", o.ns, "Comma-separated n values")->required();
    conv->add_option("--seeds", o.seeds, "a..b or comma-separated seeds")->required();
    conv->add_option("--csv", o.csv_path, "Also write a CSV table here");

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitUsage;
    }

    apply_thread_env();
    if (o.threads > 0) set_thread_count(o.threads);

    try {
        Json result;
        if (ratio->parsed()) result = cmd_ratio(o);
        else if (vertices->parsed()) return cmd_cover_vertices(o, out), kExitOk;
        else if (hull->parsed()) result = cmd_hull(o);
        else if (eg->parsed()) {
            if (o.csv) return cmd_eg_csv(o, out), kExitOk;
            result = cmd_eg(o);
        } else if (bip->parsed()) result = cmd_bipartite(o);
        else if (kpart->parsed()) result = cmd_kpartite(o);
        else if (dens->parsed()) result = cmd_density(o);
        else if (cut->parsed()) result = cmd_cutnorm(o);
        else if (dist->parsed()) result = cmd_cutdist(o);
        else if (tr->parsed()) result = cmd_transfer(o);
        else if (samp->parsed()) result = cmd_sample(o);
        else if (conv->parsed()) result = cmd_converge(o);
        out << result.dump(2) << "\n";
        return kExitOk;
    } catch (const ValidationError& e) {
        error_json(err, "validation", e.what());
        return kExitInvalid;
    } catch (const CapacityError& e) {
        error_json(err, "capacity", e.what());
        return kExitInvalid;
    } catch (const std::exception& e) {
        error_json(err, "internal", e.what());
        return kExitInternal;
    }
}

}  // namespace polyton
