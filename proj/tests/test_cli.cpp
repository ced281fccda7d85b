#include "generators.hpp"

#include "polyton/cli.hpp"
#include "polyton/covers.hpp"
#include "polyton/json_io.hpp"
#include "polyton/matchings.hpp"
#include "polyton/sampling.hpp"
#include "polyton/transfer.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace polyton;
using namespace polyton::testing;

namespace {

struct Run {
    int code;
    std::string out, err;
    Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "polyton");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text)
{
    const auto dir = std::filesystem::temp_directory_path() / "polyton_cli_tests";
    std::filesystem::create_directories(dir);
    const auto path = (dir / name).string();
    std::ofstream(path) << text;
    return path;
}

std::string graphon_file(const std::string& name, const StepGraphon& w)
{
    return temp_file(name, to_json(w).dump());
}

}  // namespace

TEST_CASE("cli ratio on Psi_{9/25}")
{
    auto psi = build_psi(q(9, 25));
    auto r = run({"ratio", "--graphon", graphon_file("psi.json", psi)});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["nu"] == "1/5");
    CHECK(j["tau"] == "1/5");
    // the witness round-trips and matches the library call
    auto m = kernel_from_json(j["witness"]["matching"]);
    CHECK(m == matching_ratio(psi).witness.matching);
    CHECK(is_matching(m, psi));
    auto c = cover_from_json(j["witness"]["cover"]);
    CHECK(c == cover_ratio(psi).certificate.cover);
}

TEST_CASE("cli eg-check on Phi_{16/25}")
{
    auto r = run({"eg-check", "--graphon", graphon_file("phi.json", build_phi(q(16, 25)))});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["tight"] == true);
    CHECK(j["regime"] == "clique-side");
    CHECK(j["tau"] == "2/5");

    auto csv = run({"eg-check", "--csv", "--graphon", graphon_file("phi.json", build_phi(q(16, 25)))});
    CHECK(csv.out.rfind("edge_density,tau,", 0) == 0);
}

TEST_CASE("cli errors and exit codes")
{
    auto bad = temp_file("bad.json", R"({"measures": ["1/2", "1/2"], "valuez": [[0, 1], [1, 0]]})");
    auto r = run({"ratio", "--graphon", bad});
    CHECK(r.code == kExitInvalid);
    auto e = Json::parse(r.err);
    CHECK(e["error"].get<std::string>().find("values") != std::string::npos);

    auto syntax = temp_file("syntax.json", "{not json");
    CHECK(run({"ratio", "--graphon", syntax}).code == kExitInvalid);
    CHECK(run({"ratio", "--graphon", "/nonexistent/w.json"}).code == kExitInvalid);

    CHECK(run({"ratio", "--graphon", bad, "--frobnicate"}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"kpartite", "--graphon", bad}).code == kExitUsage);

    auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("polyton") != std::string::npos);
    CHECK(run({"--help"}).code == 0);

    // capacity errors share exit code 2
    const auto p = Partition::uniform(3);
    RationalMatrix eye(3, 3);
    for (std::size_t i = 0; i < 3; ++i) eye(i, i) = 1;
    auto kernel = temp_file("eye.json", to_json(StepKernel(p, p, eye)).dump());
    auto cap = run({"cutnorm", "--kernel", kernel, "--max-blocks", "2"});
    CHECK(cap.code == kExitInvalid);
    CHECK(Json::parse(cap.err)["kind"] == "capacity");
    CHECK(run({"cutnorm", "--kernel", kernel, "--exact", "--heuristic"}).code == kExitUsage);
}

TEST_CASE("cli structure and cut norm commands")
{
    std::vector<std::vector<Rational>> c5(5, std::vector<Rational>(5, 0));
    for (std::size_t i = 0; i < 5; ++i) c5[i][(i + 1) % 5] = c5[(i + 1) % 5][i] = 1;
    auto w = make_graphon(std::vector<Rational>(5, q(1, 5)), c5);
    auto path = graphon_file("c5.json", w);

    auto b = run({"bipartite", "--graphon", path}).json();
    CHECK(b["bipartite"] == false);
    CHECK(b["witness"]["blocks"].size() == 5);
    CHECK(run({"kpartite", "--graphon", path, "-k", "2"}).json()["colorable"] == false);
    CHECK(run({"kpartite", "--graphon", path, "-k", "3", "--threads", "1"}).json()["colorable"] == true);
    CHECK(run({"density", "--graphon", path, "--motif", "C5"}).json()["density"] == "2/625");
    CHECK(run({"cutdist", "--a", path, "--b", path}).json()["upper_bound"] == "0");

    auto cover = temp_file("half.json", to_json(StepCover::constant(w.partition(), q(1, 2))).dump());
    auto h = run({"hull-test", "--graphon", path, "--cover", cover}).json();
    CHECK(h["member"] == false);
    CHECK(h["functional"].size() == 5);

    auto verts = run({"cover-vertices", "--graphon", path, "--classify"}).json();
    CHECK(verts["count"] == extreme_covers(w).size());
    for (const auto& v : verts["vertices"]) {
        auto c = cover_from_json({{"measures", to_json(w.partition().measures())}, {"values", v["values"]}});
        CHECK(is_cover(c, w));
    }

    auto checker = temp_file("checker.json", R"({"measures": ["1/2", "1/2"], "values": [[1, -1], [-1, 1]]})");
    CHECK(run({"cutnorm", "--kernel", checker}).json()["value"] == "1/4");
    auto heur = run({"cutnorm", "--kernel", checker, "--heuristic", "--restarts", "3", "--seed", "5"}).json();
    CHECK(heur["method"] == "heuristic");
    CHECK(heur["lower_bound"] == "1/4");
}

TEST_CASE("cli transfer matches the library")
{
    auto w = make_graphon({q(1, 2), q(1, 2)}, {{0, 1}, {1, q(1, 3)}});
    auto m = matching_ratio(w).witness.matching;
    auto wp = graphon_file("tw.json", w);
    auto mp = temp_file("tm.json", to_json(m).dump());
    auto r = run({"transfer", "--w", wp, "--m", mp, "--u", wp, "--eps", "0.1"});
    REQUIRE(r.code == 0);
    auto j = r.json();
    auto lib = transfer_matching(w, m, w, q(1, 10));
    CHECK(kernel_from_json(j["m_U"]) == lib.m_U);
    CHECK(j["plan"]["delta"] == to_string(lib.plan.delta));
    CHECK(j["plan"]["eps"] == "1/10");
    CHECK(j["valid"] == true);
    CHECK(j["is_matching"] == true);

    CHECK(run({"transfer", "--w", wp, "--m", mp, "--u", wp, "--eps", "0"}).code == kExitInvalid);
}

TEST_CASE("cli sample and converge")
{
    auto kb = make_graphon({q(1, 2), q(1, 2)}, {{0, 1}, {1, 0}});
    auto path = graphon_file("kb.json", kb);
    auto out = std::filesystem::temp_directory_path() / "polyton_cli_tests" / "g.json";
    auto r = run({"sample", "--graphon", path, "-n", "12", "--seed", "7", "--out", out.string()});
    REQUIRE(r.code == 0);
    auto g = read_json_file(out.string());
    auto lib = sample_wrandom(kb, 12, 7);
    CHECK(g["edges"].size() == lib.edges.size());
    CHECK(g["blocks"].get<std::vector<std::size_t>>() == lib.blocks);
    CHECK(r.json()["edge_density"] == to_string(edge_density(lib)));

    auto csv = std::filesystem::temp_directory_path() / "polyton_cli_tests" / "c.csv";
    auto c = run({"converge", "--graphon", path, "--ns", "20,10", "--seeds", "1..3", "--csv", csv.string()});
    REQUIRE(c.code == 0);
    auto j = c.json();
    CHECK(j["nu_w"] == "1/2");
    CHECK(j["rows"].size() == 6);
    CHECK(j["rows"][0]["n"] == 10);
    std::ifstream f(csv);
    std::string header;
    std::getline(f, header);
    CHECK(header == "n,seed,nu,tau,abs_error,cover_slack");
    std::size_t lines = 0;
    for (std::string line; std::getline(f, line);) ++lines;
    CHECK(lines == 6);

    CHECK(run({"converge", "--graphon", path, "--ns", "10", "--seeds", "5..2"}).code == kExitInvalid);
    CHECK(run({"converge", "--graphon", path, "--ns", "ten", "--seeds", "1"}).code == kExitInvalid);
}
