#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "curvflow/graph.hpp"
#include "support.hpp"

using namespace curvflow;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path scratch() {
    fs::path p = fs::temp_directory_path() / "curvflow_cli_tests";
    fs::create_directories(p);
    return p;
}

CliResult run_cli(const std::string& args) {
    fs::path out = scratch() / "stdout.txt";
    fs::path err = scratch() / "stderr.txt";
    std::string cmd = std::string(CURVFLOW_CLI_PATH) + " " + args + " >" + out.string() +
                      " 2>" + err.string();
    int status = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    int code = status < 0 ? -1 : (status >> 8) & 0xff;
    return {code, slurp(out), slurp(err)};
}

std::string write_graph(const DirectedWeightedGraph& g, const std::string& name) {
    fs::path p = scratch() / name;
    std::ofstream f(p);
    f << graph_to_json(g);
    return p.string();
}

}  // namespace

TEST_CASE("curvature curc on K3 prints the expected values") {
    auto path = write_graph(complete_graph(3), "k3.json");
    auto r = run_cli("curvature --kind curc " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"kappa\":0.5") != std::string::npos);
    CHECK(r.out.find("\"mean\":0.5") != std::string::npos);
}

TEST_CASE("curvature accepts an edge list too") {
    fs::path p = scratch() / "k3.edges";
    {
        std::ofstream f(p);
        f << "# complete graph on three vertices\n";
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) f << i << " " << j << " 1.0\n";
    }
    auto r = run_cli("curvature " + p.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"kappa\":0.5") != std::string::npos);
}

TEST_CASE("pair selection and csv output") {
    auto path = write_graph(asym_two_cycle(), "asym.json");
    auto r = run_cli("curvature --pairs 0,1 --csv " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("x,y,kappa") == 0);
    CHECK(r.out.find("0,1,-1") != std::string::npos);
    CHECK(r.out.find("1,0,") == std::string::npos);
}

TEST_CASE("--out writes the same bytes as stdout") {
    auto path = write_graph(complete_graph(3), "k3.json");
    auto direct = run_cli("perron " + path);
    fs::path outfile = scratch() / "perron.json";
    auto r = run_cli("perron --out " + outfile.string() + " " + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(outfile);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == direct.out);
    CHECK(direct.out.find("0.333333333333") != std::string::npos);
}

TEST_CASE("distance modes") {
    auto path = write_graph(asym_two_cycle(), "asym.json");
    auto limit = run_cli("distance --mode limit --format csv " + path);
    REQUIRE(limit.exit_code == 0);
    CHECK(limit.out == "0,0.5\n1,0\n");
    auto hop = run_cli("distance --mode hop --format csv " + path);
    CHECK(hop.out == "0,1\n1,0\n");
}

TEST_CASE("cheeger subcommand reports the region and the bound") {
    auto path = write_graph(complete_graph(3), "k3.json");
    auto r = run_cli("cheeger --x 0 --R 1 " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"region\":[1,2]") != std::string::npos);
    CHECK(r.out.find("\"I\":0.5") != std::string::npos);
    CHECK(r.out.find("\"bound_active\":false") != std::string::npos);
}

TEST_CASE("wl pair verdict on C6 vs two triangles") {
    auto c6 = write_graph(cycle_graph(6), "c6.json");
    auto tt = write_graph(two_triangles(), "tt.json");
    auto raw = run_cli("wl --feature adj --pair " + tt + " " + c6);
    REQUIRE(raw.exit_code == 0);
    CHECK(raw.out.find("\"distinguishable\":false") != std::string::npos);
    auto rich = run_cli("wl --feature rrwp:4 --pair " + tt + " " + c6);
    CHECK(rich.out.find("\"distinguishable\":true") != std::string::npos);
    CHECK(rich.out.find("\"witness_round\":1") != std::string::npos);
}

TEST_CASE("engine preset runs and emits omega plus the new state") {
    auto path = write_graph(path_graph(2), "p2.json");
    fs::path state = scratch() / "state.csv";
    {
        std::ofstream f(state);
        f << "1\n3\n";
    }
    auto r = run_cli("engine --preset gcn --state " + state.string() + " " + path);
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"h_out\":[[2.0],[2.0]]") != std::string::npos);
}

TEST_CASE("exit code 1 on domain errors") {
    auto r = run_cli("curvature /nonexistent/graph.json");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("error:") != std::string::npos);

    auto asym = write_graph(make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 0, 1.0}}),
                            "dir3.json");
    auto lb2r = run_cli("curvature --kind lb2 " + asym);
    CHECK(lb2r.exit_code == 1);
    CHECK(lb2r.err.find("symmetric support") != std::string::npos);

    auto disconnected = write_graph(make_graph(2, {{0, 1, 1.0}}), "oneway.json");
    auto dc = run_cli("curvature " + disconnected);
    CHECK(dc.exit_code == 1);
    CHECK(dc.err.find("strongly connected") != std::string::npos);
}

TEST_CASE("exit code 2 on usage errors and 0 on help") {
    auto path = write_graph(complete_graph(3), "k3.json");
    CHECK(run_cli("curvature --kind bogus " + path).exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    CHECK(run_cli("curvature").exit_code == 2);
    auto help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("curvature") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
    std::mt19937 rng(191);
    auto g = random_strong_digraph(rng, 7);
    auto path = write_graph(g, "rand7.json");
    for (std::string cmd : {std::string("curvature --kind curc "),
                            std::string("curvature --kind lb1 "),
                            std::string("perron --export mu "),
                            std::string("distance --format json ")}) {
        auto a = run_cli(cmd + path);
        auto b = run_cli(cmd + path);
        REQUIRE(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}
