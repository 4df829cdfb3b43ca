#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HYPENT_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string fixture(const std::string& name) { return std::string(HYPENT_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST_CASE("boxdim on the shipped Cantor cloud") {
    const auto r = run("--sequential boxdim " + fixture("cantor.csv"));
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["schema_version"] == 1);
    CHECK(j["config"]["resolution"].get<double>() > 0);
    CHECK(std::abs(j["result"]["value"].get<double>() - std::log(2.0) / std::log(3.0)) < 0.02);
}

TEST_CASE("pants on the binary tree respects the 2 pi / l bound") {
    const auto r = run("--sequential pants --kind binary --l 12 --depth 12 --m-exact 8 --m-heur 512");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out)["result"];
    CHECK(j["hP"]["value"].get<double>() <= 2 * M_PI / 12 + 1e-12);
    CHECK(j["profile"]["verdict"] == "nonamenable");
    CHECK(j.contains("spectral_chain"));
}

TEST_CASE("orbit on the shipped group file") {
    const auto r = run("--sequential orbit --group " + fixture("schottky.json") + " --R 12");
    REQUIRE(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["config"]["base"][1] == 1.0);
    CHECK(std::abs(j["result"]["delta"]["value"].get<double>() - 0.444) < 0.03);
}

TEST_CASE("malformed input gives a structured error with the line") {
    const std::string path = "cli_bad_cloud.csv";
    std::ofstream(path) << "x\n0.1\n0.2\nnot-a-number\n";
    const std::string cmd = std::string(HYPENT_CLI) + " boxdim " + path + " 2>&1 >/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string err;
    char buf[512];
    std::size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) err.append(buf, k);
    const int st = pclose(p);
    CHECK(WEXITSTATUS(st) == 2);
    const auto j = json::parse(err);
    CHECK(j["error"]["type"] == "ParseError");
    CHECK(j["error"]["line"] == 4);
    std::remove(path.c_str());
}

TEST_CASE("sequential reports are byte-identical") {
    const std::string args = "--sequential ucd " + fixture("cantor.csv") + " --samples 20";
    const auto a = run(args), b = run(args);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    const auto j = json::parse(a.out);
    CHECK(j["config"].contains("seed"));
    CHECK(j["result"]["bounded_type"].contains("verdict"));
}

TEST_CASE("verify exits zero on passing criteria") {
    const auto r = run("--sequential verify --criteria 1 2");
    CHECK(r.status == 0);
    const auto j = json::parse(r.out);
    CHECK(j["command"] == "verify");
}
