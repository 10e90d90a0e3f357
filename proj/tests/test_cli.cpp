#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

const std::string kCli = TODA_CLI_PATH;
const std::string kData = TODA_TEST_DATA;

int run(const std::string& args, const std::string& out = "") {
    std::string cmd = kCli + " " + args;
    if (!out.empty()) cmd += " --out " + out;
    cmd += " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json load(const std::string& path) {
    std::ifstream in(path);
    return nlohmann::json::parse(in);
}

std::string tmp(const std::string& name) {
    return (std::ostringstream() << "cli_test_" << name << ".json").str();
}

}  // namespace

TEST_CASE("decide reports true with exit 0") {
    const auto out = tmp("decide");
    CHECK(run("decide --input " + kData + "/exists_equator.txt", out) == 0);
    const auto r = load(out);
    CHECK(r["result"]["truth"] == "true");
    CHECK(r["version"].is_string());
    CHECK(r["config"]["samples"] == 2000);
    CHECK(r["config"]["join_param"] == "m_plus_1");
    CHECK(r["timings"].contains("total_seconds"));
}

TEST_CASE("false and brute force") {
    CHECK(run("decide --input " + kData + "/exists_far.txt", tmp("far")) == 1);
    CHECK(run("brute --input " + kData + "/exists_far.txt", tmp("brute_far")) == 1);
    CHECK(run("brute --input " + kData + "/exists_equator.txt", tmp("brute_eq")) == 0);
}

TEST_CASE("usage errors exit 3 and still write a report") {
    const auto out = tmp("missing");
    CHECK(run("decide --input " + kData + "/no_such_file.txt", out) == 3);
    CHECK(load(out)["error"]["kind"] == "usage");
    CHECK(run("decide --input " + kData + "/malformed.txt", tmp("malformed")) == 3);
    CHECK(run("betti --input " + kData + "/annulus.txt --oracle nonsense", tmp("oracle")) == 3);
    CHECK(run("frobnicate") == 3);
    CHECK(run("verify --suite nonsense", tmp("suite")) == 3);
    CHECK(run("decide --input " + kData + "/annulus.txt", tmp("free")) == 3);
}

TEST_CASE("betti of an annulus") {
    const auto out = tmp("betti");
    CHECK(run("betti --box 2 --resolution 64 --input " + kData + "/annulus.txt", out) == 0);
    CHECK(load(out)["result"]["estimate"]["poincare"] == "1 + T");
}

TEST_CASE("verify duality suite") {
    const auto out = tmp("verify");
    CHECK(run("verify --suite duality", out) == 0);
    const auto r = load(out);
    CHECK(r["result"]["pass"] == true);
    CHECK(r["result"]["suites"][0]["passed"] == r["result"]["suites"][0]["total"]);
}

TEST_CASE("reports repeat except for timings") {
    const auto a = tmp("rep_a");
    const auto b = tmp("rep_b");
    run("reduce --input " + kData + "/exists_equator.txt", a);
    run("reduce --input " + kData + "/exists_equator.txt", b);
    auto ra = load(a);
    auto rb = load(b);
    for (auto* r : {&ra, &rb}) {
        r->erase("timings");
        (*r)["config"].erase("out");
    }
    CHECK(ra == rb);
}
