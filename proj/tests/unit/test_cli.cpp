#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "collabminer/cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cm::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("collabminer_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kHeader = "case,act,timestamp,c,rs,s,r\n";

}  // namespace

TEST_CASE("validate") {
    auto dir = scratch("validate");
    spit(dir / "empty.csv", kHeader);
    auto r = run({"validate", "--in", (dir / "empty.csv").string()});
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["r1_ok"] == true);
    CHECK(j["r2_ok"] == true);

    spit(dir / "bad.csv", std::string(kHeader) + "1,,2020-01-01T00:00:00,A,,,\n");
    r = run({"validate", "--in", (dir / "bad.csv").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("no activity") != std::string::npos);

    spit(dir / "solo.csv", std::string(kHeader) + "1,a,2020-01-01T00:00:00,A,,,\n");
    r = run({"validate", "--in", (dir / "solo.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning: case 1 shows no collaboration") != std::string::npos);
}

TEST_CASE("usage and input errors exit with 2") {
    auto dir = scratch("errors");
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"validate", "--in", (dir / "missing.csv").string()}).code == 2);
    spit(dir / "broken.csv", "case,act\n1,a\n");
    CHECK(run({"validate", "--in", (dir / "broken.csv").string()}).code == 2);
    CHECK(run({"export", "--scenario", "sync_only"}).code == 2);
    CHECK(run({"export", "--scenario", "nope", "--out", (dir / "x.pnml").string()}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("discover rejects logs without concepts") {
    auto dir = scratch("hard");
    spit(dir / "log.csv", std::string(kHeader) + "1,a,2020-01-01T00:00:00,,,,\n");
    auto r = run({"discover", "--in", (dir / "log.csv").string(), "--out", (dir / "m.pnml").string()});
    CHECK(r.code == 1);
    CHECK_FALSE(fs::exists(dir / "m.pnml"));
}

TEST_CASE("export, playout, discover, conform") {
    auto dir = scratch("pipeline");
    auto d = [&](const char* f) { return (dir / f).string(); };
    REQUIRE(run({"export", "--scenario", "all_types", "--out", d("truth.pnml")}).code == 0);
    REQUIRE(run({"playout", "--model", d("truth.pnml"), "--out", d("log.xes"), "-n", "200"}).code == 0);
    REQUIRE(run({"validate", "--in", d("log.xes")}).code == 0);
    auto r = run({"discover", "--in", d("log.xes"), "--out", d("found.pnml")});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "found.dot"));
    auto report = nlohmann::json::parse(slurp(dir / "found.report.json"));
    CHECK(report["concepts"].size() == 3);

    r = run({"conform", "--in", d("log.xes"), "--model", d("found.pnml"), "--alignment"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["fitness"] == 1.0);
    CHECK(j["alignment_fitness"] == 1.0);
    CHECK(j["final_reachable"] == "yes");

    r = run({"conform", "--in", d("log.xes"), "--model", d("found.pnml"), "--cap", "3"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["final_reachable"] == "unknown");

    REQUIRE(run({"project", "--in", d("log.xes"), "--concept", "Lab", "--out", d("lab.csv")}).code == 0);
    CHECK(slurp(dir / "lab.csv").rfind("case,act,timestamp", 0) == 0);

    r = run({"stats", "--in", d("log.xes")});
    REQUIRE(r.code == 0);
    auto stats = nlohmann::json::parse(r.out);
    CHECK(stats["log"]["traces"] == 200);
    CHECK(stats["pattern"]["resource_channels"] == 1);

    REQUIRE(run({"export", "--model", d("found.pnml"), "--out", d("found2.dot")}).code == 0);
    CHECK(slurp(dir / "found2.dot") == slurp(dir / "found.dot"));
    REQUIRE(run({"export", "--in", d("log.xes"), "--out", d("log.csv")}).code == 0);
    CHECK(run({"export", "--list-scenarios"}).out.find("all_types\t") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
    auto dir = scratch("determinism");
    auto d = [&](const std::string& f) { return (dir / f).string(); };
    REQUIRE(run({"export", "--scenario", "mixed_two_concepts", "--out", d("m.pnml")}).code == 0);
    for (const char* k : {"1", "2"}) {
        fs::create_directories(dir / k);
        auto sub = [&](const char* f) { return (dir / k / f).string(); };
        REQUIRE(run({"playout", "--model", d("m.pnml"), "--out", sub("log.csv"), "--seed", "5"}).code == 0);
        REQUIRE(run({"discover", "--in", sub("log.csv"), "--out", sub("found.pnml")}).code == 0);
    }
    for (const char* f : {"log.csv", "found.pnml", "found.dot", "found.report.json"}) {
        INFO(f);
        CHECK(slurp(dir / "1" / f) == slurp(dir / "2" / f));
    }
}
