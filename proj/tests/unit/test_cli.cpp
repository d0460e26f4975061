#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "dieplan/service.hpp"
#include "dieplan/shapes.hpp"
#include "dieplan/stl_io.hpp"

namespace fs = std::filesystem;
using namespace dieplan;
using json = nlohmann::json;

namespace {

struct Run {
    int status = 0;
    std::string out;
    std::string err;
};

class Workdir {
public:
    Workdir() : dir_(fs::temp_directory_path() / ("dieplan-cli-" + std::to_string(::getpid()))) {
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Workdir() { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    Run cli(const std::string& args) const {
        const std::string out = path("stdout.txt"), err = path("stderr.txt");
        const std::string cmd = std::string("\"") + DIEPLAN_CLI_PATH + "\" " + args + " >\"" + out + "\" 2>\"" + err + "\"";
        const int raw = std::system(cmd.c_str());
        return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, read_file(out), read_file(err)};
    }

private:
    fs::path dir_;
};

const Workdir& work() {
    static const Workdir w;
    static const bool written = [] {
        write_file(w.path("die.stl"), write_stl_binary(shapes::synthetic_die({.segments = 60, .arc_step_deg = 10.0})));
        write_file(w.path("cube.stl"), write_stl_text(shapes::unit_cube()));
        return true;
    }();
    (void)written;
    return w;
}

}  // namespace

TEST_CASE("map writes the contact map and a ply") {
    const auto& w = work();
    const auto r = w.cli("map " + w.path("cube.stl") + " --ply " + w.path("cube.ply"));
    REQUIRE(r.status == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["artifact"] == "map");
    CHECK(doc["payload"]["per_facet"].size() == 12);
    CHECK(doc["payload"]["histogram"]["undercut"]["count"] == 2);
    CHECK(read_file(w.path("cube.ply")).rfind("ply\n", 0) == 0);
}

TEST_CASE("continuity honours the direction range") {
    const auto& w = work();
    const auto r = w.cli("continuity " + w.path("die.stl") + " --directions 0:170:10");
    REQUIRE(r.status == 0);
    CHECK(json::parse(r.out)["payload"]["directions"].size() == 18);
    CHECK(w.cli("continuity " + w.path("die.stl") + " --directions 0:170").status != 0);
}

TEST_CASE("bad input files fail with a structured error") {
    const auto& w = work();
    const auto missing = w.cli("map " + w.path("nope.stl"));
    CHECK(missing.status != 0);
    CHECK(json::parse(missing.err).contains("error"));
    write_file(w.path("junk.stl"), "solid junk\nfacet normal 0 0\n");
    const auto junk = w.cli("map " + w.path("junk.stl"));
    CHECK(junk.status != 0);
    CHECK(json::parse(junk.err)["error"]["code"] == "format");
    CHECK(w.cli("map " + w.path("cube.stl") + " --tau-draft 0.9").status != 0);
}

TEST_CASE("plan without associations names the missing artifact") {
    const auto& w = work();
    const auto r = w.cli("plan " + w.path("die.stl"));
    CHECK(r.status != 0);
    CHECK(r.err.find("missing associations") != std::string::npos);
    const auto gone = w.cli("plan --associations " + w.path("nothing.json"));
    CHECK(gone.status != 0);
    CHECK(json::parse(gone.err)["error"]["code"] == "missing_artifact");
}

TEST_CASE("chained stages detect stale artifacts") {
    const auto& w = work();
    REQUIRE(w.cli("segment " + w.path("die.stl") + " -o " + w.path("seg.json")).status == 0);
    REQUIRE(w.cli("associate --segmentation " + w.path("seg.json") + " -o " + w.path("assoc.json")).status == 0);
    // Another mesh against the same artifact.
    const auto other = w.cli("plan " + w.path("cube.stl") + " --associations " + w.path("assoc.json"));
    CHECK(other.status != 0);
    CHECK(json::parse(other.err)["error"]["code"] == "stale_artifact");
    // Same mesh but thresholds that change the association.
    const auto flags = w.cli("plan --associations " + w.path("assoc.json") + " --tau-flat 0.99 --single-tool corner-only");
    CHECK(flags.status != 0);
    CHECK(json::parse(flags.err)["error"]["code"] == "stale_artifact");
    // A segmentation artifact that disagrees with the flags.
    const auto seg = w.cli("associate --segmentation " + w.path("seg.json") + " --min-region-area 0.2");
    CHECK(seg.status != 0);
}

TEST_CASE("cli plan equals the service plan") {
    const auto& w = work();
    REQUIRE(w.cli("associate " + w.path("die.stl") + " -o " + w.path("assoc2.json")).status == 0);
    const auto plan = w.cli("plan --associations " + w.path("assoc2.json"));
    REQUIRE(plan.status == 0);
    CHECK(w.cli("plan --associations " + w.path("assoc2.json")).out == plan.out);

    Service svc;
    const auto created = svc.handle("POST", "/sessions", {}, read_file(w.path("die.stl")));
    REQUIRE(created.status == 201);
    const std::string id = json::parse(created.body)["session_id"];
    const auto served = svc.handle("GET", "/sessions/" + id + "/plan", {}, "");
    REQUIRE(served.status == 200);
    CHECK(served.body == plan.out);
}

TEST_CASE("version and usage errors") {
    const auto& w = work();
    CHECK(w.cli("--version").status == 0);
    CHECK(w.cli("").status != 0);
    CHECK(w.cli("map").status != 0);
    CHECK(w.cli("plan --order-by size --associations x").status != 0);
}
