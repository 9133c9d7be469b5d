#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlwlab/errors.hpp"
#include "nlwlab/experiment.hpp"

using namespace nlwlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nlwlab_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing with comments and overrides") {
    Config c = Config::parse("# header\nkind = tables\np = 2   # inline\n\np = 5\n");
    CHECK(c.values().at("kind") == "tables");
    CHECK(c.values().at("p") == "5");
    CHECK_THROWS_AS(Config::parse("just words\n"), UsageError);
}

TEST_CASE("resolve fills defaults and rejects bad keys") {
    ExperimentConfig r = resolve(Config::parse("kind = toda-sweep\nc1 = 2.5\n"));
    CHECK(r.kind == ExperimentKind::TodaSweep);
    CHECK(r.real("c1") == doctest::Approx(2.5));
    CHECK(r.real("s0") == doctest::Approx(1.0));
    CHECK(r.params.p == doctest::Approx(3.0));
    CHECK_THROWS_AS(resolve(Config::parse("kind = tables\nbogus = 1\n")), UsageError);
    CHECK_THROWS_AS(resolve(Config::parse("kind = tables\nc1 = 1\n")), UsageError);
    CHECK_THROWS_AS(resolve(Config::parse("kind = tables\np = abc\n")), UsageError);
    CHECK_THROWS_AS(resolve(Config::parse("kind = nothing\n")), UsageError);
    ExperimentConfig t = resolve(Config::parse("kind = tables\ngaps = 4, 6\n"));
    CHECK(t.reals("gaps") == std::vector<double>{4.0, 6.0});
}

TEST_CASE("manifest replays to the same configuration") {
    ExperimentConfig a = resolve(Config::parse("kind = pde-scan\npreset = gaussian-positive\ndx = 0.00390625\n"));
    ExperimentConfig b = resolve(Config::parse(manifest_text(a)));
    CHECK(a.resolved == b.resolved);
    CHECK(b.kind == ExperimentKind::PdeScan);
}

TEST_CASE("schema lists every kind") {
    const std::string s = schema_doc();
    for (const char* key : {"preset", "edge_cells", "coupling_cells", "gaps", "cone_n", "stress"})
        CHECK(s.find(key) != std::string::npos);
}

TEST_CASE("tables and toda-sweep runs write their artifacts") {
    for (const std::string kind : {"tables", "toda-sweep"}) {
        const fs::path out = scratch(kind);
        std::string text = "kind = " + kind + "\nout = " + out.string() + "\n";
        if (kind == "toda-sweep") text += "k_max = 3\ns_end = 2e4\n";
        RunResult r = run(resolve(Config::parse(text)));
        CHECK(r.status == 0);
        CHECK(fs::exists(out / "manifest.cfg"));
        REQUIRE(!r.artifacts.empty());
        for (const auto& a : r.artifacts) CHECK(fs::exists(out / a));
        fs::remove_all(out);
    }
}
