#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trijd/cli.hpp"
#include "trijd/errors.hpp"
#include "trijd/instance.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace trijd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("trijd_cli_test_" + std::to_string(::getpid())))
    {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }

    std::string write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path / name, std::ios::binary) << text;
        return (path / name).string();
    }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "trijd");
    std::vector<char*> argv;
    for (auto& a : args)
        argv.push_back(a.data());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("presets")
{
    auto names = preset_names();
    CHECK(names.size() >= 9);
    for (const char* required : {"ut2_f2", "ut2_f3", "ut3_f2", "ut3_f3", "ut3_f5", "ut2_z4", "ut3_z6",
                                 "nonfaithful_m0", "mixed_mod"})
        CHECK(std::find(names.begin(), names.end(), required) != names.end());
    for (const auto& name : names) {
        InstanceFile inst = preset(name);
        std::string text = serialize_instance(inst);
        InstanceFile again = parse_instance(text);
        CHECK(again == inst);
        CHECK(serialize_instance(again) == text);
        CHECK(instance_digest(again) == instance_digest(inst));
        CHECK_NOTHROW(build_instance(inst));
    }
    CHECK(instance_digest(preset("ut2_f2")) != instance_digest(preset("ut2_f3")));
    CHECK_THROWS_AS(preset("ut9_f9"), std::invalid_argument);
}

TEST_CASE("shipped preset files match the gallery")
{
    for (const auto& name : preset_names()) {
        const fs::path file = fs::path(TRIJD_SOURCE_DIR) / "presets" / (name + ".json");
        INFO(file.string());
        REQUIRE(fs::exists(file));
        CHECK(load_instance(file.string()) == preset(name));
    }
}

TEST_CASE("instance parsing rejects malformed documents")
{
    const std::string good = serialize_instance(preset("ut2_f3"));
    CHECK_NOTHROW(parse_instance(good));
    CHECK_THROWS_AS(parse_instance("{\"n\": 2,"), FormatError);
    CHECK_THROWS_AS(parse_instance("[]"), FormatError);

    auto edited = [&](auto&& edit) {
        auto doc = nlohmann::json::parse(good);
        edit(doc);
        return doc.dump();
    };
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["colour"] = "red"; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["rings"][0]["extra"] = 1; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["modules"].erase("1,2"); })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["modules"]["2,1"] = d["modules"]["1,2"]; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["modules"]["1,2"]["left"] = "twist"; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["rings"][0]["kind"] = "field"; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["n"] = -2; })), FormatError);
    CHECK_THROWS_AS(parse_instance(edited([](auto& d) { d["caps"] = {{"speed", 1}}; })), FormatError);

    const std::string three = serialize_instance(preset("ut3_f3"));
    auto doc = nlohmann::json::parse(three);
    doc["comps"].erase("1,2,3");
    CHECK_THROWS_AS(parse_instance(doc.dump()), FormatError);
}

TEST_CASE("shorthand expansion and explicit tables build the same ring")
{
    InstanceFile shorthand = preset("ut2_f3");
    InstanceFile tables = shorthand;
    Table mult(3, std::vector<std::uint32_t>(3));
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t x = 0; x < 3; ++x)
            mult[a][x] = a * x % 3;
    tables.modules[{1, 2}].left = {"", mult};
    tables.modules[{1, 2}].right = {"", mult};
    TriMatSpec a = build_instance(shorthand), b = build_instance(tables);
    for (std::uint64_t x = 0; x < a.size(); ++x)
        for (std::uint64_t y = 0; y < a.size(); ++y)
            REQUIRE(mul(a, a.element_at(x), a.element_at(y)) == mul(b, b.element_at(x), b.element_at(y)));
}

TEST_CASE("validate exit codes")
{
    TempDir dir;
    Run ok = run({"validate", "preset:ut2_f3"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("valid: n=2 |T|=27") != std::string::npos);

    // Right action 2 acts as the identity: (m)(1+1) != m + m.
    InstanceFile broken = preset("ut2_f3");
    Table right(3, std::vector<std::uint32_t>(3));
    for (std::uint32_t x = 0; x < 3; ++x)
        for (std::uint32_t r = 0; r < 3; ++r)
            right[x][r] = r == 2 ? x : x * r % 3;
    broken.modules[{1, 2}].right = {"", right};
    Run axiom = run({"validate", dir.write("broken.json", serialize_instance(broken))});
    CHECK(axiom.code == 2);
    CHECK(axiom.err.find("witness") != std::string::npos);

    // A composition map that breaks (m12 m23) m34 = m12 (m23 m34).
    InstanceFile assoc = preset("ut4_f2");
    assoc.comps[{1, 2, 3}] = {"zero", {}};
    Run quad = run({"validate", dir.write("assoc.json", serialize_instance(assoc))});
    CHECK(quad.code == 2);
    CHECK(quad.err.find("witness") != std::string::npos);

    CHECK(run({"validate", dir.write("bad.json", "{\"n\": 2,")}).code == 3);
    CHECK(run({"validate", (dir.path / "missing.json").string()}).code == 3);
    CHECK(run({"validate", "preset:nope"}).code == 3);
    CHECK(run({"frobnicate"}).code == 3);
}

TEST_CASE("solve")
{
    Run r = run({"solve", "preset:ut2_f3", "--kind", "deriv", "--oracle"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["oracle"]["match"] == true);
    CHECK(doc["oracle"]["maps_enumerated"] == 19683);
    CHECK(doc["space"]["cardinality"] == "9");

    Run j = run({"solve", "preset:ut2_f3", "--kind", "jordan-lin"});
    CHECK(nlohmann::json::parse(j.out)["space"]["cardinality"] == "9");

    Run cap = run({"solve", "preset:ut3_f3", "--oracle"});
    CHECK(cap.code == 4);
    CHECK(cap.err.find("exceeds cap") != std::string::npos);

    CHECK(run({"--element-cap", "100", "solve", "preset:ut3_f3", "--kind", "jordan-sq"}).code == 4);
    CHECK(run({"solve", "preset:ut2_f3", "--kind", "jordan"}).code == 3);
}

TEST_CASE("compare and lemmas")
{
    Run c = run({"compare", "preset:ut3_f5"});
    REQUIRE(c.code == 0);
    CHECK(nlohmann::json::parse(c.out)["compare"]["equal"] == true);

    Run f2 = run({"compare", "preset:ut2_f2"});
    REQUIRE(f2.code == 0);
    auto cmp = nlohmann::json::parse(f2.out)["compare"];
    CHECK(cmp["derivation_subset_jordan"] == true);
    for (const auto& w : cmp["counterexamples"])
        CHECK(w["reverified"] == true);

    Run l = run({"lemmas", "preset:ut2_f3"});
    REQUIRE(l.code == 0);
    auto doc = nlohmann::json::parse(l.out);
    CHECK(doc["failures"] == 0);
    CHECK(!doc["lemmas"].empty());
}

TEST_CASE("reports are reproducible")
{
    TempDir dir;
    const std::string a = (dir.path / "a.json").string(), b = (dir.path / "b.json").string();
    REQUIRE(run({"report", "preset:ut2_z4", "-o", a}).code == 0);
    REQUIRE(run({"--threads", "4", "report", "preset:ut2_z4", "-o", b}).code == 0);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(a) == slurp(b));
    auto doc = nlohmann::json::parse(slurp(a));
    CHECK(doc["instance"]["digest"] == instance_digest(preset("ut2_z4")));
    CHECK(doc["spaces"].size() == 4);
    CHECK(doc.find("timing_ms") == doc.end());

    cli::Options seeded;
    seeded.seed = 99;
    CHECK(nlohmann::json::parse(cli::build_report(preset("ut2_f2"), seeded))["seed"] == 99);
}

TEST_CASE("presets command writes files")
{
    TempDir dir;
    Run r = run({"presets", "--write", dir.path.string()});
    REQUIRE(r.code == 0);
    for (const auto& name : preset_names()) {
        CHECK(r.out.find(name) != std::string::npos);
        CHECK(load_instance((dir.path / (name + ".json")).string()) == preset(name));
    }
}
