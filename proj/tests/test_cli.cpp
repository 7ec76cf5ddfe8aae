#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "treeqm/commands.hpp"

using namespace treeqm;
using json = nlohmann::json;

namespace {

  std::filesystem::path instance(std::string const& name) {
    return std::filesystem::path(TREEQM_INSTANCE_DIR) / (name + ".json");
  }

  std::filesystem::path fresh_dir(std::string const& name) {
    auto dir = std::filesystem::temp_directory_path() / ("treeqm-test-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
  }

  RunConfig config_for(std::string const& name) {
    RunConfig c;
    c.instance_path = instance(name);
    c.use_cache     = false;
    c.threads       = 1;
    return c;
  }

}  // namespace

TEST_CASE("inspect") {
  auto c = config_for("s3_z2_z4");
  c.kmax = 4;
  auto r = cmd_inspect(c);
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.text);
  CHECK(j["double_cosets"]["C\\A/C"] == 2);
  CHECK(j["double_cosets"]["B/C"] == 2);
  CHECK(j["double_cosets"]["fujiwara_criterion"] == "not satisfied");
  CHECK(j["tree"]["suppression"]["hidden_type"] == "B");
  CHECK(j["orbit_counts"][2]["orbit"] == 2);
  CHECK(j["seed"] == 0);
  CHECK(j["instance"]["hash"].is_string());
  CHECK(j["minimality"].get<std::string>().find("asserted") == 0);

  auto z = json::parse(cmd_inspect(config_for("z5_z2")).text);
  CHECK(z["double_cosets"]["C\\A/C"] == 5);
  CHECK(z["double_cosets"]["fujiwara_criterion"] == "satisfied");
  CHECK(z["raw_metric2_BB_orbits"].get<int>() >= 2);

  auto fc = config_for("f2");
  fc.kmax = 2;
  auto f  = json::parse(cmd_inspect(fc).text);
  CHECK(f["tree"]["suppression"]["hidden_type"].is_null());
  CHECK(f["orbit_counts"][0]["metric"] == 4);
  CHECK(f["orbit_counts"][0]["orbit"] == 4);
  CHECK_FALSE(f.contains("double_cosets"));
}

TEST_CASE("inspect reports a truncated table on a small budget") {
  auto c   = config_for("f2");
  c.kmax   = 6;
  c.budget = 500;
  auto r   = cmd_inspect(c);
  CHECK(r.exit_code == exit_code::inconclusive);
  auto j = json::parse(r.text);
  CHECK(j["orbit_counts_truncated"] == true);
  CHECK(j["orbit_counts"][5]["metric"].is_null());
}

TEST_CASE("classify") {
  auto c = config_for("s3_z2_z4");
  c.kmax = 6;
  auto r = cmd_classify(c);
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.text);
  CHECK(j["certificate"]["verdict"] == "CaseIII");
  CHECK(j["certificate"]["k"] == 3);
  CHECK(j["certificate"]["provenance"] == "3a");

  auto f = json::parse(cmd_classify(config_for("f2")).text);
  CHECK(f["certificate"]["verdict"] == "CaseIII");
  CHECK(f["certificate"]["provenance"] == "1a");

  auto z = config_for("z5_z2");
  z.kmax = 1;
  auto zr = json::parse(cmd_classify(z).text);
  CHECK(zr["certificate"]["note"].get<std::string>().find("increase kmax") != std::string::npos);

  auto raw = config_for("s3_z2_z4");
  raw.view = ViewMode::raw;
  CHECK(cmd_classify(raw).exit_code == exit_code::input);

  auto csv = config_for("z5_z2");
  csv.kmax   = 6;
  csv.format = OutputFormat::csv;
  auto cr    = cmd_classify(csv);
  CHECK(cr.text.find("CaseIII,3a,2,1 4") != std::string::npos);
}

TEST_CASE("qm") {
  auto c     = config_for("f2");
  c.elements = {"e", "x y", "y^-1 x^-1", "x^3"};
  auto j     = json::parse(cmd_qm(c).text);
  CHECK(j["spec"]["key"] == "F>1+");
  CHECK(j["values"][0]["f"] == 0);
  CHECK(j["values"][1]["f"] == 1);
  CHECK(j["values"][2]["f"] == -1);
  CHECK(j["values"][3]["f"] == 3);

  auto s     = config_for("s3_z2_z4");
  s.elements = {"e"};
  CHECK(json::parse(cmd_qm(s).text)["values"][0]["f"] == 0);

  c.elements = {"q"};
  CHECK(cmd_qm(c).exit_code == exit_code::input);
  c.elements = {};
  c.segment  = "e";
  CHECK(cmd_qm(c).exit_code == exit_code::input);
}

TEST_CASE("defect") {
  auto c    = config_for("s3_z2_z4");
  c.radius  = 1;
  c.segment = "B:1 A:120 B:1 A:120 B:1";
  auto r    = cmd_defect(c);
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.text);
  CHECK(j["median_support"]["violations"] == 0);
  CHECK(j["max_defect"].get<int>() >= 0);
  CHECK(j["argmax"]["g"].is_string());

  c.sample = 200;
  c.seed   = 7;
  auto a   = cmd_defect(c);
  auto b   = cmd_defect(c);
  CHECK(a.text == b.text);
  CHECK(json::parse(a.text)["scan"]["pairs"] == 200);
}

TEST_CASE("witness") {
  auto c = config_for("f2");
  c.kmax = 6;
  auto r = cmd_witness(c);
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.text);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["matrix"].size() == 16);
  CHECK(j["witnesses"][0]["words"][0].get<std::string>().size() == 1 + 24 + 1 + 25 + 1 + 26 + 1 + 27 + 1 + 28);
  CHECK(j["scope"].is_string());

  c.words = WordFamilyParams{4, 4};
  auto bad = cmd_witness(c);
  CHECK(bad.exit_code == exit_code::input);
  CHECK(json::parse(bad.text)["error"] == "ParamsTooSmall");

  c.words  = WordFamilyParams{};
  c.budget = 50;
  CHECK(cmd_witness(c).exit_code == exit_code::inconclusive);
}

TEST_CASE("input errors") {
  auto c          = config_for("f2");
  c.instance_path = "/nonexistent/instance.json";
  CHECK(cmd_inspect(c).exit_code == exit_code::input);
  auto dir  = fresh_dir("bad");
  auto file = dir / "bad.json";
  std::ofstream(file) << "{\"kind\": \"amalgam\", \"A\": \"sym:3\"";
  c.instance_path = file;
  auto r          = cmd_classify(c);
  CHECK(r.exit_code == exit_code::input);
  CHECK(json::parse(r.text)["error"] == "ParseError");
  CHECK(run_command("bogus", config_for("f2")).exit_code == exit_code::input);

  // both factors of index 2: the tree is a line
  std::ofstream(dir / "line.json")
      << R"({"kind": "amalgam", "A": "cyclic:2", "B": "cyclic:2", "C": "cyclic:1",)"
      << R"( "embedA": {"0": "0"}, "embedB": {"0": "0"}})";
  c.instance_path = dir / "line.json";
  auto line       = cmd_inspect(c);
  CHECK(line.exit_code == exit_code::input);
  CHECK(json::parse(line.text)["error"] == "DegenerateTree");
}

TEST_CASE("reports are deterministic and the cache does not change them") {
  auto dir = fresh_dir("cache");
  for (std::string name : {"s3_z2_z4", "z5_z2", "f2"}) {
    auto c      = config_for(name);
    c.kmax      = 5;
    auto cold   = cmd_inspect(c);
    c.use_cache = true;
    c.cache_dir = dir;
    auto fill   = cmd_inspect(c);
    auto warm   = cmd_inspect(c);
    CHECK(cold.text == fill.text);
    CHECK(cold.text == warm.text);
    auto k1     = cmd_classify(c);
    c.use_cache = false;
    auto k2     = cmd_classify(c);
    CHECK(k1.text == k2.text);
  }
  CHECK_FALSE(std::filesystem::is_empty(dir));
}

TEST_CASE("rerooting") {
  auto c   = config_for("s3_z2_z4");
  c.root_b = true;
  // base [B] has valence 2, so the suppressed view refuses it
  auto r = cmd_inspect(c);
  CHECK(r.exit_code == exit_code::input);
  CHECK(json::parse(r.text)["error"] == "DegenerateTree");
  c.view = ViewMode::raw;
  c.kmax = 2;
  auto j = json::parse(cmd_inspect(c).text);
  CHECK(j["root"] == "B");
  CHECK(j["tree"]["raw_valence"]["A"] == 2);
}
