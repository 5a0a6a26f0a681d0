#include <doctest.h>

#include <filesystem>
#include <string>

#include "vortex/scenario.hpp"

using namespace vortex;
namespace fs = std::filesystem;

namespace {

Json minimal() {
  return Json::parse(R"({"name": "t", "domain": {"kind": "plane"}, "n": 5, "scheme": "equilibrium"})");
}

std::string config_error(const Json& doc) {
  try {
    parse_scenario(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("a minimal scenario parses") {
  const Scenario s = parse_scenario(minimal());
  CHECK(s.name == "t");
  CHECK(s.n == 5);
  CHECK(s.scheme == SchemeKind::Equilibrium);
  CHECK(s.domain.kind == DomainKind::Plane);
}

TEST_CASE("the shipped scenarios parse") {
  const fs::path dir = fs::path(VORTEX_SOURCE_DIR) / "scenarios";
  int count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().string());
    CHECK_NOTHROW(load_scenario(e.path().string()));
    ++count;
  }
  CHECK(count >= 5);
  const Scenario c = load_scenario((dir / "center_n5.json").string());
  CHECK(c.scheme == SchemeKind::FixedResonance);
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0].perturbed.has_value());
  CHECK(c.resonances.at(0).l == 11);
  CHECK(c.waypoints.size() == 1);
}

TEST_CASE("unknown keys name themselves") {
  Json d = minimal();
  d["colour"] = "blue";
  CHECK(config_error(d).find("colour") != std::string::npos);
  Json e = minimal();
  e["domain"]["radius"] = 3;
  CHECK(config_error(e).find("radius") != std::string::npos);
}

TEST_CASE("type and range errors") {
  Json d = minimal();
  d["n"] = "five";
  CHECK_FALSE(config_error(d).empty());
  d = minimal();
  d["n"] = 1;
  CHECK_FALSE(config_error(d).empty());
  d = minimal();
  d["scheme"] = "shooting";
  CHECK_FALSE(config_error(d).empty());
  d = minimal();
  d["domain"] = {{"kind", "disk"}, {"R", 0.5}};
  CHECK_FALSE(config_error(d).empty());
  d = minimal();
  d["resonances"] = Json::array({Json::array({6, 4})});
  CHECK(config_error(d).find("6:4") != std::string::npos);
}

TEST_CASE("scheme and domain must fit together") {
  Json d = minimal();
  d["scheme"] = "fixed-rn";
  d["mode"] = 1.7;
  CHECK(config_error(d).find("disk") != std::string::npos);

  d = minimal();
  d["scheme"] = "fixed-resonance";
  d["mode"] = 1.7;
  CHECK(config_error(d).find("center or sphere") != std::string::npos);

  d = minimal();
  d["scheme"] = "three-stage";
  CHECK(config_error(d).find("mode") != std::string::npos);

  d = Json::parse(R"({"domain": {"kind": "disk", "R": 6}, "scheme": "fixed-rn", "mode": 1.72,
                      "fixed_rn": {"r_n": 0.2, "R_stop": 7}})");
  CHECK(config_error(d).find("R_stop") != std::string::npos);

  d = Json::parse(R"({"domain": {"kind": "center", "mu": 1}, "scheme": "fixed-resonance", "mode": 1.4,
                      "resonances": [[11, 4]]})");
  CHECK(config_error(d).find("target") != std::string::npos);
}

TEST_CASE("mode selectors") {
  Json d = minimal();
  d["scheme"] = "three-stage";
  d["modes"] = Json::parse(R"([1.73, {"index": 2}, {"value": 1.73, "perturbed": 1.748}])");
  const Scenario s = parse_scenario(d);
  REQUIRE(s.modes.size() == 3);
  CHECK(*s.modes[0].value == 1.73);
  CHECK(*s.modes[1].index == 2);
  CHECK(*s.modes[2].perturbed == 1.748);
  d["mode"] = 1.0;
  CHECK(config_error(d).find("not both") != std::string::npos);
}

TEST_CASE("overrides") {
  Json d = minimal();
  apply_override(d, "n=6");
  apply_override(d, "domain.kind=disk");
  apply_override(d, "domain.R=4.5");
  apply_override(d, "numerics.intervals=60");
  apply_override(d, "name=a=b");
  const Scenario s = parse_scenario(d);
  CHECK(s.n == 6);
  CHECK(s.domain.kind == DomainKind::Disk);
  CHECK(s.domain.R == 4.5);
  CHECK(s.numerics.intervals == 60);
  CHECK(s.name == "a=b");
  CHECK_THROWS_AS(apply_override(d, "novalue"), ConfigError);
  CHECK_THROWS_AS(apply_override(d, "=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(d, "n.x=3"), ConfigError);
}

TEST_CASE("missing scenario files") {
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ConfigError);
  CHECK_THROWS_AS(table_report({"/nonexistent/a.json", "/nonexistent/b.json"}), ConfigError);
  try {
    table_report({"/nonexistent/a.json", "/nonexistent/b.json"});
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("a.json") != std::string::npos);
    CHECK(msg.find("b.json") != std::string::npos);
  }
  CHECK(table_report({}) == "label, n, l:m, parameter, T, T0, stability\n");
}

TEST_CASE("equilibrium runs produce the spectrum document") {
  Json d = minimal();
  d["domain"] = {{"kind", "disk"}, {"R", 6}};
  const RunOutput out = run_scenario(parse_scenario(d), Depth::Equilibrium);
  REQUIRE(out.files.count("equilibrium.json") == 1);
  const Json eq = Json::parse(out.files.at("equilibrium.json"));
  CHECK(eq.at("spectrum").size() == 10);
  CHECK_FALSE(out.summary.empty());
}

TEST_CASE("branch runs write tables and diagrams") {
  const Json d = Json::parse(R"({"domain": {"kind": "disk", "R": 6}, "n": 5, "scheme": "three-stage",
                                 "modes": [1.72371, 1.73111], "stage3": {"max_steps": 4},
                                 "numerics": {"intervals": 30}})");
  const RunOutput out = run_scenario(parse_scenario(d), Depth::Branch, 2);
  int csv = 0, svg = 0;
  for (const auto& [path, text] : out.files) {
    if (path.ends_with(".csv")) ++csv;
    if (path.ends_with(".svg")) {
      ++svg;
      CHECK(text.find("<svg") != std::string::npos);
    }
  }
  CHECK(csv >= 2);
  CHECK(svg >= 2);
  CHECK(out.files.count("mode1/figures/bifurcation.svg") == 1);
  CHECK(out.files.count("mode2/figures/bifurcation.svg") == 1);
}

TEST_CASE("a requested resonance that never appears is a numerical failure") {
  const Json d = Json::parse(R"({"domain": {"kind": "disk", "R": 6}, "n": 5, "scheme": "three-stage",
                                 "mode": 1.72371, "stage3": {"max_steps": 3}, "resonances": [[98, 1]]})");
  CHECK_THROWS_AS(run_scenario(parse_scenario(d), Depth::Resonance), StageError);
}
