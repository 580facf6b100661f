#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tweezer/errors.hpp"
#include "tweezer/io/config.hpp"
#include "tweezer/io/csv.hpp"
#include "tweezer/io/mode_table.hpp"
#include "tweezer/io/reports.hpp"
#include "tweezer/io/svg.hpp"

using namespace tweezer;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_SUITE("io") {

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tweezer_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("default configuration resolves") {
  const io::RunConfig c = io::resolve_config(json::object());
  CHECK(c.morse.D == 0.5);
  CHECK(c.kernel.n == 1600);
  CHECK(c.fit.init.empty());
  CHECK(c.optimize.lambda == -0.01);
  CHECK_FALSE(c.optimize.horizon.has_value());
  CHECK(c.survival.adiabaticity.margin == 0.1);
  CHECK(c.output.directory == "out");
  CHECK(c.source == io::default_config_json());
}

TEST_CASE("unknown keys and wrong types are rejected") {
  CHECK_THROWS_AS(io::resolve_config(json{{"morse", {{"d", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"extra", 1}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"survival", {{"adiabaticity", {{"margn", 0.2}}}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"kernel", {{"n", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"kernel", {{"n", 8}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"kernel", {{"n", 1600.5}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"optimize", {{"trajectory", "zero"}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"optimize", {{"lambda_sweep", {{"lo", -1}, {"hi", 1}}}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"fit", {{"init", {{"a1", 1}}}}}}), ConfigError);
}

TEST_CASE("referenced paths must exist") {
  CHECK_THROWS_AS(io::resolve_config(json{{"survival", {{"mode_table", "/nonexistent/modes.txt"}}}}), ConfigError);
  CHECK_THROWS_AS(io::resolve_config(json{{"survival", {{"superposition", true}}}}), ConfigError);
  const fs::path table = scratch("modes_ok.txt");
  std::ofstream(table) << "1.0 0.1 0.0 0.5\n";
  const io::RunConfig c =
      io::resolve_config(json{{"survival", {{"mode_table", table.string()}, {"superposition", true}}}});
  CHECK(c.survival.mode_table == table);
}

TEST_CASE("dotted overrides") {
  json cfg = json::object();
  io::apply_override(cfg, "optimize.lambda=1");
  io::apply_override(cfg, "output.directory=results");
  io::apply_override(cfg, "optimize.lambda_sweep={\"lo\": -1, \"hi\": -0.01, \"n\": 3}");
  io::apply_override(cfg, "output.svg=true");
  CHECK(cfg["optimize"]["lambda"] == 1);
  CHECK(cfg["output"]["directory"] == "results");
  CHECK(cfg["output"]["svg"] == true);
  const io::RunConfig c = io::resolve_config(cfg);
  CHECK(c.optimize.lambda == 1.0);
  REQUIRE(c.optimize.lambda_sweep.has_value());
  CHECK(c.optimize.lambda_sweep->n == 3);
  CHECK_THROWS_AS(io::apply_override(cfg, "novalue"), ConfigError);
  CHECK_THROWS_AS(io::apply_override(cfg, "a..b=1"), ConfigError);
}

TEST_CASE("config files and hashing") {
  const fs::path file = scratch("config.json");
  std::ofstream(file) << R"({"fit": {"t_max": 60}, "optimize": {"horizon": 2.0}})";
  const io::RunConfig a = io::load_config(file, {});
  CHECK(a.fit.t_max == 60.0);
  CHECK(a.optimize.horizon == 2.0);
  const io::RunConfig b = io::load_config(file, {"fit.t_max=70"});
  CHECK(b.fit.t_max == 70.0);
  CHECK(io::config_hash(a) == io::config_hash(io::load_config(file, {})));
  CHECK(io::config_hash(a) != io::config_hash(b));
  CHECK(io::config_hash(a) == io::config_hash(io::load_config(file, {"output.directory=elsewhere"})));
  CHECK_THROWS_AS(io::load_config(scratch("missing.json"), {}), ConfigError);
  std::ofstream(scratch("broken.json")) << "{ not json";
  CHECK_THROWS_AS(io::load_config(scratch("broken.json"), {}), ConfigError);
}

TEST_CASE("csv writing and reading") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(1e-300) == "1e-300");
  const fs::path p = scratch("table.csv");
  {
    io::CsvWriter w(p, {"t[reduced]", "a,b"});
    w.row({0.5, 1.0 / 3.0});
    w.row(std::vector<std::string>{"x\"y", "2"});
    CHECK_THROWS_AS(w.row({1.0}), ConfigError);
  }
  const std::string text = slurp(p);
  CHECK(text.rfind("t[reduced],\"a,b\"\r\n", 0) == 0);
  CHECK(text.find("\"x\"\"y\",2\r\n") != std::string::npos);
  {
    io::CsvWriter w(p, {"x", "y"});
    w.row({1.0 / 3.0, 2e-17});
  }
  const io::CsvTable t = io::read_csv(p);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][0] == 1.0 / 3.0);  // shortest round-trip form is exact
  CHECK(t.rows[0][1] == 2e-17);
  CHECK_THROWS_AS(io::CsvWriter(fs::path("/nonexistent/dir/x.csv"), {"a"}), ConfigError);
}

TEST_CASE("mode tables") {
  std::istringstream good("# k ReV ImV Omega\n\n1.0 0.1 -0.2 0.5  # first\n-2 0 0 1.5\n");
  const auto modes = io::parse_mode_table(good);
  REQUIRE(modes.size() == 2);
  CHECK(modes[0].V == Complex{0.1, -0.2});
  CHECK(modes[1].k == -2.0);
  std::istringstream short_row("1.0 0.1 0.5\n");
  CHECK_THROWS_WITH_AS(io::parse_mode_table(short_row, "m.txt"), doctest::Contains("m.txt:1"), ConfigError);
  std::istringstream text_row("\n1 0 0 1\nabc 0 0 1\n");
  CHECK_THROWS_WITH_AS(io::parse_mode_table(text_row, "m.txt"), doctest::Contains("m.txt:3"), ConfigError);
  std::istringstream extra("1 0 0 1 7\n");
  CHECK_THROWS_AS(io::parse_mode_table(extra), ConfigError);
  std::istringstream bad_omega("1 0 0 -1\n");
  CHECK_THROWS_AS(io::parse_mode_table(bad_omega), ConfigError);
  CHECK_THROWS_AS(io::read_mode_table("/nonexistent/modes.txt"), ConfigError);
}

TEST_CASE("reports embed the config") {
  DampedOscFit f;
  f.terms = {reference_fit_term()};
  f.t_max = 80.0;
  const json cfg = io::default_config_json();
  const json r = io::fit_report(f, cfg);
  CHECK(r["terms"][0]["a1"] == 0.5383);
  CHECK(r["config"] == cfg);
  const fs::path p = scratch("r.json");
  io::write_json(p, r);
  CHECK(json::parse(slurp(p)) == r);
}

TEST_CASE("svg plots") {
  const fs::path p = scratch("plot.svg");
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  io::write_line_plot(p, "title <&>", "x", "y", x, {{"a", {0.0, 1.0, 4.0, 9.0}}, {"b", {1.0, 1.0, 1.0, 1.0}}});
  const std::string svg = slurp(p);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("&lt;&amp;&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
}

}  // TEST_SUITE
