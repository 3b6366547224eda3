#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hgl/config.hpp"

using namespace hgl;

TEST_CASE("minimal config parses with defaults") {
  RunConfig cfg = parse_config_text(R"({"medium": {"expr": "1 + 0*x1"}})");
  CHECK(cfg.expr == "1 + 0*x1");
  CHECK(cfg.dim == 2);
  CHECK(cfg.delta == 1.0 / 64.0);
  CHECK(cfg.eps_tail == 1e-8);
  CHECK(cfg.workers == 1);
  CHECK(cfg.m_list == std::vector<int>{1, 2, 4, 8});
}

TEST_CASE("full config round trip") {
  RunConfig cfg = parse_config_text(R"({
    "medium": {"expr": "1 + 0.5*sin(2*pi*x1)^2", "dim": 2, "period": [1, 1]},
    "direction": {"p": [[1, 0], [1, 2]], "farey_max_denominator": 5},
    "numerics": {"delta": 0.03125, "eps_tail": 1e-9, "oracle_T": 6,
                 "oracle_delta": 0.0625, "m_list": [1, 2], "workers": 8},
    "output": {"directory": "/tmp/x", "json": true}})");
  CHECK(cfg.p_list.size() == 2);
  CHECK(cfg.p_list[1][1] == 2);
  CHECK(cfg.farey_max_denominator == 5);
  CHECK(cfg.delta == 0.03125);
  CHECK(cfg.oracle_T == 6.0);
  CHECK(cfg.workers == 8);
  CHECK(cfg.write_json);
  CHECK(cfg.out_dir == "/tmp/x");
}

TEST_CASE("missing expr names the key path") {
  try {
    parse_config_text(R"({"medium": {"dim": 2}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("medium.expr") != std::string::npos);
  }
}

TEST_CASE("unknown keys are rejected by path") {
  try {
    parse_config_text(R"({"medium": {"expr": "1", "exprs": "2"}})");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("medium.exprs") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text(R"({"mediums": {}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(
          R"({"medium": {"expr": "1"}, "numerics": {"deltas": 1}})"),
      ConfigError);
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS(parse_config_text("not json"), ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(R"({"medium": {"expr": "1", "dim": 5}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(
          R"({"medium": {"expr": "1"}, "numerics": {"delta": -0.1}})"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config_text(
          R"({"medium": {"expr": "1"}, "numerics": {"workers": 0}})"),
      ConfigError);
}

TEST_CASE("run_command validation failures exit with code 2") {
  RunConfig cfg;  // no expr
  CHECK(run_command("sigma", cfg) == 2);
  cfg.expr = "sin(2*pi*x1)";  // not positive
  CHECK(run_command("sigma", cfg) == 2);
  cfg.expr = "1 + 0*x1";
  CHECK(run_command("no-such-command", cfg) == 2);
}

TEST_CASE("sigma command writes the calibration row deterministically") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "hgl_cfg_test";
  fs::remove_all(dir);

  RunConfig cfg = parse_config_text(R"({
    "medium": {"expr": "1 + 0*x1"},
    "direction": {"p": [[1, 0]]},
    "numerics": {"delta": 0.03125}})");
  cfg.out_dir = (dir / "a").string();
  CHECK(run_command("sigma", cfg) == 0);
  cfg.out_dir = (dir / "b").string();
  CHECK(run_command("sigma", cfg) == 0);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
  };
  std::string a = slurp(dir / "a" / "sigma.csv");
  std::string b = slurp(dir / "b" / "sigma.csv");
  CHECK(a == b);  // byte-identical reruns
  CHECK(a.find("1.8856") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("config file loader") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "hgl_cfg_load.json";
  {
    std::ofstream out(p);
    out << R"({"medium": {"expr": "2 + 0*x2"}})";
  }
  RunConfig cfg = load_config(p.string());
  CHECK(cfg.expr == "2 + 0*x2");
  fs::remove(p);
  CHECK_THROWS_AS(load_config("/no/such/file.json"), ConfigError);
}
