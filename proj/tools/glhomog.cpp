#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hgl/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Homogenized surface tension of a periodic bistable medium"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_path, "JSON config file")
        ->required();
    return sub;
  };

  auto* sigma = add_config(
      app.add_subcommand("sigma", "Surface tension for listed directions"));
  auto* sweep = add_config(
      app.add_subcommand("sweep", "Direction sweep (Farey or listed)"));
  auto* convexity = add_config(app.add_subcommand(
      "convexity", "Angular derivatives and the convexity gap"));
  auto* metric = add_config(app.add_subcommand(
      "metric-slope", "Large-scale slope of the planar metric"));
  auto* wulff =
      add_config(app.add_subcommand("wulff", "Wulff shape polygon"));

  auto* oracle = app.add_subcommand(
      "oracle", "Variational cell-problem cross-check");
  std::string oracle_expr, oracle_p = "1,0", oracle_bc = "both";
  double oracle_T = 8.0, oracle_delta = 1.0 / 32.0;
  std::string oracle_config;
  oracle->add_option("-c,--config", oracle_config, "JSON config file");
  oracle->add_option("--expr", oracle_expr, "coefficient a(x1, x2)");
  oracle->add_option("--p", oracle_p, "integer direction, e.g. \"1,2\"");
  oracle->add_option("--T", oracle_T, "cube side");
  oracle->add_option("--delta", oracle_delta, "grid spacing");
  oracle->add_option("--bc", oracle_bc, "step | profile | both")
      ->check(CLI::IsMember({"step", "profile", "both"}));
  std::string oracle_out = ".";
  oracle->add_option("--out", oracle_out, "output directory");

  auto* selftest =
      app.add_subcommand("selftest", "Invariant battery (PASS/FAIL table)");
  std::string selftest_scope;
  selftest->add_option("scope", selftest_scope,
                       "optional scope: profile (residual tables)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selftest->parsed()) {
      hgl::RunConfig cfg;
      if (selftest_scope == "profile")
        return hgl::run_command("selftest profile", cfg);
      if (!selftest_scope.empty()) {
        std::cerr << "unknown selftest scope: " << selftest_scope << '\n';
        return 2;
      }
      return hgl::run_command("selftest", cfg);
    }
    if (oracle->parsed()) {
      hgl::RunConfig cfg;
      if (!oracle_config.empty()) cfg = hgl::load_config(oracle_config);
      if (!oracle_expr.empty()) cfg.expr = oracle_expr;
      if (cfg.expr.empty()) {
        std::cerr << "config error: missing required key \"medium.expr\" "
                     "(or pass --expr)\n";
        return 2;
      }
      if (oracle->count("--p") || cfg.p_list.empty()) {
        long long p1, p2;
        char comma;
        std::istringstream in(oracle_p);
        if (!(in >> p1 >> comma >> p2) || comma != ',') {
          std::cerr << "config error: --p expects \"p1,p2\"\n";
          return 2;
        }
        cfg.p_list = {{p1, p2}};
      }
      if (oracle->count("--T")) cfg.oracle_T = oracle_T;
      if (oracle->count("--delta")) cfg.oracle_delta = oracle_delta;
      if (oracle->count("--out")) cfg.out_dir = oracle_out;
      // bc selection is handled inside the runner (both rows are cheap
      // relative to one); "step"/"profile" restrict the printed rows.
      return hgl::run_command(oracle_bc == "both" ? "oracle"
                                                  : "oracle:" + oracle_bc,
                              cfg);
    }

    hgl::RunConfig cfg = hgl::load_config(config_path);
    std::string cmd;
    if (sigma->parsed()) cmd = "sigma";
    else if (sweep->parsed()) cmd = "sweep";
    else if (convexity->parsed()) cmd = "convexity";
    else if (metric->parsed()) cmd = "metric-slope";
    else if (wulff->parsed()) cmd = "wulff";
    return hgl::run_command(cmd, cfg);
  } catch (const hgl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
