#include "hgl/config.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

namespace hgl {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& block,
                const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + (block.empty() ? it.key()
                                                          : block + "." + it.key()) +
                        "\"");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "", {"medium", "direction", "numerics", "output"});

  RunConfig cfg;
  if (!j.contains("medium") || !j["medium"].contains("expr"))
    throw ConfigError("missing required key \"medium.expr\"");
  const json& med = j["medium"];
  check_keys(med, "medium", {"expr", "dim", "period"});
  cfg.expr = med["expr"].get<std::string>();
  if (med.contains("dim")) cfg.dim = med["dim"].get<int>();
  if (cfg.dim != 2 && cfg.dim != 3)
    throw ConfigError("\"medium.dim\" must be 2 or 3");
  if (med.contains("period")) {
    cfg.period = med["period"].get<std::vector<double>>();
    for (double p : cfg.period)
      if (!(p > 0.0)) throw ConfigError("\"medium.period\" entries must be positive");
  }

  if (j.contains("direction")) {
    const json& dir = j["direction"];
    check_keys(dir, "direction", {"p", "angles_deg", "farey_max_denominator"});
    if (dir.contains("p")) {
      for (const auto& pv : dir["p"]) {
        auto v = pv.get<std::vector<long long>>();
        if (v.size() != 2) throw ConfigError("\"direction.p\" entries must have 2 components");
        cfg.p_list.push_back({v[0], v[1]});
      }
    }
    if (dir.contains("angles_deg"))
      cfg.angles_deg = dir["angles_deg"].get<std::vector<double>>();
    if (dir.contains("farey_max_denominator")) {
      cfg.farey_max_denominator = dir["farey_max_denominator"].get<int>();
      if (cfg.farey_max_denominator < 1)
        throw ConfigError("\"direction.farey_max_denominator\" must be positive");
    }
  }

  if (j.contains("numerics")) {
    const json& num = j["numerics"];
    check_keys(num, "numerics",
               {"delta", "eps_tail", "oracle_T", "oracle_delta", "m_list",
                "n_levels", "wulff_halfplanes", "workers"});
    auto positive = [&](const char* key, double v) {
      if (!(v > 0.0))
        throw ConfigError(std::string("\"numerics.") + key + "\" must be positive");
      return v;
    };
    if (num.contains("delta")) cfg.delta = positive("delta", num["delta"].get<double>());
    if (num.contains("eps_tail"))
      cfg.eps_tail = positive("eps_tail", num["eps_tail"].get<double>());
    if (num.contains("oracle_T"))
      cfg.oracle_T = positive("oracle_T", num["oracle_T"].get<double>());
    if (num.contains("oracle_delta"))
      cfg.oracle_delta = positive("oracle_delta", num["oracle_delta"].get<double>());
    if (num.contains("m_list")) {
      cfg.m_list = num["m_list"].get<std::vector<int>>();
      for (int m : cfg.m_list)
        if (m < 1) throw ConfigError("\"numerics.m_list\" entries must be positive");
    }
    if (num.contains("n_levels"))
      cfg.n_levels = static_cast<int>(positive("n_levels", num["n_levels"].get<int>()));
    if (num.contains("wulff_halfplanes"))
      cfg.wulff_halfplanes = static_cast<int>(
          positive("wulff_halfplanes", num["wulff_halfplanes"].get<int>()));
    if (num.contains("workers"))
      cfg.workers = static_cast<int>(positive("workers", num["workers"].get<int>()));
  }

  if (j.contains("output")) {
    const json& out = j["output"];
    check_keys(out, "output", {"directory", "json", "dump_distance_field"});
    if (out.contains("directory")) cfg.out_dir = out["directory"].get<std::string>();
    if (out.contains("json")) cfg.write_json = out["json"].get<bool>();
    if (out.contains("dump_distance_field"))
      cfg.dump_distance_field = out["dump_distance_field"].get<bool>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_text(text);
}

}  // namespace hgl
