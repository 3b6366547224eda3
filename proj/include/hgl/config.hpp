#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON run configuration. Schema (all blocks optional except medium):
//   {"medium":   {"expr": "...", "dim": 2, "period": [1,1]},
//    "direction":{"p": [[1,0],[1,2]], "angles_deg": [...],
//                 "farey_max_denominator": 8},
//    "numerics": {"delta": 0.015625, "eps_tail": 1e-8,
//                 "oracle_T": 8, "oracle_delta": 0.03125,
//                 "m_list": [1,2,4,8], "n_levels": 64,
//                 "wulff_halfplanes": 256, "workers": 1},
//    "output":   {"directory": ".", "json": false,
//                 "dump_distance_field": false}}
// Unknown keys are rejected; offending keys are named in the error.
struct RunConfig {
  std::string expr;
  int dim = 2;
  std::vector<double> period;

  std::vector<std::array<long long, 2>> p_list;
  std::vector<double> angles_deg;
  int farey_max_denominator = 0;

  double delta = 1.0 / 64.0;
  double eps_tail = 1e-8;
  double oracle_T = 8.0;
  double oracle_delta = 1.0 / 32.0;
  std::vector<int> m_list = {1, 2, 4, 8};
  int n_levels = 64;
  int wulff_halfplanes = 256;
  int workers = 1;

  std::string out_dir = ".";
  bool write_json = false;
  bool dump_distance_field = false;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Command dispatch; returns the process exit code:
// 0 success, 2 validation error, 3 numerical non-convergence.
int run_command(const std::string& command, const RunConfig& cfg);

}  // namespace hgl
