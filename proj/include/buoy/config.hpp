#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "buoy/measure.hpp"
#include "buoy/params.hpp"

namespace buoy {

/// Everything a CLI command needs. Heights and window bounds are lattice sites.
struct RunConfig {
  Model model = Model::fluid;
  PhysicalParams params;
  bool kappa_auto = true;  ///< kappa = default_kappa(params, L) when set

  int W = 0;  ///< lattice width; 0 means N
  int H = 300;
  long L = 300;
  long window_lo = 155;
  long window_hi = 205;
  long y0 = 180;

  double t_max = 1000.0;
  double stride = 1.0;
  double T = 10.0;
  int replicas = 4096;
  double dt = 1e-3;
  double tolerance = 1e-3;
  int max_iter = 40;
  long clip = 25;
  std::optional<double> bracket_hi;  ///< rod mass; default 2 m N

  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = "out.csv";
  std::string param = "N";
  std::string values;

  /// Range checks every field and the parameter set; throws ParamError.
  void validate() const;
  /// Parameters with kappa resolved.
  PhysicalParams resolved_params() const;
  Protocol protocol() const;
};

/// Names of all config keys, in the order emitted by to_text.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value; throws ParamError on unknown keys or bad values.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& config, const std::string& key);

/// Parses `key = value` lines with `#` comments. Unknown or repeated keys are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string to_text(const RunConfig& config);

}  // namespace buoy
