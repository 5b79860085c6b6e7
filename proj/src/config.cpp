#include "buoy/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace buoy {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ParamError("bad value for " + key + ": '" + text + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw ParamError("non-finite value for " + key);
  }
  return value;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Field {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field number(T RunConfig::*member) {
  return {[member](RunConfig& c, const std::string& v) { c.*member = parse_number<T>("", v); },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return exact(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

template <typename T>
Field param_number(T PhysicalParams::*member) {
  return {[member](RunConfig& c, const std::string& v) {
            c.params.*member = parse_number<T>("", v);
          },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return exact(c.params.*member);
            } else {
              return std::to_string(c.params.*member);
            }
          }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"model",
       {[](RunConfig& c, const std::string& v) { c.model = parse_model(v); },
        [](const RunConfig& c) { return model_name(c.model); }}},
      {"m", param_number(&PhysicalParams::m)},
      {"M", param_number(&PhysicalParams::M)},
      {"g", param_number(&PhysicalParams::g)},
      {"kT", param_number(&PhysicalParams::kT)},
      {"kappa",
       {[](RunConfig& c, const std::string& v) {
          if (v == "auto") {
            c.kappa_auto = true;
          } else {
            c.params.kappa = parse_number<double>("kappa", v);
            c.kappa_auto = false;
          }
        },
        [](const RunConfig& c) { return c.kappa_auto ? std::string("auto") : exact(c.params.kappa); }}},
      {"gamma", param_number(&PhysicalParams::gamma)},
      {"N", param_number(&PhysicalParams::N)},
      {"epsilon", param_number(&PhysicalParams::epsilon)},
      {"nu", param_number(&PhysicalParams::nu)},
      {"W", number(&RunConfig::W)},
      {"H", number(&RunConfig::H)},
      {"L", number(&RunConfig::L)},
      {"window_lo", number(&RunConfig::window_lo)},
      {"window_hi", number(&RunConfig::window_hi)},
      {"y0", number(&RunConfig::y0)},
      {"t_max", number(&RunConfig::t_max)},
      {"stride", number(&RunConfig::stride)},
      {"T", number(&RunConfig::T)},
      {"replicas", number(&RunConfig::replicas)},
      {"dt", number(&RunConfig::dt)},
      {"tolerance", number(&RunConfig::tolerance)},
      {"max_iter", number(&RunConfig::max_iter)},
      {"clip", number(&RunConfig::clip)},
      {"bracket_hi",
       {[](RunConfig& c, const std::string& v) {
          if (v == "auto") {
            c.bracket_hi.reset();
          } else {
            c.bracket_hi = parse_number<double>("bracket_hi", v);
          }
        },
        [](const RunConfig& c) {
          return c.bracket_hi ? exact(*c.bracket_hi) : std::string("auto");
        }}},
      {"seed", number(&RunConfig::seed)},
      {"threads", number(&RunConfig::threads)},
      {"out",
       {[](RunConfig& c, const std::string& v) { c.out = v; },
        [](const RunConfig& c) { return c.out; }}},
      {"param",
       {[](RunConfig& c, const std::string& v) { c.param = v; },
        [](const RunConfig& c) { return c.param; }}},
      {"values",
       {[](RunConfig& c, const std::string& v) { c.values = v; },
        [](const RunConfig& c) { return c.values; }}},
  };
  return table;
}

const Field& field(const std::string& key) {
  for (const auto& [name, f] : fields()) {
    if (name == key) return f;
  }
  throw ParamError("unknown config key '" + key + "'");
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : fields()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  const Field& f = field(key);
  try {
    f.set(config, value);
  } catch (const ParamError&) {
    throw ParamError("bad value for " + key + ": '" + value + "'");
  }
}

std::string get_config_value(const RunConfig& config, const std::string& key) {
  return field(key).get(config);
}

RunConfig parse_config(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParamError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ParamError("line " + std::to_string(number) + ": repeated key '" + key + "'");
    }
    set_config_value(base, key, value);
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParamError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

std::string to_text(const RunConfig& config) {
  std::string out;
  for (const auto& [name, f] : fields()) out += name + " = " + f.get(config) + "\n";
  return out;
}

PhysicalParams RunConfig::resolved_params() const {
  PhysicalParams p = params;
  if (kappa_auto) {
    p.kappa = default_kappa(p, model == Model::lattice2d ? H : static_cast<int>(L));
  }
  return p;
}

Protocol RunConfig::protocol() const {
  Protocol pr;
  pr.T = T;
  pr.replicas = replicas;
  pr.tolerance = tolerance;
  pr.max_iterations = max_iter;
  pr.clip = clip;
  pr.chain_length = model == Model::lattice2d ? H : L;
  pr.lattice_width = W;
  pr.dt = dt;
  pr.seed = seed;
  pr.threads = threads;
  return pr;
}

void RunConfig::validate() const {
  resolved_params().validate();
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ParamError(what);
  };
  require(W >= 0, "W must be >= 0");
  require(H >= 1, "H must be >= 1");
  require(L >= 1, "L must be >= 1");
  require(window_lo <= window_hi, "window_lo must not exceed window_hi");
  require(t_max >= 0.0, "t_max must be >= 0");
  require(stride > 0.0, "stride must be > 0");
  require(T > 0.0, "T must be > 0");
  require(replicas >= 2, "replicas must be >= 2");
  require(dt > 0.0, "dt must be > 0");
  require(tolerance > 0.0, "tolerance must be > 0");
  require(max_iter >= 1, "max_iter must be >= 1");
  require(clip >= 1, "clip must be >= 1");
  require(!bracket_hi || *bracket_hi > 0.0, "bracket_hi must be > 0");
  require(param == "N" || param == "gamma", "param must be N or gamma");
  switch (model) {
    case Model::lattice2d:
      require(y0 >= 0 && y0 < H, "y0 outside the lattice");
      require((W == 0 ? params.N : W) >= params.N, "rod longer than the lattice width");
      break;
    case Model::contracted:
      require(y0 >= 0 && y0 < L, "y0 outside the chain");
      break;
    default:
      require(y0 >= window_lo && y0 <= window_hi, "y0 outside the window");
      break;
  }
}

}  // namespace buoy
