// buoy: trajectories, buoyancy estimates, sweeps and self-checks from the
// command line. Every float in the CSV output carries 9 significant digits.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include "buoy/checks.hpp"
#include "buoy/config.hpp"
#include "buoy/contracted.hpp"
#include "buoy/csv.hpp"
#include "buoy/lattice2d.hpp"
#include "buoy/langevin.hpp"
#include "buoy/measure.hpp"
#include "buoy/walkers.hpp"

namespace {

using namespace buoy;

constexpr int kExitFailure = 1;
constexpr int kExitBracket = 2;

std::string flag_name(std::string key) {
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

struct ConfigFlags {
  std::string path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* app) {
    app->add_option("--config", path, "key = value configuration file");
    for (const auto& key : config_keys()) {
      app->add_option(flag_name(key), values[key], "overrides config key " + key);
    }
  }

  RunConfig resolve(const CLI::App* app) const {
    RunConfig config = path.empty() ? RunConfig{} : load_config(path);
    for (const auto& key : config_keys()) {
      if (app->count(flag_name(key)) > 0) set_config_value(config, key, values.at(key));
    }
    config.validate();
    return config;
  }
};

std::vector<std::string> split(const std::string& list, char sep) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::vector<std::string> point_fields(const BuoyancyPoint& p) {
  return {p.param,           format_real(p.value),         format_real(p.buoyancy),
          format_real(p.stderr_), std::to_string(p.replicas), p.model};
}

int cmd_run(const RunConfig& c) {
  const PhysicalParams params = c.resolved_params();
  const DensityProfile profile(params);
  Trajectory traj;
  switch (c.model) {
    case Model::fluid:
    case Model::memory: {
      const auto kind = c.model == Model::fluid ? WalkerModel::fluid : WalkerModel::memory;
      Walker walker(profile, kind, Window{c.window_lo, c.window_hi}, c.y0, c.seed);
      traj = walker.run(c.t_max, c.stride);
      break;
    }
    case Model::contracted: {
      ContractedChain chain(profile, c.L, c.y0, c.seed);
      traj = chain.run(c.t_max, c.stride);
      break;
    }
    case Model::lattice2d: {
      Lattice2D lattice(profile, c.W == 0 ? params.N : c.W, c.H, static_cast<int>(c.y0), c.seed);
      traj = lattice.run(c.t_max, c.stride);
      break;
    }
    case Model::langevin_fluid:
    case Model::langevin_memory: {
      const double eps = params.epsilon;
      const DiffusionSpec spec(params, c.dt, static_cast<double>(c.window_lo) * eps,
                               static_cast<double>(c.window_hi) * eps);
      const auto kind =
          c.model == Model::langevin_fluid ? LangevinModel::fluid : LangevinModel::memory;
      LangevinIntegrator integrator(spec, kind, static_cast<double>(c.y0) * eps, c.seed);
      traj = integrator.run(c.t_max, c.stride);
      break;
    }
  }
  CsvWriter csv({"t", "y"});
  for (const auto& s : traj) csv.row({format_real(s.t), format_real(s.y)});
  csv.save(c.out);
  return 0;
}

int cmd_buoyancy(const RunConfig& c) {
  const PhysicalParams params = c.resolved_params();
  BuoyancyPoint point = buoyancy_bisect(c.model, params, c.y0, c.protocol(), c.bracket_hi);
  point.param = "y";
  point.value = static_cast<double>(c.y0);
  CsvWriter csv({"param", "value", "buoyancy", "stderr", "replicas", "model"});
  csv.row(point_fields(point));
  csv.save(c.out);
  std::printf("buoyancy %s +- %s (balancing weight %s), analytic fluid %s\n",
              format_real(point.buoyancy).c_str(), format_real(point.stderr_).c_str(),
              format_real(point.balancing_weight).c_str(),
              format_real(buoyancy_analytic_fluid(DensityProfile(params), c.y0)).c_str());
  return 0;
}

int cmd_sweep(const RunConfig& c) {
  const PhysicalParams params = c.resolved_params();
  const auto items = split(c.values, ',');
  if (items.empty()) throw ParamError("--values needs at least one entry");
  SweepReport report;
  if (c.param == "N") {
    std::vector<int> ns;
    for (const auto& s : items) ns.push_back(std::stoi(s));
    report = sweep_N(c.model, ns, params, c.y0, c.protocol());
  } else {
    std::vector<double> gammas;
    for (const auto& s : items) gammas.push_back(std::stod(s));
    report = sweep_gamma(c.model, gammas, params, c.y0, c.protocol());
  }
  const std::string model = model_name(c.model);
  const std::string n_points = std::to_string(report.points.size());
  const auto opt = [](bool ok, double v) { return ok ? format_real(v) : std::string("nan"); };

  CsvWriter csv({"param", "value", "buoyancy", "stderr", "replicas", "model"});
  for (const auto& p : report.points) csv.row(point_fields(p));
  for (const auto& f : report.failures) {
    csv.row({"failed", format_real(f.value), "", "", "0", model});
    std::fprintf(stderr, "warning: %s = %s skipped: %s\n", c.param.c_str(),
                 format_real(f.value).c_str(), f.message.c_str());
  }
  const auto& fit = report.fit;
  csv.row({"fit", opt(fit.defined, fit.slope), opt(fit.defined, fit.intercept),
           opt(fit.defined, fit.r2), n_points, model});

  std::printf("sweep over %s, model %s, %zu points\n", c.param.c_str(), model.c_str(),
              report.points.size());
  if (c.param == "N") {
    csv.row({"archimedes_slope", format_real(report.analytic_slope), "", "", n_points, model});
    std::printf("linear fit of buoyancy against N: slope %s, intercept %s, R^2 %s\n",
                opt(fit.defined, fit.slope).c_str(), opt(fit.defined, fit.intercept).c_str(),
                opt(fit.defined, fit.r2).c_str());
    std::printf("continuum slope d(y) m g: %s\n", format_real(report.analytic_slope).c_str());
  } else {
    const bool has_onset = report.saturation_onset.has_value();
    csv.row({"saturation_onset", opt(has_onset, report.saturation_onset.value_or(0.0)), "", "",
             n_points, model});
    csv.row({"analytic", format_real(report.analytic), format_real(report.asymptote_gap_se), "",
             n_points, model});
    std::printf("deficit against 1/(2+gamma): slope %s, intercept %s, R^2 %s\n",
                opt(fit.defined, fit.slope).c_str(), opt(fit.defined, fit.intercept).c_str(),
                opt(fit.defined, fit.r2).c_str());
    std::printf("saturation onset gamma: %s\n",
                opt(has_onset, report.saturation_onset.value_or(0.0)).c_str());
    std::printf("fluid-limit buoyancy %s; last point off by %s standard errors\n",
                format_real(report.analytic).c_str(),
                format_real(report.asymptote_gap_se).c_str());
  }
  csv.save(c.out);
  return 0;
}

int cmd_check(const std::string& suites, bool corrupt, std::uint64_t seed) {
  std::vector<std::string> names;
  if (suites == "all") {
    names = suite_names();
  } else {
    names = split(suites, ',');
  }
  CheckOptions options;
  options.corrupt_density = corrupt;
  options.seed = seed;
  bool ok = true;
  for (const auto& r : run_checks(names, options)) {
    std::printf("%s %s: %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rod in a shaken lattice gas: simulation and buoyancy measurement"};
  app.require_subcommand(1);

  ConfigFlags run_flags, buoyancy_flags, sweep_flags;
  auto* run = app.add_subcommand("run", "write a rod trajectory as t,y CSV");
  run_flags.attach(run);
  auto* buoyancy = app.add_subcommand("buoyancy", "estimate the buoyancy at y0 by mass bisection");
  buoyancy_flags.attach(buoyancy);
  auto* sweep = app.add_subcommand("sweep", "buoyancy over a list of N or gamma values");
  sweep_flags.attach(sweep);

  auto* check = app.add_subcommand("check", "run the invariant suites");
  std::string suites = "all";
  bool corrupt = false;
  std::uint64_t check_seed = 1;
  check->add_option("--suites", suites, "comma-separated suite names, or all");
  check->add_flag("--corrupt-density", corrupt, "use d = 0.3 in the detailed-balance suite");
  check->add_option("--seed", check_seed, "seed for the randomized suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_flags.resolve(run));
    if (buoyancy->parsed()) return cmd_buoyancy(buoyancy_flags.resolve(buoyancy));
    if (sweep->parsed()) return cmd_sweep(sweep_flags.resolve(sweep));
    if (check->parsed()) return cmd_check(suites, corrupt, check_seed);
  } catch (const BracketError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitBracket;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitFailure;
  }
  return kExitFailure;
}
