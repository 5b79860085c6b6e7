#include "buoy/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "buoy/contracted.hpp"
#include "buoy/enumeration.hpp"
#include "buoy/lattice2d.hpp"
#include "buoy/rng.hpp"
#include "buoy/walkers.hpp"

namespace buoy {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

SuiteResult detailed_balance(const CheckOptions& options) {
  SuiteResult r{"detailed_balance", true, ""};
  Rng rng(derive_seed(options.seed, 1));
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    PhysicalParams p;
    p.m = std::exp(std::log(1e-3) + rng.uniform() * std::log(100.0));
    p.g = 0.5 + 1.5 * rng.uniform();
    p.kT = 0.5 + 1.5 * rng.uniform();
    p.kappa = std::exp(-10.0 + rng.uniform() * (p.beta_mg() * 300.0 + 20.0));
    const DensityProfile profile(p);
    for (int y = 0; y < 300; ++y) {
      const double res =
          options.corrupt_density
              ? detailed_balance_residual(p, [](double) { return 0.3; }, y)
              : profile.detailed_balance_residual(y);
      worst = std::max(worst, std::abs(res));
    }
  }
  r.passed = worst < 1e-12;
  r.detail = fmt("max relative residual %.3g over 1000 draws x 300 heights", worst);
  return r;
}

SuiteResult mu_monotonicity(const CheckOptions&) {
  SuiteResult r{"mu_monotonicity", true, ""};
  PhysicalParams p;
  p.gamma = 0.0;
  bool ok = memory_factor(p) == 1.0;
  double previous = memory_factor(p);
  for (int i = 1; i <= 400; ++i) {
    p.gamma = std::pow(10.0, -3.0 + 0.02 * i);
    const double mu = memory_factor(p);
    ok = ok && mu < previous && mu > 0.0;
    previous = mu;
  }
  r.passed = ok;
  r.detail = fmt("mu(0) = 1, strictly decreasing on gamma in [1e-3, 1e5], mu(1e5) = %.3g", previous);
  return r;
}

SuiteResult fluid_limit(const CheckOptions& options) {
  SuiteResult r{"fluid_limit", true, ""};
  PhysicalParams p;
  p.kappa = default_kappa(p, 300);
  const DensityProfile profile(p);
  bool identical = true;
  for (long y = 0; y < 300; ++y) {
    const JumpRates fluid = fluid_rates(profile, y);
    for (int v : {-1, 0, 1}) {
      const JumpRates mem = memory_rates(profile, y, v, 0.0);
      identical = identical && mem.up == fluid.up && mem.down == fluid.down;
    }
  }

  // Rod marginal of the contracted chain at gamma = 100 against the exact law.
  PhysicalParams c;
  c.m = 0.5;
  c.M = 0.5;
  c.N = 2;
  c.gamma = 100.0;
  constexpr long kLength = 40;
  c.kappa = default_kappa(c, kLength);
  const DensityProfile contracted_profile(c);
  const StationaryLaw law = stationary_distribution(contracted_profile, Window{0, kLength - 1});
  ContractedChain chain(contracted_profile, kLength, 20, derive_seed(options.seed, 2));
  OccupationHistogram hist(0, kLength - 1);
  while (chain.time() < 1e6) {
    const long y = chain.rod();
    const StepResult s = chain.step();
    if (!s.fired) break;
    hist.add(y, s.dt);
  }
  const double tv = total_variation(hist.normalized(), law.probabilities());
  r.passed = identical && tv < 0.05;
  r.detail = std::string(identical ? "mu = 0 rates identical" : "mu = 0 rates differ") +
             fmt("; contracted gamma = 100 vs fluid law TV %.4f (< 0.05)", tv);
  return r;
}

SuiteResult brute_force(const CheckOptions& options) {
  SuiteResult r{"brute_force", true, ""};
  PhysicalParams p;
  p.m = 0.5;
  p.M = 0.5;
  p.N = 2;
  p.gamma = 1.0;
  const DensityProfile profile(p);
  constexpr int kWidth = 4;
  constexpr int kHeight = 6;
  constexpr int kMonomers = 2;
  const SmallLatticeChain space(profile, kWidth, kHeight, kMonomers);
  const std::vector<double> exact = space.stationary_solve();
  const double gibbs_gap = total_variation(exact, space.gibbs());

  std::vector<std::uint8_t> occupancy(kWidth * kHeight, 0);
  for (int x = 0; x < kMonomers; ++x) occupancy[(kHeight - 1) * kWidth + x] = 1;
  Lattice2D lattice(profile, kWidth, kHeight, occupancy, 0, derive_seed(options.seed, 3));
  std::vector<double> time(space.size(), 0.0);
  for (int event = 0; event < 4000000; ++event) {
    const std::size_t i = space.index_of(lattice.snapshot());
    const StepResult s = lattice.step();
    if (!s.fired) break;
    time[i] += s.dt;
  }
  double total = 0.0;
  for (double t : time) total += t;
  for (double& t : time) t /= total;
  const double tv = total_variation(time, exact);
  r.passed = gibbs_gap < 1e-9 && tv < 0.02;
  r.detail = fmt("4x6, 2 monomers, N = 2: TV(sim, exact) %.4f (< 0.02), TV(exact, Gibbs) %.2g",
                 tv, gibbs_gap);
  return r;
}

using Suite = std::function<SuiteResult(const CheckOptions&)>;

const std::vector<std::pair<std::string, Suite>>& suites() {
  static const std::vector<std::pair<std::string, Suite>> table = {
      {"detailed_balance", detailed_balance},
      {"mu_monotonicity", mu_monotonicity},
      {"fluid_limit", fluid_limit},
      {"brute_force", brute_force},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& s : suites()) out.push_back(s.first);
    return out;
  }();
  return names;
}

std::vector<SuiteResult> run_checks(const std::vector<std::string>& selection,
                                    const CheckOptions& options) {
  std::vector<const Suite*> chosen;
  for (const auto& name : selection) {
    const auto it = std::find_if(suites().begin(), suites().end(),
                                 [&](const auto& s) { return s.first == name; });
    if (it == suites().end()) throw ParamError("unknown suite '" + name + "'");
    chosen.push_back(&it->second);
  }
  std::vector<SuiteResult> results;
  for (const Suite* suite : chosen) results.push_back((*suite)(options));
  return results;
}

}  // namespace buoy
