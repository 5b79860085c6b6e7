#include "buoy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <thread>

#include "buoy/contracted.hpp"
#include "buoy/lattice2d.hpp"
#include "buoy/langevin.hpp"
#include "buoy/rng.hpp"
#include "buoy/walkers.hpp"

namespace buoy {

std::string model_name(Model model) {
  switch (model) {
    case Model::lattice2d: return "lattice2d";
    case Model::contracted: return "contracted";
    case Model::fluid: return "fluid";
    case Model::memory: return "memory";
    case Model::langevin_fluid: return "langevin-fluid";
    case Model::langevin_memory: return "langevin-memory";
  }
  return "unknown";
}

Model parse_model(const std::string& name) {
  for (Model m : {Model::lattice2d, Model::contracted, Model::fluid, Model::memory,
                  Model::langevin_fluid, Model::langevin_memory}) {
    if (model_name(m) == name) return m;
  }
  throw ParamError("unknown model '" + name + "'");
}

double buoyancy_analytic_fluid(const DensityProfile& profile, long k) {
  return 0.5 * drift_balancing_weight_fluid(profile, k);
}

double drift_balancing_weight_fluid(const DensityProfile& profile, long k) {
  const auto& p = profile.params();
  const double y = static_cast<double>(k) * p.epsilon;
  const double above = profile.log_vacancy(y + p.epsilon);
  const double below = profile.log_vacancy(y - p.epsilon);
  if (!std::isfinite(above) || !std::isfinite(below)) {
    throw DomainError("saturated density next to the release height");
  }
  return p.N * p.kT * (above - below) / p.epsilon;
}

double jump_time(const DensityProfile& profile, long k) {
  const auto& p = profile.params();
  const double hole = profile.hole_probability(static_cast<double>(k) * p.epsilon, p.N);
  if (!(hole > 0.0)) throw DomainError("no holes at the release height");
  return 1.0 / (2.0 * p.nu * hole);
}

namespace {

struct ReplicaResult {
  double displacement;
  double elapsed;
};

// Runs replicas [begin, end) of one model; `out` is indexed by replica.
using ReplicaRunner = std::function<void(std::size_t, std::size_t, std::vector<ReplicaResult>&)>;

ReplicaRunner make_runner(Model model, const DensityProfile& profile, long k, double t_max,
                          const Protocol& protocol) {
  const auto& p = profile.params();
  const long lo = k - protocol.clip;
  const long hi = k + protocol.clip;
  const std::uint64_t base = protocol.seed;
  switch (model) {
    case Model::fluid:
    case Model::memory:
      return [&profile, model, k, lo, hi, t_max, base](std::size_t b, std::size_t e,
                                                      std::vector<ReplicaResult>& out) {
        const auto kind = model == Model::fluid ? WalkerModel::fluid : WalkerModel::memory;
        Walker walker(profile, kind, Window{lo - 1, hi + 1}, k, derive_seed(base, b));
        for (std::size_t i = b; i < e; ++i) {
          walker.restart(k, derive_seed(base, i));
          walker.run_until(t_max, lo, hi);
          out[i] = {static_cast<double>(walker.state().y - k), walker.state().time};
        }
      };
    case Model::contracted: {
      const long length = protocol.chain_length;
      if (lo < 0 || hi >= length) throw ParamError("clip window does not fit in the chain");
      return [&profile, length, k, lo, hi, t_max, base](std::size_t b, std::size_t e,
                                                       std::vector<ReplicaResult>& out) {
        ContractedChain chain(profile, length, k, derive_seed(base, b));
        for (std::size_t i = b; i < e; ++i) {
          chain.restart(k, derive_seed(base, i));
          chain.run_until(t_max, lo, hi);
          out[i] = {static_cast<double>(chain.rod() - k), chain.time()};
        }
      };
    }
    case Model::lattice2d: {
      const long length = protocol.chain_length;
      const int width = protocol.lattice_width > 0 ? protocol.lattice_width : p.N;
      if (lo < 0 || hi >= length) throw ParamError("clip window does not fit in the lattice");
      return [&profile, width, length, k, lo, hi, t_max, base](std::size_t b, std::size_t e,
                                                              std::vector<ReplicaResult>& out) {
        for (std::size_t i = b; i < e; ++i) {
          Lattice2D lattice(profile, width, static_cast<int>(length), static_cast<int>(k),
                            derive_seed(base, i));
          lattice.run_until(t_max, static_cast<int>(lo), static_cast<int>(hi));
          out[i] = {static_cast<double>(lattice.rod_y() - k), lattice.time()};
        }
      };
    }
    case Model::langevin_fluid:
    case Model::langevin_memory: {
      const double eps = p.epsilon;
      const double y0 = static_cast<double>(k) * eps;
      auto spec = std::make_shared<DiffusionSpec>(p, protocol.dt, static_cast<double>(lo - 1) * eps,
                                                  static_cast<double>(hi + 1) * eps);
      const auto kind =
          model == Model::langevin_fluid ? LangevinModel::fluid : LangevinModel::memory;
      return [spec, kind, y0, lo, hi, eps, t_max, base](std::size_t b, std::size_t e,
                                                        std::vector<ReplicaResult>& out) {
        LangevinIntegrator integrator(*spec, kind, y0, derive_seed(base, b));
        for (std::size_t i = b; i < e; ++i) {
          integrator.restart(y0, derive_seed(base, i));
          integrator.run_until(t_max, static_cast<double>(lo) * eps,
                               static_cast<double>(hi) * eps);
          out[i] = {(integrator.state().y - y0) / eps, integrator.state().time};
        }
      };
    }
  }
  throw ParamError("unknown model");
}

unsigned thread_count(const Protocol& protocol, std::size_t replicas) {
  unsigned n = protocol.threads;
  if (n == 0) n = std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, replicas)));
}

}  // namespace

DriftEstimate measure_drift(Model model, const PhysicalParams& params, long k,
                            const Protocol& protocol) {
  if (protocol.replicas < 2) throw ParamError("at least two replicas are needed");
  if (!(protocol.T > 0.0)) throw ParamError("run time T must be positive");
  if (protocol.clip < 1) throw ParamError("clip window must be at least one site");
  const DensityProfile profile(params);
  const double t_max = protocol.T * jump_time(profile, k);
  const auto replicas = static_cast<std::size_t>(protocol.replicas);
  const ReplicaRunner runner = make_runner(model, profile, k, t_max, protocol);
  std::vector<ReplicaResult> results(replicas);
  const unsigned threads = thread_count(protocol, replicas);
  if (threads == 1) {
    runner(0, replicas, results);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t b = replicas * t / threads;
      const std::size_t e = replicas * (t + 1) / threads;
      pool.emplace_back([&, t, b, e] {
        try {
          runner(b, e, results);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
  }
  double sum_x = 0.0;
  double sum_t = 0.0;
  for (const auto& r : results) {
    sum_x += r.displacement;
    sum_t += r.elapsed;
  }
  DriftEstimate est;
  est.samples = replicas;
  est.elapsed = sum_t;
  est.drift = sum_x / sum_t;
  double ss = 0.0;
  for (const auto& r : results) {
    const double e = r.displacement - est.drift * r.elapsed;
    ss += e * e;
  }
  const double n = static_cast<double>(replicas);
  est.stderr_ = std::sqrt(ss * n / (n - 1.0)) / sum_t;
  return est;
}

BuoyancyPoint buoyancy_bisect(Model model, const PhysicalParams& params, long k,
                              const Protocol& protocol, std::optional<double> bracket_hi) {
  {
    PhysicalParams check = params;
    check.M = 1.0;
    check.validate();
  }
  const double mass_scale = params.m * params.N;
  double lo = 0.0;
  double hi = bracket_hi.value_or(2.0 * mass_scale);
  if (!(hi > lo)) throw BracketError("empty mass bracket");
  const double mass_tol = protocol.tolerance * mass_scale;

  std::vector<double> masses;
  std::vector<double> drifts;
  std::uint64_t samples = 0;
  auto drift_at = [&](double mass) {
    PhysicalParams trial = params;
    trial.M = mass;
    const DriftEstimate est = measure_drift(model, trial, k, protocol);
    masses.push_back(mass);
    drifts.push_back(est.drift);
    samples += est.samples;
    return est;
  };

  BuoyancyPoint point;
  point.model = model_name(model);
  point.replicas = protocol.replicas;

  const DriftEstimate at_lo = drift_at(lo);
  const DriftEstimate at_hi = drift_at(hi);
  if (!(at_hi.drift < 0.0)) {
    throw BracketError("drift does not change sign on the mass bracket");
  }
  if (!(at_lo.drift > 0.0)) {
    // Root at the lower edge, within two standard errors of zero drift.
    if (at_lo.drift < -2.0 * at_lo.stderr_) {
      throw BracketError("drift does not change sign on the mass bracket");
    }
    const double slope = (at_lo.drift - at_hi.drift) / (hi - lo);
    point.balancing_weight = 0.0;
    point.buoyancy = 0.0;
    point.stderr_ = 0.5 * params.g * at_lo.stderr_ / slope;
    point.samples = samples;
    return point;
  }

  int iterations = 0;
  while (hi - lo > mass_tol) {
    if (++iterations > protocol.max_iterations) {
      throw std::runtime_error("mass bisection did not converge");
    }
    const double mid = 0.5 * (lo + hi);
    if (drift_at(mid).drift > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mass = 0.5 * (lo + hi);
  const DriftEstimate at_root = drift_at(mass);
  const LinearFit fit = linear_fit(masses, drifts);
  const double slope = std::abs(fit.slope);
  const double noise = slope > 0.0 ? at_root.stderr_ / slope : 0.0;
  const double mass_se = std::hypot(noise, 0.5 * (hi - lo));

  point.balancing_weight = mass * params.g;
  point.buoyancy = 0.5 * point.balancing_weight;
  point.stderr_ = 0.5 * mass_se * params.g;
  point.samples = samples;
  return point;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return fit;
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return fit;
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

std::optional<double> saturation_onset(const std::vector<BuoyancyPoint>& points) {
  if (points.empty()) return std::nullopt;
  std::size_t onset = points.size() - 1;
  for (std::size_t i = points.size() - 1; i > 0; --i) {
    const auto& a = points[i - 1];
    const auto& b = points[i];
    if (std::abs(b.buoyancy - a.buoyancy) < std::hypot(a.stderr_, b.stderr_)) {
      onset = i - 1;
    } else {
      break;
    }
  }
  return points[onset].value;
}

SweepReport sweep_N(Model model, const std::vector<int>& Ns, const PhysicalParams& params, long k,
                    const Protocol& protocol) {
  if (Ns.empty()) throw ParamError("empty N list");
  SweepReport report;
  report.param = "N";
  const DensityProfile profile(params);
  report.analytic_slope =
      profile.density(static_cast<double>(k) * params.epsilon) * params.m * params.g;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n : Ns) {
    PhysicalParams trial = params;
    trial.N = n;
    try {
      BuoyancyPoint point = buoyancy_bisect(model, trial, k, protocol);
      point.param = "N";
      point.value = n;
      xs.push_back(n);
      ys.push_back(point.buoyancy);
      report.points.push_back(point);
    } catch (const std::exception& err) {
      report.failures.push_back({static_cast<double>(n), err.what()});
    }
  }
  report.fit = linear_fit(xs, ys);
  return report;
}

SweepReport sweep_gamma(Model model, const std::vector<double>& gammas,
                        const PhysicalParams& params, long k, const Protocol& protocol) {
  if (gammas.empty()) throw ParamError("empty gamma list");
  for (std::size_t i = 1; i < gammas.size(); ++i) {
    if (!(gammas[i] > gammas[i - 1])) throw ParamError("gammas must be strictly increasing");
  }
  SweepReport report;
  report.param = "gamma";
  report.analytic = buoyancy_analytic_fluid(DensityProfile(params), k);
  std::vector<double> xs;
  std::vector<double> deficits;
  for (double gamma : gammas) {
    PhysicalParams trial = params;
    trial.gamma = gamma;
    try {
      BuoyancyPoint point = buoyancy_bisect(model, trial, k, protocol);
      point.param = "gamma";
      point.value = gamma;
      xs.push_back(1.0 / (2.0 + gamma));
      deficits.push_back(report.analytic - point.buoyancy);
      report.points.push_back(point);
    } catch (const std::exception& err) {
      report.failures.push_back({gamma, err.what()});
    }
  }
  report.fit = linear_fit(xs, deficits);
  report.saturation_onset = saturation_onset(report.points);
  if (!report.points.empty()) {
    const auto& last = report.points.back();
    report.asymptote_gap_se =
        last.stderr_ > 0.0 ? (last.buoyancy - report.analytic) / last.stderr_ : 0.0;
  }
  return report;
}

}  // namespace buoy
