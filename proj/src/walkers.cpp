#include "buoy/walkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace buoy {

JumpRates fluid_rates(const DensityProfile& profile, long y) {
  const auto& p = profile.params();
  const double eps = p.epsilon;
  const double yy = static_cast<double>(y) * eps;
  return {p.a() * profile.hole_probability(yy + eps, p.N),
          p.b() * profile.hole_probability(yy - eps, p.N)};
}

double memory_factor(const PhysicalParams& params) {
  const double ab = params.a() + params.b();
  return ab / (ab + params.gamma);
}

JumpRates memory_rates(const DensityProfile& profile, long y, int v, double mu) {
  const auto& p = profile.params();
  JumpRates rates = fluid_rates(profile, y);
  const double eps = p.epsilon;
  const double yy = static_cast<double>(y) * eps;
  if (v > 0) {
    rates.down += p.b() * mu * profile.blocked_probability(yy - eps, p.N);
  } else if (v < 0) {
    rates.up += p.a() * mu * profile.blocked_probability(yy + eps, p.N);
  }
  return rates;
}

long StationaryLaw::mode() const noexcept {
  const auto it = std::max_element(prob_.begin(), prob_.end());
  return lo_ + static_cast<long>(it - prob_.begin());
}

StationaryLaw stationary_distribution(const DensityProfile& profile, Window window) {
  if (window.hi < window.lo) throw ParamError("empty window");
  const auto n = static_cast<std::size_t>(window.size());
  std::vector<double> log_weight(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const long y = window.lo + static_cast<long>(i) - 1;
    const double up = fluid_rates(profile, y).up;
    const double down = fluid_rates(profile, y + 1).down;
    if (!(up > 0.0) || !(down > 0.0)) {
      throw DomainError("stationary law undefined: vanishing rate inside the window");
    }
    log_weight[i] = log_weight[i - 1] + std::log(up) - std::log(down);
  }
  const double top = *std::max_element(log_weight.begin(), log_weight.end());
  double total = 0.0;
  for (double& w : log_weight) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : log_weight) w /= total;
  return StationaryLaw(window.lo, std::move(log_weight));
}

Walker::Walker(const DensityProfile& profile, WalkerModel model, Window window, long y0,
               std::uint64_t seed, std::optional<double> mu_override)
    : profile_(&profile),
      model_(model),
      window_(window),
      mu_(mu_override.value_or(memory_factor(profile.params()))),
      rng_(seed) {
  if (window.hi < window.lo) throw ParamError("empty window");
  if (!window.contains(y0)) throw ParamError("initial height outside the window");
  state_.y = y0;
  const auto& p = profile.params();
  const auto n = static_cast<std::size_t>(window.size());
  rho_.resize(n + 2);
  for (std::size_t i = 0; i < n + 2; ++i) {
    const double y = static_cast<double>(window.lo - 1 + static_cast<long>(i)) * p.epsilon;
    rho_[i] = profile.blocked_probability(y, p.N);
  }
  up_.resize(n);
  down_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    up_[i] = p.a() * (1.0 - rho_[i + 2]);
    down_[i] = p.b() * (1.0 - rho_[i]);
  }
}

JumpRates Walker::current_rates() const {
  const auto i = static_cast<std::size_t>(state_.y - window_.lo);
  JumpRates rates{up_[i], down_[i]};
  if (model_ == WalkerModel::memory) {
    const auto& p = profile_->params();
    if (state_.v > 0) {
      rates.down += p.b() * mu_ * rho_[i];
    } else if (state_.v < 0) {
      rates.up += p.a() * mu_ * rho_[i + 2];
    }
  }
  if (state_.y == window_.hi) rates.up = 0.0;
  if (state_.y == window_.lo) rates.down = 0.0;
  return rates;
}

StepResult Walker::step() {
  const JumpRates rates = current_rates();
  const double total = rates.up + rates.down;
  if (!(total > 0.0)) return {};
  const double dt = rng_.exponential(total);
  const bool up = rng_.uniform() * total < rates.up;
  state_.time += dt;
  state_.y += up ? 1 : -1;
  state_.v = up ? 1 : -1;
  return {dt, true};
}

void Walker::restart(long y0, std::uint64_t seed) {
  if (!window_.contains(y0)) throw ParamError("initial height outside the window");
  state_ = WalkerState{};
  state_.y = y0;
  rng_ = Rng(seed);
}

void Walker::run_until(double t_max, long lo, long hi) {
  while (state_.time < t_max && state_.y >= lo && state_.y <= hi) {
    const JumpRates rates = current_rates();
    const double total = rates.up + rates.down;
    const double dt = rng_.exponential(total);
    if (!(state_.time + dt < t_max)) {
      state_.time = t_max;
      break;
    }
    const bool up = rng_.uniform() * total < rates.up;
    state_.time += dt;
    state_.y += up ? 1 : -1;
    state_.v = up ? 1 : -1;
  }
}

Trajectory Walker::run(double t_max, double stride) {
  GridSampler sampler(stride, t_max);
  while (state_.time < t_max) {
    const JumpRates rates = current_rates();
    const double total = rates.up + rates.down;
    const double dt = rng_.exponential(total);
    if (state_.time + dt >= t_max) {
      sampler.advance(t_max, static_cast<double>(state_.y));
      state_.time = t_max;
      break;
    }
    const bool up = rng_.uniform() * total < rates.up;
    state_.time += dt;
    sampler.advance(state_.time, static_cast<double>(state_.y));
    state_.y += up ? 1 : -1;
    state_.v = up ? 1 : -1;
  }
  return sampler.take();
}

void Walker::run_events(std::uint64_t events, OccupationHistogram& histogram) {
  for (std::uint64_t k = 0; k < events; ++k) {
    const long y = state_.y;
    const StepResult r = step();
    if (!r.fired) break;
    histogram.add(y, r.dt);
  }
}

}  // namespace buoy
