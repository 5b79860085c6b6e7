#include "buoy/langevin.hpp"

#include <algorithm>
#include <cmath>

#include "buoy/rng.hpp"

namespace buoy {

DiffusionSpec::DiffusionSpec(PhysicalParams params, double dt, double lo, double hi)
    : profile_(params), dt_(dt), lo_(lo), hi_(hi) {
  if (!(dt > 0.0)) throw ParamError("dt must be positive");
  if (!(hi > lo)) throw ParamError("empty Langevin window");
  const double max_d = std::max(diffusion(lo), diffusion(hi));
  if (std::sqrt(2.0 * max_d * dt) > 0.25 * (hi - lo)) {
    throw ParamError("dt too large for the window");
  }
}

double DiffusionSpec::diffusion(double y) const noexcept {
  return profile_.hole_probability(y, params().N);
}

double DiffusionSpec::diffusion_derivative(double y) const noexcept {
  const auto& p = params();
  return p.N * p.beta_mg() * profile_.density(y) * diffusion(y);
}

double DiffusionSpec::mobility(double y) const noexcept { return diffusion(y) / params().kT; }

double DiffusionSpec::force(double y) const noexcept { return profile_.force_continuum(y); }

double DiffusionSpec::drift(double y) const noexcept {
  return mobility(y) * force(y) + diffusion_derivative(y);
}

double DiffusionSpec::friction(double y) const noexcept {
  return 2.0 * (1.0 - diffusion(y)) / (2.0 + params().gamma);
}

std::vector<double> DiffusionSpec::stationary_bins(int bins) const {
  const auto& p = params();
  const double width = (hi_ - lo_) / bins;
  constexpr int kSub = 64;
  std::vector<double> log_w(static_cast<std::size_t>(bins) * kSub);
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    const double y = lo_ + (static_cast<double>(i) + 0.5) * width / kSub;
    log_w[i] = -profile_.potential_continuum(y) / p.kT;
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    const double w = std::exp(log_w[i] - top);
    out[i / kSub] += w;
    total += w;
  }
  for (double& v : out) v /= total;
  return out;
}

LangevinIntegrator::LangevinIntegrator(const DiffusionSpec& spec, LangevinModel model, double y0,
                                       std::uint64_t seed)
    : spec_(&spec), model_(model), rng_(seed) {
  restart(y0, seed);
}

void LangevinIntegrator::restart(double y0, std::uint64_t seed) {
  if (!(y0 >= spec_->lo() && y0 <= spec_->hi())) {
    throw ParamError("initial height outside the Langevin window");
  }
  state_ = LangevinState{};
  state_.y = y0;
  steps_ = 0;
  rng_ = Rng(seed);
}

void LangevinIntegrator::step() {
  const double dt = spec_->dt();
  const double y = state_.y;
  double incr = spec_->drift(y) * dt + std::sqrt(2.0 * spec_->diffusion(y) * dt) * rng_.normal();
  if (model_ == LangevinModel::memory) incr -= spec_->friction(y) * state_.upsilon * dt;
  double next = y + incr;
  const double lo = spec_->lo();
  const double hi = spec_->hi();
  // dt is limited to a quarter window per step, so one reflection suffices.
  if (next < lo) next = 2.0 * lo - next;
  if (next > hi) next = 2.0 * hi - next;
  next = std::clamp(next, lo, hi);
  if (next > y) {
    state_.upsilon = 1;
  } else if (next < y) {
    state_.upsilon = -1;
  }
  state_.y = next;
  ++steps_;
  state_.time = static_cast<double>(steps_) * dt;
}

Trajectory LangevinIntegrator::run(double t_max, double stride) {
  GridSampler sampler(stride, t_max);
  while (state_.time < t_max) {
    const double y = state_.y;
    step();
    sampler.advance(std::min(state_.time, t_max), y);
  }
  return sampler.take();
}

void LangevinIntegrator::run_until(double t_max, double lo, double hi) {
  while (state_.time < t_max && state_.y >= lo && state_.y <= hi) step();
}

void LangevinIntegrator::accumulate(std::uint64_t steps, std::vector<double>& histogram) {
  const double lo = spec_->lo();
  const double scale = static_cast<double>(histogram.size()) / (spec_->hi() - lo);
  const auto last = static_cast<long>(histogram.size()) - 1;
  for (std::uint64_t k = 0; k < steps; ++k) {
    step();
    const long bin = std::clamp(static_cast<long>((state_.y - lo) * scale), 0L, last);
    histogram[static_cast<std::size_t>(bin)] += 1.0;
  }
}

}  // namespace buoy
