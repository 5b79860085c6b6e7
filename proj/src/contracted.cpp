#include "buoy/contracted.hpp"

#include <cmath>
#include <limits>

namespace buoy {

FlipRates flip_rates(const DensityProfile& profile, long y) {
  const auto& p = profile.params();
  const double rho = profile.blocked_probability(static_cast<double>(y) * p.epsilon, p.N);
  return {p.gamma * rho, p.gamma * (1.0 - rho)};
}

ContractedChain::ContractedChain(const DensityProfile& profile, long length, long rod_y0,
                                 std::uint64_t seed, ContractedOptions options)
    : profile_(&profile), length_(length), rng_(seed) {
  const auto& p = profile.params();
  gamma_ = p.gamma;
  up_rate_ = options.rod_frozen ? 0.0 : p.a();
  down_rate_ = options.rod_frozen ? 0.0 : p.b();
  if (length < 1) throw ParamError("chain length must be >= 1");
  rho_.resize(static_cast<std::size_t>(length));
  for (long y = 0; y < length; ++y) {
    rho_[static_cast<std::size_t>(y)] =
        profile.blocked_probability(static_cast<double>(y) * p.epsilon, p.N);
  }
  sigma_.assign(static_cast<std::size_t>(length), 0);
  restart(rod_y0, seed);
}

void ContractedChain::restart(long rod_y0, std::uint64_t seed) {
  if (!in_range(rod_y0)) throw ParamError("rod height outside the chain");
  rng_ = Rng(seed);
  time_ = 0.0;
  rod_jumps_ = 0;
  rod_ = rod_y0;
  // Unobserved heights are drawn from the stationary law on first use.
  stamp_.assign(static_cast<std::size_t>(length_), -std::numeric_limits<double>::infinity());
  sigma_[static_cast<std::size_t>(rod_y0)] = 0;
  stamp_[static_cast<std::size_t>(rod_y0)] = 0.0;
  materialize(rod_y0 - 1);
  materialize(rod_y0 + 1);
}

ContractedChain::ContractedChain(const DensityProfile& profile, std::vector<std::uint8_t> sigma,
                                 long rod_y0, std::uint64_t seed, ContractedOptions options)
    : profile_(&profile),
      length_(static_cast<long>(sigma.size())),
      sigma_(std::move(sigma)),
      rng_(seed) {
  const auto& p = profile.params();
  gamma_ = p.gamma;
  up_rate_ = options.rod_frozen ? 0.0 : p.a();
  down_rate_ = options.rod_frozen ? 0.0 : p.b();
  if (length_ < 1) throw ParamError("chain length must be >= 1");
  rho_.resize(static_cast<std::size_t>(length_));
  for (long y = 0; y < length_; ++y) {
    rho_[static_cast<std::size_t>(y)] =
        profile.blocked_probability(static_cast<double>(y) * p.epsilon, p.N);
  }
  for (auto& s : sigma_) {
    if (s > 1) throw ParamError("hole indicators must be 0 or 1");
  }
  check_and_initialize(rod_y0);
}

void ContractedChain::check_and_initialize(long rod_y0) {
  if (!in_range(rod_y0)) throw ParamError("rod height outside the chain");
  if (sigma_[static_cast<std::size_t>(rod_y0)] != 0) {
    throw ParamError("the rod must sit on a hole");
  }
  rod_ = rod_y0;
  stamp_.assign(static_cast<std::size_t>(length_), 0.0);
}

double ContractedChain::site_rate(long y) const noexcept {
  if (!in_range(y)) return 0.0;
  const double r = rho(y);
  return sigma_[static_cast<std::size_t>(y)] ? gamma_ * (1.0 - r) : gamma_ * r;
}

void ContractedChain::materialize(long y) {
  if (!in_range(y)) return;
  const auto i = static_cast<std::size_t>(y);
  const double r = rho_[i];
  const double elapsed = time_ - stamp_[i];
  // elapsed is +inf for a height never observed: the stationary law applies.
  const double relax = std::isinf(elapsed) ? 0.0 : std::exp(-gamma_ * elapsed);
  const double p_blocked = r + (static_cast<double>(sigma_[i]) - r) * relax;
  sigma_[i] = rng_.bernoulli(p_blocked);
  stamp_[i] = time_;
}

void ContractedChain::retire(long y) {
  if (in_range(y)) stamp_[static_cast<std::size_t>(y)] = time_;
}

int ContractedChain::sigma(long y) {
  if (!in_range(y)) throw ParamError("height outside the chain");
  if (y < rod_ - 1 || y > rod_ + 1) materialize(y);
  return sigma_[static_cast<std::size_t>(y)];
}

ContractedState ContractedChain::snapshot() {
  for (long y = 0; y < length_; ++y) {
    if (y < rod_ - 1 || y > rod_ + 1) materialize(y);
  }
  return {length_, sigma_, rod_, time_};
}

StepResult ContractedChain::step() {
  const double before = time_;
  if (!fire_before(std::numeric_limits<double>::infinity())) {
    time_ = before;
    return {};
  }
  return {time_ - before, true};
}

bool ContractedChain::fire_before(double horizon) {
  const long y = rod_;
  const bool has_above = in_range(y + 1);
  const bool has_below = in_range(y - 1);
  const double up = (has_above && sigma_[static_cast<std::size_t>(y + 1)] == 0) ? up_rate_ : 0.0;
  const double down =
      (has_below && sigma_[static_cast<std::size_t>(y - 1)] == 0) ? down_rate_ : 0.0;
  const double flip_above = site_rate(y + 1);
  const double flip_below = site_rate(y - 1);
  const double total = up + down + flip_above + flip_below;
  const double dt = rng_.exponential(total);
  if (!(time_ + dt < horizon)) {
    // Memoryless: discarding the pending event leaves the law unchanged.
    time_ = horizon;
    return false;
  }
  time_ += dt;
  double u = rng_.uniform() * total;
  if (u < up) {
    // y becomes the lower neighbour (a hole), y - 1 goes dormant, y + 2 wakes up.
    retire(y - 1);
    rod_ = y + 1;
    materialize(y + 2);
    ++rod_jumps_;
  } else if ((u -= up) < down) {
    retire(y + 1);
    rod_ = y - 1;
    materialize(y - 2);
    ++rod_jumps_;
  } else if ((u -= down) < flip_above) {
    sigma_[static_cast<std::size_t>(y + 1)] ^= 1;
  } else {
    sigma_[static_cast<std::size_t>(y - 1)] ^= 1;
  }
  return true;
}

Trajectory ContractedChain::run(double t_max, double stride) {
  GridSampler sampler(stride, t_max);
  while (time_ < t_max) {
    const long y = rod_;
    fire_before(t_max);
    sampler.advance(time_, static_cast<double>(y));
  }
  return sampler.take();
}

void ContractedChain::run_until(double t_max, long lo, long hi) {
  while (time_ < t_max && rod_ >= lo && rod_ <= hi) fire_before(t_max);
}

}  // namespace buoy
