#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "buoy/density.hpp"
#include "buoy/rng.hpp"
#include "buoy/trajectory.hpp"

namespace buoy {

/// Inclusive range of integer heights with reflecting ends.
struct Window {
  long lo;
  long hi;

  bool contains(long y) const noexcept { return y >= lo && y <= hi; }
  long size() const noexcept { return hi - lo + 1; }
};

struct JumpRates {
  double up;
  double down;
};

/// Fluid-limit rates: up a (1 - d(y+1))^N, down b (1 - d(y-1))^N.
JumpRates fluid_rates(const DensityProfile& profile, long y);

/// Memory factor (a + b) / (a + b + gamma).
double memory_factor(const PhysicalParams& params);

/// Rates of the memory-corrected walker at height y with previous jump v.
/// The return direction gains a * mu * rho (or b * mu * rho); the forward
/// direction keeps its fluid rate; v = 0 gives fluid rates.
JumpRates memory_rates(const DensityProfile& profile, long y, int v, double mu);

/// Exact stationary law of the fluid walker on a reflecting window.
class StationaryLaw {
 public:
  StationaryLaw(long lo, std::vector<double> prob) : lo_(lo), prob_(std::move(prob)) {}

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(prob_.size()) - 1; }
  const std::vector<double>& probabilities() const noexcept { return prob_; }
  double at(long y) const noexcept {
    if (y < lo() || y > hi()) return 0.0;
    return prob_[static_cast<std::size_t>(y - lo_)];
  }
  long mode() const noexcept;

 private:
  long lo_;
  std::vector<double> prob_;
};

/// pi(y+1) / pi(y) = up(y) / down(y+1), accumulated in the log domain.
StationaryLaw stationary_distribution(const DensityProfile& profile, Window window);

enum class WalkerModel { fluid, memory };

struct WalkerState {
  long y = 0;
  int v = 0;  ///< previous jump direction; 0 before the first jump
  double time = 0.0;
};

/// Continuous-time simulator for the fluid and memory walkers.
class Walker {
 public:
  Walker(const DensityProfile& profile, WalkerModel model, Window window, long y0,
         std::uint64_t seed, std::optional<double> mu_override = std::nullopt);

  const WalkerState& state() const noexcept { return state_; }
  WalkerModel model() const noexcept { return model_; }
  double mu() const noexcept { return mu_; }

  /// Rates at the current state after reflection at the window ends.
  JumpRates current_rates() const;

  StepResult step();

  /// Back to height y0 at time 0 with v = 0 and a new seed.
  void restart(long y0, std::uint64_t seed);

  /// Runs until `t_max` (absolute), sampling every `stride`.
  Trajectory run(double t_max, double stride);

  /// Runs to absolute time t_max or until the walker leaves [lo, hi].
  void run_until(double t_max, long lo, long hi);

  /// Performs `events` jumps, accumulating time spent per height.
  void run_events(std::uint64_t events, OccupationHistogram& histogram);

 private:
  const DensityProfile* profile_;
  WalkerModel model_;
  Window window_;
  double mu_;
  WalkerState state_;
  Rng rng_;
  std::vector<double> rho_;  // rho over the window, plus one site on each side
  std::vector<double> up_;   // cached fluid rates over the window
  std::vector<double> down_;
};

}  // namespace buoy
