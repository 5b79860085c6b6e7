#pragma once

#include <cstdint>
#include <vector>

#include "buoy/density.hpp"
#include "buoy/rng.hpp"
#include "buoy/trajectory.hpp"

namespace buoy {

/// Flip rates of the hole indicator at one height: gamma rho (hole -> no hole)
/// and gamma (1 - rho) (no hole -> hole).
struct FlipRates {
  double to_blocked;
  double to_hole;
};

FlipRates flip_rates(const DensityProfile& profile, long y);

/// Full hole/no-hole configuration at one instant. sigma[y] = 1 means no hole.
struct ContractedState {
  long length = 0;
  std::vector<std::uint8_t> sigma;
  long rod_y = 0;
  double time = 0.0;
};

struct ContractedOptions {
  bool rod_frozen = false;  ///< a = b = 0: the rod never moves
};

/// Exact simulation of the contracted chain of L heights with one rod.
///
/// Heights away from the rod evolve as independent two-state chains, so only
/// the two sites adjacent to the rod are simulated event by event. Every other
/// height keeps its value and the time it was last observed, and is resampled
/// from the two-state transition law when the rod arrives next to it. This is
/// exact for the joint process and makes an event cost O(1) regardless of L.
/// A height that was never observed is drawn from its stationary law, which
/// realizes the stationary initial field without sampling all L heights.
class ContractedChain {
 public:
  /// Stationary initial hole field, hole forced at rod_y0.
  ContractedChain(const DensityProfile& profile, long length, long rod_y0, std::uint64_t seed,
                  ContractedOptions options = {});
  /// Explicit initial field; sigma[rod_y0] must be 0.
  ContractedChain(const DensityProfile& profile, std::vector<std::uint8_t> sigma, long rod_y0,
                  std::uint64_t seed, ContractedOptions options = {});

  /// Fresh stationary hole field with the rod at rod_y0, clock at 0, new seed.
  void restart(long rod_y0, std::uint64_t seed);

  long length() const noexcept { return length_; }
  long rod() const noexcept { return rod_; }
  double time() const noexcept { return time_; }
  double rho(long y) const noexcept { return rho_[static_cast<std::size_t>(y)]; }

  /// Hole indicator at the current time (samples a dormant height).
  int sigma(long y);
  /// Full configuration at the current time.
  ContractedState snapshot();

  StepResult step();
  Trajectory run(double t_max, double stride);

  /// Runs to absolute time t_max or until the rod leaves [lo, hi].
  void run_until(double t_max, long lo, long hi);

  std::uint64_t rod_jumps() const noexcept { return rod_jumps_; }

 private:
  void check_and_initialize(long rod_y0);
  bool in_range(long y) const noexcept { return y >= 0 && y < length_; }
  void materialize(long y);
  void retire(long y);
  double site_rate(long y) const noexcept;
  bool fire_before(double horizon);

  const DensityProfile* profile_;
  long length_;
  double gamma_;
  double up_rate_;
  double down_rate_;
  std::vector<double> rho_;
  std::vector<std::uint8_t> sigma_;
  std::vector<double> stamp_;  // observation time of each dormant height
  long rod_ = 0;
  double time_ = 0.0;
  std::uint64_t rod_jumps_ = 0;
  Rng rng_;
};

}  // namespace buoy
