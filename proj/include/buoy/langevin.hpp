#pragma once

#include <cstdint>
#include <vector>

#include "buoy/density.hpp"
#include "buoy/rng.hpp"
#include "buoy/trajectory.hpp"

namespace buoy {

enum class LangevinModel { fluid, memory };

/// Coefficients of the overdamped rod diffusion on a real window [lo, hi].
///
///   D(y)  = (1 - d(y))^N           chi(y) = D(y) / kT
///   F(y)  = -M g + d(y) m g N       D'(y) = N (mg/kT) d(y) D(y)
///   drift = chi F + D'              (Ito)
class DiffusionSpec {
 public:
  DiffusionSpec(PhysicalParams params, double dt, double lo, double hi);

  const PhysicalParams& params() const noexcept { return profile_.params(); }
  const DensityProfile& profile() const noexcept { return profile_; }
  double dt() const noexcept { return dt_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

  double diffusion(double y) const noexcept;
  double diffusion_derivative(double y) const noexcept;
  double mobility(double y) const noexcept;
  double force(double y) const noexcept;
  double drift(double y) const noexcept;
  /// Memory friction coefficient 2 (1 - D(y)) / (2 + gamma).
  double friction(double y) const noexcept;
  /// Stationary density exp(-V/kT), V = M g y - N kT ln(1 - d(y)), integrated
  /// over `bins` equal bins of the window and normalized.
  std::vector<double> stationary_bins(int bins) const;

 private:
  DensityProfile profile_;
  double dt_;
  double lo_;
  double hi_;
};

struct LangevinState {
  double y = 0.0;
  int upsilon = 0;  ///< sign of the previous increment; 0 before the first step
  double time = 0.0;
};

/// Euler-Maruyama integrator with reflection at the window ends.
class LangevinIntegrator {
 public:
  LangevinIntegrator(const DiffusionSpec& spec, LangevinModel model, double y0,
                     std::uint64_t seed);

  const LangevinState& state() const noexcept { return state_; }
  void restart(double y0, std::uint64_t seed);

  void step();
  /// Integrates to absolute time t_max, sampling every `stride`.
  Trajectory run(double t_max, double stride);
  /// Integrates to t_max or until y leaves [lo, hi].
  void run_until(double t_max, double lo, double hi);
  /// Performs `steps` steps, binning y after each one on `bins` bins of the window.
  void accumulate(std::uint64_t steps, std::vector<double>& histogram);

 private:
  const DiffusionSpec* spec_;
  LangevinModel model_;
  LangevinState state_;
  std::uint64_t steps_ = 0;
  Rng rng_;
};

}  // namespace buoy
