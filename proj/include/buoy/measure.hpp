#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "buoy/density.hpp"

namespace buoy {

enum class Model { lattice2d, contracted, fluid, memory, langevin_fluid, langevin_memory };

std::string model_name(Model model);
/// Accepts the names produced by model_name; throws ParamError otherwise.
Model parse_model(const std::string& name);

/// Drift-measurement protocol.
///
/// Each replica starts at the release height and runs for T time units, or
/// until it leaves the clip window, whichever comes first. T is expressed in
/// local jump times 1 / (2 nu (1 - d(y))^N), the mean holding time of the
/// fluid walker at the release height for a massless rod.
struct Protocol {
  double T = 5.0;
  int replicas = 4096;
  double tolerance = 1e-3;  ///< bracket width at stop, in units of m N g
  int max_iterations = 40;
  long clip = 25;
  long chain_length = 300;  ///< contracted model
  int lattice_width = 0;    ///< lattice2d; 0 means N
  double dt = 1e-3;         ///< Langevin models
  std::uint64_t seed = 1;
  unsigned threads = 0;     ///< 0: hardware concurrency
};

/// Closed-form fluid-limit buoyancy at site k: the weight at which the
/// discrete force vanishes on average over the two bonds around k,
///   (N kT / 2) ln[(1 - d(k+1)) / (1 - d(k-1))].
/// Reduces to N d(y) m g as the mesh is refined.
double buoyancy_analytic_fluid(const DensityProfile& profile, long k);

/// Weight M g at which the fluid walker at site k has zero mean velocity,
/// a (1 - d(k+1))^N = b (1 - d(k-1))^N. Twice buoyancy_analytic_fluid.
double drift_balancing_weight_fluid(const DensityProfile& profile, long k);

/// Local jump time used as the unit of Protocol::T.
double jump_time(const DensityProfile& profile, long k);

struct DriftEstimate {
  double drift = 0.0;   ///< sum of displacements / sum of elapsed times
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
  double elapsed = 0.0;  ///< total simulated time over replicas
};

/// Mean velocity of the rod released at site k, over protocol.replicas runs.
/// Replica i uses the seed derive_seed(protocol.seed, i) whatever the mass,
/// so that drift estimates at different masses share random numbers.
DriftEstimate measure_drift(Model model, const PhysicalParams& params, long k,
                            const Protocol& protocol);

struct BuoyancyPoint {
  std::string param;
  double value = 0.0;
  double buoyancy = 0.0;         ///< half the balancing weight
  double stderr_ = 0.0;
  double balancing_weight = 0.0;  ///< M* g with zero mean drift
  int replicas = 0;
  std::uint64_t samples = 0;
  std::string model;
};

class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bisection on the rod mass over [0, 2 m N] for the mass whose drift
/// vanishes at site k. Throws BracketError when the drift does not change sign
/// on the bracket and std::runtime_error when max_iterations is exhausted.
BuoyancyPoint buoyancy_bisect(Model model, const PhysicalParams& params, long k,
                              const Protocol& protocol,
                              std::optional<double> bracket_hi = std::nullopt);

struct LinearFit {
  bool defined = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct SweepFailure {
  double value;
  std::string message;
};

struct SweepReport {
  std::string param;
  std::vector<BuoyancyPoint> points;
  std::vector<SweepFailure> failures;
  LinearFit fit;                   ///< buoyancy against N; deficit against 1/(2+gamma)
  std::optional<double> saturation_onset;  ///< gamma sweeps only
  double analytic = 0.0;           ///< buoyancy_analytic_fluid at the sweep's N (gamma sweeps)
  double asymptote_gap_se = 0.0;   ///< (last point - analytic) / its stderr
  double analytic_slope = 0.0;     ///< d(y) m g (N sweeps)
};

SweepReport sweep_N(Model model, const std::vector<int>& Ns, const PhysicalParams& params, long k,
                    const Protocol& protocol);

/// Gammas must be strictly increasing.
SweepReport sweep_gamma(Model model, const std::vector<double>& gammas,
                        const PhysicalParams& params, long k, const Protocol& protocol);

/// Smallest swept value from which every pair of successive points differs by
/// less than their combined standard error.
std::optional<double> saturation_onset(const std::vector<BuoyancyPoint>& points);

}  // namespace buoy
