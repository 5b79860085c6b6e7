#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace buoy {

/// Raised when a parameter set or configuration violates its contract.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical parameters of the rod + monomer system. Every rate in the library
/// derives from these values.
///
/// Vertical rates use a symmetric split around the base attempt rate nu:
///   p = nu exp(-m g eps / 2kT),  q = nu exp(+m g eps / 2kT)
///   a = nu exp(-M g eps / 2kT),  b = nu exp(+M g eps / 2kT)
/// so that p/q = exp(-m g eps / kT) and a/b = exp(-M g eps / kT).
struct PhysicalParams {
  double m = 0.02;       ///< monomer mass
  double M = 0.1;        ///< rod mass
  double g = 1.0;        ///< gravitational acceleration
  double kT = 1.0;       ///< thermal energy
  double kappa = 1.0;    ///< density profile parameter, d(0) = kappa / (1 + kappa)
  double gamma = 15.0;   ///< horizontal shaking rate
  int N = 20;            ///< rod length in sites
  double epsilon = 1.0;  ///< vertical lattice mesh
  double nu = 1.0;       ///< base attempt rate

  /// Throws ParamError unless every invariant holds.
  void validate() const;

  double p() const noexcept { return nu * std::exp(-0.5 * m * g * epsilon / kT); }
  double q() const noexcept { return nu * std::exp(0.5 * m * g * epsilon / kT); }
  double a() const noexcept { return nu * std::exp(-0.5 * M * g * epsilon / kT); }
  double b() const noexcept { return nu * std::exp(0.5 * M * g * epsilon / kT); }

  /// m g / kT, the inverse decay length of the density profile.
  double beta_mg() const noexcept { return m * g / kT; }
};

/// kappa placing the half-density point at site H/2 of an H-site column,
/// i.e. kappa = (q/p)^(H/2).
double default_kappa(const PhysicalParams& params, int height);

}  // namespace buoy
