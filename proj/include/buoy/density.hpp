#pragma once

#include <functional>
#include <vector>

#include "buoy/params.hpp"

namespace buoy {

/// Raised where a formula needs 1 - d > 0 and the profile is saturated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Equilibrium monomer profile d(y) = kappa e^{-mg y/kT} / (1 + kappa e^{-mg y/kT})
/// and the analytic forces built on it.
///
/// Heights are physical: lattice site k sits at y = k * epsilon. All evaluations
/// go through the log-odds z(y) = ln kappa - mg y / kT so that d and 1 - d stay
/// accurate in both tails.
class DensityProfile {
 public:
  explicit DensityProfile(PhysicalParams params);

  const PhysicalParams& params() const noexcept { return params_; }

  double log_odds(double y) const noexcept;
  double density(double y) const noexcept;
  /// 1 - d(y), computed without cancellation.
  double vacancy(double y) const noexcept;
  /// ln(1 - d(y)).
  double log_vacancy(double y) const noexcept;
  /// d'(y) = -d (1 - d) mg / kT.
  double derivative(double y) const noexcept;

  /// Probability (1 - d(y))^n that the n-site row at height y is empty.
  double hole_probability(double y, int n) const noexcept;
  /// rho(y) = 1 - (1 - d(y))^n, probability that the row holds a monomer.
  double blocked_probability(double y, int n) const noexcept;

  /// Relative residual of p d(y)(1-d(y+eps)) - q d(y+eps)(1-d(y)).
  double detailed_balance_residual(double y) const noexcept;

  /// Discrete force across the bond (y - eps, y), an energy per lattice step:
  /// F = -kT ln( b (1-d(y-eps))^N / (a (1-d(y))^N) ).
  double force_discrete(double y) const;
  /// Same quantity via -M g eps - N kT ln(1 + (d(y) - d(y-eps)) / (1 - d(y))).
  double force_discrete_alt(double y) const;
  /// Archimedes force -M g + d(y) m g N.
  double force_continuum(double y) const noexcept;
  /// Finite-mesh force -M g - (kT N / eps) ln(1 + eps d'(y) / (1 - d(y))).
  double force_mesh(double y, double eps) const;

  /// Discrete potential at site k with V(0) = 0, by summing -F over bonds.
  double potential_discrete(long k) const;
  /// Closed form V(y) = M g y - N kT ln(1 - d(y)), up to a constant.
  double potential_continuum(double y) const;

 private:
  PhysicalParams params_;
  double log_kappa_;
  double slope_;  // mg / kT
};

/// Residual of the detailed-balance identity for an arbitrary profile.
double detailed_balance_residual(const PhysicalParams& params,
                                 const std::function<double(double)>& profile, double y);

struct MeshRow {
  double epsilon;
  double force;
  double gap;        ///< force - force_continuum
  double gap_ratio;  ///< gap / previous gap; NaN on the first row
};

/// F_eps(y) for each mesh size, its gap to the continuum force and the ratio of
/// successive gaps. Mesh sizes must be positive and strictly decreasing.
std::vector<MeshRow> mesh_convergence(const DensityProfile& profile, double y,
                                      const std::vector<double>& epsilons);

}  // namespace buoy
