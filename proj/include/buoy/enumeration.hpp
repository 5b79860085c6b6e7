#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "buoy/density.hpp"
#include "buoy/lattice2d.hpp"

namespace buoy {

/// Every configuration of a small lattice with a fixed number of monomers and
/// one rod, together with the generator of the exclusion process on it.
/// Supports W * H <= 64.
class SmallLatticeChain {
 public:
  SmallLatticeChain(const DensityProfile& profile, int width, int height, int monomers);

  std::size_t size() const noexcept { return masks_.size(); }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  /// State index of a lattice snapshot; throws if it is not in the space.
  std::size_t index_of(const LatticeState2D& state) const;

  /// Solves pi Q = 0 with sum(pi) = 1 by sparse LU.
  std::vector<double> stationary_solve() const;
  /// Gibbs weights (a/b)^Y (p/q)^(sum of monomer rows), normalized.
  std::vector<double> gibbs() const;
  /// Largest |(pi Q)_j| over states.
  double balance_residual(const std::vector<double>& pi) const;

 private:
  struct Transition {
    std::size_t from;
    std::size_t to;
    double rate;
  };

  int width_;
  int height_;
  int rod_n_;
  double p_, q_, a_, b_;
  std::vector<std::uint64_t> masks_;
  std::vector<int> rods_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> lookup_;  // per rod row
  std::vector<Transition> transitions_;
};

}  // namespace buoy
