#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace buoy {

/// Rod height at a sampling instant.
struct Sample {
  double t;
  double y;
};

using Trajectory = std::vector<Sample>;

/// Outcome of a single kinetic Monte Carlo step.
struct StepResult {
  double dt = std::numeric_limits<double>::infinity();
  bool fired = false;  ///< false: no transition possible (jammed), dt is infinite
};

/// Records the piecewise-constant rod height on the grid t = 0, stride, 2 stride, ...
/// strictly below t_max.
class GridSampler {
 public:
  GridSampler(double stride, double t_max) : stride_(stride), t_max_(t_max) {}

  /// The height has been `y` since the last call; the clock is about to reach `t`.
  void advance(double t, double y) {
    const double until = std::min(t, t_max_);
    while (next_index_ * stride_ < until) {
      samples_.push_back({static_cast<double>(next_index_) * stride_, y});
      ++next_index_;
    }
  }

  Trajectory take() { return std::move(samples_); }
  const Trajectory& samples() const noexcept { return samples_; }

 private:
  double stride_;
  double t_max_;
  std::size_t next_index_ = 0;
  Trajectory samples_;
};

/// Time spent at each integer height of a window [lo, hi].
class OccupationHistogram {
 public:
  OccupationHistogram(long lo, long hi) : lo_(lo), time_(static_cast<std::size_t>(hi - lo + 1), 0.0) {}

  void add(long y, double dt) {
    if (y < lo_ || y >= lo_ + static_cast<long>(time_.size())) return;
    time_[static_cast<std::size_t>(y - lo_)] += dt;
  }

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(time_.size()) - 1; }
  const std::vector<double>& time() const noexcept { return time_; }

  std::vector<double> normalized() const {
    double total = 0.0;
    for (double t : time_) total += t;
    std::vector<double> out(time_.size(), 0.0);
    if (total > 0.0) {
      for (std::size_t i = 0; i < time_.size(); ++i) out[i] = time_[i] / total;
    }
    return out;
  }

 private:
  long lo_;
  std::vector<double> time_;
};

/// Total-variation distance between two probability vectors of equal length.
inline double total_variation(const std::vector<double>& lhs, const std::vector<double>& rhs) {
  double sum = 0.0;
  const std::size_t n = std::min(lhs.size(), rhs.size());
  for (std::size_t i = 0; i < n; ++i) sum += std::abs(lhs[i] - rhs[i]);
  for (std::size_t i = n; i < lhs.size(); ++i) sum += std::abs(lhs[i]);
  for (std::size_t i = n; i < rhs.size(); ++i) sum += std::abs(rhs[i]);
  return 0.5 * sum;
}

}  // namespace buoy
