#pragma once

#include <cstdint>
#include <vector>

#include "buoy/density.hpp"
#include "buoy/rng.hpp"
#include "buoy/trajectory.hpp"

namespace buoy {

struct LatticeOptions {
  bool with_rod = true;      ///< false: monomers only, params.N is ignored
  bool rod_frozen = false;   ///< a = b = 0
  bool validate_each_event = false;
};

/// Plain snapshot of a lattice. occupancy is row-major, index y * W + x.
struct LatticeState2D {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> occupancy;
  int rod_y = 0;
  int rod_n = 0;  ///< 0 when there is no rod
  double time = 0.0;
};

/// Time-averaged monomer occupation per row.
struct RowProfile {
  std::vector<double> mean_occupation;  ///< per site, averaged over the row
  double duration = 0.0;
};

/// Continuous-time exclusion process on a W x H box with one horizontal rod.
///
/// Columns are periodic, rows 0 and H-1 are closed. The rod covers columns
/// [0, N) of row rod_y and moves vertically only. Events are drawn by rejection
/// from the bound n (p + q + 2 gamma) + a + b: a monomer and a direction are
/// proposed and discarded when the target is occupied, outside the box or under
/// the rod. Rejected proposals still advance the clock, which keeps the
/// sampling exact.
class Lattice2D {
 public:
  /// Product measure at density d(y) on every site outside the rod footprint.
  Lattice2D(const DensityProfile& profile, int width, int height, int rod_y0, std::uint64_t seed,
            LatticeOptions options = {});
  /// Explicit configuration.
  Lattice2D(const DensityProfile& profile, int width, int height,
            std::vector<std::uint8_t> occupancy, int rod_y0, std::uint64_t seed,
            LatticeOptions options = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int rod_y() const noexcept { return rod_y_; }
  int rod_n() const noexcept { return rod_n_; }
  double time() const noexcept { return time_; }
  std::size_t monomer_count() const noexcept { return monomers_.size(); }
  bool occupied(int x, int y) const noexcept { return index_[site(x, y)] >= 0; }

  LatticeState2D snapshot() const;

  StepResult step();
  /// Runs to absolute time t_max, sampling the rod height every `stride`.
  Trajectory run(double t_max, double stride);
  /// Runs to absolute time t_max or until the rod leaves rows [lo, hi].
  void run_until(double t_max, int lo, int hi);

  /// Row occupation averaged since construction or the last reset_profile().
  RowProfile profile() const;
  void reset_profile();

  /// Throws std::logic_error if an invariant is broken.
  void validate() const;

 private:
  struct Monomer {
    int x;
    int y;
  };

  void setup(const DensityProfile& profile, int rod_y0, LatticeOptions options);
  std::size_t site(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool in_footprint(int x, int y) const noexcept { return y == rod_y_ && x < rod_n_; }
  bool free_site(int x, int y) const noexcept {
    return y >= 0 && y < height_ && index_[site(x, y)] < 0 && !in_footprint(x, y);
  }
  bool rod_can_move(int dy) const noexcept;
  void move_monomer(std::size_t k, int x, int y);
  void touch_row(int y);
  double exact_total_rate() const;
  /// Proposes events until one is accepted before `horizon`; false if none is.
  bool fire_before(double horizon);

  int width_;
  int height_;
  int rod_n_ = 0;
  int rod_y_ = 0;
  double p_, q_, gamma_, a_, b_;
  double bound_ = 0.0;
  bool validate_each_ = false;
  std::vector<Monomer> monomers_;
  std::vector<std::int32_t> index_;     // monomer index per site, -1 when empty
  std::vector<int> footprint_count_;    // monomers in columns [0, N) per row
  std::vector<int> row_count_;
  std::vector<double> row_integral_;
  std::vector<double> row_stamp_;
  double profile_start_ = 0.0;
  double time_ = 0.0;
  Rng rng_;
};

}  // namespace buoy
