#include "buoy/lattice2d.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace buoy {

namespace {

// Consecutive rejections after which the exact total rate is computed to
// detect a configuration with no possible event.
constexpr int kJamCheck = 4096;

}  // namespace

Lattice2D::Lattice2D(const DensityProfile& profile, int width, int height, int rod_y0,
                     std::uint64_t seed, LatticeOptions options)
    : width_(width), height_(height), rng_(seed) {
  if (width < 1 || height < 1) throw ParamError("lattice dimensions must be positive");
  const std::size_t sites = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  index_.assign(sites, -1);
  rod_n_ = options.with_rod ? profile.params().N : 0;
  rod_y_ = rod_y0;
  if (options.with_rod && (rod_y0 < 0 || rod_y0 >= height)) {
    throw ParamError("rod height outside the lattice");
  }
  if (rod_n_ > width) throw ParamError("rod longer than the lattice width");
  const double eps = profile.params().epsilon;
  for (int y = 0; y < height; ++y) {
    const double d = profile.density(static_cast<double>(y) * eps);
    for (int x = 0; x < width; ++x) {
      if (in_footprint(x, y)) continue;
      if (rng_.bernoulli(d)) {
        index_[site(x, y)] = static_cast<std::int32_t>(monomers_.size());
        monomers_.push_back({x, y});
      }
    }
  }
  setup(profile, rod_y0, options);
}

Lattice2D::Lattice2D(const DensityProfile& profile, int width, int height,
                     std::vector<std::uint8_t> occupancy, int rod_y0, std::uint64_t seed,
                     LatticeOptions options)
    : width_(width), height_(height), rng_(seed) {
  if (width < 1 || height < 1) throw ParamError("lattice dimensions must be positive");
  const std::size_t sites = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (occupancy.size() != sites) throw ParamError("occupancy size does not match W * H");
  rod_n_ = options.with_rod ? profile.params().N : 0;
  rod_y_ = rod_y0;
  if (options.with_rod && (rod_y0 < 0 || rod_y0 >= height)) {
    throw ParamError("rod height outside the lattice");
  }
  if (rod_n_ > width) throw ParamError("rod longer than the lattice width");
  index_.assign(sites, -1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto v = occupancy[site(x, y)];
      if (v > 1) throw ParamError("occupancy values must be 0 or 1");
      if (v == 0) continue;
      if (in_footprint(x, y)) throw ParamError("monomer under the rod");
      index_[site(x, y)] = static_cast<std::int32_t>(monomers_.size());
      monomers_.push_back({x, y});
    }
  }
  setup(profile, rod_y0, options);
}

void Lattice2D::setup(const DensityProfile& profile, int rod_y0, LatticeOptions options) {
  const auto& p = profile.params();
  p_ = p.p();
  q_ = p.q();
  gamma_ = p.gamma;
  const bool rod_moves = options.with_rod && !options.rod_frozen;
  a_ = rod_moves ? p.a() : 0.0;
  b_ = rod_moves ? p.b() : 0.0;
  rod_y_ = options.with_rod ? rod_y0 : 0;
  validate_each_ = options.validate_each_event;
  bound_ = static_cast<double>(monomers_.size()) * (p_ + q_ + 2.0 * gamma_) + a_ + b_;
  footprint_count_.assign(static_cast<std::size_t>(height_), 0);
  row_count_.assign(static_cast<std::size_t>(height_), 0);
  for (const auto& mono : monomers_) {
    ++row_count_[static_cast<std::size_t>(mono.y)];
    if (mono.x < rod_n_) ++footprint_count_[static_cast<std::size_t>(mono.y)];
  }
  row_integral_.assign(static_cast<std::size_t>(height_), 0.0);
  row_stamp_.assign(static_cast<std::size_t>(height_), 0.0);
  profile_start_ = 0.0;
}

LatticeState2D Lattice2D::snapshot() const {
  LatticeState2D s;
  s.width = width_;
  s.height = height_;
  s.occupancy.assign(index_.size(), 0);
  for (std::size_t i = 0; i < index_.size(); ++i) s.occupancy[i] = index_[i] >= 0 ? 1 : 0;
  s.rod_y = rod_y_;
  s.rod_n = rod_n_;
  s.time = time_;
  return s;
}

bool Lattice2D::rod_can_move(int dy) const noexcept {
  if (rod_n_ == 0) return false;
  const int target = rod_y_ + dy;
  if (target < 0 || target >= height_) return false;
  return footprint_count_[static_cast<std::size_t>(target)] == 0;
}

void Lattice2D::touch_row(int y) {
  const auto i = static_cast<std::size_t>(y);
  row_integral_[i] += static_cast<double>(row_count_[i]) * (time_ - row_stamp_[i]);
  row_stamp_[i] = time_;
}

void Lattice2D::move_monomer(std::size_t k, int x, int y) {
  Monomer& mono = monomers_[k];
  if (mono.y != y) {
    touch_row(mono.y);
    touch_row(y);
    --row_count_[static_cast<std::size_t>(mono.y)];
    ++row_count_[static_cast<std::size_t>(y)];
  }
  if (mono.x < rod_n_) --footprint_count_[static_cast<std::size_t>(mono.y)];
  if (x < rod_n_) ++footprint_count_[static_cast<std::size_t>(y)];
  index_[site(mono.x, mono.y)] = -1;
  index_[site(x, y)] = static_cast<std::int32_t>(k);
  mono.x = x;
  mono.y = y;
}

double Lattice2D::exact_total_rate() const {
  double total = 0.0;
  for (const auto& mono : monomers_) {
    const int left = mono.x == 0 ? width_ - 1 : mono.x - 1;
    const int right = mono.x + 1 == width_ ? 0 : mono.x + 1;
    if (free_site(mono.x, mono.y + 1)) total += p_;
    if (free_site(mono.x, mono.y - 1)) total += q_;
    if (free_site(left, mono.y)) total += gamma_;
    if (free_site(right, mono.y)) total += gamma_;
  }
  if (rod_can_move(1)) total += a_;
  if (rod_can_move(-1)) total += b_;
  return total;
}

bool Lattice2D::fire_before(double horizon) {
  const double per_monomer = p_ + q_ + 2.0 * gamma_;
  const double monomer_total = static_cast<double>(monomers_.size()) * per_monomer;
  int rejections = 0;
  while (true) {
    const double dt = rng_.exponential(bound_);
    if (!(time_ + dt < horizon)) {
      time_ = horizon;
      return false;
    }
    time_ += dt;
    double u = rng_.uniform() * bound_;
    bool accepted = false;
    if (u < monomer_total) {
      auto k = static_cast<std::size_t>(u / per_monomer);
      if (k >= monomers_.size()) k = monomers_.size() - 1;
      u -= static_cast<double>(k) * per_monomer;
      const Monomer mono = monomers_[k];
      int x = mono.x;
      int y = mono.y;
      if (u < p_) {
        ++y;
      } else if (u < p_ + q_) {
        --y;
      } else if (u < p_ + q_ + gamma_) {
        x = x == 0 ? width_ - 1 : x - 1;
      } else {
        x = x + 1 == width_ ? 0 : x + 1;
      }
      if (free_site(x, y)) {
        move_monomer(k, x, y);
        accepted = true;
      }
    } else {
      u -= monomer_total;
      const int dy = u < a_ ? 1 : -1;
      if (a_ + b_ > 0.0 && rod_can_move(dy)) {
        rod_y_ += dy;
        accepted = true;
      }
    }
    if (accepted) {
      if (validate_each_) validate();
      return true;
    }
    if (++rejections == kJamCheck) {
      rejections = 0;
      if (!(exact_total_rate() > 0.0)) {
        time_ = horizon;
        return false;
      }
    }
  }
}

StepResult Lattice2D::step() {
  const double before = time_;
  if (!fire_before(std::numeric_limits<double>::infinity())) {
    time_ = before;
    return {};
  }
  return {time_ - before, true};
}

Trajectory Lattice2D::run(double t_max, double stride) {
  GridSampler sampler(stride, t_max);
  while (time_ < t_max) {
    const int y = rod_y_;
    fire_before(t_max);
    sampler.advance(time_, static_cast<double>(y));
  }
  return sampler.take();
}

void Lattice2D::run_until(double t_max, int lo, int hi) {
  while (time_ < t_max && rod_y_ >= lo && rod_y_ <= hi) fire_before(t_max);
}

RowProfile Lattice2D::profile() const {
  RowProfile out;
  out.duration = time_ - profile_start_;
  out.mean_occupation.assign(static_cast<std::size_t>(height_), 0.0);
  if (!(out.duration > 0.0)) return out;
  for (std::size_t i = 0; i < out.mean_occupation.size(); ++i) {
    const double integral =
        row_integral_[i] + static_cast<double>(row_count_[i]) * (time_ - row_stamp_[i]);
    out.mean_occupation[i] = integral / (out.duration * static_cast<double>(width_));
  }
  return out;
}

void Lattice2D::reset_profile() {
  profile_start_ = time_;
  std::fill(row_integral_.begin(), row_integral_.end(), 0.0);
  std::fill(row_stamp_.begin(), row_stamp_.end(), time_);
}

void Lattice2D::validate() const {
  auto fail = [](const std::string& what) { throw std::logic_error("lattice invariant: " + what); };
  std::vector<int> rows(static_cast<std::size_t>(height_), 0);
  std::vector<int> feet(static_cast<std::size_t>(height_), 0);
  for (std::size_t k = 0; k < monomers_.size(); ++k) {
    const auto& mono = monomers_[k];
    if (mono.x < 0 || mono.x >= width_ || mono.y < 0 || mono.y >= height_) fail("out of box");
    if (index_[site(mono.x, mono.y)] != static_cast<std::int32_t>(k)) fail("index mismatch");
    if (in_footprint(mono.x, mono.y)) fail("monomer under the rod");
    ++rows[static_cast<std::size_t>(mono.y)];
    if (mono.x < rod_n_) ++feet[static_cast<std::size_t>(mono.y)];
  }
  std::size_t filled = 0;
  for (auto v : index_) filled += v >= 0 ? 1 : 0;
  if (filled != monomers_.size()) fail("stray site index");
  if (rows != row_count_) fail("row counts");
  if (feet != footprint_count_) fail("footprint counts");
}

}  // namespace buoy
