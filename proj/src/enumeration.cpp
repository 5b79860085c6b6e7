#include "buoy/enumeration.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace buoy {

namespace {

void choose(const std::vector<int>& sites, std::size_t start, int left, std::uint64_t mask,
            std::vector<std::uint64_t>& out) {
  if (left == 0) {
    out.push_back(mask);
    return;
  }
  for (std::size_t i = start; i + static_cast<std::size_t>(left) <= sites.size(); ++i) {
    choose(sites, i + 1, left - 1, mask | (std::uint64_t{1} << sites[i]), out);
  }
}

}  // namespace

SmallLatticeChain::SmallLatticeChain(const DensityProfile& profile, int width, int height,
                                     int monomers)
    : width_(width), height_(height), rod_n_(profile.params().N) {
  if (width < 1 || height < 1 || width * height > 64) {
    throw ParamError("enumeration needs 1 <= W * H <= 64");
  }
  if (rod_n_ < 1 || rod_n_ > width) throw ParamError("rod must fit the lattice width");
  if (monomers < 0 || monomers > width * height - rod_n_) {
    throw ParamError("too many monomers for the lattice");
  }
  const auto& prm = profile.params();
  p_ = prm.p();
  q_ = prm.q();
  a_ = prm.a();
  b_ = prm.b();
  const double gamma = prm.gamma;
  const auto bit = [width](int x, int y) { return std::uint64_t{1} << (y * width + x); };
  std::uint64_t footprint_row = 0;
  for (int x = 0; x < rod_n_; ++x) footprint_row |= std::uint64_t{1} << x;
  const auto footprint = [&](int y) { return footprint_row << (y * width); };

  lookup_.resize(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) {
    std::vector<int> sites;
    for (int s = 0; s < width * height; ++s) {
      if (!((footprint(r) >> s) & 1U)) sites.push_back(s);
    }
    std::vector<std::uint64_t> masks;
    choose(sites, 0, monomers, 0, masks);
    for (auto mask : masks) {
      lookup_[static_cast<std::size_t>(r)].emplace(mask, masks_.size());
      masks_.push_back(mask);
      rods_.push_back(r);
    }
  }

  for (std::size_t i = 0; i < masks_.size(); ++i) {
    const std::uint64_t mask = masks_[i];
    const int r = rods_[i];
    const auto target = [&](std::uint64_t next, int rod, double rate) {
      transitions_.push_back({i, lookup_[static_cast<std::size_t>(rod)].at(next), rate});
    };
    const auto free_site = [&](int x, int y) {
      if (y < 0 || y >= height) return false;
      const std::uint64_t b = bit(x, y);
      return !(mask & b) && !(footprint(r) & b);
    };
    for (int s = 0; s < width * height; ++s) {
      if (!((mask >> s) & 1U)) continue;
      const int x = s % width;
      const int y = s / width;
      const std::uint64_t here = std::uint64_t{1} << s;
      const int left = x == 0 ? width - 1 : x - 1;
      const int right = x + 1 == width ? 0 : x + 1;
      if (free_site(x, y + 1)) target((mask & ~here) | bit(x, y + 1), r, p_);
      if (free_site(x, y - 1)) target((mask & ~here) | bit(x, y - 1), r, q_);
      if (gamma > 0.0 && free_site(left, y)) target((mask & ~here) | bit(left, y), r, gamma);
      if (gamma > 0.0 && free_site(right, y)) target((mask & ~here) | bit(right, y), r, gamma);
    }
    if (r + 1 < height && !(mask & footprint(r + 1))) target(mask, r + 1, a_);
    if (r > 0 && !(mask & footprint(r - 1))) target(mask, r - 1, b_);
  }
}

std::size_t SmallLatticeChain::index_of(const LatticeState2D& state) const {
  if (state.width != width_ || state.height != height_ || state.rod_n != rod_n_) {
    throw ParamError("snapshot does not match the enumerated lattice");
  }
  std::uint64_t mask = 0;
  for (std::size_t s = 0; s < state.occupancy.size(); ++s) {
    if (state.occupancy[s]) mask |= std::uint64_t{1} << s;
  }
  const auto& table = lookup_.at(static_cast<std::size_t>(state.rod_y));
  const auto it = table.find(mask);
  if (it == table.end()) throw ParamError("configuration outside the enumerated space");
  return it->second;
}

std::vector<double> SmallLatticeChain::stationary_solve() const {
  const auto n = static_cast<Eigen::Index>(masks_.size());
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(transitions_.size() * 2 + masks_.size());
  std::vector<double> out_rate(masks_.size(), 0.0);
  const Eigen::Index last = n - 1;
  // Rows of Q^T; the last row is replaced by the normalization sum(pi) = 1.
  for (const auto& t : transitions_) {
    out_rate[t.from] += t.rate;
    const auto row = static_cast<Eigen::Index>(t.to);
    if (row != last) entries.emplace_back(row, static_cast<Eigen::Index>(t.from), t.rate);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j != last) entries.emplace_back(j, j, -out_rate[static_cast<std::size_t>(j)]);
    entries.emplace_back(last, j, 1.0);
  }
  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver;
  solver.compute(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("generator factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs[last] = 1.0;
  const Eigen::VectorXd pi = solver.solve(rhs);
  return std::vector<double>(pi.data(), pi.data() + n);
}

std::vector<double> SmallLatticeChain::gibbs() const {
  std::vector<double> log_w(masks_.size());
  const double log_pq = std::log(p_ / q_);
  const double log_ab = std::log(a_ / b_);
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    long rows = 0;
    for (int s = 0; s < width_ * height_; ++s) {
      if ((masks_[i] >> s) & 1U) rows += s / width_;
    }
    log_w[i] = log_ab * rods_[i] + log_pq * static_cast<double>(rows);
  }
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  for (double& w : log_w) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : log_w) w /= total;
  return log_w;
}

double SmallLatticeChain::balance_residual(const std::vector<double>& pi) const {
  std::vector<double> flow(masks_.size(), 0.0);
  for (const auto& t : transitions_) {
    flow[t.from] -= pi[t.from] * t.rate;
    flow[t.to] += pi[t.from] * t.rate;
  }
  double worst = 0.0;
  for (double f : flow) worst = std::max(worst, std::abs(f));
  return worst;
}

}  // namespace buoy
