#include "buoy/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace buoy {

namespace {

double logistic(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// ln(1 + e^z)
double softplus(double z) noexcept {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

void require_vacancy(double vacancy, double y) {
  if (!(vacancy > 0.0)) {
    throw DomainError("density saturates at y = " + std::to_string(y) + " (rod jammed)");
  }
}

}  // namespace

void PhysicalParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParamError(std::string(name) + " must be > 0");
  };
  positive(m, "m");
  positive(M, "M");
  positive(g, "g");
  positive(kT, "kT");
  positive(kappa, "kappa");
  positive(nu, "nu");
  positive(epsilon, "epsilon");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw ParamError("gamma must be >= 0");
  if (N < 1) throw ParamError("N must be >= 1");
}

double default_kappa(const PhysicalParams& params, int height) {
  return std::exp(params.beta_mg() * params.epsilon * 0.5 * height);
}

DensityProfile::DensityProfile(PhysicalParams params)
    : params_(params), log_kappa_(std::log(params.kappa)), slope_(params.beta_mg()) {}

double DensityProfile::log_odds(double y) const noexcept { return log_kappa_ - slope_ * y; }

double DensityProfile::density(double y) const noexcept { return logistic(log_odds(y)); }

double DensityProfile::vacancy(double y) const noexcept { return logistic(-log_odds(y)); }

double DensityProfile::log_vacancy(double y) const noexcept { return -softplus(log_odds(y)); }

double DensityProfile::derivative(double y) const noexcept {
  return -density(y) * vacancy(y) * slope_;
}

double DensityProfile::hole_probability(double y, int n) const noexcept {
  return std::exp(n * log_vacancy(y));
}

double DensityProfile::blocked_probability(double y, int n) const noexcept {
  return -std::expm1(n * log_vacancy(y));
}

double DensityProfile::detailed_balance_residual(double y) const noexcept {
  const double up = params_.p() * density(y) * vacancy(y + params_.epsilon);
  const double down = params_.q() * density(y + params_.epsilon) * vacancy(y);
  const double scale = std::max(std::abs(up), std::abs(down));
  return scale > 0.0 ? (up - down) / scale : 0.0;
}

double DensityProfile::force_discrete(double y) const {
  const double eps = params_.epsilon;
  const double lower = log_vacancy(y - eps);
  const double upper = log_vacancy(y);
  require_vacancy(vacancy(y - eps), y - eps);
  require_vacancy(vacancy(y), y);
  const double log_ratio = std::log(params_.b() / params_.a()) + params_.N * (lower - upper);
  return -params_.kT * log_ratio;
}

double DensityProfile::force_discrete_alt(double y) const {
  const double eps = params_.epsilon;
  const double vac = vacancy(y);
  require_vacancy(vac, y);
  require_vacancy(vacancy(y - eps), y - eps);
  const double jump = (density(y) - density(y - eps)) / vac;
  return -params_.M * params_.g * eps - params_.N * params_.kT * std::log1p(jump);
}

double DensityProfile::force_continuum(double y) const noexcept {
  return -params_.M * params_.g + density(y) * params_.m * params_.g * params_.N;
}

double DensityProfile::force_mesh(double y, double eps) const {
  if (!(eps > 0.0)) throw ParamError("mesh size must be > 0");
  const double vac = vacancy(y);
  require_vacancy(vac, y);
  const double arg = eps * derivative(y) / vac;
  if (!(1.0 + arg > 0.0)) {
    throw DomainError("mesh too coarse: log argument <= 0 at y = " + std::to_string(y));
  }
  return -params_.M * params_.g - params_.kT * params_.N / eps * std::log1p(arg);
}

double DensityProfile::potential_discrete(long k) const {
  const double eps = params_.epsilon;
  double v = 0.0;
  if (k > 0) {
    for (long j = 1; j <= k; ++j) v -= force_discrete(static_cast<double>(j) * eps);
  } else {
    for (long j = 0; j > k; --j) v += force_discrete(static_cast<double>(j) * eps);
  }
  return v;
}

double DensityProfile::potential_continuum(double y) const {
  require_vacancy(vacancy(y), y);
  return params_.M * params_.g * y - params_.N * params_.kT * log_vacancy(y);
}

double detailed_balance_residual(const PhysicalParams& params,
                                 const std::function<double(double)>& profile, double y) {
  const double d0 = profile(y);
  const double d1 = profile(y + params.epsilon);
  const double up = params.p() * d0 * (1.0 - d1);
  const double down = params.q() * d1 * (1.0 - d0);
  const double scale = std::max(std::abs(up), std::abs(down));
  return scale > 0.0 ? (up - down) / scale : 0.0;
}

std::vector<MeshRow> mesh_convergence(const DensityProfile& profile, double y,
                                      const std::vector<double>& epsilons) {
  std::vector<MeshRow> rows;
  rows.reserve(epsilons.size());
  const double exact = profile.force_continuum(y);
  double previous_eps = std::numeric_limits<double>::infinity();
  for (double eps : epsilons) {
    if (!(eps > 0.0) || !(eps < previous_eps)) {
      throw ParamError("mesh sizes must be positive and strictly decreasing");
    }
    previous_eps = eps;
    MeshRow row{eps, profile.force_mesh(y, eps), 0.0, std::numeric_limits<double>::quiet_NaN()};
    row.gap = row.force - exact;
    if (!rows.empty()) row.gap_ratio = row.gap / rows.back().gap;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace buoy
