#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "buoy/langevin.hpp"

using namespace buoy;

namespace {

PhysicalParams rod_params() {
  PhysicalParams p;
  p.m = 2.0;
  p.M = 0.6;
  p.N = 1;
  p.gamma = 15.0;
  p.kappa = 0.3 / 0.7;
  return p;
}

PhysicalParams empty_fluid() {
  PhysicalParams p = rod_params();
  p.kappa = 1e-300;
  return p;
}

std::vector<double> histogram(const DiffusionSpec& spec, LangevinModel model, std::uint64_t steps,
                              std::uint64_t seed, int bins) {
  LangevinIntegrator integrator(spec, model, 0.5 * (spec.lo() + spec.hi()), seed);
  std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
  integrator.accumulate(steps, h);
  for (double& v : h) v /= static_cast<double>(steps);
  return h;
}

}  // namespace

TEST_CASE("drift: closed-form examples") {
  const DiffusionSpec empty(empty_fluid(), 1e-3, -5.0, 5.0);
  CHECK(empty.diffusion(1.0) == 1.0);
  CHECK(empty.diffusion_derivative(1.0) == doctest::Approx(0.0));
  CHECK(empty.drift(1.0) == doctest::Approx(-0.6));

  PhysicalParams idle = rod_params();
  idle.M = 0.0;
  idle.m = 1e-300;
  const DiffusionSpec flat(idle, 1e-3, -5.0, 5.0);
  CHECK(std::abs(flat.drift(0.0)) < 1e-200);
  CHECK(flat.diffusion(0.0) == doctest::Approx(0.7));

  // At d(0) = 0.3, N = 1: D = 0.7, chi = 0.7, F = -0.6 + 0.6, D' = 2 * 0.3 * 0.7.
  const DiffusionSpec spec(rod_params(), 1e-3, -6.0, 14.0);
  CHECK(spec.force(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spec.drift(0.0) == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("diffusion derivative against a finite difference") {
  PhysicalParams p = rod_params();
  p.N = 4;
  const DiffusionSpec spec(p, 1e-3, -6.0, 14.0);
  const double h = 1e-5;
  for (int i = 0; i <= 200; ++i) {
    const double y = -6.0 + 0.1 * i;
    const double fd = (spec.diffusion(y + h) - spec.diffusion(y - h)) / (2.0 * h);
    CHECK(std::abs(spec.diffusion_derivative(y) - fd) < 1e-6);
  }
}

TEST_CASE("Einstein relation and zero stationary flux") {
  PhysicalParams p = rod_params();
  p.N = 3;
  p.m = 0.7;
  const DiffusionSpec spec(p, 1e-3, -6.0, 14.0);
  const double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const double y = -5.0 + 0.018 * i;
    CHECK(spec.diffusion(y) == doctest::Approx(p.kT * spec.mobility(y)).epsilon(1e-15));
    // J = drift pi - (D pi)' with pi = exp(-V / kT).
    auto pi = [&](double x) { return std::exp(-spec.profile().potential_continuum(x) / p.kT); };
    const double flux_scale = std::abs(spec.drift(y)) * pi(y) + 1e-12;
    const double d_pi = (spec.diffusion(y + h) * pi(y + h) - spec.diffusion(y - h) * pi(y - h)) /
                        (2.0 * h);
    CHECK(std::abs(spec.drift(y) * pi(y) - d_pi) / flux_scale < 1e-4);
  }
}

TEST_CASE("free diffusion spreads with variance 2 t") {
  PhysicalParams p = empty_fluid();
  p.M = 0.0;
  const DiffusionSpec spec(p, 1e-3, -1000.0, 1000.0);
  constexpr int kReplicas = 20000;
  double sum = 0.0;
  double sum2 = 0.0;
  LangevinIntegrator integrator(spec, LangevinModel::fluid, 0.0, 1);
  for (int r = 0; r < kReplicas; ++r) {
    integrator.restart(0.0, derive_seed(17, r));
    integrator.run_until(1.0, -1000.0, 1000.0);
    const double y = integrator.state().y;
    sum += y;
    sum2 += y * y;
  }
  const double mean = sum / kReplicas;
  const double var = sum2 / kReplicas - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(2.0 / kReplicas));
  CHECK(std::abs(var - 2.0) < 4.0 * 2.0 * std::sqrt(2.0 / kReplicas));
}

TEST_CASE("memory friction") {
  PhysicalParams p = rod_params();
  const DiffusionSpec empty(empty_fluid(), 1e-3, -6.0, 14.0);
  CHECK(empty.friction(0.0) == 0.0);
  double previous = 0.0;
  for (double gamma : {100.0, 10.0, 1.0, 0.0}) {
    p.gamma = gamma;
    const DiffusionSpec spec(p, 1e-3, -6.0, 14.0);
    const double f = spec.friction(0.0);
    CHECK(f > previous);
    CHECK(f <= 2.0 / (2.0 + gamma));
    previous = f;
  }
  CHECK(previous == doctest::Approx(0.3));
}

TEST_CASE("time step and window validation") {
  CHECK_THROWS_AS(DiffusionSpec(rod_params(), 1.0, 0.0, 1.0), ParamError);
  CHECK_THROWS_AS(DiffusionSpec(rod_params(), 0.0, 0.0, 1.0), ParamError);
  CHECK_THROWS_AS(DiffusionSpec(rod_params(), 1e-3, 1.0, 1.0), ParamError);
  CHECK_NOTHROW(DiffusionSpec(rod_params(), 1e-3, 0.0, 1.0));
  const DiffusionSpec spec(rod_params(), 1e-3, 0.0, 1.0);
  CHECK_THROWS_AS(LangevinIntegrator(spec, LangevinModel::fluid, 2.0, 1), ParamError);
}

TEST_CASE("stationary histogram of the fluid integrator") {
  const DiffusionSpec spec(rod_params(), 1e-2, -6.0, 14.0);
  const auto exact = spec.stationary_bins(40);
  double total = 0.0;
  for (double v : exact) total += v;
  CHECK(total == doctest::Approx(1.0));
  const auto sim = histogram(spec, LangevinModel::fluid, 3000000, 5, 40);
  CHECK(total_variation(sim, exact) < 0.03);
}

TEST_CASE("memory integrator at large gamma and dt robustness") {
  PhysicalParams p = rod_params();
  p.gamma = 100.0;
  const DiffusionSpec coarse(p, 1e-2, -6.0, 14.0);
  const DiffusionSpec fine(p, 5e-3, -6.0, 14.0);
  const auto fluid = histogram(coarse, LangevinModel::fluid, 3000000, 6, 40);
  const auto memory = histogram(coarse, LangevinModel::memory, 3000000, 6, 40);
  CHECK(total_variation(fluid, memory) < 0.03);
  const auto refined = histogram(fine, LangevinModel::fluid, 6000000, 7, 40);
  CHECK(total_variation(fluid, refined) < 0.03);
}

TEST_CASE("state, determinism and sampling") {
  const DiffusionSpec spec(rod_params(), 1e-3, -6.0, 14.0);
  LangevinIntegrator a(spec, LangevinModel::memory, 0.0, 3);
  CHECK(a.state().upsilon == 0);
  for (int i = 0; i < 10000; ++i) {
    const double before = a.state().y;
    a.step();
    const double after = a.state().y;
    REQUIRE((a.state().upsilon == 1 || a.state().upsilon == -1));
    if (after > before) REQUIRE(a.state().upsilon == 1);
    if (after < before) REQUIRE(a.state().upsilon == -1);
    REQUIRE(after >= -6.0);
    REQUIRE(after <= 14.0);
  }
  CHECK(a.state().time == doctest::Approx(10.0));

  LangevinIntegrator b(spec, LangevinModel::fluid, 1.0, 9);
  LangevinIntegrator c(spec, LangevinModel::fluid, 1.0, 9);
  const Trajectory tb = b.run(50.0, 0.5);
  const Trajectory tc = c.run(50.0, 0.5);
  REQUIRE(tb.size() == 100);
  for (std::size_t i = 0; i < tb.size(); ++i) CHECK(tb[i].y == tc[i].y);
  CHECK(tb[0].y == 1.0);
  LangevinIntegrator d(spec, LangevinModel::fluid, 1.0, 9);
  CHECK(d.run(0.0, 1.0).empty());
}
