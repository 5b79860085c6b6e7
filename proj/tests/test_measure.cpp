#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "buoy/measure.hpp"

using namespace buoy;

namespace {

PhysicalParams column() {
  PhysicalParams p;
  p.kappa = default_kappa(p, 300);
  return p;
}

BuoyancyPoint at(double value, double buoyancy, double se) {
  BuoyancyPoint p;
  p.value = value;
  p.buoyancy = buoyancy;
  p.stderr_ = se;
  return p;
}

}  // namespace

TEST_CASE("model names round-trip") {
  for (Model m : {Model::lattice2d, Model::contracted, Model::fluid, Model::memory,
                  Model::langevin_fluid, Model::langevin_memory}) {
    CHECK(parse_model(model_name(m)) == m);
  }
  CHECK(model_name(Model::langevin_fluid) == "langevin-fluid");
  CHECK_THROWS_AS(parse_model("gas"), ParamError);
}

TEST_CASE("analytic fluid buoyancy") {
  SUBCASE("flat profile carries no buoyancy") {
    PhysicalParams p = column();
    p.m = 1e-12;
    CHECK(std::abs(buoyancy_analytic_fluid(DensityProfile(p), 40)) < 1e-10);
  }
  SUBCASE("linear in N") {
    PhysicalParams p = column();
    p.N = 5;
    const double five = buoyancy_analytic_fluid(DensityProfile(p), 180);
    p.N = 10;
    CHECK(buoyancy_analytic_fluid(DensityProfile(p), 180) == doctest::Approx(2.0 * five));
    CHECK(drift_balancing_weight_fluid(DensityProfile(p), 180) ==
          doctest::Approx(4.0 * five).epsilon(1e-14));
  }
  SUBCASE("continuum limit is N d(y) m g") {
    PhysicalParams p = column();
    p.epsilon = 1e-3;
    const DensityProfile profile(p);
    const long k = 180000;  // y = 180
    const double archimedes = p.N * profile.density(180.0) * p.m * p.g;
    CHECK(buoyancy_analytic_fluid(profile, k) == doctest::Approx(archimedes).epsilon(1e-5));
  }
  SUBCASE("balancing weight zeroes the fluid walker drift") {
    PhysicalParams p = column();
    const DensityProfile profile(p);
    p.M = drift_balancing_weight_fluid(profile, 180) / p.g;
    const DensityProfile balanced(p);
    const double up = p.a() * balanced.hole_probability(181.0, p.N);
    const double down = p.b() * balanced.hole_probability(179.0, p.N);
    CHECK(up == doctest::Approx(down).epsilon(1e-12));
  }
  CHECK(jump_time(DensityProfile(column()), 150) ==
        doctest::Approx(1.0 / (2.0 * std::pow(0.5, 20))).epsilon(1e-12));
}

TEST_CASE("drift estimate is independent of the thread count") {
  PhysicalParams p = column();
  p.M = 0.05;
  Protocol one;
  one.replicas = 500;
  one.threads = 1;
  Protocol three = one;
  three.threads = 3;
  for (Model m : {Model::fluid, Model::memory, Model::contracted}) {
    const DriftEstimate a = measure_drift(m, p, 180, one);
    const DriftEstimate b = measure_drift(m, p, 180, three);
    CHECK(a.drift == b.drift);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.samples == b.samples);
  }
}

TEST_CASE("fluid-walker bisection recovers the closed form") {
  const PhysicalParams p = column();
  Protocol protocol;
  protocol.T = 10.0;
  protocol.replicas = 40000;
  const BuoyancyPoint point = buoyancy_bisect(Model::fluid, p, 180, protocol);
  const double exact = buoyancy_analytic_fluid(DensityProfile(p), 180);
  CAPTURE(point.buoyancy);
  CAPTURE(point.stderr_);
  CHECK(point.stderr_ > 0.0);
  CHECK(std::abs(point.buoyancy - exact) < 2.0 * point.stderr_);
  CHECK(point.balancing_weight == doctest::Approx(2.0 * point.buoyancy));
  CHECK(point.model == "fluid");
}

TEST_CASE("empty fluid has zero buoyancy") {
  PhysicalParams p = column();
  p.kappa = 1e-300;
  Protocol protocol;
  protocol.replicas = 4000;
  const BuoyancyPoint point = buoyancy_bisect(Model::fluid, p, 180, protocol, 0.4);
  CHECK(std::abs(point.buoyancy) < 3.0 * point.stderr_ + protocol.tolerance * p.m * p.N);
}

TEST_CASE("bracket errors") {
  const PhysicalParams p = column();
  Protocol protocol;
  protocol.replicas = 2000;
  CHECK_THROWS_AS(buoyancy_bisect(Model::fluid, p, 180, protocol, 0.01), BracketError);
  CHECK_THROWS_AS(buoyancy_bisect(Model::fluid, p, 180, protocol, 0.0), BracketError);
}

TEST_CASE("linear fit") {
  const LinearFit line = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(line.defined);
  CHECK(line.slope == doctest::Approx(2.0));
  CHECK(line.intercept == doctest::Approx(1.0));
  CHECK(line.r2 == doctest::Approx(1.0));
  CHECK_FALSE(linear_fit({4}, {1}).defined);
  CHECK_FALSE(linear_fit({2, 2, 2}, {1, 2, 3}).defined);
  const LinearFit noisy = linear_fit({0, 1, 2, 3}, {0, 1, 0, 1});
  CHECK(noisy.r2 == doctest::Approx(0.2));
}

TEST_CASE("saturation onset") {
  CHECK_FALSE(saturation_onset({}).has_value());
  CHECK(*saturation_onset({at(1, 0.1, 0.01)}) == 1.0);
  // Rising, then flat within noise from gamma = 4 on.
  const std::vector<BuoyancyPoint> rising = {at(1, 0.10, 0.005), at(2, 0.20, 0.005),
                                             at(4, 0.30, 0.005), at(8, 0.302, 0.005),
                                             at(16, 0.299, 0.005)};
  CHECK(*saturation_onset(rising) == 4.0);
  const std::vector<BuoyancyPoint> flat = {at(1, 0.3, 0.01), at(2, 0.3, 0.01), at(4, 0.3, 0.01)};
  CHECK(*saturation_onset(flat) == 1.0);
  const std::vector<BuoyancyPoint> steady = {at(1, 0.1, 0.001), at(2, 0.2, 0.001),
                                             at(4, 0.3, 0.001)};
  CHECK(*saturation_onset(steady) == 4.0);
}

TEST_CASE("sweeps") {
  PhysicalParams p = column();
  Protocol protocol;
  protocol.replicas = 2000;
  const SweepReport single = sweep_N(Model::fluid, {20}, p, 180, protocol);
  CHECK(single.points.size() == 1);
  CHECK_FALSE(single.fit.defined);
  CHECK(single.analytic_slope == doctest::Approx(DensityProfile(p).density(180.0) * p.m));

  const SweepReport broken = sweep_N(Model::fluid, {0, 10}, p, 180, protocol);
  CHECK(broken.points.size() == 1);
  REQUIRE(broken.failures.size() == 1);
  CHECK(broken.failures[0].value == 0.0);

  CHECK_THROWS_AS(sweep_gamma(Model::memory, {2.0, 1.0}, p, 180, protocol), ParamError);
  CHECK_THROWS_AS(sweep_N(Model::fluid, {}, p, 180, protocol), ParamError);
}
