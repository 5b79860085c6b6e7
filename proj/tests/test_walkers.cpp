#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "buoy/walkers.hpp"

using namespace buoy;

namespace {

PhysicalParams generic() {
  PhysicalParams p;
  p.m = 0.05;
  p.M = 0.2;
  p.N = 3;
  p.gamma = 2.0;
  p.kappa = default_kappa(p, 50);
  return p;
}

}  // namespace

TEST_CASE("fluid rates") {
  PhysicalParams p = generic();
  p.kappa = 1e-300;
  const DensityProfile empty(p);
  const JumpRates r = fluid_rates(empty, 10);
  CHECK(r.up == p.a());
  CHECK(r.down == p.b());

  PhysicalParams probe = generic();
  probe.N = 0;
  const JumpRates z = fluid_rates(DensityProfile(probe), 25);
  CHECK(z.up == probe.a());
  CHECK(z.down == probe.b());

  const DensityProfile prof(generic());
  for (long y = 0; y < 50; ++y) {
    const double ratio = fluid_rates(prof, y).up / fluid_rates(prof, y + 1).down;
    const double dv = prof.potential_discrete(y + 1) - prof.potential_discrete(y);
    CHECK(ratio == doctest::Approx(std::exp(-dv / prof.params().kT)).epsilon(1e-10));
  }
}

TEST_CASE("stationary law") {
  SUBCASE("empty fluid gives a geometric law") {
    PhysicalParams p = generic();
    p.kappa = 1e-300;
    const auto law = stationary_distribution(DensityProfile(p), Window{-5, 20});
    for (long y = -5; y < 20; ++y) {
      CHECK(law.at(y + 1) / law.at(y) == doctest::Approx(p.a() / p.b()).epsilon(1e-12));
    }
  }
  SUBCASE("massless rod in a flat fluid is uniform") {
    PhysicalParams p = generic();
    p.m = 0.0;
    p.M = 0.0;
    const auto law = stationary_distribution(DensityProfile(p), Window{0, 9});
    for (long y = 0; y < 10; ++y) CHECK(law.at(y) == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("normalized, reversible, independent of the window origin") {
    const DensityProfile prof(generic());
    const auto law = stationary_distribution(prof, Window{0, 49});
    double total = 0.0;
    for (double v : law.probabilities()) {
      CHECK(v >= 0.0);
      total += v;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    for (long y = 0; y < 49; ++y) {
      const double lhs = law.at(y) * fluid_rates(prof, y).up;
      const double rhs = law.at(y + 1) * fluid_rates(prof, y + 1).down;
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
    const auto inner = stationary_distribution(prof, Window{10, 30});
    const double scale = law.at(10) / inner.at(10);
    for (long y = 10; y <= 30; ++y) CHECK(law.at(y) == doctest::Approx(inner.at(y) * scale).epsilon(1e-10));
    CHECK(law.at(-1) == 0.0);
    CHECK(law.at(50) == 0.0);
  }
  SUBCASE("no overflow on a long steep window") {
    PhysicalParams p = generic();
    p.M = 30.0;
    const auto law = stationary_distribution(DensityProfile(p), Window{0, 2000});
    CHECK(law.at(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::isfinite(law.at(2000)));
  }
  CHECK_THROWS_AS(stationary_distribution(DensityProfile(generic()), Window{5, 4}), ParamError);
}

TEST_CASE("mode sits at the sign change of the discrete force") {
  PhysicalParams p;
  p.kappa = default_kappa(p, 300);
  const DensityProfile prof(p);
  const auto law = stationary_distribution(prof, Window{0, 299});
  long root = -1;
  for (long y = 1; y < 300; ++y) {
    if (prof.force_discrete(y) > 0.0 && prof.force_discrete(y + 1) <= 0.0) root = y;
  }
  REQUIRE(root > 0);
  CHECK(std::labs(law.mode() - root) <= 1);
}

TEST_CASE("memory factor") {
  PhysicalParams p = generic();
  p.gamma = 0.0;
  CHECK(memory_factor(p) == 1.0);
  PhysicalParams two = generic();
  two.M = 0.0;
  two.nu = 1.0;  // a = b = 1
  two.gamma = 2.0;
  CHECK(memory_factor(two) == doctest::Approx(0.5));
  p.gamma = 1e12;
  CHECK(memory_factor(p) < 1e-11);
  double previous = 1.0;
  for (double gamma : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    p.gamma = gamma;
    CHECK(memory_factor(p) < previous);
    CHECK(memory_factor(p) > 0.0);
    previous = memory_factor(p);
  }
}

TEST_CASE("memory rates") {
  const PhysicalParams p = generic();
  const DensityProfile prof(p);
  const double mu = memory_factor(p);
  for (long y = 0; y < 50; ++y) {
    const JumpRates f = fluid_rates(prof, y);
    for (int v : {-1, 0, 1}) {
      const JumpRates z = memory_rates(prof, y, v, 0.0);
      CHECK(z.up == f.up);
      CHECK(z.down == f.down);
    }
    const JumpRates up_move = memory_rates(prof, y, 1, mu);
    CHECK(up_move.up == f.up);
    CHECK(up_move.down - f.down == doctest::Approx(p.b() * mu * prof.blocked_probability(y - 1.0, p.N)));
    CHECK(up_move.down >= f.down);
    const JumpRates down_move = memory_rates(prof, y, -1, mu);
    CHECK(down_move.down == f.down);
    CHECK(down_move.up - f.up == doctest::Approx(p.a() * mu * prof.blocked_probability(y + 1.0, p.N)));
    const JumpRates first = memory_rates(prof, y, 0, mu);
    CHECK(first.up == f.up);
    CHECK(first.down == f.down);
  }
  PhysicalParams empty = generic();
  empty.kappa = 1e-300;
  const DensityProfile none(empty);
  const JumpRates r = memory_rates(none, 3, 1, 0.7);
  CHECK(r.down == fluid_rates(none, 3).down);
}

TEST_CASE("fluid walker histogram matches the exact law") {
  const DensityProfile prof(generic());
  const Window window{0, 49};
  const auto law = stationary_distribution(prof, window);
  Walker walker(prof, WalkerModel::fluid, window, 25, 2024);
  OccupationHistogram hist(0, 49);
  walker.run_events(1000000, hist);
  CHECK(total_variation(hist.normalized(), law.probabilities()) < 0.02);
}

TEST_CASE("memory walker with mu = 0 is the fluid walker") {
  const DensityProfile prof(generic());
  const Window window{0, 49};
  Walker fluid(prof, WalkerModel::fluid, window, 25, 5);
  Walker memory(prof, WalkerModel::memory, window, 25, 5, 0.0);
  for (int i = 0; i < 20000; ++i) {
    const JumpRates a = fluid.current_rates();
    const JumpRates b = memory.current_rates();
    REQUIRE(a.up == b.up);
    REQUIRE(a.down == b.down);
    fluid.step();
    memory.step();
    REQUIRE(fluid.state().y == memory.state().y);
  }
}

TEST_CASE("memory walker: immediate returns are inflated by 1 + mu rho / (1 - rho)") {
  // Count jumps out of height y right after arriving from below: returns go down.
  const PhysicalParams p = generic();
  const DensityProfile prof(p);
  const double mu = memory_factor(p);
  const long y = 25;
  const double rho_below = prof.blocked_probability(y - 1.0, p.N);
  const double fluid_down = p.b() * (1.0 - rho_below);
  const double mem_down = fluid_down + p.b() * mu * rho_below;
  const double up = fluid_rates(prof, y).up;
  const double expected_fluid = fluid_down / (fluid_down + up);
  const double expected_mem = mem_down / (mem_down + up);
  CHECK(mem_down / fluid_down == doctest::Approx(1.0 + mu * rho_below / (1.0 - rho_below)));

  auto return_fraction = [&](WalkerModel model) {
    Walker walker(prof, model, Window{0, 49}, 25, 99);
    long arrivals = 0;
    long returns = 0;
    for (int i = 0; i < 3000000; ++i) {
      const WalkerState before = walker.state();
      walker.step();
      if (before.y == y && before.v == 1) {
        ++arrivals;
        if (walker.state().y == y - 1) ++returns;
      }
    }
    return std::pair{static_cast<double>(returns) / arrivals, arrivals};
  };
  const auto [f, nf] = return_fraction(WalkerModel::fluid);
  const auto [m, nm] = return_fraction(WalkerModel::memory);
  CHECK(std::abs(f - expected_fluid) < 5.0 * std::sqrt(expected_fluid * (1 - expected_fluid) / nf));
  CHECK(std::abs(m - expected_mem) < 5.0 * std::sqrt(expected_mem * (1 - expected_mem) / nm));
}

TEST_CASE("walker run and determinism") {
  const DensityProfile prof(generic());
  Walker a(prof, WalkerModel::memory, Window{0, 49}, 20, 42);
  Walker b(prof, WalkerModel::memory, Window{0, 49}, 20, 42);
  const Trajectory ta = a.run(500.0, 0.5);
  const Trajectory tb = b.run(500.0, 0.5);
  REQUIRE(ta.size() == 1000);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta[i].t == tb[i].t);
    CHECK(ta[i].y == tb[i].y);
    CHECK(ta[i].y >= 0);
    CHECK(ta[i].y <= 49);
  }
  Walker c(prof, WalkerModel::fluid, Window{0, 49}, 20, 42);
  CHECK(c.run(0.0, 1.0).empty());
  CHECK(a.state().v != 0);
  CHECK_THROWS_AS(Walker(prof, WalkerModel::fluid, Window{0, 9}, 10, 1), ParamError);

  Walker d(prof, WalkerModel::fluid, Window{0, 49}, 20, 7);
  d.run_until(1e9, 18, 22);
  CHECK((d.state().y == 17 || d.state().y == 23));
  d.restart(30, 7);
  CHECK(d.state().y == 30);
  CHECK(d.state().time == 0.0);
  CHECK(d.state().v == 0);
}

TEST_CASE("reflection at the window ends") {
  const DensityProfile prof(generic());
  Walker w(prof, WalkerModel::fluid, Window{4, 4}, 4, 3);
  CHECK(w.current_rates().up == 0.0);
  CHECK(w.current_rates().down == 0.0);
  CHECK_FALSE(w.step().fired);
}
