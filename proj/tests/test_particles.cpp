#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "spacelike/particles.hpp"

using namespace spacelike::particles;

TEST_CASE("packed initial condition") {
  const auto c1 = init_packed(1);
  CHECK(c1.pos(1, 1) == -1);
  const auto c2 = init_packed(2);
  CHECK(c2.pos(2, 1) == -2);
  CHECK(c2.pos(1, 1) == -1);
  CHECK(c2.pos(2, 2) == -1);
  CHECK(c2.interlaced());
  CHECK(init_packed(6).interlaced());
  CHECK_THROWS_AS(init_packed(0), std::invalid_argument);
}

TEST_CASE("blocking and pushing on crafted configurations") {
  // blocked: x1^2 sits immediately left of x1^1, so its ring does nothing
  auto cfg = init_packed(2);
  REQUIRE(cfg.pos(1, 1) == -1);
  REQUIRE(cfg.pos(2, 1) == -2);
  attempt_jump(cfg, 2, 1);
  CHECK(cfg.pos(2, 1) == -2);

  // pushing: x1^1 and x2^2 share a position, a ring of x1^1 moves both
  REQUIRE(cfg.pos(1, 1) == cfg.pos(2, 2));
  attempt_jump(cfg, 1, 1);
  CHECK(cfg.pos(1, 1) == 0);
  CHECK(cfg.pos(2, 2) == 0);
  CHECK(cfg.interlaced());

  // long push string across three levels
  auto c3 = init_packed(3);
  attempt_jump(c3, 1, 1);  // pushes x2^2 and x3^3
  CHECK(c3.pos(1, 1) == 0);
  CHECK(c3.pos(2, 2) == 0);
  CHECK(c3.pos(3, 3) == 0);
  CHECK(c3.interlaced());

  // after the string moved, x1^2 is free to advance once
  attempt_jump(c3, 2, 1);
  CHECK(c3.pos(2, 1) == -1);
  attempt_jump(c3, 2, 1);  // now blocked by x1^1 = 0
  CHECK(c3.pos(2, 1) == -1);
  CHECK(c3.interlaced());
}

TEST_CASE("level-one marginal is a poisson walk") {
  const double t = 1.0;
  const int replicas = 100000;
  std::map<long long, int> counts;
  for (int r = 0; r < replicas; ++r) {
    SimClock clock(101, static_cast<std::uint64_t>(r));
    auto cfg = init_packed(1);
    evolve(cfg, t, clock);
    ++counts[cfg.pos(1, 1)];
  }
  double logp = -t;
  for (int j = 0; j <= 8; ++j) {
    const double pred = std::exp(logp);
    const double phat = static_cast<double>(counts[-1 + j]) / replicas;
    const double se = std::sqrt(pred * (1 - pred) / replicas);
    CHECK(std::abs(phat - pred) < 3.0 * se);
    logp += std::log(t) - std::log(j + 1.0);
  }
}

TEST_CASE("tasep projection") {
  const auto packed = init_packed(4);
  const auto proj = tasep_projection(packed);
  for (int m = 1; m <= 4; ++m) CHECK(proj[m - 1] == -m);

  for (int r = 0; r < 400; ++r) {
    SimClock clock(103, static_cast<std::uint64_t>(r));
    auto cfg = init_packed(4);
    evolve(cfg, 1.5, clock);
    const auto p = tasep_projection(cfg);
    std::set<long long> sites;
    for (size_t m = 0; m + 1 < p.size(); ++m) CHECK(p[m + 1] < p[m]);
    for (const auto x : p) CHECK(sites.insert(x).second);  // exclusion
  }
}

TEST_CASE("lower levels are autonomous") {
  // simulating two levels alone reproduces the two-level marginal of a
  // three-level system (distributional check on the joint pmf)
  const double t = 0.8;
  const int replicas = 60000;
  std::map<std::tuple<long long, long long, long long>, int> small, tall;
  for (int r = 0; r < replicas; ++r) {
    SimClock c1(104, static_cast<std::uint64_t>(r));
    auto a = init_packed(2);
    evolve(a, t, c1);
    ++small[{a.pos(1, 1), a.pos(2, 1), a.pos(2, 2)}];
    SimClock c2(105, static_cast<std::uint64_t>(r));
    auto b = init_packed(3);
    evolve(b, t, c2);
    ++tall[{b.pos(1, 1), b.pos(2, 1), b.pos(2, 2)}];
  }
  for (const auto& [key, cnt] : small) {
    const double p = static_cast<double>(cnt) / replicas;
    if (p < 0.02) continue;
    const double q = static_cast<double>(tall[key]) / replicas;
    const double se = std::sqrt(2.0 * p * (1 - p) / replicas);
    CHECK(std::abs(p - q) < 3.5 * se);
  }
}

TEST_CASE("interlacing holds along long runs") {
  for (int r = 0; r < 50; ++r) {
    SimClock clock(106, static_cast<std::uint64_t>(r));
    auto cfg = init_packed(5);
    CHECK_NOTHROW(evolve(cfg, 10.0, clock));  // violation would throw
    CHECK(cfg.interlaced());
  }
  SimClock clock(107, 0);
  auto cfg = init_packed(2);
  CHECK_THROWS_AS(evolve(cfg, -1.0, clock), std::invalid_argument);
}

TEST_CASE("diffusion rescaling") {
  const double t = 400.0, tau = 1.0;
  const auto zero = diffusion_rescale({200}, tau, t);
  CHECK(zero[0] == doctest::Approx(0.0));
  const auto shifted = diffusion_rescale({210, 190}, tau, t);
  CHECK(shifted[0] == doctest::Approx(0.5));
  CHECK(shifted[1] == doctest::Approx(-0.5));

  // CLT: rescaled level-1 mean tends to zero like t^{-1/2}
  const double base_t = 100.0;
  const int replicas = 20000;
  double mean = 0;
  for (int r = 0; r < replicas; ++r) {
    SimClock clock(108, static_cast<std::uint64_t>(r));
    auto cfg = init_packed(1);
    evolve(cfg, 0.5 * tau * base_t, clock);
    mean += diffusion_rescale({cfg.pos(1, 1)}, tau, base_t)[0];
  }
  mean /= replicas;
  const double sd = std::sqrt(0.5 / replicas);
  // centering offset is exactly -1/sqrt(t); allow it plus 3 sigma
  CHECK(std::abs(mean) < 1.0 / std::sqrt(base_t) + 3.0 * sd);
}
