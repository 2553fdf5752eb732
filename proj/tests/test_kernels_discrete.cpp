#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "spacelike/contour.hpp"
#include "spacelike/kernels.hpp"

using namespace spacelike;
using kernels::SpaceTimePoint;

namespace {

// Exact law of the two-level dynamics (x1^1; x1^2, x2^2) started packed,
// by uniformization of the generator on a truncated state space.  This is
// the independent oracle for the space-like kernel: P(joint occupation)
// must equal the 2x2 kernel determinant.
struct TwoLevelLaw {
  struct State {
    int a, b, c;  // x1^1; x1^2, x2^2 with b < a <= c
    bool operator<(const State& o) const {
      return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
    }
  };
  std::vector<State> states;
  std::map<State, int> index;
  std::vector<std::vector<std::pair<int, double>>> trans;

  explicit TwoLevelLaw(int max_pos) {
    for (int a = -1; a <= max_pos; ++a)
      for (int b = -2; b < a; ++b)
        for (int c = a; c <= max_pos; ++c) {
          index[{a, b, c}] = static_cast<int>(states.size());
          states.push_back({a, b, c});
        }
    trans.resize(states.size());
    auto idx = [&](int a, int b, int c) {
      const auto it = index.find({a, b, c});
      return it == index.end() ? -1 : it->second;
    };
    for (size_t i = 0; i < states.size(); ++i) {
      const auto [a, b, c] = states[i];
      double self = 0.0;
      {  // x1^1 rings: never blocked, pushes x2^2 when equal
        const int j = a == c ? idx(a + 1, b, c + 1) : idx(a + 1, b, c);
        if (j >= 0)
          trans[i].push_back({j, 1.0 / 3});
        else
          self += 1.0 / 3;
      }
      {  // x1^2 rings: blocked when sitting left of x1^1
        if (b == a - 1) {
          self += 1.0 / 3;
        } else {
          const int j = idx(a, b + 1, c);
          if (j >= 0)
            trans[i].push_back({j, 1.0 / 3});
          else
            self += 1.0 / 3;
        }
      }
      {  // x2^2 rings: free
        const int j = idx(a, b, c + 1);
        if (j >= 0)
          trans[i].push_back({j, 1.0 / 3});
        else
          self += 1.0 / 3;
      }
      if (self > 0) trans[i].push_back({static_cast<int>(i), self});
    }
  }

  std::vector<double> law(std::vector<double> v, double t) const {
    std::vector<double> acc(states.size(), 0.0), w(states.size());
    double coef = std::exp(-3.0 * t);
    for (int k = 0; k <= 140; ++k) {
      for (size_t i = 0; i < v.size(); ++i) acc[i] += coef * v[i];
      std::fill(w.begin(), w.end(), 0.0);
      for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        for (const auto& [j, p] : trans[i]) w[j] += v[i] * p;
      }
      v.swap(w);
      coef *= 3.0 * t / (k + 1);
    }
    return acc;
  }

  std::vector<double> packed_law(double t) const {
    std::vector<double> v(states.size(), 0.0);
    v[index.at({-1, -2, -1})] = 1.0;
    return law(std::move(v), t);
  }
};

double kernel2x2(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  const double k11 = kernels::kernel_discrete(a, a);
  const double k22 = kernels::kernel_discrete(b, b);
  const double k12 = kernels::kernel_discrete(a, b);
  const double k21 = kernels::kernel_discrete(b, a);
  return k11 * k22 - k12 * k21;
}

}  // namespace

TEST_CASE("diagonal values at level one are Poisson masses") {
  // particle at -1 performs a rate-one Poisson walk
  CHECK(kernels::kernel_discrete({-1.0, 1, 1.0}, {-1.0, 1, 1.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
  CHECK(kernels::kernel_discrete({1.0, 1, 1.0}, {1.0, 1, 1.0}) ==
        doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-11));
  double masses = 0.0;
  for (int x = -1; x <= 30; ++x) {
    const double got =
        kernels::kernel_discrete({static_cast<double>(x), 1, 1.0},
                                 {static_cast<double>(x), 1, 1.0});
    const double want = std::exp(-1.0) / std::tgamma(x + 2.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
    masses += got;
  }
  CHECK(masses == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("diagonal sums to the particle count per level") {
  for (int n = 1; n <= 3; ++n) {
    double sum = 0.0;
    for (int x = -n; x <= 40; ++x)
      sum += kernels::kernel_discrete({static_cast<double>(x), n, 1.0},
                                      {static_cast<double>(x), n, 1.0});
    CHECK(sum == doctest::Approx(n).epsilon(1e-10));
  }
}

TEST_CASE("two-level joint law matches kernel determinants at equal time") {
  const TwoLevelLaw law(16);
  const auto acc = law.packed_law(1.0);
  auto joint = [&](int y1, int y2) {
    double s = 0.0;
    for (size_t i = 0; i < law.states.size(); ++i) {
      const auto& st = law.states[i];
      if (st.a == y1 && (st.b == y2 || st.c == y2)) s += acc[i];
    }
    return s;
  };
  for (const auto& [y1, y2] : std::vector<std::pair<int, int>>{
           {0, 0}, {-1, -1}, {0, 1}, {1, -2}, {-1, 0}, {2, 0}, {1, 1}}) {
    const SpaceTimePoint p1{static_cast<double>(y1), 1, 1.0};
    const SpaceTimePoint p2{static_cast<double>(y2), 2, 1.0};
    CHECK(kernel2x2(p1, p2) == doctest::Approx(joint(y1, y2)).epsilon(1e-9));
  }
}

TEST_CASE("two-level joint law across times matches kernel determinants") {
  const TwoLevelLaw law(16);
  const double s = 0.5, T = 1.2;
  const auto at_s = law.packed_law(s);
  for (const auto& [y1, y2] :
       std::vector<std::pair<int, int>>{{0, 0}, {1, -1}, {-1, -2}, {2, 0}}) {
    // condition on level-2 occupation of y2 at time s, then evolve to T
    std::vector<double> u(law.states.size(), 0.0);
    for (size_t i = 0; i < law.states.size(); ++i) {
      const auto& st = law.states[i];
      if (st.b == y2 || st.c == y2) u[i] = at_s[i];
    }
    const auto at_T = law.law(std::move(u), T - s);
    double exact = 0.0;
    for (size_t i = 0; i < law.states.size(); ++i)
      if (law.states[i].a == y1) exact += at_T[i];
    const SpaceTimePoint p1{static_cast<double>(y1), 1, T};
    const SpaceTimePoint p2{static_cast<double>(y2), 2, s};
    CHECK(kernel2x2(p1, p2) == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("inner contour conventions transfer the z-residue between terms") {
  // With the w-contour around {0, z} the space-like term carries the pole
  // at 1; excluding z moves exactly that residue into the double integral.
  kernels::QuadratureConfig q;
  for (const auto& [x1, n1, t1, x2, n2, t2] :
       std::vector<std::tuple<double, int, double, double, int, double>>{
           {0.0, 1, 1.0, 0.0, 2, 1.0}, {1.0, 1, 1.5, -1.0, 3, 0.5},
           {-1.0, 2, 2.0, 1.0, 3, 1.0}}) {
    const SpaceTimePoint a{x1, n1, t1}, b{x2, n2, t2};
    const double with_z = kernels::detail::kernel_discrete_term2(a, b, true, q);
    const double without_z = kernels::detail::kernel_discrete_term2(a, b, false, q);
    // residue correction: (1/2pi i) oint_{G_1} e^{dt z} (1-z)^{n1-n2} z^{x2+n2-x1-n1-1}
    auto f = [&](contour::Complex z) {
      return std::exp((t1 - t2) * z) * std::pow(1.0 - z, n1 - n2) *
             std::pow(z, static_cast<double>(x2 + n2 - x1 - n1 - 1));
    };
    const auto d = integrate_circle(f, contour::CircleContour{{1.0, 0.0}, 0.4, 512});
    CHECK(with_z - without_z ==
          doctest::Approx(d.value.real()).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(kernels::kernel_discrete({0.5, 1, 1.0}, {0.0, 1, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernels::kernel_discrete({0.0, 1, -0.5}, {0.0, 1, 1.0}),
                  std::domain_error);
}
