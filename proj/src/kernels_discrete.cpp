#include <cmath>
#include <stdexcept>

#include "kernels_common.hpp"
#include "spacelike/kernels.hpp"

namespace spacelike::kernels {

using contour::Complex;
using detail::ipow;

namespace {

long long integer_position(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9)
    throw std::invalid_argument("discrete kernel requires integer positions");
  return static_cast<long long>(r);
}

// Contours fixed by the pole sets {0,1}, {1} and {0,z}: the z-circle around
// 1 keeps 0 outside, and the w-circle around 0 either stays inside the
// z-circle's inner radius or encloses it entirely.
constexpr double kZCenter = 1.0;
constexpr double kZRadius = 0.4;
constexpr double kWInner = 0.3;
constexpr double kWOuter = 1.9;

}  // namespace

namespace detail {

double kernel_discrete_term2(const SpaceTimePoint& a, const SpaceTimePoint& b,
                             bool enclose_z, const QuadratureConfig& q) {
  const long long x1 = integer_position(a.x);
  const long long x2 = integer_position(b.x);
  const int k1 = static_cast<int>(x1) + a.n + 1;
  const int k2 = static_cast<int>(x2) + b.n;

  const double rw = enclose_z ? kWOuter : kWInner;
  if (enclose_z) {
    if (rw <= kZCenter + kZRadius + 0.4)
      throw std::runtime_error("discrete kernel: w-contour fails to enclose z");
  } else {
    if (rw >= kZCenter - kZRadius - 0.2)
      throw std::runtime_error("discrete kernel: w-contour touches the z-contour");
  }

  auto pass = [&](int zn, int wn) {
    contour::CircleContour zc{{kZCenter, 0.0}, kZRadius, zn};
    contour::CircleContour wc{{0.0, 0.0}, rw, wn};
    const auto zt = contour::circle_nodes(zc);
    const auto wt = contour::circle_nodes(wc);

    std::vector<Complex> wfac(wt.node.size());
    double wmag = 0.0;
    for (size_t i = 0; i < wt.node.size(); ++i) {
      const Complex w = wt.node[i];
      wfac[i] = std::exp(a.t * w) * ipow(1.0 - w, a.n) * ipow(w, -k1) * wt.weight[i];
      wmag += std::abs(wfac[i]);
    }
    Complex sum{0.0, 0.0};
    double zmag = 0.0;
    for (size_t j = 0; j < zt.node.size(); ++j) {
      const Complex z = zt.node[j];
      const Complex zfac =
          ipow(z, k2) * std::exp(-b.t * z) * ipow(1.0 - z, -b.n) * zt.weight[j];
      zmag += std::abs(zfac);
      Complex inner{0.0, 0.0};
      for (size_t i = 0; i < wt.node.size(); ++i)
        inner += wfac[i] / (wt.node[i] - z);
      sum += zfac * inner;
    }
    const double sep = enclose_z ? kWOuter - (kZCenter + kZRadius)
                                 : kZCenter - kZRadius - kWInner;
    return std::pair<Complex, double>{sum, wmag * zmag / sep};
  };

  int zn = q.circle_nodes;
  int wn = q.circle_nodes;
  auto prev = pass(zn, wn);
  auto cur = prev;
  for (int it = 0; it < q.max_doublings; ++it) {
    zn *= 2;
    wn *= 2;
    cur = pass(zn, wn);
    if (std::abs(cur.first - prev.first) <=
        q.tol * std::max(std::abs(cur.first), 1e-12))
      break;
    prev = cur;
  }
  return real_part_checked(cur.first, 1e-10, cur.second);
}

}  // namespace detail

double kernel_discrete(const SpaceTimePoint& a, const SpaceTimePoint& b,
                       const QuadratureConfig& q) {
  if (a.n < 1 || b.n < 1) throw std::invalid_argument("level n must be >= 1");
  if (a.t < 0.0 || b.t < 0.0) throw std::domain_error("time must be >= 0");
  const long long x1 = integer_position(a.x);
  const long long x2 = integer_position(b.x);

  // The (1-w) power keeps the space-like term in the same sign convention
  // as the (1-w)^{n1} / (1-z)^{n2} factors of the double integral; the
  // mixed convention fails the two-level law (see the dynamics oracle in
  // the tests).
  double term1 = 0.0;
  if (precedes(a, b)) {
    const int pw = static_cast<int>(x1) + a.n - static_cast<int>(x2) - b.n + 1;
    auto f = [&](Complex w) {
      return ipow(1.0 - w, a.n - b.n) * std::exp((a.t - b.t) * w) * ipow(w, -pw);
    };
    contour::CircleContour c{{0.5, 0.0}, 1.2, q.circle_nodes};
    const auto r = contour::integrate_circle(f, c, q.tol, q.max_doublings);
    term1 = detail::real_part_checked(r.value, 1e-10, r.magnitude);
  }

  return -term1 + detail::kernel_discrete_term2(a, b, /*enclose_z=*/true, q);
}

}  // namespace spacelike::kernels
