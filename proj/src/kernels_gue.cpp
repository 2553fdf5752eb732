#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kernels_common.hpp"
#include "spacelike/kernels.hpp"
#include "spacelike/specfun.hpp"

namespace spacelike::kernels {

using contour::Complex;
using detail::ipow;

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_level(int n) {
  if (n < 1) throw std::invalid_argument("level n must be >= 1");
}

void require_time(double t) {
  if (!(t > 0.0)) throw std::domain_error("time must be > 0");
}

// Iterated step kernel phi^{*dn}(x1, x2) on the real line.
double step_power(int dn, double x1, double x2) {
  if (x1 > x2) return 0.0;
  if (dn == 1) return 1.0;
  return std::pow(x2 - x1, dn - 1) / detail::factorial(dn - 1);
}

// Double-contour term of the extended kernel at fixed node counts; the
// second member is the accumulated integrand magnitude.
std::pair<Complex, double> gue_term2_pass(const SpaceTimePoint& a,
                                          const SpaceTimePoint& b,
                                          const QuadratureConfig& q, int vnodes,
                                          int cnodes) {
  contour::VerticalLineContour vl =
      detail::vline_for(q, a.t, std::abs(a.x) / std::sqrt(a.t));
  vl.node_count = vnodes;
  contour::CircleContour ci{{0.0, 0.0}, q.epsilon / 2.0, cnodes};

  const auto wt = contour::vline_nodes(vl);
  const auto zt = contour::circle_nodes(ci);

  std::vector<Complex> wfac(wt.node.size());
  for (size_t i = 0; i < wt.node.size(); ++i) {
    const Complex w = wt.node[i];
    wfac[i] = std::exp(w * w * a.t - 2.0 * a.x * w) * ipow(w, a.n) * wt.weight[i];
  }
  std::vector<Complex> zfac(zt.node.size());
  for (size_t j = 0; j < zt.node.size(); ++j) {
    const Complex z = zt.node[j];
    zfac[j] = std::exp(-(z * z * b.t - 2.0 * b.x * z)) * ipow(z, -b.n) * zt.weight[j];
  }

  double wmag = 0.0, zmag = 0.0;
  for (const auto& v : wfac) wmag += std::abs(v);
  for (const auto& v : zfac) zmag += std::abs(v);

  Complex sum{0.0, 0.0};
  for (size_t i = 0; i < wt.node.size(); ++i) {
    const Complex w = wt.node[i];
    Complex inner{0.0, 0.0};
    for (size_t j = 0; j < zt.node.size(); ++j)
      inner += zfac[j] / (w - zt.node[j]);
    sum += wfac[i] * inner;
  }
  return {2.0 * sum, 2.0 * wmag * zmag / (0.5 * q.epsilon)};
}

// Same structure in the rescaled variables (xi, n, tau).
std::pair<Complex, double> scaled_term2_pass(const SpaceTimePoint& a,
                                             const SpaceTimePoint& b,
                                             const QuadratureConfig& q, int vnodes,
                                             int cnodes) {
  contour::VerticalLineContour vl =
      detail::vline_for(q, a.t, std::abs(a.x) / std::sqrt(a.t));
  vl.node_count = vnodes;
  contour::CircleContour ci{{0.0, 0.0}, q.epsilon / 2.0, cnodes};
  const auto wt = contour::vline_nodes(vl);
  const auto zt = contour::circle_nodes(ci);
  Complex sum{0.0, 0.0};
  double wmag = 0.0, zmag = 0.0;
  for (size_t i = 0; i < wt.node.size(); ++i) {
    const Complex w = wt.node[i];
    const Complex fw = std::exp(a.t * w * w - 2.0 * a.x * w) * ipow(w, a.n) * wt.weight[i];
    wmag += std::abs(fw);
    Complex inner{0.0, 0.0};
    for (size_t j = 0; j < zt.node.size(); ++j) {
      const Complex z = zt.node[j];
      const Complex fz = std::exp(-(b.t * z * z - 2.0 * b.x * z)) * ipow(z, -b.n) *
                         zt.weight[j];
      if (i == 0) zmag += std::abs(fz);
      inner += fz / (w - z);
    }
    sum += fw * inner;
  }
  return {2.0 * sum, 2.0 * wmag * zmag / (0.5 * q.epsilon)};
}

// First (space-like) term: 2/(2pi i) int e^{dt w^2 - 2 dx w} w^{n1-n2} dw,
// assuming precedes(a, b) and t1 > t2.  The line position is free; putting
// it near the saddle dx/dt keeps the integrand scale close to the value.
contour::Integral gue_term1_vline(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                  const QuadratureConfig& q) {
  const double dt = a.t - b.t;
  const double dx = a.x - b.x;
  const int dn = b.n - a.n;
  QuadratureConfig qq = q;
  qq.epsilon = std::clamp(dx / dt, 0.15, q.epsilon);
  auto f = [&](Complex w) {
    return std::exp(dt * w * w - 2.0 * dx * w) * ipow(w, -dn);
  };
  auto r = contour::integrate_vline(
      f, detail::vline_for(qq, dt, std::abs(dx) / dt), q.tol, q.max_doublings);
  r.value *= 2.0;
  r.magnitude *= 2.0;
  return r;
}

KernelValue assemble_two_term(const SpaceTimePoint& a, const SpaceTimePoint& b,
                              const QuadratureConfig& q, bool scaled) {
  require_level(a.n);
  require_level(b.n);
  require_time(a.t);
  require_time(b.t);

  double term1 = 0.0;
  double err1 = 0.0;
  if (precedes(a, b)) {
    if (a.t == b.t) {
      term1 = detail::pow2(b.n - a.n) * step_power(b.n - a.n, a.x, b.x);
    } else {
      const auto r = gue_term1_vline(a, b, q);
      term1 = detail::real_part_checked(r.value, 1e-10, r.magnitude);
      err1 = r.error_estimate;
    }
  }

  // For x1 < 0 the factor e^{-2 x1 w} grows along the default line; pulling
  // the line (and the inner circle with it) toward 0 tames the cancellation.
  QuadratureConfig qq = q;
  if (a.x < 0.0)
    qq.epsilon = std::clamp(a.n / (2.0 * std::abs(a.x) + 1.0), 0.1, q.epsilon);

  int vn = detail::vline_for(qq, a.t, std::abs(a.x) / std::sqrt(a.t)).node_count;
  int cn = qq.circle_nodes;
  auto prev = scaled ? scaled_term2_pass(a, b, qq, vn, cn)
                     : gue_term2_pass(a, b, qq, vn, cn);
  auto cur = prev;
  double err2 = 0.0;
  for (int it = 0; it < q.max_doublings; ++it) {
    vn *= 2;
    cn *= 2;
    cur = scaled ? scaled_term2_pass(a, b, qq, vn, cn)
                 : gue_term2_pass(a, b, qq, vn, cn);
    err2 = std::abs(cur.first - prev.first);
    if (err2 <= q.tol * std::max(std::abs(cur.first), 1e-12)) break;
    prev = cur;
  }

  KernelValue out;
  out.value = -term1 + detail::real_part_checked(cur.first, 1e-10, cur.second);
  out.quadrature_error_estimate = err1 + err2 + 1e-15 * cur.second;
  return out;
}

}  // namespace

bool precedes(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  if (a.n > b.n || a.t < b.t) return false;
  return !(a.n == b.n && a.t == b.t);
}

double psi_gue(int n, double t, int k, double x) {
  require_time(t);
  if (k < 0) return psi_gue_contour(n, t, k, x);
  const double u = x / std::sqrt(t);
  return std::pow(t, -0.5 * k) * specfun::hermite(k, u) * std::exp(-u * u) /
         std::sqrt(kPi * t);
}

double psi_gue_contour(int n, double t, int k, double x, const QuadratureConfig& q) {
  (void)n;  // the level is a label; the integrand depends on (t, k, x) only
  require_time(t);
  const double xs = x / std::sqrt(t);
  auto f = [&](Complex w) { return std::exp(w * w - 2.0 * xs * w) * ipow(w, k); };
  const auto r = contour::integrate_vline(f, detail::vline_for(q, 1.0, std::abs(xs)),
                                          q.tol, q.max_doublings);
  const double pref = detail::pow2(k + 1) / std::pow(t, 0.5 * (k + 1));
  return pref * detail::real_part_checked(r.value, 1e-9, r.magnitude);
}

double phi_gue(int n, double t, int ell, double x) {
  (void)n;
  require_time(t);
  if (ell < 0) throw std::invalid_argument("phi_gue degree must be >= 0");
  return std::pow(t, 0.5 * ell) / detail::pow2(ell) *
         specfun::hermite(ell, x / std::sqrt(t)) / detail::factorial(ell);
}

double phi_gue_contour(int n, double t, int ell, double x, const QuadratureConfig& q) {
  (void)n;
  require_time(t);
  const double xs = 2.0 * x / std::sqrt(t);
  auto f = [&](Complex z) { return std::exp(-z * z + xs * z) * ipow(z, -(ell + 1)); };
  contour::CircleContour c{{0.0, 0.0}, 0.5, q.circle_nodes};
  const auto r = contour::integrate_circle(f, c, q.tol, q.max_doublings);
  return std::pow(t, 0.5 * ell) / detail::pow2(ell) *
         detail::real_part_checked(r.value, 1e-9, r.magnitude);
}

double heat_kernel(double t, double s, double x, double y) {
  if (!(t > s)) throw std::domain_error("heat_kernel requires t > s");
  const double d = x - y;
  return std::exp(-d * d / (t - s)) / std::sqrt(kPi * (t - s));
}

double phi_spacelike_gue(const SpaceTimePoint& a, const SpaceTimePoint& b,
                         const QuadratureConfig& q) {
  require_level(a.n);
  require_level(b.n);
  if (!precedes(a, b)) return 0.0;
  const int dn = b.n - a.n;
  if (a.t == b.t) return step_power(dn, a.x, b.x);
  const auto r = gue_term1_vline(a, b, q);
  return detail::pow2(-dn) * detail::real_part_checked(r.value, 1e-10, r.magnitude);
}

KernelValue kernel_gue_extended(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                const QuadratureConfig& q) {
  return assemble_two_term(a, b, q, /*scaled=*/false);
}

KernelValue kernel_gue_static(double x1, int n1, double x2, int n2,
                              const QuadratureConfig& q) {
  return kernel_gue_extended({x1, n1, 1.0}, {x2, n2, 1.0}, q);
}

KernelValue kernel_diffusion_scaled(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                    const QuadratureConfig& q) {
  return assemble_two_term(a, b, q, /*scaled=*/true);
}

double gue_sum_term(const SpaceTimePoint& a, const SpaceTimePoint& b) {
  require_level(a.n);
  require_level(b.n);
  double sum = 0.0;
  for (int k = 1; k <= b.n; ++k)
    sum += psi_gue(a.n, a.t, a.n - k, a.x) * phi_gue(b.n, b.t, b.n - k, b.x);
  return detail::pow2(b.n - a.n) * sum;
}

}  // namespace spacelike::kernels
