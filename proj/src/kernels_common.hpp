#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "spacelike/contour.hpp"
#include "spacelike/kernels.hpp"

namespace spacelike::kernels::detail {

using contour::Complex;

inline Complex ipow(Complex z, int k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  Complex r{1.0, 0.0};
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline double pow2(int n) { return std::ldexp(1.0, n); }

// Take the real part of a kernel evaluation, insisting the imaginary
// residue left by quadrature is negligible.  `mag` is the accumulated
// integrand magnitude; rounding noise scales with it, not with the value.
inline double real_part_checked(Complex v, double tol = 1e-10, double mag = 0.0) {
  const double slack = tol * std::max(1.0, std::abs(v.real())) + 1e-13 * mag;
  if (std::abs(v.imag()) > slack)
    throw std::runtime_error("kernel quadrature left a non-real value");
  return v.real();
}

// Vertical line for integrands dominated by e^{t_scale w^2} with an
// oscillation rate osc (phase ~ e^{-2 i osc y}); node density follows both.
inline contour::VerticalLineContour vline_for(const QuadratureConfig& q,
                                              double t_scale, double osc) {
  contour::VerticalLineContour c;
  c.real_part = q.epsilon;
  c.half_length = contour::vline_half_length(q.epsilon, t_scale, q.tail_tol);
  const double per_unit = 6.0 + 6.0 * std::abs(osc);
  const int need = static_cast<int>(2.0 * c.half_length * per_unit) + 16;
  c.node_count = std::max(q.vline_nodes, need);
  return c;
}

}  // namespace spacelike::kernels::detail
