#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spacelike::contour {

using Complex = std::complex<double>;
using ComplexFunction = std::function<Complex(Complex)>;

// Positively oriented circle, integrated with the (1/2pi i) normalization.
// Equally spaced nodes make the trapezoid rule spectrally accurate for
// integrands analytic in an annulus around the contour.
struct CircleContour {
  Complex center{0.0, 0.0};
  double radius = 0.5;
  int node_count = 256;
};

// Truncated vertical line iR + real_part, also normalized by 1/(2pi i).
// The caller guarantees decay; half_length should come from a tail bound
// (see vline_half_length).
struct VerticalLineContour {
  double real_part = 1.0;
  double half_length = 8.0;
  int node_count = 512;
};

struct Integral {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;  // |I_M - I_{2M}| from the last doubling
  double magnitude = 0.0;       // sum of |f| against the quadrature measure
  bool tail_warning = false;    // endpoint magnitude vs accumulated magnitude
};

// Truncation point for integrands dominated by e^{t w^2}: with w = eps + iy
// the modulus is e^{t(eps^2 - y^2)}, so this choice pushes the tail below
// tail_tol.  t_min is the smallest time scale in the integrand.
inline double vline_half_length(double eps, double t_min, double tail_tol = 1e-14) {
  if (t_min <= 0.0) throw std::domain_error("vline_half_length: t_min must be > 0");
  return eps + std::sqrt((std::log(1.0 / tail_tol) + t_min * eps * eps) / t_min);
}

// Node/weight tables; value = sum_j weight[j] * f(node[j]) realizes the
// (1/2pi i) integral.  Tables are immutable once built and safe to share.
struct NodeTable {
  std::vector<Complex> node;
  std::vector<Complex> weight;
};

NodeTable circle_nodes(const CircleContour& c);
NodeTable vline_nodes(const VerticalLineContour& c);

[[noreturn]] void throw_nonfinite(Complex node);

template <class F>
Complex circle_pass(F&& f, const CircleContour& c, double* accum_mag = nullptr) {
  if (c.radius <= 0.0) throw std::invalid_argument("circle radius must be > 0");
  if (c.node_count < 8) throw std::invalid_argument("circle node_count must be >= 8");
  const int m = c.node_count;
  Complex sum{0.0, 0.0};
  double mag = 0.0;
  for (int j = 0; j < m; ++j) {
    const double th = 2.0 * 3.14159265358979323846 * j / m;
    const Complex e{std::cos(th), std::sin(th)};
    const Complex z = c.center + c.radius * e;
    const Complex fz = f(z);
    if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) throw_nonfinite(z);
    mag += std::abs(fz);
    sum += fz * e;
  }
  if (accum_mag) *accum_mag = mag * c.radius / m;
  return sum * (c.radius / m);
}

namespace detail {
// 16-point Gauss-Legendre rule on [-1, 1] (positive half; mirror for the rest).
inline constexpr double kGL16X[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr double kGL16W[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};
}  // namespace detail

// Composite 16-point Gauss-Legendre panels in the imaginary coordinate.
template <class F>
Complex vline_pass(F&& f, const VerticalLineContour& c, double* accum_mag = nullptr,
                   double* endpoint_mag = nullptr) {
  if (c.real_part <= 0.0) throw std::invalid_argument("vline real_part must be > 0");
  if (c.half_length <= c.real_part)
    throw std::invalid_argument("vline half_length must exceed real_part");
  const int panels = std::max(1, (c.node_count + 15) / 16);
  const double h = 2.0 * c.half_length / panels;
  Complex sum{0.0, 0.0};
  double mag = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = -c.half_length + (p + 0.5) * h;
    for (int j = 0; j < 8; ++j) {
      for (int s = -1; s <= 1; s += 2) {
        const double y = mid + s * 0.5 * h * detail::kGL16X[j];
        const Complex w{c.real_part, y};
        const Complex fw = f(w);
        if (!std::isfinite(fw.real()) || !std::isfinite(fw.imag())) throw_nonfinite(w);
        const double a = std::abs(fw);
        mag += detail::kGL16W[j] * 0.5 * h * a;
        sum += detail::kGL16W[j] * fw;
      }
    }
  }
  sum *= 0.5 * h / (2.0 * 3.14159265358979323846);
  if (accum_mag) *accum_mag = mag / (2.0 * 3.14159265358979323846);
  if (endpoint_mag) {
    const double e1 = std::abs(f(Complex{c.real_part, c.half_length}));
    const double e2 = std::abs(f(Complex{c.real_part, -c.half_length}));
    *endpoint_mag = std::max(e1, e2);
  }
  return sum;
}

// Adaptive versions: node counts are doubled until the value moves by less
// than tol relative to its magnitude (with a small absolute floor tied to
// the integrand scale).
template <class F>
Integral integrate_circle(F&& f, CircleContour c, double tol = 1e-9,
                          int max_doublings = 5) {
  double mag = 0.0;
  Complex prev = circle_pass(f, c, &mag);
  Integral out;
  for (int it = 0; it < max_doublings; ++it) {
    c.node_count *= 2;
    const Complex cur = circle_pass(f, c, &mag);
    const double diff = std::abs(cur - prev);
    out.value = cur;
    out.error_estimate = diff;
    out.magnitude = mag;
    if (diff <= tol * std::max(std::abs(cur), 1e-14 * std::max(mag, 1.0))) return out;
    prev = cur;
  }
  return out;
}

template <class F>
Integral integrate_vline(F&& f, VerticalLineContour c, double tol = 1e-9,
                         int max_doublings = 5) {
  double mag = 0.0, endp = 0.0;
  Complex prev = vline_pass(f, c, &mag, &endp);
  Integral out;
  for (int it = 0; it < max_doublings; ++it) {
    c.node_count *= 2;
    const Complex cur = vline_pass(f, c, &mag, &endp);
    const double diff = std::abs(cur - prev);
    out.value = cur;
    out.error_estimate = diff;
    out.magnitude = mag;
    out.tail_warning = endp > 1e-13 * std::max(mag, 1e-300);
    if (diff <= tol * std::max(std::abs(cur), 1e-14 * std::max(mag, 1.0))) return out;
    prev = cur;
  }
  return out;
}

Integral integrate_circle(const ComplexFunction& f, const CircleContour& c);
Integral integrate_vline(const ComplexFunction& f, const VerticalLineContour& c);

}  // namespace spacelike::contour
