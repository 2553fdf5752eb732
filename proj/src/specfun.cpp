#include "spacelike/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace spacelike::specfun {

namespace {

void require_nonnegative(int v, const char* what) {
  if (v < 0) throw std::invalid_argument(std::string(what) + " must be >= 0");
}

}  // namespace

double hermite(int n, double x) {
  require_nonnegative(n, "hermite degree");
  if (n == 0) return 1.0;
  double pm = 1.0;        // p_0
  double pc = 2.0 * x;    // p_1
  for (int k = 1; k < n; ++k) {
    const double pn = 2.0 * x * pc - 2.0 * k * pm;
    pm = pc;
    pc = pn;
  }
  return pc;
}

double hermite(const PolyIndex& idx, double x) { return hermite(idx.degree, x); }

double laguerre(int k, int p, double x) {
  require_nonnegative(k, "laguerre degree");
  require_nonnegative(p, "laguerre order");
  if (k == 0) return 1.0;
  double lm = 1.0;            // L_0
  double lc = p + 1.0 - x;    // L_1
  for (int j = 1; j < k; ++j) {
    const double ln = ((2.0 * j + p + 1.0 - x) * lc - (j + p) * lm) / (j + 1.0);
    lm = lc;
    lc = ln;
  }
  return lc;
}

double laguerre(const PolyIndex& idx, double x) {
  return laguerre(idx.degree, idx.order, x);
}

double bessel_i(int n, double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_i requires x >= 0");
  const int m = n < 0 ? -n : n;
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;

  // Leading term (x/2)^m / m! in log space; factorials above 170 overflow.
  const double log_lead = m * std::log(0.5 * x) - log_factorial(m);
  if (log_lead > 700.0) throw std::overflow_error("bessel_i: argument too large");
  double term = std::exp(log_lead);
  double sum = term;
  const double q = 0.25 * x * x;
  for (int k = 1; k <= 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (!std::isfinite(sum)) throw std::overflow_error("bessel_i: overflow in series");
    if (term < 1e-16 * sum) break;
  }
  return sum;
}

double log_factorial(int n) {
  require_nonnegative(n, "log_factorial argument");
  if (n < 2) return 0.0;
  return std::lgamma(n + 1.0);
}

}  // namespace spacelike::specfun
