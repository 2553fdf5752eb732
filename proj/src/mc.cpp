#include "spacelike/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spacelike/contour.hpp"
#include "spacelike/kernels.hpp"
#include "spacelike/linalg.hpp"
#include "spacelike/rmt.hpp"
#include "spacelike/specfun.hpp"

namespace spacelike::mc {

namespace {

using kernels::QuadratureConfig;
using kernels::SpaceTimePoint;

// Composite 16-point Gauss-Legendre on [a, b].
template <class F>
double integrate_real(F&& f, double a, double b, int panels = 64) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int j = 0; j < 8; ++j)
      for (int s = -1; s <= 1; s += 2)
        sum += contour::detail::kGL16W[j] *
               f(mid + s * 0.5 * h * contour::detail::kGL16X[j]);
  }
  return sum * 0.5 * h;
}

double vandermonde(const std::vector<double>& v) {
  double d = 1.0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) d *= v[j] - v[i];
  return d;
}

CheckResult z_check(std::string name, double predicted, double mean, double se,
                    double z_bound) {
  CheckResult r;
  r.name = std::move(name);
  r.predicted = predicted;
  r.estimated = mean;
  r.stderr_est = se;
  r.z = se > 0.0 ? (mean - predicted) / se : 0.0;
  r.tol = z_bound;
  r.pass = std::abs(r.z) < z_bound;
  return r;
}

CheckResult dev_check(std::string name, double max_dev, double tol) {
  CheckResult r;
  r.name = std::move(name);
  r.max_dev = max_dev;
  r.tol = tol;
  r.pass = max_dev < tol;
  return r;
}

}  // namespace

Histogram make_histogram(const std::vector<double>& samples,
                         const std::vector<double>& edges) {
  if (edges.size() < 2) throw std::invalid_argument("histogram needs >= 2 edges");
  if (samples.empty()) throw std::invalid_argument("histogram needs >= 1 sample");
  Histogram h;
  h.edges = edges;
  h.counts.assign(edges.size() - 1, 0);
  for (const double x : samples) {
    ++h.total;
    if (x < edges.front()) {
      ++h.below;
      continue;
    }
    if (x >= edges.back()) {
      ++h.above;
      continue;
    }
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    ++h.counts[static_cast<size_t>(it - edges.begin()) - 1];
  }
  return h;
}

std::vector<double> density(const Histogram& h) {
  std::vector<double> d(h.counts.size());
  for (size_t i = 0; i < d.size(); ++i) {
    const double w = h.edges[i + 1] - h.edges[i];
    d[i] = static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * w);
  }
  return d;
}

std::vector<double> fd_bin_edges(std::vector<double> samples, double lo, double hi,
                                 double width_floor) {
  if (samples.empty()) throw std::invalid_argument("fd_bin_edges needs samples");
  std::sort(samples.begin(), samples.end());
  const auto quantile = [&](double q) {
    const double pos = q * (samples.size() - 1);
    const size_t i = static_cast<size_t>(pos);
    const double frac = pos - i;
    return i + 1 < samples.size() ? samples[i] * (1 - frac) + samples[i + 1] * frac
                                  : samples[i];
  };
  const double iqr = quantile(0.75) - quantile(0.25);
  double w = 2.0 * iqr / std::cbrt(static_cast<double>(samples.size()));
  w = std::max(w, width_floor);
  const int bins = std::max(1, static_cast<int>(std::ceil((hi - lo) / w)));
  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
  return edges;
}

CorrelationEstimate empirical_pair_correlation(
    const std::vector<std::vector<double>>& point_samples, double a_lo, double a_hi,
    double b_lo, double b_hi) {
  if (point_samples.empty()) throw std::invalid_argument("no samples");
  const bool identical = a_lo == b_lo && a_hi == b_hi;
  if (!identical && a_hi > b_lo && b_hi > a_lo)
    throw std::invalid_argument("cells must be disjoint or identical");
  double sum = 0.0, sumsq = 0.0;
  for (const auto& pts : point_samples) {
    int na = 0, nb = 0;
    for (const double x : pts) {
      if (x >= a_lo && x < a_hi) ++na;
      if (x >= b_lo && x < b_hi) ++nb;
    }
    const double v = identical ? static_cast<double>(na)
                               : static_cast<double>(na) * static_cast<double>(nb);
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(point_samples.size());
  const double mean = sum / n;
  const double var = std::max(0.0, sumsq / n - mean * mean);
  CorrelationEstimate e;
  e.what = identical ? "one-point cell count" : "two-point cell pair";
  const double area = identical ? (a_hi - a_lo) : (a_hi - a_lo) * (b_hi - b_lo);
  e.estimate = mean / area;
  e.stderr_est = std::sqrt(var / n) / area;
  e.samples = point_samples.size();
  return e;
}

CheckResult hciz_check(int N, const std::vector<double>& a, const std::vector<double>& b,
                       std::int64_t n_samples, rmt::RngStream& rng) {
  if (static_cast<int>(a.size()) != N || static_cast<int>(b.size()) != N)
    throw std::invalid_argument("hciz_check: diagonal size mismatch");
  const double da = vandermonde(a), db = vandermonde(b);
  if (std::abs(da) < 1e-8 || std::abs(db) < 1e-8)
    throw std::invalid_argument("hciz_check: near-degenerate diagonal");

  double predicted;
  if (N == 1) {
    predicted = std::exp(a[0] * b[0]);
  } else {
    linalg::Matrix e(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) e(i, j) = std::exp(a[i] * b[j]);
    double pref = 1.0;
    for (int p = 1; p <= N - 1; ++p) pref *= std::exp(specfun::log_factorial(p));
    predicted = pref * linalg::determinant(e).real() / (da * db);
  }

  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const auto u = rmt::haar_unitary(N, rng);
    double tr = 0.0;  // Tr(A U B U*) = sum_{ij} a_i b_j |U_ij|^2
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) tr += a[i] * b[j] * std::norm(u(i, j));
    const double v = std::exp(tr);
    sum += v;
    sumsq += v * v;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
  std::ostringstream name;
  name << "hciz-square N=" << N;
  auto r = z_check(name.str(), predicted, mean, se, 4.0);
  r.pass = N == 1 ? std::abs(mean - predicted) < 1e-12 : r.pass;
  return r;
}

CheckResult hciz_rect_check(int N1, int N2, const std::vector<double>& a,
                            const std::vector<double>& b, std::int64_t n_samples,
                            rmt::RngStream& rng) {
  if (N1 < N2) throw std::invalid_argument("hciz_rect_check requires N1 >= N2");
  if (static_cast<int>(a.size()) != N2 || static_cast<int>(b.size()) != N2)
    throw std::invalid_argument("hciz_rect_check: eigenvalue size mismatch");
  for (int i = 0; i < N2; ++i)
    if (a[i] <= 0.0 || b[i] <= 0.0)
      throw std::invalid_argument("hciz_rect_check: eigenvalues must be positive");
  const double da = vandermonde(a), db = vandermonde(b);
  if (std::abs(da) < 1e-8 || std::abs(db) < 1e-8)
    throw std::invalid_argument("hciz_rect_check: near-degenerate eigenvalues");

  // Prefactor with empty products (N1 - N2 <= 1) equal to one.
  double logpref = 0.0;
  for (int p = 1; p <= N2 - 1; ++p) logpref += specfun::log_factorial(p);
  for (int q = 1; q <= N1 - 1; ++q) logpref += specfun::log_factorial(q);
  for (int r = 1; r <= N1 - N2 - 1; ++r) logpref -= specfun::log_factorial(r);

  linalg::Matrix bes(N2, N2);
  for (int i = 0; i < N2; ++i)
    for (int j = 0; j < N2; ++j)
      bes(i, j) = specfun::bessel_i(N1 - N2, 2.0 * std::sqrt(a[i] * b[j]));
  double denom = da * db;
  for (int i = 0; i < N2; ++i) denom *= std::pow(a[i] * b[i], 0.5 * (N1 - N2));
  const double predicted =
      std::exp(logpref) * linalg::determinant(bes).real() / denom;

  // A is N1 x N2 with A*A = diag(a); B is N2 x N1 with B B* = diag(b).
  linalg::Matrix A(N1, N2), B(N2, N1);
  for (int i = 0; i < N2; ++i) {
    A(i, i) = std::sqrt(a[i]);
    B(i, i) = std::sqrt(b[i]);
  }

  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const auto u = rmt::haar_unitary(N2, rng);
    const auto v = rmt::haar_unitary(N1, rng);
    const auto m = linalg::multiply(linalg::multiply(A, u),
                                    linalg::multiply(B, linalg::adjoint(v)));
    std::complex<double> tr{0.0, 0.0};
    for (int i = 0; i < N1; ++i) tr += m(i, i);
    const double val = std::exp(2.0 * tr.real());
    sum += val;
    sumsq += val * val;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double se = std::sqrt(std::max(0.0, sumsq / n - mean * mean) / n);
  std::ostringstream name;
  name << "hciz-rect N1=" << N1 << " N2=" << N2;
  return z_check(name.str(), predicted, mean, se, 4.0);
}

std::string report_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json j;
    j["name"] = c.name;
    j["predicted"] = c.predicted;
    j["estimated"] = c.estimated;
    j["stderr"] = c.stderr_est;
    j["z"] = c.z;
    j["max_dev"] = c.max_dev;
    j["tol"] = c.tol;
    j["pass"] = c.pass;
    arr.push_back(j);
  }
  return arr.dump(1);
}

// ---------------------------------------------------------------------------
// Identity suite
// ---------------------------------------------------------------------------

namespace {

// Integration windows from Gaussian / Bessel tail bounds at ~1e-12.
double gauss_halfwidth(double t) { return std::sqrt(t * 28.0); }
double lue_upper(double x, double dt) {
  const double r = std::sqrt(x) + std::sqrt(34.0 * dt);
  return r * r + 10.0 * dt;
}

void lemma_gue(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  const double grids[2][3] = {{2.0, 1.0, 0.5}, {3.0, 2.0, 1.0}};
  rmt::RngStream pts(0x1DE47157, 1);
  for (const auto& g : grids) {
    const double t = g[0], s = g[1], r = g[2];
    double dev1 = 0.0, dev2 = 0.0, dev3 = 0.0, dev4 = 0.0;
    for (int n = 2; n <= 5; ++n) {
      for (const int k : {1, n - 1, n}) {
        if (k < 1) continue;
        for (int trial = 0; trial < 20; ++trial) {
          const double x = 6.0 * pts.next_uniform() - 3.0;
          // (i) (phi * Psi^{n,t}_{n-k})(x) = Psi^{n-1,t}_{n-1-k}(x)
          const double hi = x + gauss_halfwidth(t) + 2.0;
          const double lhs1 = opt.corruption *
              integrate_real([&](double y) { return kernels::psi_gue(n, t, n - k, y); },
                             x, hi, 96);
          dev1 = std::max(dev1,
                          std::abs(lhs1 - kernels::psi_gue(n - 1, t, n - 1 - k, x)));
          // (ii) (T_{t,s} * Psi^{n,s}_{n-k})(x) = Psi^{n,t}_{n-k}(x)
          const double L = gauss_halfwidth(std::max(t, s)) + std::abs(x) + 2.0;
          const double lhs2 = integrate_real(
              [&](double y) {
                return kernels::heat_kernel(t, s, x, y) * kernels::psi_gue(n, s, n - k, y);
              },
              -L, L, 128);
          dev2 = std::max(dev2, std::abs(lhs2 - kernels::psi_gue(n, t, n - k, x)));
        }
      }
    }
    // (iii) phi * T_{t,s} = T_{t,s} * phi at sampled (x, z)
    for (int trial = 0; trial < 20; ++trial) {
      const double x = 4.0 * pts.next_uniform() - 2.0;
      const double z = 4.0 * pts.next_uniform() - 2.0;
      const double w = gauss_halfwidth(t - s);
      const double lhs = integrate_real(
          [&](double y) { return kernels::heat_kernel(t, s, y, z); }, x,
          std::max(x, z) + w + 2.0, 96);
      const double rhs = integrate_real(
          [&](double y) { return kernels::heat_kernel(t, s, x, y); },
          std::min(x, z) - w - 2.0, z, 96);
      dev3 = std::max(dev3, std::abs(lhs - rhs));
    }
    // (iv) T_{t,s} * T_{s,r} = T_{t,r}
    for (int trial = 0; trial < 20; ++trial) {
      const double x = 4.0 * pts.next_uniform() - 2.0;
      const double z = 4.0 * pts.next_uniform() - 2.0;
      const double L = gauss_halfwidth(t) + std::abs(x) + std::abs(z) + 2.0;
      const double lhs = integrate_real(
          [&](double y) {
            return kernels::heat_kernel(t, s, x, y) * kernels::heat_kernel(s, r, y, z);
          },
          -L, L, 128);
      dev4 = std::max(dev4, std::abs(lhs - kernels::heat_kernel(t, r, x, z)));
    }
    std::ostringstream tag;
    tag << " (t,s,r)=(" << t << "," << s << "," << r << ")";
    out.push_back(dev_check("lemma-gue-i" + tag.str(), dev1, opt.lemma_tol));
    out.push_back(dev_check("lemma-gue-ii" + tag.str(), dev2, opt.lemma_tol));
    out.push_back(dev_check("lemma-gue-iii" + tag.str(), dev3, opt.lemma_tol));
    out.push_back(dev_check("lemma-gue-iv" + tag.str(), dev4, opt.lemma_tol));
  }
}

void lemma_lue(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  const double grids[2][3] = {{2.0, 1.0, 0.5}, {3.0, 2.0, 1.0}};
  const int p = 6;
  rmt::RngStream pts(0x1DE47157, 2);
  for (const auto& g : grids) {
    const double t = g[0], s = g[1], r = g[2];
    double dev1 = 0.0, dev2 = 0.0, dev3 = 0.0, dev4 = 0.0;
    for (int n = 2; n <= 5; ++n) {
      for (const int k : {1, n - 1, n}) {
        if (k < 1) continue;
        for (int trial = 0; trial < 20; ++trial) {
          const double x = 12.0 * pts.next_uniform() + 0.3;
          // (i) (phi * Psi_{n-k}^{p-n,t})(x) = Psi_{(n-1)-k}^{p-(n-1),t}(x);
          // needs an index n-k >= 1: at index 0 the x-independent part of
          // the contour integral leaves residue 1 instead of 0.
          if (n - k >= 1) {
            const double lhs1 = integrate_real(
                [&](double y) { return kernels::psi_lue(p - n, t, n - k, y); }, 0.0,
                x, 96);
            dev1 = std::max(
                dev1, std::abs(lhs1 - kernels::psi_lue(p - n + 1, t, n - 1 - k, x)));
          }
          // (ii) (T^{p-n}_{t,s} * Psi_{n-k}^{p-n,s})(x) = Psi_{n-k}^{p-n,t}(x)
          const double up = lue_upper(x, t - s);
          const double lhs2 = integrate_real(
              [&](double y) {
                return kernels::bessel_transition(p - n, t, s, x, y) *
                       kernels::psi_lue(p - n, s, n - k, y);
              },
              1e-12, up, 160);
          dev2 = std::max(dev2, std::abs(lhs2 - kernels::psi_lue(p - n, t, n - k, x)));
        }
      }
    }
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + trial % 4;
      const double x = 10.0 * pts.next_uniform() + 0.3;
      const double y = 10.0 * pts.next_uniform() + 0.3;
      // (iii) phi * T^{p-n}_{t,s} = T^{p-(n-1)}_{t,s} * phi
      const double lhs = integrate_real(
          [&](double z) { return kernels::bessel_transition(p - n, t, s, z, y); },
          1e-12, x, 96);
      const double rhs = integrate_real(
          [&](double z) { return kernels::bessel_transition(p - n + 1, t, s, x, z); },
          y, lue_upper(x, t - s) + y, 160);
      dev3 = std::max(dev3, std::abs(lhs - rhs));
      // (iv) T^{p-n}_{t,s} * T^{p-n}_{s,r} = T^{p-n}_{t,r}
      const double up = lue_upper(std::max(x, y), std::max(t - s, s - r));
      const double lhs4 = integrate_real(
          [&](double z) {
            return kernels::bessel_transition(p - n, t, s, x, z) *
                   kernels::bessel_transition(p - n, s, r, z, y);
          },
          1e-12, up, 192);
      dev4 = std::max(dev4,
                      std::abs(lhs4 - kernels::bessel_transition(p - n, t, r, x, y)));
    }
    std::ostringstream tag;
    tag << " (t,s,r)=(" << t << "," << s << "," << r << ")";
    out.push_back(dev_check("lemma-lue-i" + tag.str(), dev1, opt.lemma_tol));
    out.push_back(dev_check("lemma-lue-ii" + tag.str(), dev2, opt.lemma_tol));
    out.push_back(dev_check("lemma-lue-iii" + tag.str(), dev3, opt.lemma_tol));
    out.push_back(dev_check("lemma-lue-iv" + tag.str(), dev4, opt.lemma_tol));
  }
}

void orthogonality_checks(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  // Hermite: int e^{-x^2} p_n p_m = delta sqrt(pi) 2^n n!, n,m <= 10.
  double dev = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int m = n; m <= 10; ++m) {
      const double got = integrate_real(
          [&](double x) {
            return std::exp(-x * x) * specfun::hermite(n, x) * specfun::hermite(m, x);
          },
          -9.0, 9.0, 128);
      const double want =
          n == m ? std::sqrt(3.14159265358979323846) *
                       std::exp(n * std::log(2.0) + specfun::log_factorial(n))
                 : 0.0;
      const double scale = std::sqrt(3.14159265358979323846) *
                           std::exp(n * std::log(2.0) + specfun::log_factorial(n));
      dev = std::max(dev, std::abs(got - want) / scale);
    }
  out.push_back(dev_check("hermite-orthogonality", dev, 1e-8));

  // Laguerre: int x^p e^{-x} L_k L_l = delta (p+k)!/k!, k,l <= 10, p <= 5.
  dev = 0.0;
  for (int p = 0; p <= 5; ++p)
    for (int k = 0; k <= 10; ++k)
      for (int l = k; l <= 10; ++l) {
        const double got = integrate_real(
            [&](double x) {
              return std::pow(x, p) * std::exp(-x) * specfun::laguerre(k, p, x) *
                     specfun::laguerre(l, p, x);
            },
            1e-14, 140.0, 256);
        const double want =
            k == l ? std::exp(specfun::log_factorial(p + k) - specfun::log_factorial(k))
                   : 0.0;
        const double scale =
            std::exp(specfun::log_factorial(p + k) - specfun::log_factorial(k));
        dev = std::max(dev, std::abs(got - want) / scale);
      }
  out.push_back(dev_check("laguerre-orthogonality", dev, 1e-8));
  (void)opt;
}

void biorthogonality_checks(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  double dev = 0.0;
  for (const double t : {1.0, 2.0}) {
    const int n = 6;
    const double L = gauss_halfwidth(t) + 8.0 * std::sqrt(t);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double got = integrate_real(
            [&](double x) {
              return kernels::psi_gue(n, t, k, x) * kernels::phi_gue(n, t, l, x);
            },
            -L, L, 160);
        dev = std::max(dev, std::abs(got - (k == l ? 1.0 : 0.0)));
      }
  }
  out.push_back(dev_check("biorthogonality-gue", dev, opt.biorth_tol));

  dev = 0.0;
  for (const double t : {1.0, 2.0}) {
    for (const int order : {1, 2, 4}) {
      const double up = 50.0 * t + 120.0;
      for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
          const double got = integrate_real(
              [&](double x) {
                return kernels::psi_lue(order, t, k, x) * kernels::phi_lue(order, t, l, x);
              },
              1e-12, up, 320);
          dev = std::max(dev, std::abs(got - (k == l ? 1.0 : 0.0)));
        }
    }
  }
  out.push_back(dev_check("biorthogonality-lue", dev, opt.biorth_tol));
}

void dual_representation_checks(std::vector<CheckResult>& out,
                                const IdentityOptions& opt) {
  rmt::RngStream pts(0x1DE47157, 3);
  double dev = 0.0;
  // Psi: closed Laguerre form vs both circle representations.
  for (int trial = 0; trial < 8; ++trial) {
    const int n = trial % 4;
    const int k = trial % 3;
    const double t = 0.5 + 2.0 * pts.next_uniform();
    const double x = 6.0 * pts.next_uniform();
    const double a = kernels::psi_lue(n, t, k, x);
    const double b = kernels::psi_lue_contour_unit(n, t, k, x);
    const double c = kernels::psi_lue_contour_shifted(n, t, k, x);
    dev = std::max({dev, std::abs(a - b), std::abs(a - c)});
  }
  // Negative indices: the two contour forms against each other.
  for (int k = -3; k < 0; ++k) {
    const double b = kernels::psi_lue_contour_unit(2, 1.5, k, 1.7);
    const double c = kernels::psi_lue_contour_shifted(2, 1.5, k, 1.7);
    dev = std::max(dev, std::abs(b - c));
  }
  out.push_back(dev_check("dual-representation-psi-lue", dev, opt.dual_tol));

  dev = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const int n = trial % 4;
    const double t = 1.0 + 1.5 * pts.next_uniform();
    const double s = 0.2 + 0.5 * pts.next_uniform();
    const double x = 0.3 + 5.0 * pts.next_uniform();
    const double y = 0.3 + 5.0 * pts.next_uniform();
    const double a = kernels::bessel_transition(n, t, s, x, y);
    const double b = kernels::bessel_transition_contour_unit(n, t, s, x, y);
    const double c = kernels::bessel_transition_contour_shifted(n, t, s, x, y);
    dev = std::max({dev, std::abs(a - b) / std::max(1.0, std::abs(a)),
                    std::abs(a - c) / std::max(1.0, std::abs(a))});
  }
  out.push_back(dev_check("dual-representation-bessel", dev, opt.dual_tol));

  dev = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 1 + trial % 3;
    const double t = 0.5 + 2.0 * pts.next_uniform();
    const double x = 4.0 * pts.next_uniform() - 2.0;
    const int k = trial % 4;
    dev = std::max(dev, std::abs(kernels::psi_gue(n, t, k, x) -
                                 kernels::psi_gue_contour(n, t, k, x)));
    dev = std::max(dev, std::abs(kernels::phi_gue(n, t, k, x) -
                                 kernels::phi_gue_contour(n, t, k, x)));
  }
  out.push_back(dev_check("dual-representation-gue", dev, opt.dual_tol));
}

void sum_identity_checks(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  rmt::RngStream pts(0x1DE47157, 4);
  const QuadratureConfig q{};
  double dev = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int n2 = 1 + static_cast<int>(pts.next_uniform() * 3) % 3;
    const int n1 = n2 + static_cast<int>(pts.next_uniform() * 3) % 3;
    const double t1 = 0.5 + pts.next_uniform();
    const double t2 = t1 + pts.next_uniform();  // t1 <= t2: b precedes a
    const SpaceTimePoint a{3.0 * pts.next_uniform() - 1.5, n1, t1};
    const SpaceTimePoint b{3.0 * pts.next_uniform() - 1.5, n2, t2};
    const double sum = kernels::gue_sum_term(a, b);
    // The double-integral term alone: the first term vanishes because b
    // does not precede a (n1 >= n2, t1 <= t2 with distinct labels).
    const double dbl = kernels::kernel_gue_extended(a, b, q).value;
    dev = std::max(dev, std::abs(sum - dbl) / std::max(1e-3, std::abs(sum)));
  }
  out.push_back(dev_check("sum-vs-double-integral-gue", dev, 1e-6));

  dev = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int p = 4 + trial % 2;
    const int n2 = 1 + static_cast<int>(pts.next_uniform() * 2) % 2;
    const int n1 = std::min(p, n2 + static_cast<int>(pts.next_uniform() * 3) % 3);
    const double t1 = 0.5 + pts.next_uniform();
    const double t2 = t1 + pts.next_uniform();
    const SpaceTimePoint a{4.0 * pts.next_uniform() + 0.2, n1, t1};
    const SpaceTimePoint b{4.0 * pts.next_uniform() + 0.2, n2, t2};
    const kernels::LueParams lp{p};
    const double sum = kernels::lue_sum_term(a, b, lp);
    const double dbl = kernels::kernel_lue(a, b, lp, q).value;
    dev = std::max(dev, std::abs(sum - dbl) / std::max(1e-3, std::abs(sum)));
  }
  out.push_back(dev_check("sum-vs-double-integral-lue", dev, 1e-6));
  (void)opt;
}

void trace_checks(std::vector<CheckResult>& out, const IdentityOptions& opt) {
  QuadratureConfig q;
  q.vline_nodes = 256;
  q.circle_nodes = 128;
  q.tol = 1e-8;
  q.max_doublings = 2;

  double dev = 0.0;
  for (int n = 1; n <= 5; ++n)
    for (const double t : {0.5, 1.0, 2.0}) {
      const double L = std::sqrt(2.0 * n * t) + 5.5 * std::sqrt(t);
      const double got = integrate_real(
          [&](double x) {
            return kernels::kernel_gue_extended({x, n, t}, {x, n, t}, q).value;
          },
          -L, L, 28);
      dev = std::max(dev, std::abs(got - n));
    }
  out.push_back(dev_check("trace-gue", dev, opt.trace_tol));

  dev = 0.0;
  for (const int p : {3, 4})
    for (int n = 1; n <= 3; ++n) {
      const double t = 1.0;
      const double hi = t * (std::sqrt(n) + std::sqrt(p)) * (std::sqrt(n) + std::sqrt(p)) +
                        26.0 * t;
      const double got = integrate_real(
          [&](double x) {
            return kernels::kernel_lue({x, n, t}, {x, n, t}, {p}, q).value;
          },
          1e-9, hi, 28);
      dev = std::max(dev, std::abs(got - n));
    }
  out.push_back(dev_check("trace-lue", dev, opt.trace_tol));

  dev = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const double t = 1.0;
    double sum = 0.0;
    for (int x = -n; x <= 40; ++x)
      sum += kernels::kernel_discrete({static_cast<double>(x), n, t},
                                      {static_cast<double>(x), n, t}, q);
    dev = std::max(dev, std::abs(sum - n));
  }
  out.push_back(dev_check("trace-discrete", dev, opt.trace_tol));
}

}  // namespace

IdentityReport identity_suite(const IdentityOptions& opt) {
  IdentityReport rep;
  orthogonality_checks(rep.checks, opt);
  lemma_gue(rep.checks, opt);
  lemma_lue(rep.checks, opt);
  biorthogonality_checks(rep.checks, opt);
  dual_representation_checks(rep.checks, opt);
  sum_identity_checks(rep.checks, opt);
  trace_checks(rep.checks, opt);
  for (const auto& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

}  // namespace spacelike::mc
