#include "spacelike/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spacelike::rmt {

void HermitianMatrix::set(int i, int j, Complex v) {
  if (i == j) v = Complex{v.real(), 0.0};
  a_[static_cast<size_t>(i) * n_ + j] = v;
  a_[static_cast<size_t>(j) * n_ + i] = std::conj(v);
}

void HermitianMatrix::add(int i, int j, Complex v) {
  set(i, j, (*this)(i, j) + v);
}

HermitianMatrix HermitianMatrix::minor_top_left(int n) const {
  if (n < 1 || n > n_) throw std::invalid_argument("minor dimension out of range");
  HermitianMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m.set(i, j, (*this)(i, j));
  return m;
}

double HermitianMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i).real();
  return t;
}

double HermitianMatrix::frobenius_sq() const {
  double s = 0.0;
  for (const auto& v : a_) s += std::norm(v);
  return s;
}

std::vector<HermitianMatrix> sample_hermitian_path(int N, const std::vector<double>& times,
                                                   RngStream& rng) {
  if (N < 1) throw std::invalid_argument("dimension must be >= 1");
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0) throw std::invalid_argument("times must be > 0");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("times must be strictly increasing");
  }
  std::vector<HermitianMatrix> out;
  out.reserve(times.size());
  HermitianMatrix h(N);
  double prev = 0.0;
  for (const double t : times) {
    const double dt = t - prev;
    const double sd_diag = std::sqrt(dt / 2.0);
    const double sd_off = std::sqrt(dt) / 2.0;
    for (int i = 0; i < N; ++i) {
      h.add(i, i, Complex{sd_diag * rng.next_normal(), 0.0});
      for (int j = i + 1; j < N; ++j)
        h.add(i, j, Complex{sd_off * rng.next_normal(), sd_off * rng.next_normal()});
    }
    prev = t;
    out.push_back(h);
  }
  return out;
}

namespace detail {

void householder_tridiagonalize(const HermitianMatrix& h, std::vector<double>& diag,
                                std::vector<double>& sub) {
  const int n = h.dim();
  std::vector<Complex> a(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i) * n + j] = h(i, j);
  auto at = [&](int i, int j) -> Complex& { return a[static_cast<size_t>(i) * n + j]; };

  diag.assign(n, 0.0);
  sub.assign(std::max(0, n - 1), 0.0);

  std::vector<Complex> u(n), p(n), q(n);
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    diag[i] = at(i, i).real();
    if (l == 0) {
      sub[0] = std::abs(at(1, 0));
      continue;
    }
    double scale = 0.0;
    for (int k = 0; k <= l; ++k)
      scale += std::abs(at(k, i).real()) + std::abs(at(k, i).imag());
    if (scale == 0.0) {
      sub[l] = 0.0;
      continue;
    }
    // Reflect the column A(0..l, i) onto g e_l; the phase choice avoids
    // cancellation in u_l = c_l - g.
    double hh = 0.0;
    for (int k = 0; k <= l; ++k) {
      u[k] = at(k, i) / scale;
      hh += std::norm(u[k]);
    }
    const Complex f = u[l];
    const double af = std::abs(f);
    const Complex phase = af == 0.0 ? Complex{1.0, 0.0} : f / af;
    const double root = std::sqrt(hh);
    const Complex g = -phase * root;
    sub[l] = scale * root;        // realified subdiagonal magnitude
    const double big_h = hh + root * af;  // ||u||^2 / 2 after the update below
    if (big_h == 0.0) {
      sub[l] = 0.0;
      continue;
    }
    u[l] = f - g;

    for (int j = 0; j <= l; ++j) {
      Complex s{0.0, 0.0};
      for (int k = 0; k <= l; ++k) s += at(j, k) * u[k];
      p[j] = s / big_h;
    }
    Complex ks{0.0, 0.0};
    for (int k = 0; k <= l; ++k) ks += std::conj(u[k]) * p[k];
    const double kk = ks.real() / (2.0 * big_h);
    for (int j = 0; j <= l; ++j) q[j] = p[j] - kk * u[j];
    for (int j = 0; j <= l; ++j)
      for (int k = 0; k <= l; ++k)
        at(j, k) -= u[j] * std::conj(q[k]) + q[j] * std::conj(u[k]);
  }
  diag[0] = at(0, 0).real();
}

namespace {

int sturm_count_less(const std::vector<double>& d, const std::vector<double>& e,
                     double x) {
  const int n = static_cast<int>(d.size());
  int cnt = 0;
  double q = d[0] - x;
  if (q < 0.0) ++cnt;
  for (int i = 1; i < n; ++i) {
    const double denom = q == 0.0 ? 1e-300 : q;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues_bisect(const std::vector<double>& diag,
                                                   const std::vector<double>& sub,
                                                   double tol) {
  const int n = static_cast<int>(diag.size());
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(sub[i - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(sub[i]) : 0.0);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  const double span = std::max(hi - lo, 1e-30);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    double a = lo, b = hi;
    while (b - a > tol * span) {
      const double mid = 0.5 * (a + b);
      if (sturm_count_less(diag, sub, mid) > k)
        b = mid;
      else
        a = mid;
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

}  // namespace detail

namespace {

// Implicit-shift QL on a real symmetric tridiagonal; eigenvalues only.
void ql_implicit(std::vector<double>& d, std::vector<double>& e) {
  const int n = static_cast<int>(d.size());
  if (n == 1) return;
  e.push_back(0.0);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    anorm = std::max(anorm, std::abs(d[i]) + (i > 0 ? std::abs(e[i - 1]) : 0.0));
  const double floor_tol = 1e-300 + 1e-18 * anorm;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 2.2204460492503131e-16 * dd + floor_tol) break;
      }
      if (m != l) {
        if (iter++ == 60)
          throw std::runtime_error("hermitian_eigenvalues: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (i == l) {
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
            p = 0.0;
          }
        }
      }
    } while (m != l);
  }
  e.pop_back();
  std::sort(d.begin(), d.end());
}

}  // namespace

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h) {
  std::vector<double> d, e;
  detail::householder_tridiagonalize(h, d, e);
  ql_implicit(d, e);
  return d;
}

std::vector<std::vector<double>> minor_eigenvalues(const HermitianMatrix& h,
                                                   const std::vector<int>& levels) {
  std::vector<std::vector<double>> out;
  out.reserve(levels.size());
  for (const int n : levels) out.push_back(hermitian_eigenvalues(h.minor_top_left(n)));
  return out;
}

MinorEigenSample sample_minor_process(int N, const std::vector<double>& times,
                                      const std::vector<int>& levels, RngStream& rng) {
  MinorEigenSample s;
  s.times = times;
  s.levels = levels;
  const auto path = sample_hermitian_path(N, times, rng);
  s.lambda.reserve(path.size());
  for (const auto& h : path) s.lambda.push_back(minor_eigenvalues(h, levels));
  return s;
}

namespace {

struct RectMatrix {
  int rows, cols;
  std::vector<Complex> a;
  RectMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  Complex& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Complex& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

HermitianMatrix gram(const RectMatrix& m, int use_cols) {
  HermitianMatrix h(use_cols);
  for (int i = 0; i < use_cols; ++i)
    for (int j = i; j < use_cols; ++j) {
      Complex s{0.0, 0.0};
      for (int k = 0; k < m.rows; ++k) s += std::conj(m.at(k, i)) * m.at(k, j);
      h.set(i, j, s);
    }
  return h;
}

std::vector<double> nonnegative_eigenvalues(const HermitianMatrix& h) {
  auto ev = hermitian_eigenvalues(h);
  const double tol = 1e-10 * std::max(1.0, std::sqrt(h.frobenius_sq()));
  for (auto& v : ev) {
    if (v < -tol) throw std::runtime_error("wishart eigenvalue below zero");
    v = std::max(v, 0.0);
  }
  return ev;
}

void advance_rect(RectMatrix& a, double dt, RngStream& rng) {
  const double sd = std::sqrt(dt / 2.0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      a.at(i, j) += Complex{sd * rng.next_normal(), sd * rng.next_normal()};
}

}  // namespace

std::vector<std::vector<double>> sample_wishart_path(int p, int n,
                                                     const std::vector<double>& times,
                                                     RngStream& rng) {
  if (p < n || n < 1) throw std::invalid_argument("wishart requires p >= n >= 1");
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0) throw std::invalid_argument("times must be > 0");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("times must be strictly increasing");
  }
  RectMatrix a(p, n);
  std::vector<std::vector<double>> out;
  out.reserve(times.size());
  double prev = 0.0;
  for (const double t : times) {
    advance_rect(a, t - prev, rng);
    prev = t;
    out.push_back(nonnegative_eigenvalues(gram(a, n)));
  }
  return out;
}

std::vector<std::vector<double>> sample_wishart_minors(int p, int n, double t,
                                                       RngStream& rng) {
  if (p < n || n < 1) throw std::invalid_argument("wishart requires p >= n >= 1");
  if (t <= 0.0) throw std::invalid_argument("time must be > 0");
  RectMatrix a(p, n);
  advance_rect(a, t, rng);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (int m = 1; m <= n; ++m) out.push_back(nonnegative_eigenvalues(gram(a, m)));
  return out;
}

linalg::Matrix haar_unitary(int N, RngStream& rng) {
  if (N < 1) throw std::invalid_argument("dimension must be >= 1");
  linalg::Matrix g(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      g(i, j) = Complex{rng.next_normal(), rng.next_normal()} / std::sqrt(2.0);

  // Modified Gram-Schmidt with one reorthogonalization pass; the R diagonal
  // comes out real positive, which is exactly the phase convention that
  // makes Q Haar distributed.
  linalg::Matrix q = g;
  for (int j = 0; j < N; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < j; ++k) {
        Complex proj{0.0, 0.0};
        for (int i = 0; i < N; ++i) proj += std::conj(q(i, k)) * q(i, j);
        for (int i = 0; i < N; ++i) q(i, j) -= proj * q(i, k);
      }
    }
    double nrm = 0.0;
    for (int i = 0; i < N; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::runtime_error("haar_unitary: degenerate draw");
    for (int i = 0; i < N; ++i) q(i, j) /= nrm;
  }
  return q;
}

bool interlaced(const std::vector<double>& lower, const std::vector<double>& upper,
                double slack) {
  if (upper.size() != lower.size() + 1) return false;
  double scale = 1.0;
  for (const double v : upper) scale = std::max(scale, std::abs(v));
  const double s = slack * scale;
  for (size_t k = 0; k < lower.size(); ++k)
    if (upper[k] > lower[k] + s || lower[k] > upper[k + 1] + s) return false;
  return true;
}

}  // namespace spacelike::rmt
