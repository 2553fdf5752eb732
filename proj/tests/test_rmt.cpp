#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "doctest.h"
#include "spacelike/linalg.hpp"
#include "spacelike/rmt.hpp"

using namespace spacelike::rmt;
using Cx = std::complex<double>;

namespace {

// Companion-free oracle: bracket the roots of det(H - x I) evaluated by
// complex LU on the original matrix, fully independent of the
// tridiagonalization path.
std::vector<double> charpoly_bisect(const HermitianMatrix& h, double lo, double hi,
                                    double step) {
  auto det = [&](double x) {
    spacelike::linalg::Matrix m(h.dim(), h.dim());
    for (int i = 0; i < h.dim(); ++i)
      for (int j = 0; j < h.dim(); ++j) m(i, j) = h(i, j);
    for (int i = 0; i < h.dim(); ++i) m(i, i) -= x;
    return spacelike::linalg::determinant(m).real();
  };
  std::vector<double> roots;
  double prev = det(lo);
  for (double x = lo; x < hi; x += step) {
    const double cur = det(x + step);
    if ((prev < 0) != (cur < 0)) {
      double a = x, b = x + step;
      const bool left_neg = prev < 0;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (a + b);
        if ((det(mid) < 0) == left_neg)
          a = mid;
        else
          b = mid;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev = cur;
  }
  return roots;
}

}  // namespace

TEST_CASE("rng streams are deterministic and distinct") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool same = true, differ = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next_u64();
    same = same && x == b.next_u64();
    differ = differ || x != c.next_u64();
  }
  CHECK(same);
  CHECK(differ);
  RngStream u(1, 0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.next_uniform();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("normal moments") {
  RngStream rng(5, 0);
  double s1 = 0, s2 = 0, s4 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  CHECK(std::abs(s1 / n) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(s2 / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(s4 / n - 3.0) < 3.0 * std::sqrt(96.0 / n));
}

TEST_CASE("hermitian path variance conventions") {
  // density exp(-Tr(H^2)/t): 1x1 entry is N(0, t/2)
  RngStream rng(9, 0);
  const int n = 100000;
  double s2 = 0;
  for (int i = 0; i < n; ++i) {
    RngStream r(9, static_cast<std::uint64_t>(i));
    const auto h = sample_hermitian_path(1, {1.0}, r);
    s2 += h[0](0, 0).real() * h[0](0, 0).real();
  }
  const double var = s2 / n;
  CHECK(std::abs(var - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / n));

  // increments independent of the past, and Tr E[H(t)^2] = t N^2 / 2
  const int N = 3;
  double cov = 0, tr2 = 0;
  const int m = 40000;
  for (int i = 0; i < m; ++i) {
    RngStream r(10, static_cast<std::uint64_t>(i));
    const auto path = sample_hermitian_path(N, {1.0, 2.0}, r);
    const double a = path[0](0, 1).real();
    const double b = path[1](0, 1).real() - path[0](0, 1).real();
    cov += a * b;
    tr2 += path[0].frobenius_sq();
  }
  CHECK(std::abs(cov / m) < 3.0 * 0.25 / std::sqrt(static_cast<double>(m)));
  const double want = 1.0 * N * N / 2.0;
  CHECK(std::abs(tr2 / m - want) < 3.0 * want * std::sqrt(2.0 / m));
}

TEST_CASE("one-step and two-step sampling agree in distribution") {
  const int m = 60000;
  double a2 = 0, b2 = 0, a4 = 0, b4 = 0;
  for (int i = 0; i < m; ++i) {
    RngStream r1(11, static_cast<std::uint64_t>(i));
    RngStream r2(12, static_cast<std::uint64_t>(i));
    const auto one = sample_hermitian_path(2, {2.0}, r1);
    const auto two = sample_hermitian_path(2, {0.7, 2.0}, r2);
    const double x = one[0](0, 1).imag();
    const double y = two[1](0, 1).imag();
    a2 += x * x;
    a4 += x * x * x * x;
    b2 += y * y;
    b4 += y * y * y * y;
  }
  const double v = 0.5;  // Var Im H_{01}(2) = t/4
  CHECK(std::abs(a2 / m - v) < 3.0 * v * std::sqrt(2.0 / m));
  CHECK(std::abs(b2 / m - v) < 3.0 * v * std::sqrt(2.0 / m));
  CHECK(std::abs(a4 / m - b4 / m) < 3.0 * std::sqrt(2.0 * 96.0 * v * v * v * v / m));
}

TEST_CASE("eigenvalues of explicit matrices") {
  HermitianMatrix d(3);
  d.set(0, 0, {3.0, 0.0});
  d.set(1, 1, {-1.0, 0.0});
  d.set(2, 2, {2.0, 0.0});
  const auto ev = hermitian_eigenvalues(d);
  CHECK(ev[0] == doctest::Approx(-1.0));
  CHECK(ev[1] == doctest::Approx(2.0));
  CHECK(ev[2] == doctest::Approx(3.0));

  HermitianMatrix h(2);
  h.set(0, 0, {1.0, 0.0});
  h.set(0, 1, {0.0, 1.0});  // [[1, i], [-i, 1]]
  h.set(1, 1, {1.0, 0.0});
  const auto e2 = hermitian_eigenvalues(h);
  CHECK(e2[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e2[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eigenvalues match the tridiagonal bisection oracle") {
  RngStream rng(21, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    HermitianMatrix h(n);
    for (int i = 0; i < n; ++i) {
      h.set(i, i, {rng.next_normal(), 0.0});
      for (int j = i + 1; j < n; ++j)
        h.set(i, j, {rng.next_normal(), rng.next_normal()});
    }
    std::vector<double> d, e;
    detail::householder_tridiagonalize(h, d, e);
    const auto oracle = detail::tridiagonal_eigenvalues_bisect(d, e);
    const auto ev = hermitian_eigenvalues(h);
    for (int k = 0; k < n; ++k)
      CHECK(ev[k] == doctest::Approx(oracle[k]).epsilon(1e-8).scale(1.0));
    // trace and Frobenius identities
    double trace = 0, frob = 0;
    for (const double v : ev) {
      trace += v;
      frob += v * v;
    }
    CHECK(trace == doctest::Approx(h.trace()).epsilon(1e-10));
    CHECK(frob == doctest::Approx(h.frobenius_sq()).epsilon(1e-10));
  }
}

TEST_CASE("eigenvalues match the determinant-bisection oracle") {
  // both the tridiagonalization and the QL step are on trial here: the
  // oracle never leaves the original matrix
  RngStream rng(21, 99);
  for (int trial = 0; trial < 8; ++trial) {
    const int n = 5;
    HermitianMatrix h(n);
    for (int i = 0; i < n; ++i) {
      h.set(i, i, {rng.next_normal(), 0.0});
      for (int j = i + 1; j < n; ++j)
        h.set(i, j, {rng.next_normal(), rng.next_normal()});
    }
    const auto ev = hermitian_eigenvalues(h);
    const auto oracle = charpoly_bisect(h, ev.front() - 1.0, ev.back() + 1.0, 0.01);
    REQUIRE(oracle.size() == ev.size());
    for (size_t k = 0; k < ev.size(); ++k)
      CHECK(ev[k] == doctest::Approx(oracle[k]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("trace identities hold at N = 64") {
  RngStream rng(22, 0);
  const int n = 64;
  HermitianMatrix h(n);
  for (int i = 0; i < n; ++i) {
    h.set(i, i, {rng.next_normal(), 0.0});
    for (int j = i + 1; j < n; ++j)
      h.set(i, j, {0.5 * rng.next_normal(), 0.5 * rng.next_normal()});
  }
  const auto ev = hermitian_eigenvalues(h);
  double trace = 0, frob = 0;
  for (const double v : ev) {
    trace += v;
    frob += v * v;
  }
  CHECK(std::abs(trace - h.trace()) < 1e-10 * std::max(1.0, std::abs(h.trace())));
  CHECK(std::abs(frob - h.frobenius_sq()) < 1e-10 * h.frobenius_sq());
}

TEST_CASE("spectrum invariant under haar conjugation") {
  RngStream rng(23, 0);
  const int n = 5;
  HermitianMatrix h(n);
  for (int i = 0; i < n; ++i) {
    h.set(i, i, {rng.next_normal(), 0.0});
    for (int j = i + 1; j < n; ++j)
      h.set(i, j, {rng.next_normal(), rng.next_normal()});
  }
  const auto u = haar_unitary(n, rng);
  HermitianMatrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Cx s{0.0, 0.0};
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += u(i, k) * h(k, l) * std::conj(u(j, l));
      g.set(i, j, s);
    }
  const auto a = hermitian_eigenvalues(h);
  const auto b = hermitian_eigenvalues(g);
  for (int k = 0; k < n; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
}

TEST_CASE("minor eigenvalues and interlacing") {
  HermitianMatrix d(2);
  d.set(0, 0, {1.0, 0.0});
  d.set(1, 1, {3.0, 0.0});
  const auto mins = minor_eigenvalues(d, {1, 2});
  CHECK(mins[0][0] == doctest::Approx(1.0));
  CHECK(mins[1][0] == doctest::Approx(1.0));
  CHECK(mins[1][1] == doctest::Approx(3.0));

  for (int trial = 0; trial < 10000; ++trial) {
    RngStream r(24, static_cast<std::uint64_t>(trial));
    const auto path = sample_hermitian_path(4, {1.0}, r);
    const auto ev = minor_eigenvalues(path[0], {1, 2, 3, 4});
    CHECK(ev[0][0] == doctest::Approx(path[0](0, 0).real()));
    for (int m = 0; m < 3; ++m) REQUIRE(interlaced(ev[m], ev[m + 1]));
  }
}

TEST_CASE("wishart sampling") {
  // p = n = 1: E lambda = t with the pinned variance convention
  const int m = 100000;
  double s = 0;
  for (int i = 0; i < m; ++i) {
    RngStream r(25, static_cast<std::uint64_t>(i));
    const auto ev = sample_wishart_path(1, 1, {1.0}, r);
    CHECK(ev[0][0] >= 0.0);
    s += ev[0][0];
  }
  CHECK(std::abs(s / m - 1.0) < 3.0 / std::sqrt(static_cast<double>(m)));

  // minor interlacing at fixed time
  for (int trial = 0; trial < 2000; ++trial) {
    RngStream r(26, static_cast<std::uint64_t>(trial));
    const auto levels = sample_wishart_minors(4, 3, 1.0, r);
    for (size_t k = 0; k + 1 < levels.size(); ++k)
      REQUIRE(interlaced(levels[k], levels[k + 1]));
  }

  // one ascending eigenvalue array per requested time
  RngStream r(27, 0);
  const auto path = sample_wishart_path(3, 2, {0.5, 1.5}, r);
  for (const auto& ev : path) {
    CHECK(ev.size() == 2);
    CHECK(ev[0] <= ev[1]);
  }
  CHECK_THROWS_AS(sample_wishart_path(1, 2, {1.0}, r), std::invalid_argument);
}

TEST_CASE("haar unitarity and moments") {
  RngStream rng(28, 0);
  for (const int n : {1, 2, 4}) {
    const auto u = haar_unitary(n, rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Cx s{0.0, 0.0};
        for (int k = 0; k < n; ++k) s += std::conj(u(k, i)) * u(k, j);
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
  }
  // E|U_11|^2 = 1/N and E U_11 = 0
  const int m = 100000;
  const int N = 3;
  double s2 = 0;
  Cx mean{0.0, 0.0};
  for (int i = 0; i < m; ++i) {
    RngStream r(29, static_cast<std::uint64_t>(i));
    const auto u = haar_unitary(N, r);
    s2 += std::norm(u(0, 0));
    mean += u(0, 0);
  }
  CHECK(std::abs(s2 / m - 1.0 / N) < 3.0 * std::sqrt(0.1 / m));
  CHECK(std::abs(mean) / m < 3.0 / std::sqrt(2.0 * m));

  // left-invariance: |(VU)_{01}|^2 has the same mean as |U_{01}|^2
  double inv = 0;
  RngStream fixed(30, 0);
  const auto v = haar_unitary(N, fixed);
  for (int i = 0; i < m / 2; ++i) {
    RngStream r(31, static_cast<std::uint64_t>(i));
    const auto u = haar_unitary(N, r);
    Cx e{0.0, 0.0};
    for (int k = 0; k < N; ++k) e += v(0, k) * u(k, 1);
    inv += std::norm(e);
  }
  CHECK(std::abs(inv / (m / 2) - 1.0 / N) < 3.0 * std::sqrt(0.2 / m));
}
