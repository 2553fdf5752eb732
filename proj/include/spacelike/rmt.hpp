#pragma once

#include <complex>
#include <vector>

#include "spacelike/linalg.hpp"
#include "spacelike/rng.hpp"

namespace spacelike::rmt {

using Complex = std::complex<double>;

// Hermitian matrix stored densely; the diagonal is kept real and the two
// triangles conjugate by construction.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n) {}

  int dim() const { return n_; }
  const Complex& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

  void set(int i, int j, Complex v);       // also writes the conjugate entry
  void add(int i, int j, Complex v);
  HermitianMatrix minor_top_left(int n) const;
  double trace() const;
  double frobenius_sq() const;

 private:
  int n_;
  std::vector<Complex> a_;
};

// Matrix Brownian motion with density exp(-Tr(H^2)/t) at time t: diagonal
// entries have variance t/2, off-diagonal real/imaginary parts t/4.
// Sampling is by independent Gaussian increments, so there is no
// time-discretization error.
std::vector<HermitianMatrix> sample_hermitian_path(int N, const std::vector<double>& times,
                                                   RngStream& rng);

// All eigenvalues, ascending, by Householder tridiagonalization followed by
// implicit-shift QL.  Throws on non-convergence (60 sweeps per eigenvalue).
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& h);

// Eigenvalues of the leading principal n x n submatrices for each requested
// level, in the order given.
std::vector<std::vector<double>> minor_eigenvalues(const HermitianMatrix& h,
                                                   const std::vector<int>& levels);

// Minor-process sample along a time grid.
struct MinorEigenSample {
  std::vector<double> times;
  std::vector<int> levels;
  // lambda[time_index][level_index] -> ascending eigenvalues of that minor
  std::vector<std::vector<std::vector<double>>> lambda;
};
MinorEigenSample sample_minor_process(int N, const std::vector<double>& times,
                                      const std::vector<int>& levels, RngStream& rng);

// Complex rectangular Brownian matrix A(n, t) with E|A_ij|^2 = t and the
// eigenvalues of A*A per time (the Laguerre process at level n).
std::vector<std::vector<double>> sample_wishart_path(int p, int n,
                                                     const std::vector<double>& times,
                                                     RngStream& rng);

// One p x n draw at fixed time plus the minor eigenvalues over levels 1..n.
std::vector<std::vector<double>> sample_wishart_minors(int p, int n, double t,
                                                       RngStream& rng);

// Haar-distributed unitary via QR of a complex Ginibre draw with the
// R-diagonal phase correction.
linalg::Matrix haar_unitary(int N, RngStream& rng);

// lower interlaces upper: upper[k] <= lower[k] <= upper[k+1] (sizes m, m+1).
bool interlaced(const std::vector<double>& lower, const std::vector<double>& upper,
                double slack = 1e-12);

namespace detail {
// Sturm-sequence bisection on the tridiagonal form; the test oracle for the
// QL path.
std::vector<double> tridiagonal_eigenvalues_bisect(const std::vector<double>& diag,
                                                   const std::vector<double>& sub,
                                                   double tol = 1e-13);
void householder_tridiagonalize(const HermitianMatrix& h, std::vector<double>& diag,
                                std::vector<double>& sub);
}  // namespace detail

}  // namespace spacelike::rmt
