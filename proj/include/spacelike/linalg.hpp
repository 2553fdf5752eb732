#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace spacelike::linalg {

using Complex = std::complex<double>;

// Small dense complex matrix, row-major.  Sized for the desk-scale work in
// this library (weight tables, minors, Haar factors), not for large-N
// linear algebra.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Complex& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Complex& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);

// Row vector times matrix.
std::vector<Complex> vec_mat(const std::vector<Complex>& v, const Matrix& m);

struct Lu {
  Matrix lu;
  std::vector<int> perm;
  Complex det{0.0, 0.0};
  bool singular = false;
};

// Partial-pivot LU of a square matrix.
Lu lu_decompose(const Matrix& m);
std::vector<Complex> lu_solve(const Lu& f, const std::vector<Complex>& rhs);
Matrix inverse(const Lu& f);
Complex determinant(const Matrix& m);

// 1-norm condition estimate ||M||_1 ||M^{-1}||_1 (exact inverse; the
// matrices here are tiny).
double condition_1norm(const Matrix& m);

}  // namespace spacelike::linalg
