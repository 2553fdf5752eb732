#include "spacelike/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spacelike::linalg {

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{0.0, 0.0}) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Matrix adjoint(const Matrix& a) {
  Matrix c(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) c(j, i) = std::conj(a(i, j));
  return c;
}

std::vector<Complex> vec_mat(const std::vector<Complex>& v, const Matrix& m) {
  if (static_cast<int>(v.size()) != m.rows)
    throw std::invalid_argument("vec_mat: shape mismatch");
  std::vector<Complex> out(m.cols);
  for (int i = 0; i < m.rows; ++i) {
    if (v[i] == Complex{0.0, 0.0}) continue;
    for (int j = 0; j < m.cols; ++j) out[j] += v[i] * m(i, j);
  }
  return out;
}

Lu lu_decompose(const Matrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("lu_decompose: square required");
  const int n = m.rows;
  Lu f;
  f.lu = m;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;
  f.det = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(f.lu(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(f.lu(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      f.det = 0.0;
      return f;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.det = -f.det;
    }
    f.det *= f.lu(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  return f;
}

std::vector<Complex> lu_solve(const Lu& f, const std::vector<Complex>& rhs) {
  if (f.singular) throw std::runtime_error("lu_solve: singular matrix");
  const int n = f.lu.rows;
  std::vector<Complex> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
    x[i] /= f.lu(i, i);
  }
  return x;
}

Matrix inverse(const Lu& f) {
  const int n = f.lu.rows;
  Matrix inv(n, n);
  std::vector<Complex> e(n);
  for (int j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), Complex{0.0, 0.0});
    e[j] = 1.0;
    const auto col = lu_solve(f, e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

Complex determinant(const Matrix& m) { return lu_decompose(m).det; }

namespace {
double norm1(const Matrix& m) {
  double best = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}
}  // namespace

double condition_1norm(const Matrix& m) {
  const Lu f = lu_decompose(m);
  if (f.singular) return std::numeric_limits<double>::infinity();
  return norm1(m) * norm1(inverse(f));
}

}  // namespace spacelike::linalg
