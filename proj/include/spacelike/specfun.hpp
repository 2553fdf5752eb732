#pragma once

namespace spacelike::specfun {

// Index of an orthogonal polynomial: degree for Hermite, (degree, order)
// for generalized Laguerre L^order_degree.  Both must be nonnegative.
struct PolyIndex {
  int degree = 0;
  int order = 0;
};

// Physicists' Hermite polynomial p_n(x), normalized so that
//   int e^{-x^2} p_n p_m dx = delta_{mn} sqrt(pi) 2^n n!.
// Evaluated by the three-term recurrence p_{n+1} = 2x p_n - 2n p_{n-1}.
double hermite(int n, double x);
double hermite(const PolyIndex& idx, double x);

// Generalized Laguerre polynomial L^p_k(x),
//   int_0^inf x^p e^{-x} L^p_k L^p_l dx = delta_{kl} (p+k)!/k!.
double laguerre(int k, int p, double x);
double laguerre(const PolyIndex& idx, double x);

// Modified Bessel function I_n(x) for integer n and x >= 0, by the
// ascending series sum_k (x/2)^{2k+|n|} / (k! (k+|n|)!).  Symmetric in
// n -> -n by construction.  Throws std::overflow_error when the result
// would exceed the representable range.
double bessel_i(int n, double x);

// ln(n!).  Exact 0 for n in {0,1}; lgamma otherwise.
double log_factorial(int n);

}  // namespace spacelike::specfun
