#pragma once

#include <complex>

#include "spacelike/contour.hpp"

namespace spacelike::kernels {

// One argument of a space-time correlation kernel: position x, level n
// (matrix dimension / particle level), time t.  For the discrete kernel x
// must be integer-valued.
struct SpaceTimePoint {
  double x = 0.0;
  int n = 1;
  double t = 0.0;
};

// Ambient rectangular dimension of the Laguerre process (the p of the
// p x n matrix); every level must satisfy n <= p.
struct LueParams {
  int p = 1;
};

struct KernelValue {
  double value = 0.0;
  double quadrature_error_estimate = 0.0;
};

// Quadrature knobs shared by the contour-integral kernels.  epsilon is the
// real part of the vertical lines; the inner circle has radius epsilon/2.
struct QuadratureConfig {
  double epsilon = 1.0;
  int vline_nodes = 512;
  int circle_nodes = 256;
  double tol = 1e-9;
  int max_doublings = 4;
  double tail_tol = 1e-14;
};

// Space-like partial order: n1 <= n2, t1 >= t2, and (n1,t1) != (n2,t2).
bool precedes(const SpaceTimePoint& a, const SpaceTimePoint& b);

// ---------------------------------------------------------------------------
// GUE / Dyson-minor side
// ---------------------------------------------------------------------------

// Psi^{n,t}_k(x) = (2^{k+1}/t^{(k+1)/2}) (1/2pi i) int_{iR+eps} e^{w^2-2wx/sqrt(t)} w^k dw.
// For k >= 0 this equals t^{-k/2} p_k(x/sqrt(t)) e^{-x^2/t} / sqrt(pi t)
// (Hermite closed form, used as the primary evaluation); the contour form
// handles any integer k and serves as the cross-check.
double psi_gue(int n, double t, int k, double x);
double psi_gue_contour(int n, double t, int k, double x,
                       const QuadratureConfig& q = {});

// Phi^{n,t}_l(x) = (t^{l/2} / 2^l) p_l(x/sqrt(t)) / l!, and its circle
// representation around 0 for cross-checking.
double phi_gue(int n, double t, int ell, double x);
double phi_gue_contour(int n, double t, int ell, double x,
                       const QuadratureConfig& q = {});

// Heat transition T_{t,s}(x,y) = exp(-(x-y)^2/(t-s)) / sqrt(pi (t-s)),
// a probability density in its first argument.  Requires t > s.
double heat_kernel(double t, double s, double x, double y);

// Space-like convolution phi^{(n1,t1;n2,t2)}(x1,x2): zero unless a precedes
// b, a single vertical-line integral otherwise.  At equal times it reduces
// to the iterated step kernel (x2-x1)^{dn-1}/(dn-1)! 1[x1<=x2], at equal
// levels to the heat kernel.
double phi_spacelike_gue(const SpaceTimePoint& a, const SpaceTimePoint& b,
                         const QuadratureConfig& q = {});

// Extended GUE-minor kernel along space-like paths (two-term form:
// -phi-term when a precedes b, plus the double contour integral over
// |z| = eps/2 and iR + eps).
KernelValue kernel_gue_extended(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                const QuadratureConfig& q = {});

// Static GUE-minor kernel: the extended kernel at t1 = t2 = 1.
KernelValue kernel_gue_static(double x1, int n1, double x2, int n2,
                              const QuadratureConfig& q = {});

// Kernel of the diffusion-rescaled interlaced particle system; identical
// integrand structure to the extended GUE kernel in the scaled variables.
KernelValue kernel_diffusion_scaled(const SpaceTimePoint& a, const SpaceTimePoint& b,
                                    const QuadratureConfig& q = {});

// Finite biorthogonal sum 2^{n2-n1} * sum_{k=1}^{n2} Psi^{n1,t1}_{n1-k}(x1)
// Phi^{n2,t2}_{n2-k}(x2); equals the double-integral term of the extended
// kernel (independent evaluation route).
double gue_sum_term(const SpaceTimePoint& a, const SpaceTimePoint& b);

// ---------------------------------------------------------------------------
// Discrete (2+1 interlaced particle) kernel
// ---------------------------------------------------------------------------

// Correlation kernel of the 2+1 dynamics started from the packed
// configuration; positions must be integers.  The diagonal value is the
// probability that some particle occupies (x, n) at time t.
double kernel_discrete(const SpaceTimePoint& a, const SpaceTimePoint& b,
                       const QuadratureConfig& q = {});

namespace detail {
// Second (double-contour) term of the discrete kernel with an explicit
// choice of the inner w-contour: enclosing 0 only, or 0 and z.  Exposed for
// the contour-convention tests; kernel_discrete uses enclose_z = true.
double kernel_discrete_term2(const SpaceTimePoint& a, const SpaceTimePoint& b,
                             bool enclose_z, const QuadratureConfig& q);
}  // namespace detail

// ---------------------------------------------------------------------------
// LUE / Wishart side
// ---------------------------------------------------------------------------

// Psi_k^{n,t}(x): for k >= 0 the Laguerre closed form
//   k!/((n+k)! t^{k+1}) (x/t)^n e^{-x/t} L_k^n(x/t),
// with two contour representations (circle around 0 before/after the
// w = z/(z-t) change of variable) available for any integer k.
double psi_lue(int n, double t, int k, double x);
double psi_lue_contour_unit(int n, double t, int k, double x,
                            const QuadratureConfig& q = {});
double psi_lue_contour_shifted(int n, double t, int k, double x,
                               const QuadratureConfig& q = {});

// Phi_l^{n,t}(x) = t^l L_l^n(x/t), plus the circle representation around t.
double phi_lue(int n, double t, int ell, double x);
double phi_lue_contour(int n, double t, int ell, double x,
                       const QuadratureConfig& q = {});

// Bessel transition T^n_{t,s}(x,y) = (x/y)^{n/2} I_n(2 sqrt(xy)/(t-s))
//   exp(-(x+y)/(t-s)) / (t-s)  for x, y > 0, t > s;
// a probability density in its first argument.  Two contour
// representations are provided as cross-checks.
double bessel_transition(int n, double t, double s, double x, double y);
double bessel_transition_contour_unit(int n, double t, double s, double x, double y,
                                      const QuadratureConfig& q = {});
double bessel_transition_contour_shifted(int n, double t, double s, double x, double y,
                                         const QuadratureConfig& q = {});

// LUE space-like convolution: zero unless a precedes b, otherwise a single
// circle integral around 0 (radius < 1); reduces to the Bessel transition
// at equal levels and to (x1-x2)^{dn-1}/(dn-1)! 1[x1>=x2] at equal times.
double phi_spacelike_lue(const SpaceTimePoint& a, const SpaceTimePoint& b,
                         const LueParams& lp, const QuadratureConfig& q = {});

// Extended LUE kernel along space-like paths.  For n1 >= n2 the two-term
// nested-contour form (inner circle around 0, outer circle enclosing z and
// t2) applies directly.  For n2 > n1 that double integral drops a residue
// at z = infinity and stops being the process kernel; the implementation
// switches to the equivalent chain convolution of the space-like
// transition with the fixed-(n2,t2) kernel, which the simulation oracles
// confirm.
KernelValue kernel_lue(const SpaceTimePoint& a, const SpaceTimePoint& b,
                       const LueParams& lp, const QuadratureConfig& q = {});

// sum_{k=1}^{n2} Psi_{n1-k}^{p-n1,t1}(x1) Phi_{n2-k}^{p-n2,t2}(x2);
// equals the double-integral term of kernel_lue.
double lue_sum_term(const SpaceTimePoint& a, const SpaceTimePoint& b,
                    const LueParams& lp);

}  // namespace spacelike::kernels
