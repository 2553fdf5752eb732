#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spacelike/rng.hpp"

namespace spacelike::mc {

struct Histogram {
  std::vector<double> edges;          // ascending, size bins+1
  std::vector<std::int64_t> counts;   // size bins
  std::int64_t total = 0;             // all samples offered
  std::int64_t below = 0, above = 0;  // outliers, tracked separately
};

Histogram make_histogram(const std::vector<double>& samples,
                         const std::vector<double>& edges);

// Per-bin density estimate: counts / (total * bin width); integrates to
// at most 1 over the binned range.
std::vector<double> density(const Histogram& h);

// Freedman-Diaconis bin edges over [lo, hi] with a width floor.
std::vector<double> fd_bin_edges(std::vector<double> samples, double lo, double hi,
                                 double width_floor = 0.05);

struct CorrelationEstimate {
  std::string what;
  double estimate = 0.0;
  double stderr_est = 0.0;
  std::int64_t samples = 0;
};

// Binned two-point estimate: the mean over samples of N_A * N_B (cells
// disjoint), or of N_A alone when the cells coincide (one-point recovery).
CorrelationEstimate empirical_pair_correlation(
    const std::vector<std::vector<double>>& point_samples, double a_lo, double a_hi,
    double b_lo, double b_hi);

struct CheckResult {
  std::string name;
  double predicted = 0.0;
  double estimated = 0.0;
  double stderr_est = 0.0;
  double z = 0.0;
  double max_dev = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Monte Carlo check of the unitary group integral of exp(Tr(A U B U*))
// against prod p! det(e^{a_i b_j}) / (Delta(a) Delta(b)).
CheckResult hciz_check(int N, const std::vector<double>& a, const std::vector<double>& b,
                       std::int64_t n_samples, rmt::RngStream& rng);

// Rectangular variant: double Haar average of exp(Tr(AUBV* + B*U*A*V))
// against the Bessel determinant; empty factorial products are 1.
CheckResult hciz_rect_check(int N1, int N2, const std::vector<double>& a,
                            const std::vector<double>& b, std::int64_t n_samples,
                            rmt::RngStream& rng);

struct IdentityOptions {
  double lemma_tol = 1e-6;
  double biorth_tol = 1e-8;
  double dual_tol = 1e-9;
  double trace_tol = 1e-6;
  // Multiplies one side of the first lemma identity; anything != 1 must
  // trip the corresponding check (sensitivity canary).
  double corruption = 1.0;
};

struct IdentityReport {
  std::vector<CheckResult> checks;
  bool all_pass = true;
};

// Runs the convolution-lemma identities, biorthogonality, the dual contour
// representations, and the trace identities; failures are report entries,
// never exceptions.
IdentityReport identity_suite(const IdentityOptions& opt = {});

std::string report_to_json(const std::vector<CheckResult>& checks);

}  // namespace spacelike::mc
