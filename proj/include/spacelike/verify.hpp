#pragma once

#include <cstdint>
#include <vector>

#include "spacelike/mc.hpp"

namespace spacelike::mc {

// Monte-Carlo-vs-kernel comparisons (matrix diffusions and the particle
// system).  All estimates carry binomial/sample standard errors and are
// bit-reproducible for a fixed (seed, worker layout).
struct MonteCarloOptions {
  std::uint64_t seed = 20260809;
  std::int64_t gue_samples = 100000;
  std::int64_t lue_samples = 100000;
  std::int64_t particle_replicas = 100000;
  double z_bound = 3.0;
};
std::vector<CheckResult> montecarlo_suite(const MonteCarloOptions& opt = {});

// HCIZ group-integral checks: square case at N = 2, 3 and rectangular case
// at (1,1), (2,1), (2,2).
struct HcizOptions {
  std::uint64_t seed = 20260809;
  std::int64_t samples = 1000000;
  double z_bound = 4.0;
};
std::vector<CheckResult> hciz_suite(const HcizOptions& opt = {});

// Random finite weight specs: kernel determinants against brute-force
// enumeration, det M against the partition function, and the simplified
// upper-triangular kernel formula.
struct EynardOptions {
  std::uint64_t seed = 20260809;
  int trials = 50;
  int upper_triangular_trials = 5;
  double tol = 1e-9;
};
std::vector<CheckResult> eynard_suite(const EynardOptions& opt = {});

// Diffusion-scaling smoke test: rescaled one-point functions at large base
// time against the scaled-kernel diagonal, with an O(t^{-1/2}) bias
// allowance.  Soft: meant to be reported, not gated.
struct DiffusionOptions {
  std::uint64_t seed = 20260809;
  double base_t = 400.0;
  double tau = 1.0;
  std::int64_t replicas = 20000;
  double z_bound = 3.0;
};
std::vector<CheckResult> diffusion_scaling_report(const DiffusionOptions& opt = {});

}  // namespace spacelike::mc
