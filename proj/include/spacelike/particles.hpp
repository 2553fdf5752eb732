#pragma once

#include <vector>

#include "spacelike/rng.hpp"

namespace spacelike::particles {

// Triangular array of integer positions x_k^m, 1 <= k <= m <= n_levels,
// subject to the interlacing x_k^{m+1} < x_k^m <= x_{k+1}^{m+1}.
struct InterlacedConfig {
  int n_levels = 1;
  std::vector<std::vector<long long>> x;  // x[m-1][k-1]

  long long pos(int m, int k) const { return x[m - 1][k - 1]; }
  bool interlaced() const;
  int particle_count() const { return n_levels * (n_levels + 1) / 2; }
};

// Packed initial condition x_k^m(0) = k - m - 1.
InterlacedConfig init_packed(int n_levels);

struct SimClock {
  double time = 0.0;
  rmt::RngStream rng;

  SimClock(std::uint64_t seed, std::uint64_t stream) : rng(seed, stream) {}
};

// One attempted right jump of particle (level m, index k): blocked when
// x_k^m = x_k^{m-1} - 1, otherwise the maximal string
// x_k^m = x_{k+1}^{m+1} = ... jumps together.
void attempt_jump(InterlacedConfig& cfg, int m, int k);

// Continuous-time dynamics: every particle carries an independent rate-one
// exponential clock (realized as one total-rate clock plus a uniform pick).
// Interlacing is asserted after every event.
void evolve(InterlacedConfig& cfg, double until, SimClock& clock);

// Leftmost particle of every level; as a process this is the TASEP with
// step initial condition.
std::vector<long long> tasep_projection(const InterlacedConfig& cfg);

// Diffusion rescaling: positions observed at time tau*t/2 map to
// (x - tau*t/2) / sqrt(t).
std::vector<double> diffusion_rescale(const std::vector<long long>& positions,
                                      double tau, double base_t);

}  // namespace spacelike::particles
