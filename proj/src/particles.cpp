#include "spacelike/particles.hpp"

#include <cmath>
#include <stdexcept>

namespace spacelike::particles {

bool InterlacedConfig::interlaced() const {
  for (int m = 1; m < n_levels; ++m)
    for (int k = 1; k <= m; ++k)
      if (!(pos(m + 1, k) < pos(m, k) && pos(m, k) <= pos(m + 1, k + 1))) return false;
  return true;
}

InterlacedConfig init_packed(int n_levels) {
  if (n_levels < 1) throw std::invalid_argument("n_levels must be >= 1");
  InterlacedConfig cfg;
  cfg.n_levels = n_levels;
  cfg.x.resize(n_levels);
  for (int m = 1; m <= n_levels; ++m) {
    cfg.x[m - 1].resize(m);
    for (int k = 1; k <= m; ++k) cfg.x[m - 1][k - 1] = k - m - 1;
  }
  return cfg;
}

void attempt_jump(InterlacedConfig& cfg, int m, int k) {
  // Blocking: x_k^m sitting immediately left of x_k^{m-1} may not move.
  if (m > 1 && k <= m - 1 && cfg.x[m - 1][k - 1] == cfg.x[m - 2][k - 1] - 1) return;

  // Pushing: the maximal string x_k^m = x_{k+1}^{m+1} = ... moves together.
  int c = 1;
  while (m + c <= cfg.n_levels &&
         cfg.x[m + c - 1][k + c - 1] == cfg.x[m - 1][k - 1])
    ++c;
  for (int j = 0; j < c; ++j) ++cfg.x[m + j - 1][k + j - 1];
}

void evolve(InterlacedConfig& cfg, double until, SimClock& clock) {
  if (until < clock.time) throw std::invalid_argument("evolve: until < current time");
  const int np = cfg.particle_count();
  while (true) {
    const double wait = -std::log(clock.rng.next_uniform()) / np;
    if (clock.time + wait > until) {
      clock.time = until;
      return;
    }
    clock.time += wait;
    const int pick = static_cast<int>(clock.rng.next_uniform() * np) % np;
    // Unrank the uniform particle index into (level m, index k).
    int m = 1;
    int left = pick;
    while (left >= m) {
      left -= m;
      ++m;
    }
    attempt_jump(cfg, m, left + 1);
    if (!cfg.interlaced())
      throw std::logic_error("particle event broke the interlacing invariant");
  }
}

std::vector<long long> tasep_projection(const InterlacedConfig& cfg) {
  std::vector<long long> out(cfg.n_levels);
  for (int m = 1; m <= cfg.n_levels; ++m) out[m - 1] = cfg.pos(m, 1);
  return out;
}

std::vector<double> diffusion_rescale(const std::vector<long long>& positions,
                                      double tau, double base_t) {
  if (base_t <= 0.0) throw std::invalid_argument("base_t must be > 0");
  const double center = 0.5 * tau * base_t;
  const double scale = std::sqrt(base_t);
  std::vector<double> out(positions.size());
  for (size_t i = 0; i < positions.size(); ++i)
    out[i] = (static_cast<double>(positions[i]) - center) / scale;
  return out;
}

}  // namespace spacelike::particles
