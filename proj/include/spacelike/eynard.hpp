#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "spacelike/linalg.hpp"
#include "spacelike/rng.hpp"

namespace spacelike::eynard {

using Complex = std::complex<double>;
using linalg::Matrix;

// A point of the extended configuration space: level n (1-based), copy
// index a in [0, c(n)] (copy 0 carries the earliest time label of the
// level), and a location index into the level's ground set.
struct LevelTimePoint {
  int level = 1;
  int copy = 0;
  int loc = 0;
};

// Finite space-like weight data: N levels with ground sets X_1..X_N,
// c(n)+1 copies of X_n with weakly ordered time labels, transition tables
// phi_n : X_{n-1} x X_n (plus a virtual row), per-copy tables T, and the
// top-level functions Psi_j on X_N.  All tables are complex valued.
struct SpaceLikeWeightSpec {
  int N = 1;
  std::vector<std::vector<double>> ground;      // labels of X_n, n = 1..N
  std::vector<int> copies;                      // c(n)
  std::vector<std::vector<double>> times;       // t[n][a], a = 0..c(n)
  std::vector<Matrix> phi;                      // phi[n-1]: |X_{n-1}| x |X_n|
  std::vector<std::vector<Complex>> phi_virt;   // phi_n(virt, .) over X_n
  std::vector<std::vector<Matrix>> T;           // T[n-1][a-1]: |X_n| x |X_n|
  std::vector<std::vector<Complex>> psi;        // psi[j] over X_N, j = 0..N-1

  int set_size(int level) const { return static_cast<int>(ground[level - 1].size()); }
  void validate() const;  // dimensions and the time-label chain
};

// One candidate configuration: for each level n and copy a, a sorted list
// of n location indices.  Anything else has weight zero by definition.
struct PointConfiguration {
  std::vector<std::vector<std::vector<int>>> pts;  // [level-1][copy][k]
};

// Product-of-determinants weight W(X); zero when the per-copy cardinality
// is wrong.
Complex weight(const SpaceLikeWeightSpec& spec, const PointConfiguration& cfg);

// Full enumeration of the configuration space.  Throws when the space
// exceeds `budget` configurations or when the partition function vanishes.
Complex brute_force_correlation(const SpaceLikeWeightSpec& spec,
                                const std::vector<LevelTimePoint>& points,
                                std::int64_t budget = 10'000'000);

// Partition function Z = sum_X W(X) by the same enumeration.
Complex brute_force_partition(const SpaceLikeWeightSpec& spec,
                              std::int64_t budget = 10'000'000);

// The N x N convolution-chain matrix M; det M equals the partition
// function.
Matrix m_matrix(const SpaceLikeWeightSpec& spec);

// Correlation kernel through M^{-1}.  Reports the condition estimate of M
// if requested; throws when M is singular or its 1-norm condition exceeds
// 1e12.
Complex correlation_kernel(const SpaceLikeWeightSpec& spec, const LevelTimePoint& a,
                           const LevelTimePoint& b, double* cond = nullptr);

// Simplified biorthogonal form valid when M is upper triangular (the sum
// over the first index truncates at n2).
Complex correlation_kernel_uppertri(const SpaceLikeWeightSpec& spec,
                                    const LevelTimePoint& a,
                                    const LevelTimePoint& b);

bool m_is_upper_triangular(const Matrix& m, double tol = 1e-10);

// det[K(p_i, p_j)] over a point tuple.
Complex kernel_determinant(const SpaceLikeWeightSpec& spec,
                           const std::vector<LevelTimePoint>& points);

// Number of configurations the enumeration would visit.
std::int64_t configuration_count(const SpaceLikeWeightSpec& spec);

// Random desk-scale specs for verification drives.  `upper_triangular`
// orthogonalizes the Psi rows against the chain vectors so that M comes
// out exactly upper triangular.
struct RandomSpecOptions {
  int max_levels = 3;
  int max_set = 4;
  int max_copies = 1;
  bool complex_weights = false;
  bool upper_triangular = false;
};
SpaceLikeWeightSpec random_spec(rmt::RngStream& rng, const RandomSpecOptions& opt = {});
SpaceLikeWeightSpec random_spec_draw(rmt::RngStream& rng,
                                     const RandomSpecOptions& opt = {});

// JSON (de)serialization; layout documented in the README (row = first
// index, complex entries as [re, im]).
SpaceLikeWeightSpec load_spec_json(const std::string& path);
void save_spec_json(const SpaceLikeWeightSpec& spec, const std::string& path);

}  // namespace spacelike::eynard
