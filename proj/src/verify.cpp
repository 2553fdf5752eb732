#include "spacelike/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spacelike/contour.hpp"
#include "spacelike/eynard.hpp"
#include "spacelike/kernels.hpp"
#include "spacelike/particles.hpp"
#include "spacelike/rmt.hpp"

namespace spacelike::mc {

namespace {

using kernels::LueParams;
using kernels::QuadratureConfig;
using kernels::SpaceTimePoint;

template <class F>
double integrate_real16(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int j = 0; j < 8; ++j)
      for (int s = -1; s <= 1; s += 2)
        sum += contour::detail::kGL16W[j] *
               f(mid + s * 0.5 * h * contour::detail::kGL16X[j]);
  }
  return sum * 0.5 * h;
}

struct BinStats {
  double worst_z = 0.0;
  double predicted = 0.0, estimated = 0.0, se = 0.0;
};

// Counts per replica per bin -> max-|z| bin against predictions.
BinStats compare_bins(const std::vector<double>& predicted,
                      const std::vector<std::vector<std::int64_t>>& counts,
                      std::int64_t replicas) {
  BinStats st;
  for (size_t b = 0; b < predicted.size(); ++b) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& row : counts) {
      const double v = static_cast<double>(row[b]);
      sum += v;
      sumsq += v * v;
    }
    const double n = static_cast<double>(replicas);
    const double mean = sum / n;
    const double var = std::max(1e-300, sumsq / n - mean * mean);
    const double se = std::sqrt(var / n);
    const double z = (mean - predicted[b]) / se;
    if (std::abs(z) > std::abs(st.worst_z)) {
      st.worst_z = z;
      st.predicted = predicted[b];
      st.estimated = mean;
      st.se = se;
    }
  }
  return st;
}

CheckResult bins_to_check(std::string name, const BinStats& st, double z_bound) {
  CheckResult r;
  r.name = std::move(name);
  r.predicted = st.predicted;
  r.estimated = st.estimated;
  r.stderr_est = st.se;
  r.z = st.worst_z;
  r.tol = z_bound;
  r.pass = std::abs(st.worst_z) < z_bound;
  return r;
}

std::vector<std::int64_t> bin_counts(const std::vector<double>& values,
                                     const std::vector<double>& edges) {
  std::vector<std::int64_t> c(edges.size() - 1, 0);
  for (const double x : values) {
    if (x < edges.front() || x >= edges.back()) continue;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    ++c[static_cast<size_t>(it - edges.begin()) - 1];
  }
  return c;
}

std::vector<double> linspace_edges(double lo, double hi, int bins) {
  std::vector<double> e(bins + 1);
  for (int i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * i / bins;
  return e;
}

}  // namespace

std::vector<CheckResult> montecarlo_suite(const MonteCarloOptions& opt) {
  std::vector<CheckResult> out;

  // --- GUE: 3x3 Hermitian Brownian matrices at t = 1, level-2 minor ---
  {
    const std::int64_t R = opt.gue_samples;
    std::vector<std::vector<double>> level2(R);
    for (std::int64_t r = 0; r < R; ++r) {
      rmt::RngStream rng(opt.seed, static_cast<std::uint64_t>(r));
      const auto path = rmt::sample_hermitian_path(3, {1.0}, rng);
      level2[r] = rmt::hermitian_eigenvalues(path[0].minor_top_left(2));
    }

    const auto edges = linspace_edges(-3.0, 3.0, 20);
    std::vector<double> predicted(edges.size() - 1);
    for (size_t b = 0; b + 1 < edges.size(); ++b)
      predicted[b] = integrate_real16(
          [&](double x) {
            return kernels::kernel_gue_extended({x, 2, 1.0}, {x, 2, 1.0}).value;
          },
          edges[b], edges[b + 1], 1);
    std::vector<std::vector<std::int64_t>> counts(R);
    for (std::int64_t r = 0; r < R; ++r) counts[r] = bin_counts(level2[r], edges);
    out.push_back(bins_to_check("mc-gue-density-level2",
                                compare_bins(predicted, counts, R), opt.z_bound));

    // Two-point cell pair at (n=2, t=1).
    const double a_lo = 0.2, a_hi = 0.7, b_lo = -0.7, b_hi = -0.2;
    const auto est = empirical_pair_correlation(level2, a_lo, a_hi, b_lo, b_hi);
    const double pred = integrate_real16(
        [&](double x) {
          return integrate_real16(
              [&](double y) {
                const SpaceTimePoint px{x, 2, 1.0}, py{y, 2, 1.0};
                const double kxx = kernels::kernel_gue_extended(px, px).value;
                const double kyy = kernels::kernel_gue_extended(py, py).value;
                const double kxy = kernels::kernel_gue_extended(px, py).value;
                const double kyx = kernels::kernel_gue_extended(py, px).value;
                return kxx * kyy - kxy * kyx;
              },
              b_lo, b_hi, 1);
        },
        a_lo, a_hi, 1) /
        ((a_hi - a_lo) * (b_hi - b_lo));
    CheckResult r;
    r.name = "mc-gue-pair-correlation";
    r.predicted = pred;
    r.estimated = est.estimate;
    r.stderr_est = est.stderr_est;
    r.z = (est.estimate - pred) / est.stderr_est;
    r.tol = opt.z_bound;
    r.pass = std::abs(r.z) < opt.z_bound;
    out.push_back(r);
  }

  // --- LUE: Wishart p = 2, level n = 1, t = 1 ---
  {
    const std::int64_t R = opt.lue_samples;
    const auto edges = linspace_edges(0.0, 7.0, 20);
    std::vector<std::vector<std::int64_t>> counts(R);
    for (std::int64_t r = 0; r < R; ++r) {
      rmt::RngStream rng(opt.seed + 1, static_cast<std::uint64_t>(r));
      const auto ev = rmt::sample_wishart_path(2, 1, {1.0}, rng);
      counts[r] = bin_counts(ev[0], edges);
    }
    std::vector<double> predicted(edges.size() - 1);
    for (size_t b = 0; b + 1 < edges.size(); ++b)
      predicted[b] = integrate_real16(
          [&](double x) {
            return kernels::kernel_lue({x, 1, 1.0}, {x, 1, 1.0}, {2}).value;
          },
          std::max(edges[b], 1e-9), edges[b + 1], 1);
    out.push_back(bins_to_check("mc-lue-density-p2-n1",
                                compare_bins(predicted, counts, R), opt.z_bound));
  }

  // --- Particles: occupation probabilities at t = 1 vs the discrete kernel ---
  {
    const std::int64_t R = opt.particle_replicas;
    const int nlev = 3;
    const double t = 1.0;
    // occupation[n-1][x + n] for x in [-n, 5]
    std::vector<std::vector<std::int64_t>> occ(nlev);
    for (int n = 1; n <= nlev; ++n) occ[n - 1].assign(n + 6, 0);
    std::vector<std::int64_t> level1_pos(12, 0);  // x1^1 in [-1, 10]
    for (std::int64_t r = 0; r < R; ++r) {
      particles::SimClock clock(opt.seed + 2, static_cast<std::uint64_t>(r));
      auto cfg = particles::init_packed(nlev);
      particles::evolve(cfg, t, clock);
      for (int n = 1; n <= nlev; ++n)
        for (int k = 1; k <= n; ++k) {
          const long long x = cfg.pos(n, k);
          if (x >= -n && x <= 5) ++occ[n - 1][static_cast<size_t>(x + n)];
        }
      const long long x1 = cfg.pos(1, 1);
      if (x1 >= -1 && x1 <= 10) ++level1_pos[static_cast<size_t>(x1 + 1)];
    }
    double worst_z = 0.0, wp = 0.0, we = 0.0, ws = 0.0;
    for (int n = 1; n <= nlev; ++n)
      for (int x = -n; x <= 5; ++x) {
        const double pred = kernels::kernel_discrete(
            {static_cast<double>(x), n, t}, {static_cast<double>(x), n, t});
        const double phat =
            static_cast<double>(occ[n - 1][static_cast<size_t>(x + n)]) / R;
        const double se =
            std::sqrt(std::max(phat * (1.0 - phat), 1e-12) / static_cast<double>(R));
        const double z = (phat - pred) / se;
        if (std::abs(z) > std::abs(worst_z)) {
          worst_z = z;
          wp = pred;
          we = phat;
          ws = se;
        }
      }
    CheckResult r;
    r.name = "mc-particles-occupation";
    r.predicted = wp;
    r.estimated = we;
    r.stderr_est = ws;
    r.z = worst_z;
    r.tol = opt.z_bound;
    r.pass = std::abs(worst_z) < opt.z_bound;
    out.push_back(r);

    // Level-1 marginal is -1 + Poisson(t) exactly.
    worst_z = 0.0;
    wp = we = ws = 0.0;
    double logp = -t;  // log P(Poisson(t) = 0)
    for (int j = 0; j <= 11; ++j) {
      const double pred = std::exp(logp);
      const double phat = static_cast<double>(level1_pos[j]) / R;
      const double se =
          std::sqrt(std::max(pred * (1.0 - pred), 1e-12) / static_cast<double>(R));
      const double z = (phat - pred) / se;
      if (std::abs(z) > std::abs(worst_z)) {
        worst_z = z;
        wp = pred;
        we = phat;
        ws = se;
      }
      logp += std::log(t) - std::log(j + 1.0);
    }
    CheckResult r2;
    r2.name = "mc-particles-level1-poisson";
    r2.predicted = wp;
    r2.estimated = we;
    r2.stderr_est = ws;
    r2.z = worst_z;
    r2.tol = opt.z_bound;
    r2.pass = std::abs(worst_z) < opt.z_bound;
    out.push_back(r2);
  }

  return out;
}

std::vector<CheckResult> hciz_suite(const HcizOptions& opt) {
  std::vector<CheckResult> out;
  {
    rmt::RngStream rng(opt.seed, 101);
    auto r = hciz_check(2, {0.3, 0.9}, {0.2, 0.7}, opt.samples, rng);
    r.tol = opt.z_bound;
    r.pass = std::abs(r.z) < opt.z_bound;
    out.push_back(r);
  }
  {
    rmt::RngStream rng(opt.seed, 102);
    auto r = hciz_check(3, {0.1, 0.5, 0.9}, {0.15, 0.45, 0.8}, opt.samples, rng);
    r.tol = opt.z_bound;
    r.pass = std::abs(r.z) < opt.z_bound;
    out.push_back(r);
  }
  const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {2, 2}};
  int stream = 103;
  for (const auto& [n1, n2] : shapes) {
    rmt::RngStream rng(opt.seed, static_cast<std::uint64_t>(stream++));
    std::vector<double> a, b;
    for (int i = 0; i < n2; ++i) {
      a.push_back(0.4 + 0.5 * i);
      b.push_back(0.3 + 0.45 * i);
    }
    auto r = hciz_rect_check(n1, n2, a, b, opt.samples, rng);
    r.tol = opt.z_bound;
    r.pass = std::abs(r.z) < opt.z_bound;
    out.push_back(r);
  }
  return out;
}

std::vector<CheckResult> eynard_suite(const EynardOptions& opt) {
  std::vector<CheckResult> out;
  double dev_kernel = 0.0, dev_detm = 0.0, dev_upper = 0.0;
  int done_upper = 0;

  const int total = opt.trials;
  for (int trial = 0; trial < total; ++trial) {
    rmt::RngStream rng(opt.seed, 1000 + static_cast<std::uint64_t>(trial));
    eynard::RandomSpecOptions ro;
    ro.complex_weights = trial % 10 == 9;
    ro.upper_triangular = trial < opt.upper_triangular_trials;
    const auto spec = eynard::random_spec(rng, ro);

    // det M against the enumerated partition function.
    const auto m = eynard::m_matrix(spec);
    const auto detm = linalg::determinant(m);
    const auto zsum = eynard::brute_force_partition(spec);
    dev_detm = std::max(dev_detm,
                        std::abs(detm - zsum) / std::max(1e-12, std::abs(zsum)));

    if (ro.upper_triangular) {
      if (!eynard::m_is_upper_triangular(m))
        dev_upper = std::max(dev_upper, 1.0);
      ++done_upper;
    }

    // Random point tuples: determinant of the kernel vs enumeration.
    for (int m_pts = 1; m_pts <= 3; ++m_pts) {
      std::vector<eynard::LevelTimePoint> pts;
      int guard = 0;
      while (static_cast<int>(pts.size()) < m_pts && guard++ < 60) {
        eynard::LevelTimePoint p;
        p.level = 1 + static_cast<int>(rng.next_uniform() * spec.N) % spec.N;
        p.copy = static_cast<int>(rng.next_uniform() * (spec.copies[p.level - 1] + 1)) %
                 (spec.copies[p.level - 1] + 1);
        p.loc = static_cast<int>(rng.next_uniform() * spec.set_size(p.level)) %
                spec.set_size(p.level);
        bool dup = false;
        for (const auto& q : pts)
          dup = dup || (q.level == p.level && q.copy == p.copy && q.loc == p.loc);
        if (!dup) pts.push_back(p);
      }
      const auto kd = eynard::kernel_determinant(spec, pts);
      const auto bf = eynard::brute_force_correlation(spec, pts);
      dev_kernel = std::max(dev_kernel, std::abs(kd - bf));
      if (ro.upper_triangular) {
        // Simplified formula must agree with the general kernel pointwise.
        for (const auto& pa : pts)
          for (const auto& pb : pts) {
            const auto full = eynard::correlation_kernel(spec, pa, pb);
            const auto simp = eynard::correlation_kernel_uppertri(spec, pa, pb);
            dev_upper = std::max(dev_upper, std::abs(full - simp));
          }
      }
    }
  }

  out.push_back([&] {
    CheckResult r;
    r.name = "eynard-kernel-vs-enumeration";
    r.max_dev = dev_kernel;
    r.tol = opt.tol;
    r.pass = dev_kernel < opt.tol;
    return r;
  }());
  out.push_back([&] {
    CheckResult r;
    r.name = "eynard-detM-vs-partition";
    r.max_dev = dev_detm;
    r.tol = 1e-10;
    r.pass = dev_detm < 1e-10;
    return r;
  }());
  out.push_back([&] {
    CheckResult r;
    r.name = "eynard-uppertri-simplified";
    r.max_dev = dev_upper;
    r.tol = 1e-10;
    r.pass = done_upper >= opt.upper_triangular_trials && dev_upper < 1e-10;
    return r;
  }());
  return out;
}

std::vector<CheckResult> diffusion_scaling_report(const DiffusionOptions& opt) {
  std::vector<CheckResult> out;
  const double T = 0.5 * opt.tau * opt.base_t;
  const double sq = std::sqrt(opt.base_t);
  const std::int64_t R = opt.replicas;

  // Bin edges aligned between lattice columns (spacing 1/sqrt(t)).
  const double w = 5.0 / sq;  // five lattice sites per bin
  const int half_bins = static_cast<int>(2.2 / w);
  std::vector<double> edges;
  for (int i = -half_bins; i <= half_bins; ++i) edges.push_back((i * 5.0 - 0.5) / sq);

  std::vector<std::vector<std::int64_t>> counts1(R), counts2(R);
  for (std::int64_t r = 0; r < R; ++r) {
    particles::SimClock clock(opt.seed + 7, static_cast<std::uint64_t>(r));
    auto cfg = particles::init_packed(2);
    particles::evolve(cfg, T, clock);
    const auto x1 = particles::diffusion_rescale({cfg.pos(1, 1)}, opt.tau, opt.base_t);
    const auto x2 = particles::diffusion_rescale({cfg.pos(2, 1), cfg.pos(2, 2)},
                                                 opt.tau, opt.base_t);
    counts1[r] = bin_counts(x1, edges);
    counts2[r] = bin_counts(x2, edges);
  }

  const double allowance = 2.5 * w / sq;  // documented O(t^{-1/2}) bias budget
  for (int level = 1; level <= 2; ++level) {
    std::vector<double> predicted(edges.size() - 1);
    for (size_t b = 0; b + 1 < edges.size(); ++b)
      predicted[b] = integrate_real16(
          [&](double xi) {
            return kernels::kernel_diffusion_scaled({xi, level, opt.tau},
                                                    {xi, level, opt.tau})
                .value;
          },
          edges[b], edges[b + 1], 1);
    const auto& counts = level == 1 ? counts1 : counts2;

    double worst = 0.0, wp = 0.0, we = 0.0, ws = 0.0;
    for (size_t b = 0; b + 1 < edges.size(); ++b) {
      double sum = 0.0, sumsq = 0.0;
      for (const auto& row : counts) {
        sum += static_cast<double>(row[b]);
        sumsq += static_cast<double>(row[b]) * static_cast<double>(row[b]);
      }
      const double mean = sum / static_cast<double>(R);
      const double var = std::max(1e-300, sumsq / R - mean * mean);
      const double se = std::sqrt(var / static_cast<double>(R));
      // Excess beyond the bias allowance, in sigma units.
      const double excess =
          std::max(0.0, std::abs(mean - predicted[b]) - allowance) / se;
      if (excess > worst) {
        worst = excess;
        wp = predicted[b];
        we = mean;
        ws = se;
      }
    }
    CheckResult r;
    std::ostringstream name;
    name << "diffusion-scaling-level" << level << " (soft)";
    r.name = name.str();
    r.predicted = wp;
    r.estimated = we;
    r.stderr_est = ws;
    r.z = worst;
    r.tol = opt.z_bound;
    r.pass = worst < opt.z_bound;
    out.push_back(r);
  }
  return out;
}

}  // namespace spacelike::mc
