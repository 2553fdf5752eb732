// Acceptance suite: one line per criterion, nonzero exit iff a gated
// criterion fails.  Statistical criteria run at fixed seeds; identical
// reruns are byte-identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "spacelike/contour.hpp"
#include "spacelike/io.hpp"
#include "spacelike/kernels.hpp"
#include "spacelike/mc.hpp"
#include "spacelike/particles.hpp"
#include "spacelike/rmt.hpp"
#include "spacelike/verify.hpp"

using namespace spacelike;

namespace {

struct Criterion {
  int id;
  std::string what;
  bool pass = true;
  bool gated = true;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Criterion> g_results;

template <class F>
void criterion(int id, const std::string& what, bool gated, F&& body) {
  Criterion c{id, what};
  c.gated = gated;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %2d: %s (%.1fs)%s%s\n",
              c.pass ? (c.gated ? "PASS" : "pass soft") : (c.gated ? "FAIL" : "fail soft"),
              c.id, c.what.c_str(), c.seconds,
              c.detail.empty() ? "" : " -- ", c.detail.c_str());
  g_results.push_back(c);
}

// Picks the named checks out of a report and folds them into a criterion.
void fold(Criterion& c, const std::vector<mc::CheckResult>& checks,
          const std::vector<std::string>& prefixes) {
  int used = 0;
  double worst_dev = 0.0, worst_z = 0.0;
  for (const auto& r : checks) {
    bool match = false;
    for (const auto& p : prefixes) match = match || r.name.rfind(p, 0) == 0;
    if (!match) continue;
    ++used;
    c.pass = c.pass && r.pass;
    worst_dev = std::max(worst_dev, r.max_dev);
    worst_z = std::max(worst_z, std::abs(r.z));
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%d checks, max_dev=%.2e, max|z|=%.2f", used,
                worst_dev, worst_z);
  c.detail += buf;
  if (used == 0) c.pass = false;
}

std::string serialize(const std::vector<mc::CheckResult>& checks) {
  std::string s;
  for (const auto& r : checks) {
    s += r.name;
    s += ':';
    s += io::format_double(r.estimated);
    s += ':';
    s += io::format_double(r.stderr_est);
    s += ';';
  }
  return s;
}

}  // namespace

int main() {
  // The identity engine feeds criteria 1-5.
  const auto t0 = std::chrono::steady_clock::now();
  const auto identities = mc::identity_suite();
  const double ident_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  criterion(1, "Hermite and Laguerre orthogonality to 1e-8 (indices <= 10)", true,
            [&](Criterion& c) {
              fold(c, identities.checks, {"hermite-orth", "laguerre-orth"});
            });

  criterion(2, "convolution lemmas (i)-(iv), GUE and LUE, max dev < 1e-6", true,
            [&](Criterion& c) {
              fold(c, identities.checks, {"lemma-gue", "lemma-lue"});
              char buf[64];
              std::snprintf(buf, sizeof(buf), " [identity engine %.1fs total]",
                            ident_seconds);
              c.detail += buf;
            });

  criterion(3, "biorthogonality of Psi and Phi families to 1e-8 (k,l < n <= 6)", true,
            [&](Criterion& c) { fold(c, identities.checks, {"biorthogonality"}); });

  criterion(4, "kernel algebra: sum-vs-double-integral to 1e-6, dual reps to 1e-9",
            true, [&](Criterion& c) {
              fold(c, identities.checks,
                   {"sum-vs-double-integral", "dual-representation"});
            });

  criterion(5, "trace identities: integrated diagonals equal the level", true,
            [&](Criterion& c) { fold(c, identities.checks, {"trace-"}); });

  criterion(6, "finite weight specs: kernel determinants vs enumeration (50 specs)",
            true, [&](Criterion& c) {
              mc::EynardOptions opt;
              const auto checks = mc::eynard_suite(opt);
              fold(c, checks, {"eynard-"});
            });

  criterion(7, "group-integral checks at 1e6 Haar samples, |z| < 4", true,
            [&](Criterion& c) {
              mc::HcizOptions opt;
              const auto checks = mc::hciz_suite(opt);
              fold(c, checks, {"hciz-"});
            });

  // Criteria 8-10 share one Monte Carlo run.
  mc::MonteCarloOptions mco;
  const auto mc_checks = mc::montecarlo_suite(mco);

  criterion(8, "GUE minors: empirical density and two-point cell vs kernel (3 sigma)",
            true, [&](Criterion& c) { fold(c, mc_checks, {"mc-gue-"}); });

  criterion(9,
            "Wishart p=2, n=1: empirical density vs kernel diagonal (3 sigma); "
            "adjudicates the double-integral exponent reading",
            true, [&](Criterion& c) { fold(c, mc_checks, {"mc-lue-"}); });

  criterion(10, "particle dynamics: occupation probabilities vs discrete kernel", true,
            [&](Criterion& c) { fold(c, mc_checks, {"mc-particles-"}); });

  criterion(11, "diffusion scaling at t = 400 vs rescaled kernel (soft, reported)",
            false, [&](Criterion& c) {
              mc::DiffusionOptions opt;
              const auto checks = mc::diffusion_scaling_report(opt);
              fold(c, checks, {"diffusion-scaling"});
            });

  criterion(12, "fixed-seed reruns are byte-identical", true, [&](Criterion& c) {
    mc::MonteCarloOptions small;
    small.gue_samples = 4000;
    small.lue_samples = 4000;
    small.particle_replicas = 4000;
    const auto a = serialize(mc::montecarlo_suite(small));
    const auto b = serialize(mc::montecarlo_suite(small));
    mc::HcizOptions h;
    h.samples = 20000;
    const auto ha = serialize(mc::hciz_suite(h));
    const auto hb = serialize(mc::hciz_suite(h));
    c.pass = !a.empty() && a == b && !ha.empty() && ha == hb;
    c.detail = c.pass ? "montecarlo + hciz reports identical" : "reports differ";
  });

  bool ok = true;
  for (const auto& c : g_results) ok = ok && (c.pass || !c.gated);
  std::printf("%s\n", ok ? "acceptance: all gated criteria pass"
                         : "acceptance: FAILURES present");
  return ok ? 0 : 1;
}
