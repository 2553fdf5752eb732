// Command-line front end: kernel evaluation on grids, exact simulation of
// the matrix diffusions and the interlaced particle system, and the
// verification suites.  Exit codes: 0 ok, 1 check failure, 2 usage,
// 3 numerical failure, 4 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spacelike/eynard.hpp"
#include "spacelike/io.hpp"
#include "spacelike/kernels.hpp"
#include "spacelike/mc.hpp"
#include "spacelike/particles.hpp"
#include "spacelike/rmt.hpp"
#include "spacelike/verify.hpp"

namespace {

constexpr const char* kVersion = "spacelike 0.1.0";

using nlohmann::json;
using spacelike::io::format_double;

std::string out_path(const std::string& outdir, const std::string& name) {
  if (outdir.empty()) return name;
  std::filesystem::create_directories(outdir);
  return (std::filesystem::path(outdir) / name).string();
}

void write_manifest(const std::string& path, const json& config) {
  json m;
  m["version"] = kVersion;
  m["config"] = config;
  std::ofstream out(path);
  out << m.dump(1) << "\n";
}

struct KernelArgs {
  std::string name;
  int n1 = 1, n2 = -1, p = 2;
  double t1 = 1.0, t2 = -1.0;
  bool diag = false;
  std::optional<double> x, x2;
  double xmin = -3.0, xmax = 3.0;
  int steps = 61;
  double epsilon = 1.0;
  int circle_nodes = 256, vline_nodes = 512;
  std::string out = "kernel.csv";
};

int run_kernel(const KernelArgs& a, const std::string& outdir) {
  using spacelike::kernels::KernelValue;
  using spacelike::kernels::SpaceTimePoint;

  spacelike::kernels::QuadratureConfig q;
  q.epsilon = a.epsilon;
  q.circle_nodes = a.circle_nodes;
  q.vline_nodes = a.vline_nodes;
  const int n2 = a.n2 < 0 ? a.n1 : a.n2;
  const double t2 = a.t2 < 0 ? a.t1 : a.t2;

  auto eval = [&](double x1, double x2v) -> KernelValue {
    const SpaceTimePoint p1{x1, a.n1, a.t1};
    const SpaceTimePoint p2{x2v, n2, t2};
    if (a.name == "gue") return spacelike::kernels::kernel_gue_extended(p1, p2, q);
    if (a.name == "gue-static")
      return spacelike::kernels::kernel_gue_static(x1, a.n1, x2v, n2, q);
    if (a.name == "scaled")
      return spacelike::kernels::kernel_diffusion_scaled(p1, p2, q);
    if (a.name == "lue") return spacelike::kernels::kernel_lue(p1, p2, {a.p}, q);
    if (a.name == "discrete")
      return KernelValue{spacelike::kernels::kernel_discrete(p1, p2, q), 0.0};
    throw CLI::ValidationError("unknown kernel name: " + a.name);
  };

  std::vector<std::pair<double, double>> grid;
  if (a.x) {
    grid.emplace_back(*a.x, a.x2 ? *a.x2 : (a.diag ? *a.x : *a.x));
  } else {
    for (int i = 0; i < a.steps; ++i) {
      const double x = a.xmin + (a.xmax - a.xmin) * i / std::max(1, a.steps - 1);
      grid.emplace_back(x, x);
    }
  }

  const std::string csv = out_path(outdir, a.out);
  spacelike::io::CsvWriter w(csv, {"x1", "n1", "t1", "x2", "n2", "t2", "value",
                                   "error_estimate"});
  for (const auto& [x1, x2v] : grid) {
    const auto kv = eval(x1, x2v);
    w.row({format_double(x1), std::to_string(a.n1), format_double(a.t1),
           format_double(x2v), std::to_string(n2), format_double(t2),
           format_double(kv.value), format_double(kv.quadrature_error_estimate)});
  }
  json cfg;
  cfg["command"] = "kernel";
  cfg["name"] = a.name;
  cfg["n1"] = a.n1;
  cfg["n2"] = n2;
  cfg["t1"] = a.t1;
  cfg["t2"] = t2;
  cfg["p"] = a.p;
  cfg["epsilon"] = a.epsilon;
  cfg["circle_nodes"] = a.circle_nodes;
  cfg["vline_nodes"] = a.vline_nodes;
  cfg["output"] = a.out;
  write_manifest(csv + ".manifest.json", cfg);
  std::cout << "wrote " << csv << "\n";
  return 0;
}

struct SimArgs {
  std::string model;
  std::uint64_t seed = 1;
  std::int64_t replicas = 1;
  std::vector<double> times{1.0};
  int dim = 3;     // dbm-minors
  int p = 2, n = 1;  // wishart
  int levels = 2;  // particles
  std::string out = "samples";
};

int run_simulate(const SimArgs& a, const std::string& outdir) {
  const std::string csv = out_path(outdir, a.out + ".csv");
  json cfg;
  cfg["command"] = "simulate";
  cfg["model"] = a.model;
  cfg["seed"] = a.seed;
  cfg["replicas"] = a.replicas;
  cfg["times"] = a.times;

  if (a.model == "dbm-minors") {
    cfg["dim"] = a.dim;
    std::vector<int> levels(a.dim);
    for (int i = 0; i < a.dim; ++i) levels[i] = i + 1;
    spacelike::io::CsvWriter w(csv, {"replica", "time", "level", "k", "lambda"});
    for (std::int64_t r = 0; r < a.replicas; ++r) {
      spacelike::rmt::RngStream rng(a.seed, static_cast<std::uint64_t>(r));
      const auto s = spacelike::rmt::sample_minor_process(a.dim, a.times, levels, rng);
      for (size_t ti = 0; ti < s.times.size(); ++ti)
        for (size_t li = 0; li < s.levels.size(); ++li)
          for (size_t k = 0; k < s.lambda[ti][li].size(); ++k)
            w.row({std::to_string(r), format_double(s.times[ti]),
                   std::to_string(s.levels[li]), std::to_string(k + 1),
                   format_double(s.lambda[ti][li][k])});
    }
  } else if (a.model == "wishart") {
    cfg["p"] = a.p;
    cfg["n"] = a.n;
    spacelike::io::CsvWriter w(csv, {"replica", "time", "level", "k", "lambda"});
    for (std::int64_t r = 0; r < a.replicas; ++r) {
      spacelike::rmt::RngStream rng(a.seed, static_cast<std::uint64_t>(r));
      const auto ev = spacelike::rmt::sample_wishart_path(a.p, a.n, a.times, rng);
      for (size_t ti = 0; ti < a.times.size(); ++ti)
        for (size_t k = 0; k < ev[ti].size(); ++k)
          w.row({std::to_string(r), format_double(a.times[ti]), std::to_string(a.n),
                 std::to_string(k + 1), format_double(ev[ti][k])});
    }
  } else if (a.model == "particles") {
    cfg["levels"] = a.levels;
    spacelike::io::CsvWriter w(csv, {"run_id", "obs_time", "level", "k", "position"});
    for (std::int64_t r = 0; r < a.replicas; ++r) {
      spacelike::particles::SimClock clock(a.seed, static_cast<std::uint64_t>(r));
      auto c = spacelike::particles::init_packed(a.levels);
      for (const double t : a.times) {
        spacelike::particles::evolve(c, t, clock);
        for (int m = 1; m <= a.levels; ++m)
          for (int k = 1; k <= m; ++k)
            w.row({std::to_string(r), format_double(t), std::to_string(m),
                   std::to_string(k), std::to_string(c.pos(m, k))});
      }
    }
  } else {
    throw CLI::ValidationError("unknown model: " + a.model);
  }
  write_manifest(out_path(outdir, a.out + "_manifest.json"), cfg);
  std::cout << "wrote " << csv << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 20260809;
  std::int64_t samples = 1000000;
  int trials = 50;
  std::int64_t replicas = 100000;
  std::string out = "report.json";
};

int run_verify(const VerifyArgs& a, const std::string& outdir) {
  using spacelike::mc::CheckResult;
  std::vector<CheckResult> checks;

  if (a.suite == "identities" || a.suite == "all") {
    const auto rep = spacelike::mc::identity_suite();
    checks.insert(checks.end(), rep.checks.begin(), rep.checks.end());
  }
  if (a.suite == "hciz" || a.suite == "all") {
    spacelike::mc::HcizOptions opt;
    opt.seed = a.seed;
    opt.samples = a.samples;
    const auto r = spacelike::mc::hciz_suite(opt);
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (a.suite == "eynard" || a.suite == "all") {
    spacelike::mc::EynardOptions opt;
    opt.seed = a.seed;
    opt.trials = a.trials;
    const auto r = spacelike::mc::eynard_suite(opt);
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (a.suite == "montecarlo" || a.suite == "all") {
    spacelike::mc::MonteCarloOptions opt;
    opt.seed = a.seed;
    opt.gue_samples = a.replicas;
    opt.lue_samples = a.replicas;
    opt.particle_replicas = a.replicas;
    const auto r = spacelike::mc::montecarlo_suite(opt);
    checks.insert(checks.end(), r.begin(), r.end());
  }
  if (checks.empty()) throw CLI::ValidationError("unknown suite: " + a.suite);

  bool all_pass = true;
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    std::cout << (c.pass ? "pass  " : "FAIL  ") << c.name << "\n";
  }
  const std::string path = out_path(outdir, a.out);
  std::ofstream out(path);
  out << spacelike::mc::report_to_json(checks) << "\n";
  std::cout << "wrote " << path << "\n";
  return all_pass ? 0 : 1;
}

struct EynardCheckArgs {
  std::string spec_path;
  std::string points;
  std::string out = "eynard_report.json";
};

int run_eynard_check(const EynardCheckArgs& a, const std::string& outdir) {
  const auto spec = spacelike::eynard::load_spec_json(a.spec_path);
  std::vector<spacelike::eynard::LevelTimePoint> pts;
  if (!a.points.empty()) {
    std::stringstream ss(a.points);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
      spacelike::eynard::LevelTimePoint p;
      if (std::sscanf(tok.c_str(), "%d:%d:%d", &p.level, &p.copy, &p.loc) != 3)
        throw CLI::ValidationError("points must be level:copy:loc;...");
      pts.push_back(p);
    }
  } else {
    pts.push_back({1, 0, 0});
  }
  const auto kd = spacelike::eynard::kernel_determinant(spec, pts);
  const auto bf = spacelike::eynard::brute_force_correlation(spec, pts);
  const double dev = std::abs(kd - bf);

  json j;
  j["kernel_determinant"] = {kd.real(), kd.imag()};
  j["brute_force"] = {bf.real(), bf.imag()};
  j["abs_deviation"] = dev;
  j["pass"] = dev < 1e-9;
  const std::string path = out_path(outdir, a.out);
  std::ofstream out(path);
  out << j.dump(1) << "\n";
  std::cout << (dev < 1e-9 ? "pass" : "FAIL") << "  |det K - enumeration| = " << dev
            << "\n";
  return dev < 1e-9 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Space-like correlation kernels of minor diffusions: evaluation, "
               "exact simulation, verification"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config");

  std::string outdir;
  if (const char* env = std::getenv("SPACELIKE_OUTDIR")) outdir = env;
  app.add_option("--outdir", outdir, "output directory (default: SPACELIKE_OUTDIR or cwd)");

  KernelArgs ka;
  auto* kc = app.add_subcommand("kernel", "evaluate a correlation kernel on a grid");
  kc->add_option("--name", ka.name, "discrete|gue|gue-static|scaled|lue")->required();
  kc->add_option("--n", ka.n1, "level n1")->required();
  kc->add_option("--n2", ka.n2, "level n2 (default n1)");
  kc->add_option("--t", ka.t1, "time t1")->required();
  kc->add_option("--t2", ka.t2, "time t2 (default t1)");
  kc->add_option("--p", ka.p, "LUE ambient dimension");
  kc->add_flag("--diag", ka.diag, "evaluate on the diagonal x1 = x2");
  double xv = 0.0, x2v = 0.0;
  auto* xopt = kc->add_option("--x", xv, "single x1");
  auto* x2opt = kc->add_option("--x2", x2v, "single x2 (default x1)");
  kc->add_option("--xmin", ka.xmin, "grid start");
  kc->add_option("--xmax", ka.xmax, "grid end");
  kc->add_option("--steps", ka.steps, "grid points");
  kc->add_option("--epsilon", ka.epsilon, "vertical-line real part");
  kc->add_option("--circle-nodes", ka.circle_nodes, "circle quadrature nodes");
  kc->add_option("--vline-nodes", ka.vline_nodes, "line quadrature nodes");
  kc->add_option("--out", ka.out, "output CSV name");

  SimArgs sa;
  auto* sc = app.add_subcommand("simulate", "run an exact sampler");
  sc->add_option("--model", sa.model, "dbm-minors|wishart|particles")->required();
  sc->add_option("--seed", sa.seed, "rng seed")->required();
  sc->add_option("--replicas", sa.replicas, "independent replicas");
  sc->add_option("--times", sa.times, "observation times")->delimiter(',');
  sc->add_option("--dim", sa.dim, "matrix dimension (dbm-minors)");
  sc->add_option("--p", sa.p, "rows p (wishart)");
  sc->add_option("--n", sa.n, "columns n (wishart)");
  sc->add_option("--levels", sa.levels, "particle levels");
  sc->add_option("--out", sa.out, "output prefix");

  VerifyArgs va;
  auto* vc = app.add_subcommand("verify", "run a verification suite");
  vc->add_option("--suite", va.suite, "identities|hciz|eynard|montecarlo|all")
      ->required();
  vc->add_option("--seed", va.seed, "rng seed");
  vc->add_option("--samples", va.samples, "Monte Carlo samples (hciz)");
  vc->add_option("--trials", va.trials, "random spec trials (eynard)");
  vc->add_option("--replicas", va.replicas, "replicas (montecarlo)");
  vc->add_option("--out", va.out, "report JSON name");

  EynardCheckArgs ea;
  auto* ec = app.add_subcommand("eynard-check",
                                "kernel vs enumeration on a serialized weight spec");
  ec->add_option("--spec", ea.spec_path, "spec JSON path")->required();
  ec->add_option("--points", ea.points, "level:copy:loc;... (default 1:0:0)");
  ec->add_option("--out", ea.out, "report JSON name");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (kc->parsed()) {
      if (xopt->count()) ka.x = xv;
      if (x2opt->count()) ka.x2 = x2v;
      return run_kernel(ka, outdir);
    }
    if (sc->parsed()) return run_simulate(sa, outdir);
    if (vc->parsed()) return run_verify(va, outdir);
    if (ec->parsed()) return run_eynard_check(ea, outdir);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    const bool quad = what.find("contour") != std::string::npos ||
                      what.find("quadrature") != std::string::npos ||
                      what.find("non-real") != std::string::npos;
    std::cerr << (quad ? "numerical error: " : "runtime error: ") << what << "\n";
    return quad ? 3 : 4;
  }
  return 2;
}
