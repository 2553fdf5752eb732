#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "spacelike/eynard.hpp"
#include "spacelike/rng.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SPACELIKE_CLI_PATH;

struct Run {
  int exit_code;
};

Run run(const std::string& args, const std::string& dir) {
  const std::string cmd = kCli + " --outdir " + dir + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return {WEXITSTATUS(rc)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("spacelike_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("kernel grid emits the gaussian diagonal") {
  TempDir tmp;
  const auto r = run("kernel --name gue --diag --n 1 --t 1 --xmin -3 --xmax 3 "
                     "--steps 13 --out g.csv",
                     tmp.path.string());
  CHECK(r.exit_code == 0);
  const auto rows = read_csv(tmp.path / "g.csv");
  REQUIRE(rows.size() == 14);
  CHECK(rows[0][0] == "x1");
  for (size_t i = 1; i < rows.size(); ++i) {
    const double x = std::stod(rows[i][0]);
    const double v = std::stod(rows[i][6]);
    CHECK(std::abs(v - std::exp(-x * x) / std::sqrt(3.14159265358979323846)) < 1e-9);
  }
  CHECK(fs::exists(tmp.path / "g.csv.manifest.json"));
}

TEST_CASE("discrete kernel point value") {
  TempDir tmp;
  const auto r =
      run("kernel --name discrete --n 1 --t 1 --x -1 --out d.csv", tmp.path.string());
  CHECK(r.exit_code == 0);
  const auto rows = read_csv(tmp.path / "d.csv");
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(rows[1][6]) - std::exp(-1.0)) < 1e-10);
}

TEST_CASE("usage errors exit with code 2") {
  TempDir tmp;
  CHECK(run("kernel --name nosuch --n 1 --t 1 --x 0", tmp.path.string()).exit_code == 2);
  CHECK(run("kernel --name gue --t 1", tmp.path.string()).exit_code == 2);
  CHECK(run("simulate --model nosuch --seed 1", tmp.path.string()).exit_code == 2);
  CHECK(run("verify --suite nosuch", tmp.path.string()).exit_code == 2);
  CHECK(run("", tmp.path.string()).exit_code == 2);
}

TEST_CASE("numerical domain errors exit with code 3") {
  TempDir tmp;
  // t = 0 is outside the kernel domain
  CHECK(run("kernel --name gue --n 1 --t 0 --x 0", tmp.path.string()).exit_code == 3);
}

TEST_CASE("simulate reruns are byte-identical and interlaced") {
  TempDir tmp;
  CHECK(run("simulate --model dbm-minors --seed 7 --replicas 20 --dim 3 "
            "--times 0.5,1 --out a",
            tmp.path.string())
            .exit_code == 0);
  CHECK(run("simulate --model dbm-minors --seed 7 --replicas 20 --dim 3 "
            "--times 0.5,1 --out b",
            tmp.path.string())
            .exit_code == 0);
  const auto a = slurp(tmp.path / "a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(tmp.path / "b.csv"));
  CHECK(slurp(tmp.path / "a_manifest.json") == slurp(tmp.path / "b_manifest.json"));

  // emitted eigenvalues interlace across consecutive levels
  const auto rows = read_csv(tmp.path / "a.csv");
  // row: replica,time,level,k,lambda -- collect one (replica, time) block
  std::vector<std::vector<double>> by_level(4);
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] != "0" || rows[i][1] != rows[1][1]) continue;
    by_level[std::stoi(rows[i][2])].push_back(std::stod(rows[i][4]));
  }
  for (int m = 1; m < 3; ++m)
    for (size_t k = 0; k < by_level[m].size(); ++k) {
      CHECK(by_level[m + 1][k] <= by_level[m][k] + 1e-12);
      CHECK(by_level[m][k] <= by_level[m + 1][k + 1] + 1e-12);
    }
}

TEST_CASE("particles simulate emits one row per particle") {
  TempDir tmp;
  CHECK(run("simulate --model particles --seed 3 --replicas 5 --levels 2 "
            "--times 1 --out p",
            tmp.path.string())
            .exit_code == 0);
  const auto rows = read_csv(tmp.path / "p.csv");
  CHECK(rows.size() == 1 + 5 * 3);  // header + 3 positions per replica
  CHECK(rows[0][0] == "run_id");
}

TEST_CASE("verify eynard suite passes") {
  TempDir tmp;
  const auto r = run("verify --suite eynard --trials 6 --out rep.json",
                     tmp.path.string());
  CHECK(r.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(tmp.path / "rep.json"));
  CHECK(j.is_array());
  CHECK(j.size() >= 3);
}

TEST_CASE("eynard-check on a serialized spec") {
  TempDir tmp;
  spacelike::rmt::RngStream rng(33, 0);
  const auto spec = spacelike::eynard::random_spec(rng);
  const auto path = (tmp.path / "spec.json").string();
  spacelike::eynard::save_spec_json(spec, path);
  const auto r = run("eynard-check --spec " + path + " --points 1:0:0", tmp.path.string());
  CHECK(r.exit_code == 0);
}

TEST_CASE("config file supplies defaults but flags win") {
  TempDir tmp;
  std::ofstream cfg(tmp.path / "cfg.ini");
  cfg << "[kernel]\nname=gue\nn=1\nt=1\nxmin=-1\nxmax=1\nsteps=5\nout=c.csv\n";
  cfg.close();
  const std::string base = "--config " + (tmp.path / "cfg.ini").string();
  CHECK(run(base + " kernel", tmp.path.string()).exit_code == 0);
  CHECK(read_csv(tmp.path / "c.csv").size() == 6);
  CHECK(run(base + " kernel --steps 3", tmp.path.string()).exit_code == 0);
  CHECK(read_csv(tmp.path / "c.csv").size() == 4);  // flag overrides config
}
