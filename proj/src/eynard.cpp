#include "spacelike/eynard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace spacelike::eynard {

namespace {

using linalg::Lu;

void fail(const std::string& msg) { throw std::invalid_argument("eynard spec: " + msg); }

// Product T(n,hi) T(n,hi-1) ... T(n,lo+1); identity when hi == lo.
Matrix t_partial(const SpaceLikeWeightSpec& spec, int level, int hi, int lo) {
  const int s = spec.set_size(level);
  Matrix m = Matrix::identity(s);
  for (int a = hi; a > lo; --a) m = linalg::multiply(m, spec.T[level - 1][a - 1]);
  return m;
}

// Transition chain between two points of the extended space, as a
// |X_{n1}| x |X_{n2}| matrix.  Defined when n1 < n2, or n1 == n2 with
// a1 >= a2; the empty chain (same point) is the identity when
// `identity_if_equal`, otherwise "no chain".
bool chain_exists(const SpaceLikeWeightSpec& spec, const LevelTimePoint& from,
                  const LevelTimePoint& to) {
  (void)spec;
  if (from.level > to.level) return false;
  if (from.level == to.level && from.copy < to.copy) return false;
  return true;
}

Matrix chain_matrix(const SpaceLikeWeightSpec& spec, const LevelTimePoint& from,
                    const LevelTimePoint& to) {
  if (from.level == to.level) return t_partial(spec, from.level, from.copy, to.copy);
  Matrix m = t_partial(spec, from.level, from.copy, 0);
  for (int lev = from.level + 1; lev <= to.level; ++lev) {
    m = linalg::multiply(m, spec.phi[lev - 1]);
    const int lo = (lev == to.level) ? to.copy : 0;
    m = linalg::multiply(m, t_partial(spec, lev, spec.copies[lev - 1], lo));
  }
  return m;
}

void check_point(const SpaceLikeWeightSpec& spec, const LevelTimePoint& p) {
  if (p.level < 1 || p.level > spec.N) fail("point level out of range");
  if (p.copy < 0 || p.copy > spec.copies[p.level - 1]) fail("point copy out of range");
  if (p.loc < 0 || p.loc >= spec.set_size(p.level)) fail("point location out of range");
}

// All sorted k-subsets of {0..s-1}.
std::vector<std::vector<int>> subsets(int s, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k > s) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == s - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Complex psi_dot(const SpaceLikeWeightSpec& spec, const std::vector<Complex>& row,
                int j) {
  Complex s{0.0, 0.0};
  for (size_t y = 0; y < row.size(); ++y) s += row[y] * spec.psi[j][y];
  return s;
}

struct KernelContext {
  Matrix minv;
  double cond = 0.0;
};

KernelContext make_context(const SpaceLikeWeightSpec& spec) {
  const Matrix m = m_matrix(spec);
  const Lu f = linalg::lu_decompose(m);
  if (f.singular) throw std::runtime_error("eynard kernel: matrix M is singular");
  KernelContext ctx;
  ctx.cond = linalg::condition_1norm(m);
  if (!(ctx.cond < 1e12))
    throw std::runtime_error("eynard kernel: matrix M is ill-conditioned");
  ctx.minv = linalg::inverse(f);
  return ctx;
}

Complex kernel_value(const SpaceLikeWeightSpec& spec, const KernelContext& ctx,
                     const LevelTimePoint& a, const LevelTimePoint& b, int k_max) {
  check_point(spec, a);
  check_point(spec, b);

  Complex term1{0.0, 0.0};
  const bool same_point = a.level == b.level && a.copy == b.copy;
  if (!same_point && chain_exists(spec, a, b))
    term1 = chain_matrix(spec, a, b)(a.loc, b.loc);

  // Psi^{n1,t}_{n1-k}(x1) through the chain down to (N, copy 0).
  const LevelTimePoint top{spec.N, 0, 0};
  std::vector<Complex> arow(spec.set_size(a.level), Complex{0.0, 0.0});
  arow[a.loc] = 1.0;
  if (!(a.level == spec.N && a.copy == 0))
    arow = linalg::vec_mat(arow, chain_matrix(spec, a, top));

  // (phi_l * chain)(virt, x2) for l = 1..n2.
  const int n2 = b.level;
  std::vector<Complex> phirow(n2);
  for (int l = 1; l <= n2; ++l) {
    std::vector<Complex> row = spec.phi_virt[l - 1];
    const LevelTimePoint from{l, spec.copies[l - 1], 0};
    if (!(l == b.level && spec.copies[l - 1] == b.copy))
      row = linalg::vec_mat(row, chain_matrix(spec, from, b));
    phirow[l - 1] = row[b.loc];
  }

  Complex sum{0.0, 0.0};
  for (int k = 1; k <= k_max; ++k) {
    const Complex psik = psi_dot(spec, arow, spec.N - k);
    if (psik == Complex{0.0, 0.0}) continue;
    for (int l = 1; l <= n2; ++l)
      sum += psik * ctx.minv(k - 1, l - 1) * phirow[l - 1];
  }
  return -term1 + sum;
}

}  // namespace

void SpaceLikeWeightSpec::validate() const {
  if (N < 1) fail("N must be >= 1");
  if (static_cast<int>(ground.size()) != N || static_cast<int>(copies.size()) != N ||
      static_cast<int>(times.size()) != N || static_cast<int>(phi.size()) != N ||
      static_cast<int>(phi_virt.size()) != N || static_cast<int>(T.size()) != N)
    fail("top-level array sizes disagree with N");
  if (static_cast<int>(psi.size()) != N) fail("psi must have N rows");
  for (int n = 1; n <= N; ++n) {
    const int s = set_size(n);
    if (s < n) fail("ground set smaller than its level");
    if (copies[n - 1] < 0) fail("copy count must be >= 0");
    if (static_cast<int>(times[n - 1].size()) != copies[n - 1] + 1)
      fail("time labels must have c(n)+1 entries");
    for (int a = 1; a <= copies[n - 1]; ++a)
      if (times[n - 1][a] < times[n - 1][a - 1] - 1e-12)
        fail("time labels must be nondecreasing within a level");
    if (n >= 2 && std::abs(times[n - 1][copies[n - 1]] - times[n - 2][0]) > 1e-9)
      fail("last time of level n must equal first time of level n-1");
    const int prev = n == 1 ? 0 : set_size(n - 1);
    if (const Matrix& m = phi[n - 1]; m.rows != prev || m.cols != s)
      fail("phi table has wrong shape");
    if (static_cast<int>(phi_virt[n - 1].size()) != s) fail("phi virt row has wrong size");
    if (static_cast<int>(T[n - 1].size()) != copies[n - 1]) fail("T table count != c(n)");
    for (const auto& t : T[n - 1])
      if (t.rows != s || t.cols != s) fail("T table has wrong shape");
  }
  for (const auto& row : psi)
    if (static_cast<int>(row.size()) != set_size(N)) fail("psi row has wrong size");
}

Complex weight(const SpaceLikeWeightSpec& spec, const PointConfiguration& cfg) {
  if (static_cast<int>(cfg.pts.size()) != spec.N) fail("configuration level count");
  for (int n = 1; n <= spec.N; ++n) {
    if (static_cast<int>(cfg.pts[n - 1].size()) != spec.copies[n - 1] + 1)
      fail("configuration copy count");
    for (const auto& copy : cfg.pts[n - 1])
      if (static_cast<int>(copy.size()) != n) return Complex{0.0, 0.0};
  }

  Complex w{1.0, 0.0};
  for (int n = 1; n <= spec.N; ++n) {
    const auto& last = cfg.pts[n - 1][spec.copies[n - 1]];
    Matrix blk(n, n);
    for (int l = 0; l < n; ++l) {
      for (int k = 0; k + 1 < n; ++k)
        blk(k, l) = spec.phi[n - 1](cfg.pts[n - 2][0][k], last[l]);
      blk(n - 1, l) = spec.phi_virt[n - 1][last[l]];
    }
    w *= linalg::determinant(blk);
    for (int a = 1; a <= spec.copies[n - 1]; ++a) {
      Matrix tb(n, n);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          tb(k, l) = spec.T[n - 1][a - 1](cfg.pts[n - 1][a][k], cfg.pts[n - 1][a - 1][l]);
      w *= linalg::determinant(tb);
    }
  }
  Matrix pb(spec.N, spec.N);
  for (int k = 0; k < spec.N; ++k)
    for (int l = 1; l <= spec.N; ++l)
      pb(k, l - 1) = spec.psi[spec.N - l][cfg.pts[spec.N - 1][0][k]];
  w *= linalg::determinant(pb);
  return w;
}

std::int64_t configuration_count(const SpaceLikeWeightSpec& spec) {
  auto choose = [](int s, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (s - i) / (i + 1);
    return static_cast<std::int64_t>(std::llround(c));
  };
  std::int64_t total = 1;
  for (int n = 1; n <= spec.N; ++n)
    for (int a = 0; a <= spec.copies[n - 1]; ++a) {
      total *= choose(spec.set_size(n), n);
      if (total > (std::int64_t{1} << 62) / 4) return total;
    }
  return total;
}

namespace {

// Enumerate every admissible configuration, calling fn(cfg, W(cfg)).
template <class Fn>
void enumerate_configurations(const SpaceLikeWeightSpec& spec, std::int64_t budget,
                              Fn&& fn) {
  if (configuration_count(spec) > budget)
    throw std::runtime_error("eynard enumeration budget exceeded");

  std::vector<std::vector<std::vector<int>>> choices;  // per (level, copy)
  std::vector<std::pair<int, int>> slot;
  for (int n = 1; n <= spec.N; ++n)
    for (int a = 0; a <= spec.copies[n - 1]; ++a) {
      choices.push_back(subsets(spec.set_size(n), n));
      slot.emplace_back(n, a);
    }

  PointConfiguration cfg;
  cfg.pts.resize(spec.N);
  for (int n = 1; n <= spec.N; ++n) cfg.pts[n - 1].resize(spec.copies[n - 1] + 1);

  const size_t nslots = choices.size();
  std::vector<size_t> idx(nslots, 0);
  while (true) {
    for (size_t s = 0; s < nslots; ++s)
      cfg.pts[slot[s].first - 1][slot[s].second] = choices[s][idx[s]];
    fn(cfg, weight(spec, cfg));
    size_t s = 0;
    while (s < nslots && ++idx[s] == choices[s].size()) idx[s++] = 0;
    if (s == nslots) break;
  }
}

}  // namespace

Complex brute_force_correlation(const SpaceLikeWeightSpec& spec,
                                const std::vector<LevelTimePoint>& points,
                                std::int64_t budget) {
  spec.validate();
  for (const auto& p : points) check_point(spec, p);
  Complex z{0.0, 0.0};
  Complex num{0.0, 0.0};
  double mass = 0.0;
  enumerate_configurations(spec, budget, [&](const PointConfiguration& cfg, Complex w) {
    z += w;
    mass += std::abs(w);
    for (const auto& p : points) {
      const auto& set = cfg.pts[p.level - 1][p.copy];
      if (!std::binary_search(set.begin(), set.end(), p.loc)) return;
    }
    num += w;
  });
  if (std::abs(z) <= 1e-14 * std::max(mass, 1e-300))
    throw std::runtime_error("eynard: partition function vanishes");
  return num / z;
}

Complex brute_force_partition(const SpaceLikeWeightSpec& spec, std::int64_t budget) {
  spec.validate();
  Complex z{0.0, 0.0};
  enumerate_configurations(spec, budget,
                           [&](const PointConfiguration&, Complex w) { z += w; });
  return z;
}

Matrix m_matrix(const SpaceLikeWeightSpec& spec) {
  spec.validate();
  Matrix m(spec.N, spec.N);
  for (int k = 1; k <= spec.N; ++k) {
    std::vector<Complex> row = spec.phi_virt[k - 1];
    row = linalg::vec_mat(row, t_partial(spec, k, spec.copies[k - 1], 0));
    for (int lev = k + 1; lev <= spec.N; ++lev) {
      row = linalg::vec_mat(row, spec.phi[lev - 1]);
      row = linalg::vec_mat(row, t_partial(spec, lev, spec.copies[lev - 1], 0));
    }
    for (int l = 1; l <= spec.N; ++l) m(k - 1, l - 1) = psi_dot(spec, row, spec.N - l);
  }
  return m;
}

Complex correlation_kernel(const SpaceLikeWeightSpec& spec, const LevelTimePoint& a,
                           const LevelTimePoint& b, double* cond) {
  spec.validate();
  const KernelContext ctx = make_context(spec);
  if (cond) *cond = ctx.cond;
  return kernel_value(spec, ctx, a, b, spec.N);
}

Complex correlation_kernel_uppertri(const SpaceLikeWeightSpec& spec,
                                    const LevelTimePoint& a,
                                    const LevelTimePoint& b) {
  spec.validate();
  const Matrix m = m_matrix(spec);
  if (!m_is_upper_triangular(m))
    throw std::runtime_error("eynard: simplified kernel requires upper-triangular M");
  const KernelContext ctx = make_context(spec);
  return kernel_value(spec, ctx, a, b, b.level);
}

bool m_is_upper_triangular(const Matrix& m, double tol) {
  double scale = 0.0;
  for (const auto& v : m.a) scale = std::max(scale, std::abs(v));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(m(i, j)) > tol * std::max(scale, 1.0)) return false;
  return true;
}

Complex kernel_determinant(const SpaceLikeWeightSpec& spec,
                           const std::vector<LevelTimePoint>& points) {
  spec.validate();
  const KernelContext ctx = make_context(spec);
  const int m = static_cast<int>(points.size());
  Matrix k(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      k(i, j) = kernel_value(spec, ctx, points[i], points[j], spec.N);
  return linalg::determinant(k);
}

SpaceLikeWeightSpec random_spec(rmt::RngStream& rng, const RandomSpecOptions& opt) {
  // Redraw until M is comfortably conditioned; the enumeration identities
  // are exact, so the only error budget is round-off through M^{-1}.
  for (int attempt = 0; attempt < 64; ++attempt) {
    SpaceLikeWeightSpec s = random_spec_draw(rng, opt);
    const double cond = linalg::condition_1norm(m_matrix(s));
    if (cond < 1e5) return s;
  }
  throw std::runtime_error("random_spec: no well-conditioned draw found");
}

SpaceLikeWeightSpec random_spec_draw(rmt::RngStream& rng, const RandomSpecOptions& opt) {
  auto pos = [&rng] { return 0.2 + rng.next_uniform(); };
  auto entry = [&](bool allow_complex) {
    return allow_complex ? Complex{pos(), rng.next_uniform() - 0.5} : Complex{pos(), 0.0};
  };

  SpaceLikeWeightSpec s;
  s.N = 1 + static_cast<int>(rng.next_uniform() * opt.max_levels);
  s.N = std::min(s.N, opt.max_levels);
  s.ground.resize(s.N);
  s.copies.resize(s.N);
  s.times.resize(s.N);
  s.phi.resize(s.N);
  s.phi_virt.resize(s.N);
  s.T.resize(s.N);
  for (int n = 1; n <= s.N; ++n) {
    const int base = n;  // |X_n| >= n keeps per-copy subsets nonempty
    const int span = std::max(0, opt.max_set - base);
    const int sz = base + static_cast<int>(rng.next_uniform() * (span + 1)) % (span + 1);
    s.ground[n - 1].resize(sz);
    for (int i = 0; i < sz; ++i) s.ground[n - 1][i] = i;
    s.copies[n - 1] = static_cast<int>(rng.next_uniform() * (opt.max_copies + 1)) % (opt.max_copies + 1);
  }
  // Weakly increasing time chain from level N upwards.
  double t = 0.0;
  for (int n = s.N; n >= 1; --n) {
    s.times[n - 1].resize(s.copies[n - 1] + 1);
    for (int a = 0; a <= s.copies[n - 1]; ++a) {
      s.times[n - 1][a] = t;
      if (a < s.copies[n - 1]) t += 0.25 + 0.5 * rng.next_uniform();
    }
  }
  for (int n = 1; n <= s.N; ++n) {
    const int sz = s.ground[n - 1].size();
    const int prev = n == 1 ? 0 : static_cast<int>(s.ground[n - 2].size());
    s.phi[n - 1] = Matrix(prev, sz);
    for (auto& v : s.phi[n - 1].a) v = entry(opt.complex_weights);
    s.phi_virt[n - 1].resize(sz);
    for (auto& v : s.phi_virt[n - 1]) v = entry(opt.complex_weights);
    s.T[n - 1].resize(s.copies[n - 1]);
    for (auto& tb : s.T[n - 1]) {
      tb = Matrix(sz, sz);
      for (auto& v : tb.a) v = entry(opt.complex_weights);
    }
  }

  const int top = s.ground[s.N - 1].size();
  s.psi.assign(s.N, std::vector<Complex>(top));
  for (auto& row : s.psi)
    for (auto& v : row) v = entry(opt.complex_weights);

  if (opt.upper_triangular) {
    // Chain row vectors v_k = phi_k * T^k * ... * phi_N * T^N over X_N; M is
    // upper triangular iff psi_{N-l} is (bilinearly) orthogonal to v_k for
    // every k > l.
    std::vector<std::vector<Complex>> v(s.N);
    for (int k = 1; k <= s.N; ++k) {
      std::vector<Complex> row = s.phi_virt[k - 1];
      row = linalg::vec_mat(row, t_partial(s, k, s.copies[k - 1], 0));
      for (int lev = k + 1; lev <= s.N; ++lev) {
        row = linalg::vec_mat(row, s.phi[lev - 1]);
        row = linalg::vec_mat(row, t_partial(s, lev, s.copies[lev - 1], 0));
      }
      v[k - 1] = row;
    }
    auto dot = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
      Complex r{0.0, 0.0};
      for (size_t i = 0; i < x.size(); ++i) r += x[i] * y[i];
      return r;
    };
    for (int l = 1; l <= s.N; ++l) {
      // Gram-Schmidt of psi_{N-l} against v_{l+1}..v_N.
      std::vector<std::vector<Complex>> basis;
      for (int k = l + 1; k <= s.N; ++k) {
        auto u = v[k - 1];
        for (const auto& bvec : basis) {
          const Complex c = dot(u, bvec) / dot(bvec, bvec);
          for (size_t i = 0; i < u.size(); ++i) u[i] -= c * bvec[i];
        }
        basis.push_back(u);
      }
      auto& target = s.psi[s.N - l];
      for (const auto& bvec : basis) {
        const Complex c = dot(target, bvec) / dot(bvec, bvec);
        for (size_t i = 0; i < target.size(); ++i) target[i] -= c * bvec[i];
      }
    }
  }
  s.validate();
  return s;
}

namespace {

using nlohmann::json;

Complex parse_c(const json& j) {
  if (j.is_array()) return Complex{j.at(0).get<double>(), j.at(1).get<double>()};
  return Complex{j.get<double>(), 0.0};
}

json dump_c(const Complex& c) {
  if (c.imag() == 0.0) return json(c.real());
  return json::array({c.real(), c.imag()});
}

Matrix parse_matrix(const json& j, int rows, int cols) {
  Matrix m(rows, cols);
  if (static_cast<int>(j.size()) != rows) fail("matrix row count in JSON");
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) fail("matrix column count in JSON");
    for (int c = 0; c < cols; ++c) m(i, c) = parse_c(j[i][c]);
  }
  return m;
}

json dump_matrix(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(dump_c(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

SpaceLikeWeightSpec load_spec_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  json j;
  in >> j;

  SpaceLikeWeightSpec s;
  s.N = j.at("N").get<int>();
  s.ground = j.at("ground").get<std::vector<std::vector<double>>>();
  s.copies = j.at("copies").get<std::vector<int>>();
  s.times = j.at("times").get<std::vector<std::vector<double>>>();
  s.phi.resize(s.N);
  s.phi_virt.resize(s.N);
  s.T.resize(s.N);
  const auto& jp = j.at("phi");
  for (int n = 1; n <= s.N; ++n) {
    const int sz = static_cast<int>(s.ground[n - 1].size());
    const int prev = n == 1 ? 0 : static_cast<int>(s.ground[n - 2].size());
    const auto& e = jp.at(n - 1);
    s.phi_virt[n - 1].resize(sz);
    const auto& vr = e.at("virt");
    for (int i = 0; i < sz; ++i) s.phi_virt[n - 1][i] = parse_c(vr.at(i));
    s.phi[n - 1] = e.contains("table") ? parse_matrix(e.at("table"), prev, sz)
                                       : Matrix(prev, sz);
  }
  const auto& jt = j.at("T");
  for (int n = 1; n <= s.N; ++n) {
    const int sz = static_cast<int>(s.ground[n - 1].size());
    s.T[n - 1].resize(s.copies[n - 1]);
    for (int a = 1; a <= s.copies[n - 1]; ++a)
      s.T[n - 1][a - 1] = parse_matrix(jt.at(n - 1).at(a - 1), sz, sz);
  }
  const auto& jpsi = j.at("psi");
  s.psi.resize(s.N);
  for (int r = 0; r < s.N; ++r) {
    const int top = static_cast<int>(s.ground[s.N - 1].size());
    s.psi[r].resize(top);
    for (int i = 0; i < top; ++i) s.psi[r][i] = parse_c(jpsi.at(r).at(i));
  }
  s.validate();
  return s;
}

void save_spec_json(const SpaceLikeWeightSpec& spec, const std::string& path) {
  spec.validate();
  json j;
  j["N"] = spec.N;
  j["ground"] = spec.ground;
  j["copies"] = spec.copies;
  j["times"] = spec.times;
  json jp = json::array();
  for (int n = 1; n <= spec.N; ++n) {
    json e;
    json vr = json::array();
    for (const auto& v : spec.phi_virt[n - 1]) vr.push_back(dump_c(v));
    e["virt"] = vr;
    if (n > 1) e["table"] = dump_matrix(spec.phi[n - 1]);
    jp.push_back(e);
  }
  j["phi"] = jp;
  json jt = json::array();
  for (int n = 1; n <= spec.N; ++n) {
    json per = json::array();
    for (const auto& tb : spec.T[n - 1]) per.push_back(dump_matrix(tb));
    jt.push_back(per);
  }
  j["T"] = jt;
  json jpsi = json::array();
  for (const auto& row : spec.psi) {
    json r = json::array();
    for (const auto& v : row) r.push_back(dump_c(v));
    jpsi.push_back(r);
  }
  j["psi"] = jpsi;
  std::ofstream out(path);
  out << j.dump(1) << "\n";
}

}  // namespace spacelike::eynard
