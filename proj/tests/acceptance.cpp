// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <utility>

#include "cubemax/estimates.hpp"
#include "cubemax/experiments.hpp"
#include "cubemax/geom.hpp"
#include "cubemax/maximal.hpp"
#include "cubemax/partition.hpp"
#include "cubemax/sparse.hpp"
#include "oracles.hpp"

using namespace cubemax;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GridShape shape_of(int dim, int n) {
  return dim == 1 ? GridShape{n} : dim == 2 ? GridShape{n, n} : GridShape{n, n, n};
}

GridFunction real_grid(const GridShape& s, Rng& rng) {
  std::vector<double> v(std::size_t(s.size()));
  for (auto& x : v) x = rng.coin(0.3) ? double(rng.uniform_int(-2, 2)) : rng.uniform(-3.0, 3.0);
  return GridFunction(s, rng.uniform(0.25, 2.0), v);
}

PixelSet random_set(const GridShape& s, double p, Rng& rng) {
  PixelSet E(s);
  for (Index i = 0; i < s.size(); ++i) E.set(i, rng.coin(p));
  return E;
}

Outcome coarea() {
  Rng rng(1001);
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim)
    for (int t = 0; t < 200; ++t) {
      const GridShape s = oracle::random_shape(dim, dim == 1 ? 4096 : dim == 2 ? 64 : 16, rng);
      const GridFunction f = real_grid(s, rng);
      PixelSet mask(s, true);
      const bool masked = t % 2;
      if (masked) mask = random_set(s, 0.8, rng);
      const double a = variation(f, masked ? &mask : nullptr);
      const double b = oracle::gradient_variation(f, masked ? &mask : nullptr);
      worst = std::max(worst, b == 0.0 ? std::abs(a) : std::abs(a - b) / b);
    }
  return {worst <= 1e-9, fmt("600 grids, max relative error %.3g", worst)};
}

Outcome maximal_brute_force() {
  Rng rng(1002);
  int mismatches = 0;
  for (int dim = 1; dim <= 3; ++dim)
    for (int t = 0; t < 200; ++t) {
      const GridShape s = oracle::random_shape(dim, dim == 1 ? 144 : 12, rng);
      const GridFunction f = oracle::integer_grid(s, rng.uniform(0.5, 2.0), -5, 9, rng);
      const GridFunction m = maximal_global(f).values;
      mismatches += std::vector<double>(m.values().data(), m.values().data() + m.size()) !=
                    oracle::maximal_brute(f, oracle::every_cube(s));
    }
  return {mismatches == 0, fmt("600 grids, %d mismatches", mismatches)};
}

Outcome sparse_mass() {
  Rng rng(1003);
  int violations[3] = {0, 0, 0}, oracle_mismatch = 0;
  double worst = 0.0;
  for (int dim = 1; dim <= 2; ++dim)
    for (int t = 0; t < 200; ++t) {
      const int side = dim == 1 ? 16 : 8;
      const GridShape s = shape_of(dim, side + rng.uniform_int(0, 4));
      GridFunction f = t % 2 ? oracle::integer_grid(s, 1.0, 0, 6, rng)
                             : dim == 1 ? random_steps(s.n[0], 1.0, rng) : random_simple(s, 1.0, rng);
      GridCube q0{{0, 0, 0}, side};
      for (int a = 0; a < dim; ++a) q0.anchor[a] = rng.uniform_int(0, s.n[a] - side);
      const SparseMassEstimate e = sparse_mass_estimate(f, q0);
      if (std::abs(e.rhs - oracle::sparse_mass_rhs(f, q0)) > 1e-9 * std::max(1.0, e.rhs)) ++oracle_mismatch;
      if (!e.holds()) ++violations[dim];
      if (e.rhs > 0) worst = std::max(worst, e.lhs / e.rhs);
    }
  return {violations[1] + violations[2] == 0 && oracle_mismatch == 0,
          fmt("violations d=1: %d/200, d=2: %d/200; rhs oracle mismatches %d; max lhs/rhs %.4g", violations[1],
              violations[2], oracle_mismatch, worst)};
}

Outcome greedy() {
  Rng rng(1004);
  int bad = 0;
  std::size_t max_candidates = 0;
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + t % 3;
    const int n = dim == 3 ? 8 : 16;
    const GridShape s = shape_of(dim, n);
    const GridFunction f = oracle::integer_grid(s, 1.0, 0, 8, rng);
    CubeFamily cand(s, 1.0, random_power_cubes(s, rng.uniform_int(1, 200), n, rng));
    cand.bind(f);
    max_candidates = std::max(max_candidates, cand.size());
    const SparseFamily sel = greedy_sparse(f, cand);
    bool ok = audit_sparse(sel, dim, 1.0).empty() && sel.iterations <= cand.size();
    for (std::size_t i = 0; i < sel.cubes.size(); ++i)
      for (std::size_t j = 0; j < sel.cubes.size(); ++j) {
        const GridCube &Q = sel.cubes[i], &R = sel.cubes[j];
        if (i == j || R.side > Q.side || (R.side == Q.side && j < i)) continue;
        PixelSet pq(s);
        paint(pq, Q);
        const bool small = 2 * oracle::cube_count(pq, R) < cube_cell_count(dim, R.side);
        const bool finer = scale_of(R.side, 1.0) < scale_of(Q.side, 1.0) &&
                           oracle::cube_avg(f, R) > oracle::cube_avg(f, Q);
        ok = ok && (small || finer);
      }
    bad += !ok;
  }
  return {bad == 0, fmt("100 instances (up to %zu candidates), %d with violations", max_candidates, bad)};
}

Outcome cover() {
  Rng rng(1005);
  int uncovered = 0, done = 0;
  while (done < 200) {
    const int dim = 1 + done % 3;
    const int side = dim == 1 ? 64 : dim == 2 ? 16 : 8;
    const GridShape s = shape_of(dim, side + 4);
    GridCube q0{{0, 0, 0}, side};
    for (int a = 0; a < dim; ++a) q0.anchor[a] = rng.uniform_int(0, 4);
    const PixelSet E = random_set(s, rng.uniform(0.0, 0.5), rng);
    if (2 * oracle::cube_count(E, q0) >= cube_cell_count(dim, side)) continue;
    const MidDensityCover c = covering_middensity(E, 1.0, q0);
    PixelSet u(s);
    for (const auto& q : c.band.cubes()) paint(u, q);
    for (Index i = 0; i < s.size(); ++i)
      if (E[i] && contains_cell(dim, q0, s.coord(i)) && !u[i]) ++uncovered;
    if (!c.covers()) ++uncovered;
    ++done;
  }
  return {uncovered == 0, fmt("200 instances, %d uncovered cells", uncovered)};
}

Outcome union_boundary() {
  Rng rng(1006);
  int wrong = 0;
  for (int t = 0; t < 500; ++t) {
    const int dim = 1 + t % 3;
    const GridShape s = oracle::random_shape(dim, dim == 3 ? 8 : 20, rng);
    const PixelSet a = random_set(s, rng.uniform01(), rng), b = random_set(s, rng.uniform01(), rng);
    bool expected = true;
    oracle::faces(s, [&](Index x, Index y) {
      const bool in_union = (a[x] || b[x]) != (a[y] || b[y]);
      const bool from_a = a[x] != a[y] && !b[x] && !b[y];
      const bool from_b = b[x] != b[y];
      if (in_union && !from_a && !from_b) expected = false;
    });
    const UnionCheck c = boundary_of_union_check(a, b);
    wrong += !c.holds || !expected;
  }
  return {wrong == 0, fmt("500 pairs, %d failures", wrong)};
}

Outcome one_dim() {
  int exhaustive_bad = 0, random_bad = 0;
  for (int n = 1; n <= 10; ++n)
    for (int bits = 0; bits < (1 << n); ++bits) {
      std::vector<double> v(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) v[std::size_t(i)] = (bits >> i) & 1;
      const GridFunction f(GridShape{n}, 1.0, v);
      const GridFunction m(f.shape(), 1.0, oracle::maximal_brute(f, oracle::every_cube(f.shape())));
      const double vf = oracle::gradient_variation(f);
      exhaustive_bad += oracle::gradient_variation(m) > vf * (1 + 1e-9);
      exhaustive_bad += variation(maximal_global(f).values) > vf * (1 + 1e-9);
    }
  Rng rng(1007);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const GridFunction f = random_steps(rng.uniform_int(4, 400), rng.uniform(0.1, 2.0), rng);
    const double vf = variation(f), vm = variation(maximal_global(f).values);
    random_bad += vm > vf * (1 + 1e-9);
    if (vf > 0) worst = std::max(worst, vm / vf);
  }
  return {exhaustive_bad + random_bad == 0,
          fmt("2046 binary strings: %d failures; 500 step functions: %d failures, max ratio %.6g", exhaustive_bad,
              random_bad, worst)};
}

Outcome theorem() {
  ExperimentConfig cfg;
  cfg.dim = 2;
  cfg.n = 32;
  cfg.reps = 100;
  cfg.family = FamilyClass::random_complete;
  cfg.caps[2] = 4.0;
  bool ok = true;
  double ratio_max = 0.0;
  std::size_t mass_fail = 0;
  for (FunctionClass fc : {FunctionClass::indicator, FunctionClass::simple, FunctionClass::block_decreasing,
                           FunctionClass::radial, FunctionClass::random_smooth}) {
    cfg.function = fc;
    const SuiteResult r = run_suite("theorem", cfg);
    ok = ok && r.passed();
    ratio_max = std::max(ratio_max, r.body["summary"]["ratio_max"].get<double>());
    mass_fail += r.body["summary"]["sparse_mass_failures"].get<std::size_t>();
  }
  const StabilityResult st = theorem_resolution_stability(16, 10, 1);
  const double change = st.relative_change();
  return {ok && ratio_max <= 4.0 && change < 0.2,
          fmt("5 x 100 instances on 32^2, max ratio %.6g (cap 4); 16->32 max %.6g -> %.6g, change %.3g "
              "(sparse mass misses counted: %zu)",
              ratio_max, st.max_coarse, st.max_fine, change, mass_fail)};
}

Outcome checkerboard() {
  const auto rows = checkerboard_rows(6);
  bool ok = true;
  std::string g;
  for (int N = 2; N <= 5; ++N) {
    const double r = rows[std::size_t(N) + 1].var / rows[std::size_t(N)].var;
    ok = ok && r >= 1.5 && r <= 2.5;
    g += fmt(" %.4g", r);
  }
  for (int N = 1; N <= 6; ++N) ok = ok && !rows[std::size_t(N)].complete;
  return {ok, "growth ratios N=2..5:" + g};
}

Outcome dumbbell() {
  bool ok = true;
  std::string d;
  const double integral = 1.0 / 6;  // linear ramp over a right triangle with unit legs
  for (double h : {0.25, 0.125, 0.0625}) {
    const DumbbellRow r = dumbbell_row(h);
    ok = ok && r.max_neck == 0.0 && r.min_lower >= integral / 100 * (1 - 1e-12) &&
         std::abs(r.integral - integral) <= 1e-12;
    d += fmt(" h=%g: neck %g, lower >= %.6g;", h, r.max_neck, r.min_lower);
  }
  return {ok, fmt("bound %.6g;", integral / 100) + d};
}

Outcome geometry() {
  Rng rng(1011);
  bool ok = true;
  std::string d;
  for (int dim : {2, 3}) {
    const AngleCheck a = cube_angle_check(dim, 100000, rng);
    const CubeCoverResult c = cube_cover_check(dim, 0.1, 100000, rng);
    ok = ok && a.holds() && c.failures == 0;
    d += fmt(" d=%d angle %.6g/%.6g, cover failures %llu;", dim, a.max_angle, a.bound,
             static_cast<unsigned long long>(c.failures));
  }
  return {ok, d};
}

Outcome determinism() {
  ExperimentConfig cfg;
  cfg.seed = 12;
  cfg.n = 16;
  cfg.reps = 12;
  cfg.N_max = 5;
  cfg.geom_samples = 5000;
  cfg.mc_samples = 5000;
  int differing = 0;
  for (const char* suite : {"ratio", "theorem", "checkerboard", "dumbbell", "geom", "sparse-audit"}) {
    std::set<std::string> bodies;
    for (int th : {1, 2, 8}) {
      cfg.threads = th;
      bodies.insert(dump17(run_suite(suite, cfg).body));
    }
    differing += bodies.size() != 1;
  }
  return {differing == 0, fmt("6 suites x {1,2,8} threads, %d suites differ", differing)};
}

}  // namespace

int main() {
  const std::pair<const char*, double> names[] = {
      {"coarea identity", 10},         {"maximal function vs brute force", 60}, {"sparse mass estimate", 30},
      {"greedy selection audit", 30},  {"mid-density cover", 10},              {"boundary of union", 5},
      {"1-d variation non-increase", 20}, {"theorem ratio and stability", 300}, {"checkerboard growth", 60},
      {"dumbbell jump", 30},           {"geometry lemmas", 30},                {"determinism", 120}};
  const std::function<Outcome()> runs[] = {coarea,  maximal_brute_force, sparse_mass, greedy,   cover,    union_boundary,
                                           one_dim, theorem,             checkerboard, dumbbell, geometry, determinism};
  int failed = 0;
  for (int k = 0; k < 12; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = runs[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < names[k].second;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s (%.1f s, limit %.0f s): %s\n", pass ? "PASS" : "FAIL", k + 1, names[k].first, secs,
                names[k].second, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
