#include "cubemax/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <mutex>
#include <thread>

#include "cubemax/estimates.hpp"
#include "cubemax/geom.hpp"
#include "cubemax/grid_io.hpp"
#include "cubemax/maximal.hpp"
#include "cubemax/partition.hpp"
#include "cubemax/sparse.hpp"

namespace cubemax {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Runs fn(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <class Fn>
auto parallel_map(int n, int threads, Fn fn) -> std::vector<decltype(fn(0))> {
  std::vector<decltype(fn(0))> out(std::size_t(std::max(n, 0)));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      try {
        out[std::size_t(i)] = fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int t = std::clamp(threads, 1, std::max(n, 1));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double max_of(const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

Json base_body(const std::string& suite, const ExperimentConfig& cfg) {
  return Json{{"report_v", 1}, {"suite", suite}, {"seed", cfg.seed}, {"config", config_to_json(cfg)}};
}

struct Asserts {
  Json list = Json::array();
  std::vector<std::string> failures;
  void check(const std::string& name, bool ok, const Json& detail, const Json& replay = nullptr) {
    list.push_back(Json{{"name", name}, {"passed", ok}, {"detail", detail}});
    if (!ok) {
      Json r{{"assertion", name}, {"detail", detail}};
      if (!replay.is_null()) r["replay"] = replay;
      failures.push_back(dump17(r, -1));
    }
  }
};

void finish(SuiteResult& r, Asserts& a) {
  r.body["assertions"] = a.list;
  r.body["passed"] = a.failures.empty();
  r.failures = std::move(a.failures);
}

GridShape cube_shape(int dim, int n) {
  std::vector<int> dims(std::size_t(dim), n);
  return GridShape(std::span<const int>(dims));
}

Json replay_record(const ExperimentConfig& cfg, const std::string& suite, int rep) {
  return Json{{"suite", suite}, {"rep", rep}, {"rep_seed", derive_seed(cfg.seed, std::uint64_t(rep))},
              {"config", config_to_json(cfg)}};
}

std::string two_columns(const std::string& header, const std::vector<std::pair<double, double>>& rows) {
  std::string s = "# " + header + "\n";
  for (const auto& [x, y] : rows) s += format_double(x) + " " + format_double(y) + "\n";
  return s;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw Error(Errc::config_error, "config must be a JSON object");
  ExperimentConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "dim") c.dim = v.get<int>();
      else if (k == "n") c.n = v.get<int>();
      else if (k == "h") c.h = v.get<double>();
      else if (k == "function") c.function = parse_function_class(v.get<std::string>());
      else if (k == "family") c.family = parse_family_class(v.get<std::string>());
      else if (k == "reps") c.reps = v.get<int>();
      else if (k == "seed_cubes") c.seed_cubes = v.get<int>();
      else if (k == "caps") {
        for (auto ci = v.begin(); ci != v.end(); ++ci) c.caps[std::stoi(ci.key())] = ci.value().get<double>();
      } else if (k == "N_max") c.N_max = v.get<int>();
      else if (k == "dumbbell_h") c.dumbbell_h = v.get<std::vector<double>>();
      else if (k == "geom_samples") c.geom_samples = v.get<std::uint64_t>();
      else if (k == "mc_samples") c.mc_samples = v.get<std::uint64_t>();
      else if (k == "threads") c.threads = v.get<int>();
      else throw Error(Errc::config_error, "unknown config key: " + k);
    }
  } catch (const Json::exception& e) {
    throw Error(Errc::config_error, std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(Errc::config_error, "caps keys must be dimensions");
  }
  if (c.dim < 1 || c.dim > 3) throw Error(Errc::config_error, "dim must be 1, 2 or 3");
  if (c.n < 1 || std::pow(double(c.n), c.dim) > 1e7) throw Error(Errc::config_error, "grid size out of range");
  if (!(c.h > 0) || !std::isfinite(c.h)) throw Error(Errc::config_error, "h must be positive");
  if (c.reps < 0) throw Error(Errc::config_error, "reps must be nonnegative");
  if (c.seed_cubes < 1) throw Error(Errc::config_error, "seed_cubes must be positive");
  if (c.N_max < 1 || c.N_max > 6) throw Error(Errc::config_error, "N_max must lie in 1..6");
  if (c.threads < 1) throw Error(Errc::config_error, "threads must be positive");
  for (double h : c.dumbbell_h)
    if (!(h > 0) || 1.0 / h != std::floor(1.0 / h)) throw Error(Errc::config_error, "dumbbell h must be 1/k");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json caps = Json::object();
  for (const auto& [d, v] : c.caps) caps[std::to_string(d)] = v;
  return Json{{"seed", c.seed},
              {"dim", c.dim},
              {"n", c.n},
              {"h", c.h},
              {"function", to_string(c.function)},
              {"family", to_string(c.family)},
              {"reps", c.reps},
              {"seed_cubes", c.seed_cubes},
              {"caps", caps},
              {"N_max", c.N_max},
              {"dumbbell_h", c.dumbbell_h},
              {"geom_samples", c.geom_samples},
              {"mc_samples", c.mc_samples}};
}

std::string histogram_data(const std::vector<double>& values, int bins) {
  std::vector<double> v;
  for (double x : values)
    if (std::isfinite(x)) v.push_back(x);
  std::string s = "# lo hi count\n";
  if (v.empty() || bins < 1) return s;
  const double lo = *std::min_element(v.begin(), v.end());
  double hi = *std::max_element(v.begin(), v.end());
  if (hi == lo) hi = lo + 1.0;
  std::vector<int> count(std::size_t(bins), 0);
  for (double x : v) ++count[std::min(std::size_t(bins) - 1, std::size_t((x - lo) / (hi - lo) * bins))];
  for (int b = 0; b < bins; ++b)
    s += format_double(lo + (hi - lo) * b / bins) + " " + format_double(lo + (hi - lo) * (b + 1) / bins) + " " +
         std::to_string(count[std::size_t(b)]) + "\n";
  return s;
}

std::vector<std::vector<double>> parse_plot_data(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) row.push_back(std::stod(tok));
    rows.push_back(row);
  }
  return rows;
}

SuiteResult run_ratio_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"ratio", base_body("ratio", cfg), Json::object(), {}, {}};
  const GridShape shape = cube_shape(cfg.dim, cfg.n);
  struct Inst {
    double var_f = 0, var_mf = 0, ratio = 0;
  };
  const auto inst = parallel_map(cfg.reps, cfg.threads, [&](int rep) {
    Rng rng(derive_seed(cfg.seed, std::uint64_t(rep)));
    const GridFunction f = cfg.dim == 1 && cfg.function == FunctionClass::simple
                               ? random_steps(cfg.n, cfg.h, rng)
                               : generate_function(cfg.function, shape, cfg.h, rng);
    const MaxFunction mf = maximal_global(f);
    Inst x;
    x.var_f = variation(f);
    x.var_mf = variation(mf.values);
    x.ratio = variation_ratio(f, mf);
    return x;
  });

  Asserts a;
  Json rows = Json::array();
  std::vector<double> ratios;
  const auto cap = cfg.caps.find(cfg.dim);
  for (int k = 0; k < cfg.reps; ++k) {
    const Inst& x = inst[std::size_t(k)];
    rows.push_back(Json{{"rep", k}, {"var_f", x.var_f}, {"var_mf", x.var_mf}, {"ratio", x.ratio}});
    ratios.push_back(x.ratio);
    if (!std::isfinite(x.ratio)) a.check("finite ratio", false, Json{{"rep", k}}, replay_record(cfg, "ratio", k));
    if (cfg.dim == 1 && x.ratio > 1 + 1e-9)
      a.check("1-d variation does not increase", false, Json{{"rep", k}, {"ratio", x.ratio}},
              replay_record(cfg, "ratio", k));
    if (cap != cfg.caps.end() && x.ratio > cap->second)
      a.check("ratio below cap", false, Json{{"rep", k}, {"ratio", x.ratio}, {"cap", cap->second}},
              replay_record(cfg, "ratio", k));
  }
  a.check("all instances within bounds", a.failures.empty(), Json{{"instances", cfg.reps}});
  r.body["instances"] = rows;
  r.body["summary"] = Json{{"ratio_max", max_of(ratios)}, {"ratio_median", median(ratios)}};
  finish(r, a);
  r.plots.push_back({"ratio_hist.dat", histogram_data(ratios, 20)});
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

SuiteResult run_theorem_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"theorem", base_body("theorem", cfg), Json::object(), {}, {}};
  const GridShape shape = cube_shape(cfg.dim, cfg.n);
  TheoremOptions opt;
  if (auto it = cfg.caps.find(cfg.dim); it != cfg.caps.end()) opt.cap = it->second;

  struct Inst {
    TheoremReport rep;
    std::vector<PartitionRow> table;
  };
  const auto inst = parallel_map(cfg.reps, cfg.threads, [&](int k) {
    Rng rng(derive_seed(cfg.seed, std::uint64_t(k)));
    const GridFunction f = generate_function(cfg.function, shape, cfg.h, rng);
    const CubeFamily fam = generate_family(cfg.family, shape, cfg.h, rng, cfg.seed_cubes);
    Inst x;
    x.rep = theorem_main_evaluate(f, fam, opt);
    if (k == 0)
      for (const auto& w : x.rep.rows) {
        const double fb = perimeter(superlevel(f, w.lam), cfg.h).measure;
        x.table.push_back({w.lam, w.n0, w.n1, w.n2, w.term1, w.term2, w.lhs, fb});
      }
    return x;
  });

  Asserts a;
  Json rows = Json::array();
  std::vector<double> ratios, hd, todyadic, massabove, sparse_mass, C1, C2, below, vtb, level;
  int C = 0;
  std::size_t sparse_mass_failures = 0;
  for (int k = 0; k < cfg.reps; ++k) {
    const TheoremReport& t = inst[std::size_t(k)].rep;
    Json j = to_json(t);
    j["rep"] = k;
    rows.push_back(j);
    ratios.push_back(t.ratio);
    hd.push_back(t.high_density_ratio_max);
    todyadic.push_back(t.todyadic_ratio);
    massabove.push_back(t.massabove_ratio_max);
    sparse_mass.push_back(t.sparse_mass_ratio_max);
    sparse_mass_failures += t.sparse_mass_failures;
    C1.push_back(t.C1_max);
    C2.push_back(t.C2_max);
    below.push_back(t.massbelow_max);
    if (t.sparse_size > 0) vtb.push_back(t.volume_to_boundary_min);
    level.push_back(t.level_ratio_max);
    C = std::max(C, t.C_max);
    if (!t.ok()) a.check("instance without violations", false, Json{{"rep", k}, {"violations", t.violations}},
                         replay_record(cfg, "theorem", k));
    const double scale = std::max({1.0, std::abs(t.lhs)});
    if (std::abs(t.lhs - t.lhs_from_table) > 1e-9 * scale)
      a.check("lhs matches per-level table", false, Json{{"rep", k}}, replay_record(cfg, "theorem", k));
    if (!(std::isfinite(t.lhs) && std::isfinite(t.rhs) && t.lhs >= 0 && t.rhs >= 0))
      a.check("finite nonnegative sides", false, Json{{"rep", k}}, replay_record(cfg, "theorem", k));
  }
  const double cmax = std::pow(4.0, cfg.dim);
  a.check("overlap count C <= 4^d", C <= cmax, Json{{"C", C}, {"cap", cmax}});
  a.check("all instances within bounds", a.failures.empty(), Json{{"instances", cfg.reps}});
  r.body["instances"] = rows;
  r.body["summary"] = Json{{"ratio_max", max_of(ratios)},
                           {"ratio_median", median(ratios)},
                           {"high_density_ratio_max", max_of(hd)},
                           {"todyadic_ratio_max", max_of(todyadic)},
                           {"massabove_ratio_max", max_of(massabove)},
                           {"sparse_mass_ratio_max", max_of(sparse_mass)},
                           {"sparse_mass_failures", sparse_mass_failures},
                           {"C_max", C},
                           {"C1_max", max_of(C1)},
                           {"C2_max", max_of(C2)},
                           {"massbelow_max", max_of(below)},
                           {"volume_to_boundary_min", vtb.empty() ? 0.0 : *std::min_element(vtb.begin(), vtb.end())},
                           {"level_ratio_max", max_of(level)}};
  finish(r, a);
  r.plots.push_back({"theorem_ratio_hist.dat", histogram_data(ratios, 20)});
  if (!inst.empty()) {
    std::string trace = "# lam lhs rhs term1 term2\n";
    for (const auto& w : inst[0].rep.rows)
      trace += format_double(w.lam) + " " + format_double(w.lhs) + " " + format_double(w.rhs) + " " +
               format_double(w.term1) + " " + format_double(w.term2) + "\n";
    r.plots.push_back({"lambda_trace.dat", trace});
    r.plots.push_back({"partition_levels.csv", partition_table_csv(inst[0].table)});
  }
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

std::vector<CheckerboardRow> checkerboard_rows(int N_max) {
  const GridFunction f = checkerboard_function(N_max);
  std::vector<CheckerboardRow> rows;
  for (int N = 0; N <= N_max; ++N) {
    const CubeFamily fam = checkerboard_family(N_max, N);
    const MaxFunction m = maximal_family(f, fam, false);
    rows.push_back({N, variation(m.values), is_dyadically_complete(fam)});
  }
  return rows;
}

SuiteResult run_checkerboard(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"checkerboard", base_body("checkerboard", cfg), Json::object(), {}, {}};
  const auto rows = checkerboard_rows(cfg.N_max);
  Asserts a;
  Json jr = Json::array();
  std::vector<std::pair<double, double>> curve;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Json j{{"N", rows[k].N}, {"var", rows[k].var}, {"dyadically_complete", rows[k].complete}};
    if (k > 0) j["growth"] = rows[k].var / rows[k - 1].var;
    jr.push_back(j);
    curve.emplace_back(rows[k].N, rows[k].var);
    if (rows[k].N >= 1) a.check("family N=" + std::to_string(rows[k].N) + " is not dyadically complete", !rows[k].complete, Json{});
    if (rows[k].N >= 3) {
      const double g = rows[k].var / rows[k - 1].var;
      a.check("growth var(" + std::to_string(rows[k].N) + ")/var(" + std::to_string(rows[k].N - 1) + ") in [1.5, 2.5]",
              g >= 1.5 && g <= 2.5, Json{{"growth", g}});
    }
  }
  r.body["var_f"] = variation(checkerboard_function(cfg.N_max));
  r.body["rows"] = jr;
  finish(r, a);
  r.plots.push_back({"checkerboard_growth.dat", two_columns("N var", curve)});
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

DumbbellRow dumbbell_row(double h) {
  const GridFunction f = dumbbell_function(h);
  const PixelSet omega = dumbbell_domain(h);
  const MaxFunction m = maximal_local(f, omega);
  DumbbellRow row;
  row.h = h;
  row.integral = f.values().sum() * h * h;
  row.bound = (1.0 / 6.0) / 100.0;
  row.min_lower = INFINITY;
  row.max_neck = -INFINITY;
  const GridShape& s = f.shape();
  for (int i = 0; i < s.n[0]; ++i)
    for (int j = 0; j < s.n[1]; ++j) {
      const Index k = s.index({i, j, 0});
      if (!omega[k]) continue;
      const double y = -10.0 + j * h;
      if (y < 0)
        row.min_lower = std::min(row.min_lower, m.values[k]);
      else
        row.max_neck = std::max(row.max_neck, m.values[k]);
    }
  row.var = variation(m.values, &omega);
  return row;
}

SuiteResult run_dumbbell(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"dumbbell", base_body("dumbbell", cfg), Json::object(), {}, {}};
  Asserts a;
  Json jr = Json::array();
  std::string plot = "# h min_lower max_neck var\n";
  // Exact integral of the triangle profile: 1/6. The bound allows for the
  // rounding of the lower-chamber average.
  const double tol = 1 - 1e-12;
  for (double h : cfg.dumbbell_h) {
    const DumbbellRow d = dumbbell_row(h);
    jr.push_back(Json{{"h", d.h},
                      {"integral", d.integral},
                      {"bound", d.bound},
                      {"min_lower", d.min_lower},
                      {"max_neck", d.max_neck},
                      {"var", d.var}});
    const std::string tag = " at h=" + format_double(h);
    a.check("zero on the neck" + tag, d.max_neck == 0.0, Json{{"max_neck", d.max_neck}});
    a.check("lower chamber above integral/100" + tag, d.min_lower >= d.bound * tol,
            Json{{"min_lower", d.min_lower}, {"bound", d.bound}});
    a.check("jump across the waist" + tag, d.var >= 2 * d.bound * tol, Json{{"var", d.var}, {"jump", 2 * d.bound}});
    a.check("quadrature matches 1/6" + tag, std::abs(d.integral - 1.0 / 6.0) <= 1e-12, Json{{"integral", d.integral}});
    plot += format_double(d.h) + " " + format_double(d.min_lower) + " " + format_double(d.max_neck) + " " +
            format_double(d.var) + "\n";
  }
  r.body["rows"] = jr;
  finish(r, a);
  r.plots.push_back({"dumbbell.dat", plot});
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

SuiteResult run_geom_suite(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"geom", base_body("geom", cfg), Json::object(), {}, {}};
  // Fixed job list; each job owns a seed stream so thread count does not matter.
  const int jobs = 12;
  const auto out = parallel_map(jobs, cfg.threads, [&](int k) -> Json {
    Rng rng(derive_seed(cfg.seed, std::uint64_t(k)));
    switch (k) {
      case 0:
      case 1: {
        const int d = 2 + k;
        const AngleCheck c = cube_angle_check(d, cfg.geom_samples, rng);
        return Json{{"check", "cube_angle"}, {"d", d}, {"samples", c.samples}, {"max_angle", c.max_angle},
                    {"bound", c.bound}, {"passed", c.holds()}};
      }
      case 2:
      case 3: {
        const int d = k;
        const CubeCoverResult c = cube_cover_check(d, 0.1, cfg.geom_samples, rng);
        return Json{{"check", "cube_cover"}, {"d", d}, {"eps", c.eps}, {"delta", c.delta}, {"trials", c.trials},
                    {"failures", c.failures}, {"worst_gauge", c.worst_gauge},
                    {"largest_passing_delta", c.largest_passing}, {"passed", c.failures == 0}};
      }
      case 4:
      case 5: {
        const int d = k - 2;
        const double eps = std::asin(1 / std::sqrt(double(d))) / 2;
        const MinAngleResult m = min_angle_check(d, eps, 10000, rng);
        return Json{{"check", "min_angle"}, {"d", d}, {"eps", eps}, {"N", m.N}, {"trials", m.trials},
                    {"max_angle", m.max_angle}, {"passed", std::isfinite(m.N)}};
      }
      case 6:
      case 7: {
        const int d = k - 4;
        const std::uint64_t samples = d == 2 ? cfg.mc_samples : cfg.mc_samples / 4;
        Json trend = Json::array();
        bool ok = true;
        for (double eps : {0.2, 0.1, 0.05}) {
          const BlowupResult b = lipschitz_blowup_check(d, 1.0, 1.0, eps, samples, rng);
          ok = ok && b.holds();
          trend.push_back(Json{{"eps", eps}, {"estimate", b.estimate}, {"std_error", b.std_error},
                               {"bound", b.bound}, {"diam", b.diam}, {"estimate_over_eps", b.estimate / eps}});
        }
        return Json{{"check", "lipschitz_blowup"}, {"d", d}, {"L", 1.0}, {"C", 4.0}, {"trend", trend}, {"passed", ok}};
      }
      default: {
        const double K = std::array<double, 4>{0.25, 0.5, 1.0, 2.0}[std::size_t(k - 8)];
        const BallBoundaryResult b = large_boundary_in_ball_check(2, K, 1000, rng);
        return Json{{"check", "large_boundary_in_ball"}, {"d", 2}, {"K", K}, {"trials", b.trials},
                    {"max_ratio", b.max_ratio}, {"passed", std::isfinite(b.max_ratio)}};
      }
    }
  });
  Asserts a;
  Json list = Json::array();
  for (const auto& j : out) {
    list.push_back(j);
    a.check(j["check"].get<std::string>() + " d=" + std::to_string(j["d"].get<int>()), j["passed"].get<bool>(), j);
  }
  r.body["geom_checks"] = list;
  finish(r, a);
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

SuiteResult run_sparse_audit(const ExperimentConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteResult r{"sparse-audit", base_body("sparse-audit", cfg), Json::object(), {}, {}};
  const GridShape shape = cube_shape(cfg.dim, cfg.n);
  const int dim = cfg.dim;
  struct Inst {
    std::size_t candidates = 0, selected = 0, iterations = 0, pair_violations = 0;
    int C = 0;
    double C1 = 0, C2 = 0;
    std::array<int, 3> scaled{0, 0, 0};
    double mass_lhs = 0, mass_rhs = 0;
    bool mass_holds = true;
    bool covered = true;
  };
  const auto inst = parallel_map(cfg.reps, cfg.threads, [&](int k) {
    Rng rng(derive_seed(cfg.seed, std::uint64_t(k)));
    Inst x;
    const GridFunction f = dim == 1 ? random_steps(cfg.n, cfg.h, rng) : random_simple(shape, cfg.h, rng);

    // Greedy selection on up to 200 random cubes.
    CubeFamily cand(shape, cfg.h, random_power_cubes(shape, rng.uniform_int(1, 200), cfg.n, rng));
    cand.bind(f);
    const SparseFamily s = greedy_sparse(f, cand);
    x.candidates = cand.size();
    x.selected = s.cubes.size();
    x.iterations = s.iterations;
    x.pair_violations = audit_sparse(s, dim, cfg.h).size();

    // Bounded-overlap selection on nested dyadic families.
    std::vector<GridCube> S;
    DFamilies D;
    for (const auto& q0 : random_power_cubes(shape, rng.uniform_int(1, 4), cfg.n, rng)) {
      if (std::find(S.begin(), S.end(), q0) != S.end()) continue;
      S.push_back(q0);
      const CubeFamily dy = dyadic_descendants(shape, cfg.h, q0);
      std::vector<GridCube> sub;
      for (const auto& q : dy.cubes())
        if (rng.coin(0.3)) sub.push_back(q);
      D[q0] = sub;
    }
    for (auto& [q0, sub] : D)
      std::erase_if(sub, [&](const GridCube& q) {
        return std::any_of(S.begin(), S.end(), [&](const GridCube& s0) { return q.side > s0.side && contains(dim, q, s0); });
      });
    const OverlapFamily F = disjoint_select(shape, cfg.h, S, D, default_contraction(dim));
    x.C = F.C;
    x.C1 = F.C1;
    x.C2 = F.C2;

    // Same-scale families with pairwise overlap at most half a cube.
    const int side = std::max(1, cfg.n / 4);
    std::vector<GridCube> same;
    for (int t = 0; t < 60; ++t) {
      GridCube q;
      q.side = side;
      for (int a = 0; a < dim; ++a) q.anchor[a] = rng.uniform_int(0, cfg.n - side);
      const bool ok = std::all_of(same.begin(), same.end(), [&](const GridCube& p) {
        return p != q && 2 * overlap_cells(dim, p, q) <= cube_cell_count(dim, side);
      });
      if (ok) same.push_back(q);
    }
    for (int c = 1; c <= 3; ++c) x.scaled[std::size_t(c - 1)] = dilate_overlap_count(dim, cfg.h, same, c);

    // Sparse mass estimate on a power-of-two cube.
    if (dim <= 2) {
      int qs = 1;
      while (qs * 2 <= std::min(cfg.n, 16)) qs *= 2;
      GridCube q0;
      q0.side = qs;
      for (int a = 0; a < dim; ++a) q0.anchor[a] = rng.uniform_int(0, cfg.n - qs);
      const SparseMassEstimate e = sparse_mass_estimate(f, q0);
      x.mass_lhs = e.lhs;
      x.mass_rhs = e.rhs;
      x.mass_holds = e.holds();

      PixelSet E = random_pixels(shape, rng.uniform(0.05, 0.4), rng);
      PixelSet in_q0(shape);
      paint(in_q0, q0);
      if (2 * (E & in_q0).count() < cube_cell_count(dim, qs)) x.covered = covering_middensity(E, cfg.h, q0).covers();
    }
    return x;
  });

  Asserts a;
  Json rows = Json::array();
  int Cmax = 0;
  std::array<int, 3> scaled{0, 0, 0};
  double C1 = 0, C2 = 0, mass_ratio = 0;
  for (int k = 0; k < cfg.reps; ++k) {
    const Inst& x = inst[std::size_t(k)];
    rows.push_back(Json{{"rep", k},
                        {"candidates", x.candidates},
                        {"selected", x.selected},
                        {"iterations", x.iterations},
                        {"pair_violations", x.pair_violations},
                        {"C", x.C},
                        {"C1", x.C1},
                        {"C2", x.C2},
                        {"scaled_overlap", x.scaled},
                        {"mass_lhs", x.mass_lhs},
                        {"mass_rhs", x.mass_rhs}});
    Cmax = std::max(Cmax, x.C);
    C1 = std::max(C1, x.C1);
    C2 = std::max(C2, x.C2);
    for (int c = 0; c < 3; ++c) scaled[std::size_t(c)] = std::max(scaled[std::size_t(c)], x.scaled[std::size_t(c)]);
    if (x.mass_rhs > 0) mass_ratio = std::max(mass_ratio, x.mass_lhs / x.mass_rhs);
    if (x.pair_violations > 0 || x.iterations > x.candidates)
      a.check("greedy postconditions", false, Json{{"rep", k}}, replay_record(cfg, "sparse-audit", k));
    if (!x.mass_holds)
      a.check("sparse mass estimate", false, Json{{"rep", k}, {"lhs", x.mass_lhs}, {"rhs", x.mass_rhs}},
              replay_record(cfg, "sparse-audit", k));
    if (!x.covered) a.check("mid-density cover", false, Json{{"rep", k}}, replay_record(cfg, "sparse-audit", k));
  }
  const double cap = std::pow(4.0, dim);
  a.check("overlap count C <= 4^d", Cmax <= cap, Json{{"C", Cmax}, {"cap", cap}});
  a.check("all instances within bounds", a.failures.empty(), Json{{"instances", cfg.reps}});
  r.body["instances"] = rows;
  r.body["summary"] = Json{{"C_max", Cmax}, {"C1_max", C1}, {"C2_max", C2}, {"scaled_overlap_max", scaled},
                           {"sparse_mass_ratio_max", mass_ratio}};
  finish(r, a);
  r.timings["total_s"] = seconds_since(t0);
  return r;
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg) {
  if (name == "ratio") return run_ratio_suite(cfg);
  if (name == "theorem") return run_theorem_suite(cfg);
  if (name == "checkerboard") return run_checkerboard(cfg);
  if (name == "dumbbell") return run_dumbbell(cfg);
  if (name == "geom") return run_geom_suite(cfg);
  if (name == "sparse-audit") return run_sparse_audit(cfg);
  throw Error(Errc::config_error, "unknown suite: " + name);
}

void write_outputs(const SuiteResult& r, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_error, "cannot create " + dir.string());
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream os(dir / name, std::ios::binary);
    os << text;
    if (!os) throw Error(Errc::io_error, "cannot write " + (dir / name).string());
  };
  put("report.json", dump17(r.body) + "\n");
  put("timings.json", dump17(r.timings) + "\n");
  for (const auto& p : r.plots) put(p.name, p.content);
}

double StabilityResult::relative_change() const {
  if (max_coarse == 0.0) return max_fine == 0.0 ? 0.0 : INFINITY;
  return std::abs(max_fine - max_coarse) / max_coarse;
}

StabilityResult theorem_resolution_stability(int n, int shapes, std::uint64_t seed) {
  StabilityResult out;
  for (int k = 0; k < shapes; ++k) {
    Rng rng(derive_seed(seed, std::uint64_t(k)));
    // Continuum description on [0,1)^2: a cone or bump profile and cubes of
    // side 2^-j anchored on the 1/8 lattice.
    const bool cone = rng.coin();
    const double cx = rng.uniform(0.2, 0.8), cy = rng.uniform(0.2, 0.8), R = rng.uniform(0.15, 0.4);
    struct Unit {
      int ax, ay, j;
    };
    std::vector<Unit> cubes;
    const int count = rng.uniform_int(3, 8);
    for (int t = 0; t < count; ++t) {
      const int j = rng.uniform_int(1, 3);
      const int cells8 = 8 >> j;  // side in units of 1/8
      cubes.push_back({rng.uniform_int(0, 8 - cells8), rng.uniform_int(0, 8 - cells8), j});
    }
    for (int level = 0; level < 2; ++level) {
      const int m = n << level;
      const double h = 1.0 / m;
      const GridShape shape{m, m};
      Eigen::ArrayXd v(shape.size());
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          const double x = (i + 0.5) * h, y = (j + 0.5) * h;
          const double r = std::hypot(x - cx, y - cy);
          v[shape.index({i, j, 0})] = cone ? std::max(0.0, 1 - r / R) : std::exp(-r * r / (2 * R * R));
        }
      std::vector<GridCube> qs;
      for (const auto& u : cubes) qs.push_back(GridCube{{u.ax * m / 8, u.ay * m / 8, 0}, m >> u.j});
      const CubeFamily fam = dyadic_completion(CubeFamily(shape, h, qs));
      TheoremOptions opt;
      opt.proof_chain = false;
      const double ratio = theorem_main_evaluate(GridFunction(shape, h, v), fam, opt).ratio;
      (level == 0 ? out.coarse : out.fine).push_back(ratio);
    }
  }
  out.max_coarse = max_of(out.coarse);
  out.max_fine = max_of(out.fine);
  return out;
}

}  // namespace cubemax
