#ifndef CUBEMAX_EXPERIMENTS_HPP
#define CUBEMAX_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "cubemax/generators.hpp"
#include "cubemax/serialize.hpp"

namespace cubemax {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int dim = 2;
  int n = 16;        // cells per axis
  double h = 1.0;    // cell width
  FunctionClass function = FunctionClass::indicator;
  FamilyClass family = FamilyClass::random_complete;
  int reps = 20;
  int seed_cubes = 6;            // cubes fed to the dyadic completion
  std::map<int, double> caps;    // per-dimension empirical caps
  int N_max = 6;                 // checkerboard depth
  std::vector<double> dumbbell_h{0.25, 0.125, 0.0625};
  std::uint64_t geom_samples = 100000;
  std::uint64_t mc_samples = 200000;
  int threads = 1;               // never part of the report body
};

/// Unknown keys and invalid values throw Error(config_error).
ExperimentConfig config_from_json(const Json& j);
/// Echo of every field except `threads`.
Json config_to_json(const ExperimentConfig& cfg);

struct PlotFile {
  std::string name;
  std::string content;
};

struct SuiteResult {
  std::string suite;
  Json body;     // deterministic report body
  Json timings;  // wall-clock data, kept out of the body
  std::vector<PlotFile> plots;
  std::vector<std::string> failures;  // each carries a replay record
  bool passed() const { return failures.empty(); }
};

SuiteResult run_ratio_suite(const ExperimentConfig& cfg);
SuiteResult run_theorem_suite(const ExperimentConfig& cfg);
SuiteResult run_checkerboard(const ExperimentConfig& cfg);
SuiteResult run_dumbbell(const ExperimentConfig& cfg);
SuiteResult run_geom_suite(const ExperimentConfig& cfg);
SuiteResult run_sparse_audit(const ExperimentConfig& cfg);
/// Dispatch on ratio|theorem|checkerboard|dumbbell|geom|sparse-audit.
SuiteResult run_suite(const std::string& name, const ExperimentConfig& cfg);

/// report.json, timings.json, per-level CSV and plot data files.
void write_outputs(const SuiteResult& r, const std::filesystem::path& dir);

/// Whitespace-separated "lo hi count" rows over [min, max].
std::string histogram_data(const std::vector<double>& values, int bins);
/// Numeric rows of a plot data file; '#' lines are skipped.
std::vector<std::vector<double>> parse_plot_data(const std::string& text);

struct CheckerboardRow {
  int N = 0;
  double var = 0.0;
  bool complete = false;
};
std::vector<CheckerboardRow> checkerboard_rows(int N_max);

struct DumbbellRow {
  double h = 0.0;
  double integral = 0.0;   // sum of the cell values times h^2
  double bound = 0.0;      // integral / 100
  double min_lower = 0.0;  // over cells with x2 < 0
  double max_neck = 0.0;   // over domain cells with x2 >= 0
  double var = 0.0;        // variation of the local maximal function on the domain
};
DumbbellRow dumbbell_row(double h);

/// Max theorem ratio over fixed continuum shapes at n and 2n cells per axis.
struct StabilityResult {
  std::vector<double> coarse, fine;
  double max_coarse = 0.0, max_fine = 0.0;
  double relative_change() const;
};
StabilityResult theorem_resolution_stability(int n, int shapes, std::uint64_t seed);

}  // namespace cubemax

#endif  // CUBEMAX_EXPERIMENTS_HPP
