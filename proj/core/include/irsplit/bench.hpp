#pragma once

// Benchmark harness: run configurations, per-problem summaries with
// geometric means and ratio columns.

#include "irsplit/admm.hpp"
#include "irsplit/subproblem.hpp"
#include "irsplit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace irsplit::bench {

enum class Solver { kAdmmInertial, kAdmmPlain, kFista };

const char* to_string(Solver s) noexcept;
Solver solver_from_string(const std::string& s);

struct SyntheticLassoSpec {
  Index m = 100;
  Index n = 300;
  double density = 1.0;
  double noise = 0.01;
  double nu = 0.0;  ///< 0 selects 0.1‖Aᵀb‖∞
  bool normalize = true;
};

struct SyntheticLogisticSpec {
  Index q = 50;
  Index n = 31;
  double nu_fraction = 0.15;
};

struct LibsvmSpec {
  std::filesystem::path path;
  double nu = 0.0;
  Index n_features = 0;
};

struct CsvSpec {
  std::filesystem::path path_a;
  std::filesystem::path path_b;
  double nu = 0.0;
  bool skip_header = false;
};

using ProblemSource =
    std::variant<SyntheticLassoSpec, SyntheticLogisticSpec, LibsvmSpec, CsvSpec>;

struct RunConfig {
  std::string name;  ///< problem label; derived from the source when empty
  ProblemSource problem = SyntheticLassoSpec{};
  Solver solver = Solver::kAdmmInertial;
  admm::ADMMParams admm = admm::lasso_defaults();
  FistaConfig fista;
  std::uint64_t seed = 0;
  int repetitions = 1;
};

void validate(const RunConfig& config);

/// Label used in reports, e.g. "lasso-100x300-s7".
std::string problem_label(const RunConfig& config);

/// ADMM parameters actually used: admm_plain forces α = 0 and ρ = 1.
admm::ADMMParams effective_admm_params(const RunConfig& config);

struct RunResult {
  std::string problem;
  std::string solver;
  std::uint64_t seed = 0;
  RunRecord record;
  std::string message;  ///< error text when status is error
};

/// Executes one configuration. Errors never escape; they land in the status.
RunResult run_one(const RunConfig& config);

/// Runs every configuration, up to `jobs` at a time. Output order matches
/// input order.
std::vector<RunResult> run_benchmark(const std::vector<RunConfig>& configs,
                                     int jobs = 1);

/// A batch as read from a config file: one base configuration crossed with
/// solvers and seeds.
struct BatchConfig {
  RunConfig base;
  std::vector<Solver> solvers{Solver::kAdmmInertial};
  std::vector<std::uint64_t> seeds{0};
  int jobs = 1;
};

std::vector<RunConfig> expand(const BatchConfig& batch);

/// INI-style config with sections [problem], [run], [admm], [fista].
BatchConfig parse_config(std::istream& in);
BatchConfig load_config(const std::filesystem::path& path);

/// exp(mean(log v)). Throws EmptyInput on no values, DomainError on a
/// negative value.
double geometric_mean(const std::vector<double>& values);

struct Metrics {
  double outer = 0.0;
  double inner = 0.0;
  double seconds = 0.0;
};

struct Ratio {
  std::string numerator;
  std::string denominator;
  Metrics value;
};

struct SummaryRow {
  std::string problem;
  std::map<std::string, Metrics> by_solver;  ///< converged runs only
  std::vector<Ratio> ratios;
};

struct Summary {
  std::vector<std::string> solvers;
  std::vector<SummaryRow> rows;
  std::map<std::string, Metrics> geometric_mean;  ///< over converged rows
  std::vector<Ratio> ratios;                      ///< of geometric means
};

/// Groups by problem; repeated (problem, solver) rows are averaged. Ratio
/// columns pair admm_inertial/admm_plain, admm_inertial/fista and
/// admm_plain/fista when both sides are present. Throws EmptyInput.
Summary summarize(const std::vector<RunResult>& records);

std::string format_summary(const Summary& summary);

}  // namespace irsplit::bench
