#include "irsplit/bench.hpp"
#include "irsplit/problems.hpp"
#include "irsplit/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace irsplit;
using namespace irsplit::bench;

namespace {

struct RunOptions {
  std::string config;
  std::string problem;
  Index m = 0, n = 0, q = 0;
  double density = 0, noise = 0, nu = 0, nu_fraction = 0;
  bool raw_scale = false;
  std::string path, path_a, path_b;
  bool skip_header = false;
  std::string solvers;
  std::string seeds;
  int instances = 0;
  int repetitions = 0;
  int jobs = 0;
  double alpha = 0, beta = 0, rho_bar = 0, sigma = 0, c = 0, epsilon = 0;
  std::string criterion;
  std::int64_t max_outer = 0;
  std::int64_t inner_budget = 0;
  std::string out_dir;
  std::string stem = "results";
  std::string format = "csv,json";
  bool quiet = false;
};

struct GenOptions {
  std::string kind = "lasso";
  Index m = 100, n = 0, q = 50;
  double density = 1.0, noise = 0.01;
  std::uint64_t seed = 0;
  bool raw_scale = false;
  std::string out_dir;
};

bool given(const CLI::App* app, const char* name) {
  return app->count(name) > 0;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

BatchConfig build_batch(const RunOptions& o, const CLI::App* app) {
  BatchConfig batch;
  if (!o.config.empty()) batch = load_config(o.config);
  RunConfig& base = batch.base;

  if (given(app, "--problem")) {
    const bool logistic = o.problem == "synthetic_logistic" || o.problem == "libsvm";
    if (o.config.empty()) {
      base.admm = logistic ? admm::logistic_defaults() : admm::lasso_defaults();
    }
    if (o.problem == "synthetic_lasso") {
      base.problem = SyntheticLassoSpec{};
    } else if (o.problem == "synthetic_logistic") {
      base.problem = SyntheticLogisticSpec{};
    } else if (o.problem == "libsvm") {
      base.problem = LibsvmSpec{};
    } else if (o.problem == "csv") {
      base.problem = CsvSpec{};
    }
  }
  std::visit(
      [&](auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SyntheticLassoSpec>) {
          if (given(app, "--m")) src.m = o.m;
          if (given(app, "--n")) src.n = o.n;
          if (given(app, "--density")) src.density = o.density;
          if (given(app, "--noise")) src.noise = o.noise;
          if (given(app, "--nu")) src.nu = o.nu;
          if (o.raw_scale) src.normalize = false;
        } else if constexpr (std::is_same_v<T, SyntheticLogisticSpec>) {
          if (given(app, "--q")) src.q = o.q;
          if (given(app, "--n")) src.n = o.n;
          if (given(app, "--nu-fraction")) src.nu_fraction = o.nu_fraction;
        } else if constexpr (std::is_same_v<T, LibsvmSpec>) {
          if (given(app, "--path")) src.path = o.path;
          if (given(app, "--nu")) src.nu = o.nu;
        } else {
          if (given(app, "--path-a")) src.path_a = o.path_a;
          if (given(app, "--path-b")) src.path_b = o.path_b;
          if (given(app, "--nu")) src.nu = o.nu;
          if (o.skip_header) src.skip_header = true;
        }
      },
      base.problem);

  if (given(app, "--solvers")) {
    batch.solvers.clear();
    for (const auto& s : split(o.solvers)) {
      batch.solvers.push_back(solver_from_string(s));
    }
  }
  if (given(app, "--seeds")) {
    batch.seeds.clear();
    for (const auto& s : split(o.seeds)) batch.seeds.push_back(std::stoull(s));
  }
  if (given(app, "--instances")) {
    const std::uint64_t first = batch.seeds.empty() ? 0 : batch.seeds.front();
    batch.seeds.clear();
    for (int i = 0; i < o.instances; ++i) batch.seeds.push_back(first + i);
  }
  if (given(app, "--repetitions")) base.repetitions = o.repetitions;
  if (given(app, "--jobs")) batch.jobs = o.jobs;

  auto& a = base.admm;
  if (given(app, "--alpha")) a.core.alpha = o.alpha;
  if (given(app, "--beta")) a.core.beta = o.beta;
  if (given(app, "--rho-bar")) a.core.rho_lo = a.core.rho_hi = o.rho_bar;
  if (given(app, "--sigma")) a.core.sigma = o.sigma;
  if (given(app, "--c")) a.c = o.c;
  if (given(app, "--epsilon")) {
    a.epsilon = o.epsilon;
    base.fista.epsilon = o.epsilon;
  }
  if (given(app, "--criterion")) {
    a.criterion = admm::criterion_from_string(o.criterion);
  }
  if (given(app, "--max-outer")) {
    a.max_outer = o.max_outer;
    base.fista.max_iters = o.max_outer;
  }
  if (given(app, "--inner-budget")) a.inner_budget = o.inner_budget;
  return batch;
}

int cmd_run(const RunOptions& o, const CLI::App* app) {
  const BatchConfig batch = build_batch(o, app);
  const auto results = run_benchmark(expand(batch), batch.jobs);

  const auto formats = split(o.format);
  const bool csv =
      std::find(formats.begin(), formats.end(), "csv") != formats.end();
  const bool json =
      std::find(formats.begin(), formats.end(), "json") != formats.end();
  const std::filesystem::path dir =
      o.out_dir.empty() ? default_output_dir() : std::filesystem::path(o.out_dir);
  const auto files = emit(results, &batch, dir, o.stem, csv, json);

  bool all_converged = true;
  for (const auto& r : results) {
    if (r.record.status != RunStatus::kConverged) {
      all_converged = false;
      std::cerr << r.problem << " " << r.solver << ": "
                << to_string(r.record.status);
      if (!r.message.empty()) std::cerr << " (" << r.message << ")";
      std::cerr << "\n";
    }
  }
  if (!o.quiet && !results.empty()) std::cout << format_summary(summarize(results));
  if (files.csv) std::cout << "wrote " << files.csv->string() << "\n";
  if (files.json) std::cout << "wrote " << files.json->string() << "\n";
  return all_converged ? 0 : 1;
}

int cmd_summarize(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto records = records_from_json(buf.str());
  std::cout << format_summary(summarize(records));
  for (const auto& r : records) {
    if (r.record.status != RunStatus::kConverged) return 1;
  }
  return 0;
}

int cmd_gen(const GenOptions& o) {
  const std::filesystem::path dir =
      o.out_dir.empty() ? default_output_dir() : std::filesystem::path(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::string tag = "-s" + std::to_string(o.seed);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    std::cout << "wrote " << p.string() << "\n";
    return f;
  };
  if (o.kind == "lasso") {
    const auto inst = synthetic_lasso(o.m, o.n > 0 ? o.n : 300, o.density,
                                      o.noise, o.seed, 0.0, !o.raw_scale);
    auto fa = open(dir / ("lasso" + tag + "-A.csv"));
    write_dense_csv(fa, inst.problem.a().to_dense());
    auto fb = open(dir / ("lasso" + tag + "-b.csv"));
    write_dense_csv(fb, inst.problem.b());
    std::cout << "nu " << inst.problem.nu() << "\n";
  } else {
    const auto inst = synthetic_logistic(o.q, o.n > 0 ? o.n : 31, o.seed);
    auto f = open(dir / ("logistic" + tag + ".svm"));
    write_libsvm(f, inst.problem.features(), inst.problem.labels());
    std::cout << "nu " << inst.problem.nu() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inertial relaxed splitting benchmark harness"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run a benchmark batch");
  run->add_option("--config", ro.config, "INI config file")
      ->check(CLI::ExistingFile);
  run->add_option("--problem", ro.problem, "Problem source")
      ->check(CLI::IsMember(
          {"synthetic_lasso", "synthetic_logistic", "libsvm", "csv"}));
  run->add_option("--m", ro.m, "LASSO rows");
  run->add_option("--n", ro.n, "Number of variables");
  run->add_option("--q", ro.q, "Logistic samples");
  run->add_option("--density", ro.density, "Design matrix density");
  run->add_option("--noise", ro.noise, "Observation noise level");
  run->add_option("--nu", ro.nu, "Regularization weight");
  run->add_option("--nu-fraction", ro.nu_fraction,
                  "Logistic nu as a fraction of nu_max");
  run->add_flag("--raw-scale", ro.raw_scale,
                "Do not normalize synthetic LASSO columns");
  run->add_option("--path", ro.path, "LIBSVM file");
  run->add_option("--path-a", ro.path_a, "CSV file for A");
  run->add_option("--path-b", ro.path_b, "CSV file for b");
  run->add_flag("--skip-header", ro.skip_header, "Skip one CSV header row");
  run->add_option("--solvers", ro.solvers,
                  "Comma list of admm_inertial, admm_plain, fista");
  run->add_option("--seeds", ro.seeds, "Comma list of seeds");
  run->add_option("--instances", ro.instances,
                  "Number of consecutive seeds from the first seed");
  run->add_option("--repetitions", ro.repetitions, "Timed repetitions");
  run->add_option("--jobs", ro.jobs, "Concurrent runs");
  run->add_option("--alpha", ro.alpha, "Inertial cap");
  run->add_option("--beta", ro.beta, "Coupling parameter");
  run->add_option("--rho-bar", ro.rho_bar, "Relaxation");
  run->add_option("--sigma", ro.sigma, "Relative error tolerance");
  run->add_option("--c", ro.c, "Penalty parameter");
  run->add_option("--epsilon", ro.epsilon, "KKT tolerance");
  run->add_option("--criterion", ro.criterion, "max or sum")
      ->check(CLI::IsMember({"max", "sum"}));
  run->add_option("--max-outer", ro.max_outer, "Outer iteration budget");
  run->add_option("--inner-budget", ro.inner_budget,
                  "Inner iteration budget per outer step");
  run->add_option("--out", ro.out_dir,
                  "Output directory (default $IRSPLIT_OUTPUT_DIR or .)");
  run->add_option("--stem", ro.stem, "Output file stem");
  run->add_option("--format", ro.format, "csv, json or csv,json");
  run->add_flag("--quiet", ro.quiet, "Do not print the summary table");

  std::string report;
  auto* sum = app.add_subcommand("summarize", "Recompute tables from JSON");
  sum->add_option("report", report, "JSON report")
      ->required()
      ->check(CLI::ExistingFile);

  GenOptions go;
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset");
  gen->add_option("kind", go.kind, "lasso or logistic")
      ->check(CLI::IsMember({"lasso", "logistic"}));
  gen->add_option("--m", go.m, "LASSO rows");
  gen->add_option("--n", go.n, "Number of variables (300 lasso, 31 logistic)");
  gen->add_option("--q", go.q, "Logistic samples");
  gen->add_option("--density", go.density, "Design matrix density");
  gen->add_option("--noise", go.noise, "Observation noise level");
  gen->add_option("--seed", go.seed, "Seed");
  gen->add_flag("--raw-scale", go.raw_scale, "Do not normalize columns");
  gen->add_option("--out", go.out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(ro, run);
    if (*sum) return cmd_summarize(report);
    if (*gen) return cmd_gen(go);
  } catch (const std::exception& e) {
    std::cerr << "irsplit: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
