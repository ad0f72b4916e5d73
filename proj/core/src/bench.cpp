#include "irsplit/bench.hpp"
#include "irsplit/problems.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

namespace irsplit::bench {

namespace pt = boost::property_tree;

const char* to_string(Solver s) noexcept {
  switch (s) {
    case Solver::kAdmmInertial: return "admm_inertial";
    case Solver::kAdmmPlain: return "admm_plain";
    case Solver::kFista: return "fista";
  }
  return "?";
}

Solver solver_from_string(const std::string& s) {
  if (s == "admm_inertial") return Solver::kAdmmInertial;
  if (s == "admm_plain") return Solver::kAdmmPlain;
  if (s == "fista") return Solver::kFista;
  throw ParamError("unknown solver '" + s + "'");
}

admm::ADMMParams effective_admm_params(const RunConfig& config) {
  admm::ADMMParams p = config.admm;
  if (config.solver == Solver::kAdmmPlain) {
    p.core.alpha = 0.0;
    p.core.rho_lo = 1.0;
    p.core.rho_hi = 1.0;
  }
  return p;
}

void validate(const RunConfig& config) {
  if (config.repetitions < 1) throw ParamError("repetitions >= 1 violated");
  if (config.solver == Solver::kFista) {
    validate(config.fista);
  } else {
    admm::validate(effective_admm_params(config));
  }
  std::visit(
      [](const auto& src) {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SyntheticLassoSpec>) {
          if (src.m < 1 || src.n < 1) throw ParamError("m, n >= 1 violated");
          if (!(src.density > 0.0 && src.density <= 1.0)) {
            throw ParamError("density in (0, 1] violated");
          }
        } else if constexpr (std::is_same_v<T, SyntheticLogisticSpec>) {
          if (src.q < 2 || src.n < 2) throw ParamError("q, n >= 2 violated");
        } else if constexpr (std::is_same_v<T, LibsvmSpec>) {
          if (src.path.empty()) throw ParamError("libsvm path is empty");
        } else {
          if (src.path_a.empty() || src.path_b.empty()) {
            throw ParamError("csv paths are empty");
          }
        }
      },
      config.problem);
}

std::string problem_label(const RunConfig& config) {
  if (!config.name.empty()) return config.name;
  const std::string seed = "-s" + std::to_string(config.seed);
  return std::visit(
      [&](const auto& src) -> std::string {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SyntheticLassoSpec>) {
          return "lasso-" + std::to_string(src.m) + "x" +
                 std::to_string(src.n) + seed;
        } else if constexpr (std::is_same_v<T, SyntheticLogisticSpec>) {
          return "logistic-" + std::to_string(src.q) + "x" +
                 std::to_string(src.n) + seed;
        } else if constexpr (std::is_same_v<T, LibsvmSpec>) {
          return src.path.stem().string();
        } else {
          return src.path_a.stem().string();
        }
      },
      config.problem);
}

namespace {

std::unique_ptr<CompositeProblem> build_problem(const RunConfig& config) {
  return std::visit(
      [&](const auto& src) -> std::unique_ptr<CompositeProblem> {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, SyntheticLassoSpec>) {
          auto inst = synthetic_lasso(src.m, src.n, src.density, src.noise,
                                      config.seed, src.nu, src.normalize);
          return std::make_unique<LassoProblem>(std::move(inst.problem));
        } else if constexpr (std::is_same_v<T, SyntheticLogisticSpec>) {
          auto inst =
              synthetic_logistic(src.q, src.n, config.seed, src.nu_fraction);
          return std::make_unique<LogisticProblem>(std::move(inst.problem));
        } else if constexpr (std::is_same_v<T, LibsvmSpec>) {
          return std::make_unique<LogisticProblem>(
              load_libsvm(src.path, src.nu, src.n_features));
        } else {
          return std::make_unique<LassoProblem>(load_dense_csv(
              src.path_a, src.path_b, src.nu, src.skip_header));
        }
      },
      config.problem);
}

RunRecord solve_once(const CompositeProblem& problem, const RunConfig& config) {
  if (config.solver == Solver::kFista) {
    try {
      return fista_solve(problem, config.fista).record;
    } catch (const BudgetExceeded<FistaRun>& e) {
      RunRecord r = e.last().record;
      r.status = RunStatus::kBudgetExceeded;
      return r;
    }
  }
  try {
    return admm::run_admm(problem, effective_admm_params(config)).record;
  } catch (const BudgetExceeded<admm::AdmmRun>& e) {
    RunRecord r = e.last().record;
    r.status = RunStatus::kBudgetExceeded;
    return r;
  }
}

}  // namespace

RunResult run_one(const RunConfig& config) {
  RunResult out;
  out.solver = to_string(config.solver);
  out.seed = config.seed;
  try {
    out.problem = problem_label(config);
    validate(config);
    const auto problem = build_problem(config);
    if (config.repetitions > 1) solve_once(*problem, config);  // warm-up
    double seconds = 0.0;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      out.record = solve_once(*problem, config);
      seconds += out.record.wall_seconds;
    }
    out.record.wall_seconds = seconds / config.repetitions;
  } catch (const std::exception& e) {
    out.record = RunRecord{};
    out.record.status = RunStatus::kError;
    out.record.final_kkt = std::nan("");
    out.record.final_objective = std::nan("");
    out.message = e.what();
  }
  return out;
}

std::vector<RunResult> run_benchmark(const std::vector<RunConfig>& configs,
                                     int jobs) {
  std::vector<RunResult> results(configs.size());
  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), 1, configs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      results[i] = run_one(configs[i]);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        results[i] = run_one(configs[i]);
      }
    });
  }
  for (auto& t : pool) t.join();
  return results;
}

std::vector<RunConfig> expand(const BatchConfig& batch) {
  std::vector<RunConfig> out;
  for (std::uint64_t seed : batch.seeds) {
    for (Solver s : batch.solvers) {
      RunConfig c = batch.base;
      c.solver = s;
      c.seed = seed;
      out.push_back(std::move(c));
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

template <class T>
void read(const pt::ptree& tree, const char* key, T& target) {
  if (auto v = tree.get_optional<T>(key)) target = *v;
}

}  // namespace

BatchConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }

  BatchConfig batch;
  RunConfig& base = batch.base;
  try {
    const std::string type =
        tree.get<std::string>("problem.type", "synthetic_lasso");
    if (type == "synthetic_lasso") {
      SyntheticLassoSpec s;
      read(tree, "problem.m", s.m);
      read(tree, "problem.n", s.n);
      read(tree, "problem.density", s.density);
      read(tree, "problem.noise", s.noise);
      read(tree, "problem.nu", s.nu);
      read(tree, "problem.normalize", s.normalize);
      base.problem = s;
    } else if (type == "synthetic_logistic") {
      base.admm = admm::logistic_defaults();
      SyntheticLogisticSpec s;
      read(tree, "problem.q", s.q);
      read(tree, "problem.n", s.n);
      read(tree, "problem.nu_fraction", s.nu_fraction);
      base.problem = s;
    } else if (type == "libsvm") {
      base.admm = admm::logistic_defaults();
      LibsvmSpec s;
      s.path = tree.get<std::string>("problem.path");
      s.nu = tree.get<double>("problem.nu");
      read(tree, "problem.n_features", s.n_features);
      base.problem = s;
    } else if (type == "csv") {
      CsvSpec s;
      s.path_a = tree.get<std::string>("problem.path_a");
      s.path_b = tree.get<std::string>("problem.path_b");
      s.nu = tree.get<double>("problem.nu");
      read(tree, "problem.skip_header", s.skip_header);
      base.problem = s;
    } else {
      throw ParamError("config: unknown problem type '" + type + "'");
    }
    read(tree, "problem.name", base.name);

    if (auto v = tree.get_optional<std::string>("run.solvers")) {
      batch.solvers.clear();
      for (const auto& s : split_list(*v)) {
        batch.solvers.push_back(solver_from_string(s));
      }
    }
    if (auto v = tree.get_optional<std::string>("run.seeds")) {
      batch.seeds.clear();
      for (const auto& s : split_list(*v)) batch.seeds.push_back(std::stoull(s));
    } else {
      std::uint64_t seed = 0;
      int instances = 1;
      read(tree, "run.seed", seed);
      read(tree, "run.instances", instances);
      batch.seeds.clear();
      for (int i = 0; i < instances; ++i) batch.seeds.push_back(seed + i);
    }
    read(tree, "run.repetitions", base.repetitions);
    read(tree, "run.jobs", batch.jobs);

    auto& a = base.admm;
    read(tree, "admm.alpha", a.core.alpha);
    read(tree, "admm.beta", a.core.beta);
    read(tree, "admm.sigma", a.core.sigma);
    read(tree, "admm.rho_bar", a.core.rho_hi);
    a.core.rho_lo = a.core.rho_hi;
    read(tree, "admm.rho_lo", a.core.rho_lo);
    read(tree, "admm.c", a.c);
    read(tree, "admm.epsilon", a.epsilon);
    read(tree, "admm.inner_budget", a.inner_budget);
    read(tree, "admm.max_outer", a.max_outer);
    if (auto v = tree.get_optional<std::string>("admm.criterion")) {
      a.criterion = admm::criterion_from_string(*v);
    }

    auto& f = base.fista;
    read(tree, "fista.l0", f.initial_lipschitz);
    read(tree, "fista.eta", f.backtrack_factor);
    read(tree, "fista.epsilon", f.epsilon);
    read(tree, "fista.max_iters", f.max_iters);
    read(tree, "fista.monotone", f.monotone);
  } catch (const pt::ptree_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  return batch;
}

BatchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_config(in);
}

double geometric_mean(const std::vector<double>& values) {
  if (values.empty()) throw EmptyInput("geometric_mean: no values");
  double acc = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) throw DomainError("geometric_mean: negative value");
    acc += std::log(v);
  }
  return std::exp(acc / static_cast<double>(values.size()));
}

namespace {

Metrics ratio_of(const Metrics& num, const Metrics& den) {
  return {num.outer / den.outer, num.inner / den.inner,
          num.seconds / den.seconds};
}

std::vector<Ratio> pair_ratios(const std::map<std::string, Metrics>& m) {
  static const std::pair<const char*, const char*> kPairs[] = {
      {"admm_inertial", "admm_plain"},
      {"admm_inertial", "fista"},
      {"admm_plain", "fista"},
  };
  std::vector<Ratio> out;
  for (const auto& [num, den] : kPairs) {
    const auto a = m.find(num);
    const auto b = m.find(den);
    if (a != m.end() && b != m.end()) {
      out.push_back({num, den, ratio_of(a->second, b->second)});
    }
  }
  return out;
}

int solver_rank(const std::string& s) {
  for (Solver k : {Solver::kAdmmInertial, Solver::kAdmmPlain, Solver::kFista}) {
    if (s == to_string(k)) return static_cast<int>(k);
  }
  return 100;
}

}  // namespace

Summary summarize(const std::vector<RunResult>& records) {
  if (records.empty()) throw EmptyInput("summarize: no records");
  Summary out;

  struct Acc {
    Metrics sum;
    int count = 0;
  };
  std::vector<std::string> problems;
  std::map<std::string, std::map<std::string, Acc>> acc;
  for (const auto& r : records) {
    if (std::find(problems.begin(), problems.end(), r.problem) ==
        problems.end()) {
      problems.push_back(r.problem);
    }
    if (std::find(out.solvers.begin(), out.solvers.end(), r.solver) ==
        out.solvers.end()) {
      out.solvers.push_back(r.solver);
    }
    if (r.record.status != RunStatus::kConverged) continue;
    Acc& a = acc[r.problem][r.solver];
    a.sum.outer += static_cast<double>(r.record.outer_iters);
    a.sum.inner += static_cast<double>(r.record.inner_iters_total);
    a.sum.seconds += r.record.wall_seconds;
    ++a.count;
  }
  std::stable_sort(out.solvers.begin(), out.solvers.end(),
                   [](const std::string& a, const std::string& b) {
                     return solver_rank(a) < solver_rank(b);
                   });

  std::map<std::string, std::vector<Metrics>> per_solver;
  for (const auto& name : problems) {
    SummaryRow row;
    row.problem = name;
    for (const auto& [solver, a] : acc[name]) {
      const double n = a.count;
      const Metrics m{a.sum.outer / n, a.sum.inner / n, a.sum.seconds / n};
      row.by_solver[solver] = m;
      per_solver[solver].push_back(m);
    }
    row.ratios = pair_ratios(row.by_solver);
    out.rows.push_back(std::move(row));
  }
  for (const auto& [solver, rows] : per_solver) {
    std::vector<double> outer, inner, seconds;
    for (const auto& m : rows) {
      outer.push_back(m.outer);
      inner.push_back(m.inner);
      seconds.push_back(m.seconds);
    }
    out.geometric_mean[solver] = {geometric_mean(outer), geometric_mean(inner),
                                  geometric_mean(seconds)};
  }
  out.ratios = pair_ratios(out.geometric_mean);
  return out;
}

std::string format_summary(const Summary& summary) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-14s %12s %14s %12s\n", "problem",
                "solver", "outer", "inner", "seconds");
  out += line;
  auto emit_row = [&](const std::string& label,
                      const std::map<std::string, Metrics>& by_solver) {
    for (const auto& solver : summary.solvers) {
      const auto it = by_solver.find(solver);
      if (it == by_solver.end()) {
        std::snprintf(line, sizeof line, "%-28s %-14s %12s %14s %12s\n",
                      label.c_str(), solver.c_str(), "-", "-", "-");
      } else {
        std::snprintf(line, sizeof line, "%-28s %-14s %12.2f %14.2f %12.4f\n",
                      label.c_str(), solver.c_str(), it->second.outer,
                      it->second.inner, it->second.seconds);
      }
      out += line;
    }
  };
  for (const auto& row : summary.rows) emit_row(row.problem, row.by_solver);
  emit_row("geometric mean", summary.geometric_mean);
  for (const auto& r : summary.ratios) {
    const std::string label = r.numerator + " / " + r.denominator;
    std::snprintf(line, sizeof line, "%-43s %12.3f %14.3f %12.3f\n",
                  label.c_str(), r.value.outer, r.value.inner,
                  r.value.seconds);
    out += line;
  }
  return out;
}

}  // namespace irsplit::bench
