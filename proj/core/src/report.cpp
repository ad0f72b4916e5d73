#include "irsplit/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace irsplit::bench {

using nlohmann::json;

namespace {

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json& j) {
  return j.is_null() ? std::nan("") : j.get<double>();
}

json metrics_json(const Metrics& m) {
  return {{"outer", number_or_null(m.outer)},
          {"inner", number_or_null(m.inner)},
          {"seconds", number_or_null(m.seconds)}};
}

json ratios_json(const std::vector<Ratio>& ratios) {
  json out = json::array();
  for (const auto& r : ratios) {
    out.push_back({{"numerator", r.numerator},
                   {"denominator", r.denominator},
                   {"value", metrics_json(r.value)}});
  }
  return out;
}

json summary_json(const Summary& s) {
  json rows = json::array();
  for (const auto& row : s.rows) {
    json by_solver = json::object();
    for (const auto& [solver, m] : row.by_solver) {
      by_solver[solver] = metrics_json(m);
    }
    rows.push_back({{"problem", row.problem},
                    {"solvers", by_solver},
                    {"ratios", ratios_json(row.ratios)}});
  }
  json geo = json::object();
  for (const auto& [solver, m] : s.geometric_mean) geo[solver] = metrics_json(m);
  return {{"solvers", s.solvers},
          {"rows", rows},
          {"geometric_mean", geo},
          {"ratios", ratios_json(s.ratios)}};
}

json problem_json(const ProblemSource& src) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SyntheticLassoSpec>) {
          return {{"type", "synthetic_lasso"}, {"m", p.m}, {"n", p.n},
                  {"density", p.density}, {"noise", p.noise}, {"nu", p.nu},
                  {"normalize", p.normalize}};
        } else if constexpr (std::is_same_v<T, SyntheticLogisticSpec>) {
          return {{"type", "synthetic_logistic"}, {"q", p.q}, {"n", p.n},
                  {"nu_fraction", p.nu_fraction}};
        } else if constexpr (std::is_same_v<T, LibsvmSpec>) {
          return {{"type", "libsvm"}, {"path", p.path.string()},
                  {"nu", p.nu}, {"n_features", p.n_features}};
        } else {
          return {{"type", "csv"}, {"path_a", p.path_a.string()},
                  {"path_b", p.path_b.string()}, {"nu", p.nu},
                  {"skip_header", p.skip_header}};
        }
      },
      src);
}

json config_json(const BatchConfig& batch) {
  const RunConfig& b = batch.base;
  json solvers = json::array();
  for (Solver s : batch.solvers) solvers.push_back(to_string(s));
  return {
      {"problem", problem_json(b.problem)},
      {"name", b.name},
      {"solvers", solvers},
      {"seeds", batch.seeds},
      {"repetitions", b.repetitions},
      {"jobs", batch.jobs},
      {"admm",
       {{"alpha", b.admm.core.alpha},
        {"beta", b.admm.core.beta},
        {"sigma", b.admm.core.sigma},
        {"rho_lo", b.admm.core.rho_lo},
        {"rho_bar", b.admm.core.rho_hi},
        {"c", b.admm.c},
        {"criterion", admm::to_string(b.admm.criterion)},
        {"epsilon", b.admm.epsilon},
        {"inner_budget", b.admm.inner_budget},
        {"max_outer", b.admm.max_outer}}},
      {"fista",
       {{"l0", b.fista.initial_lipschitz},
        {"eta", b.fista.backtrack_factor},
        {"epsilon", b.fista.epsilon},
        {"max_iters", b.fista.max_iters},
        {"monotone", b.fista.monotone}}},
  };
}

// Shortest text that reads back to the same double.
std::string csv_number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<RunResult>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_field(r.problem) << ',' << csv_field(r.solver) << ','
        << r.record.outer_iters << ',' << r.record.inner_iters_total << ','
        << csv_number(r.record.wall_seconds) << ','
        << csv_number(r.record.final_kkt) << ','
        << csv_number(r.record.final_objective) << ','
        << to_string(r.record.status) << '\n';
  }
}

std::string to_json(const std::vector<RunResult>& records,
                    const BatchConfig* config) {
  json recs = json::array();
  for (const auto& r : records) {
    recs.push_back({{"problem", r.problem},
                    {"solver", r.solver},
                    {"seed", r.seed},
                    {"outer", r.record.outer_iters},
                    {"inner", r.record.inner_iters_total},
                    {"seconds", number_or_null(r.record.wall_seconds)},
                    {"kkt", number_or_null(r.record.final_kkt)},
                    {"objective", number_or_null(r.record.final_objective)},
                    {"status", to_string(r.record.status)},
                    {"message", r.message}});
  }
  json doc = {{"schema_version", kReportSchemaVersion}, {"records", recs}};
  if (config != nullptr) doc["config"] = config_json(*config);
  if (!records.empty()) doc["summary"] = summary_json(summarize(records));
  return doc.dump(2);
}

std::vector<RunResult> records_from_json(const std::string& text) {
  std::vector<RunResult> out;
  try {
    const json doc = json::parse(text);
    const int version = doc.at("schema_version").get<int>();
    if (version != kReportSchemaVersion) {
      throw ParseError("report: unsupported schema_version " +
                           std::to_string(version),
                       0);
    }
    for (const auto& j : doc.at("records")) {
      RunResult r;
      r.problem = j.at("problem").get<std::string>();
      r.solver = j.at("solver").get<std::string>();
      r.seed = j.value("seed", std::uint64_t{0});
      r.record.outer_iters = j.at("outer").get<std::int64_t>();
      r.record.inner_iters_total = j.at("inner").get<std::int64_t>();
      r.record.wall_seconds = number_from(j.at("seconds"));
      r.record.final_kkt = number_from(j.at("kkt"));
      r.record.final_objective = number_from(j.at("objective"));
      r.record.status = run_status_from_string(j.at("status").get<std::string>());
      r.message = j.value("message", std::string{});
      out.push_back(std::move(r));
    }
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("report: ") + e.what(), 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what(), 0);
  }
  return out;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("IRSPLIT_OUTPUT_DIR"); env && *env) {
    return env;
  }
  return std::filesystem::current_path();
}

EmittedFiles emit(const std::vector<RunResult>& records,
                  const BatchConfig* config, const std::filesystem::path& dir,
                  const std::string& stem, bool csv, bool json_out) {
  std::filesystem::create_directories(dir);
  EmittedFiles files;
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    return f;
  };
  if (csv) {
    files.csv = dir / (stem + ".csv");
    auto f = open(*files.csv);
    write_csv(f, records);
  }
  if (json_out) {
    files.json = dir / (stem + ".json");
    auto f = open(*files.json);
    f << to_json(records, config) << '\n';
  }
  return files;
}

}  // namespace irsplit::bench
