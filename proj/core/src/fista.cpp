#include "irsplit/subproblem.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace irsplit {

void validate(const FistaConfig& config) {
  if (!(config.initial_lipschitz > 0.0)) throw ParamError("L0 > 0 violated");
  if (!(config.backtrack_factor > 1.0)) throw ParamError("eta > 1 violated");
  if (!(config.epsilon > 0.0)) throw ParamError("epsilon > 0 violated");
  if (config.max_iters < 0) throw ParamError("max_iters >= 0 violated");
}

FistaRun fista_solve(const CompositeProblem& problem, const FistaConfig& config,
                     const Point& x0) {
  validate(config);
  if (x0.size() != problem.dim()) {
    throw DimensionMismatch("fista_solve: x0 length");
  }
  require_finite(x0, "fista_solve x0");
  const auto t0 = std::chrono::steady_clock::now();

  FistaRun run;
  Point x = x0;
  Point y = x0;
  double t = 1.0;
  double lip = config.initial_lipschitz;
  double fx = problem.objective(x);
  std::int64_t backtracks = 0;

  auto finish = [&](std::int64_t k, double kkt, RunStatus status) {
    run.solution = x;
    run.final_lipschitz = lip;
    run.record.outer_iters = k;
    run.record.inner_iters_total = backtracks;
    run.record.final_kkt = kkt;
    run.record.final_objective = fx;
    run.record.status = status;
    run.record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  };

  for (std::int64_t k = 0;; ++k) {
    const double kkt = problem.kkt_residual(x);
    if (kkt <= config.epsilon) {
      finish(k, kkt, RunStatus::kConverged);
      return run;
    }
    if (k == config.max_iters) {
      finish(k, kkt, RunStatus::kBudgetExceeded);
      throw BudgetExceeded<FistaRun>("fista: iteration budget exhausted",
                                     std::move(run), k, backtracks);
    }

    const double fy = problem.smooth_value(y);
    const Point gy = problem.smooth_gradient(y);
    // Once steps are tiny the model gap is below the rounding error in f and
    // would otherwise inflate L without bound.
    const double noise =
        16.0 * std::numeric_limits<double>::epsilon() * (std::abs(fy) + 1.0);
    Point z;
    for (;;) {
      z = problem.prox_nonsmooth(y - gy / lip, 1.0 / lip);
      const Point dz = z - y;
      const double model = fy + gy.dot(dz) + 0.5 * lip * dz.squaredNorm();
      if (problem.smooth_value(z) <= model + noise) break;
      lip *= config.backtrack_factor;
      ++backtracks;
      if (!std::isfinite(lip)) throw Error("fista: Lipschitz estimate overflow");
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double fz = problem.objective(z);
    if (config.monotone) {
      const bool take = fz <= fx;
      const Point x_new = take ? z : x;
      y = x_new + (t / t_next) * (z - x_new) + ((t - 1.0) / t_next) * (x_new - x);
      x = x_new;
      if (take) fx = fz;
    } else {
      y = z + ((t - 1.0) / t_next) * (z - x);
      x = std::move(z);
      fx = fz;
    }
    t = t_next;
    if (config.record_objective) run.objective_trace.push_back(fx);
  }
}

FistaRun fista_solve(const CompositeProblem& problem,
                     const FistaConfig& config) {
  return fista_solve(problem, config, Point::Zero(problem.dim()));
}

}  // namespace irsplit
