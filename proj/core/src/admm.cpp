#include "irsplit/admm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace irsplit::admm {

const char* to_string(Criterion c) noexcept {
  return c == Criterion::kMaxForm ? "max" : "sum";
}

Criterion criterion_from_string(const std::string& s) {
  if (s == "max" || s == "maxform" || s == "MaxForm") return Criterion::kMaxForm;
  if (s == "sum" || s == "sumsquares" || s == "SumSquares") {
    return Criterion::kSumSquares;
  }
  throw Error("unknown acceptance criterion '" + s + "'");
}

void validate(const ADMMParams& params) {
  if (!(params.c > 0.0)) throw ParamError("c > 0 violated");
  if (!(params.epsilon > 0.0)) throw ParamError("epsilon > 0 violated");
  if (params.inner_budget <= 0) throw ParamError("inner_budget > 0 violated");
  if (params.max_outer < 0) throw ParamError("max_outer >= 0 violated");
  if (params.kkt_stride <= 0) throw ParamError("kkt_stride > 0 violated");
  hpp::validate_params(params.core);
}

ADMMParams lasso_defaults() {
  ADMMParams p;
  p.c = 1.0;
  p.core.sigma = 0.99;
  p.core.alpha = 0.18966;
  p.core.beta = 0.18976;
  p.core.rho_lo = p.core.rho_hi = 1.4882;
  p.criterion = Criterion::kMaxForm;
  p.epsilon = 1e-6;
  return p;
}

ADMMParams logistic_defaults() {
  ADMMParams p = lasso_defaults();
  p.core.alpha = 0.1;
  p.core.beta = 0.1001;
  p.core.rho_lo = p.core.rho_hi = 1.7606;
  return p;
}

PrimalDualTriple admm_extrapolate(const PrimalDualTriple& cur,
                                  const PrimalDualTriple& prev,
                                  double alpha_k) {
  return {hpp::extrapolate(cur.x, prev.x, alpha_k),
          hpp::extrapolate(cur.z, prev.z, alpha_k),
          hpp::extrapolate(cur.p, prev.p, alpha_k)};
}

Point multiplier_candidate(const Point& p_hat, const Point& x_l,
                           const Point& z_hat, const Point& y_l, double c) {
  return p_hat + c * (x_l - z_hat) - y_l;
}

bool admm_acceptance(const Point& y_l, const Point& p_l, const Point& p_hat,
                     const Point& z_l, const Point& z_hat, const Point& x_l,
                     double c, double sigma, Criterion criterion) {
  const double u = (p_l - p_hat - c * (z_l - z_hat)).norm();
  const double v = c * (x_l - z_l).norm();
  if (criterion == Criterion::kMaxForm) {
    return y_l.norm() <= sigma * std::max(u, v);
  }
  return y_l.squaredNorm() <= sigma * sigma * (u * u + v * v);
}

Point z_subproblem(const Point& p_l, const Point& x_l, double c,
                   const ShiftedProxG& prox) {
  return prox.solve(p_l, x_l, c);
}

double theta_admm(const PrimalDualTriple& hat, const Point& x_l,
                  const Point& z_l, const Point& p_l, double c) {
  const Point d = x_l - z_l;
  const double dd = d.squaredNorm();
  if (dd == 0.0) throw ZeroDenominator("theta_admm: x = z");
  return (c * (hat.z - z_l) - (hat.p - p_l)).dot(d) / (c * dd);
}

Point p_update(const Point& p_hat, const Point& z_hat, const Point& z_next,
               const Point& x_next, double theta, double rho_k, double c) {
  const double rt = rho_k * theta;
  return p_hat + c * ((1.0 - rt) * z_next + rt * x_next - z_hat);
}

namespace {

class AdaptedBSession final : public dr::BSession {
 public:
  AdaptedBSession(std::unique_ptr<FSession> inner, Point r, Point b,
                  double gamma)
      : inner_(std::move(inner)), r_(std::move(r)), b_(std::move(b)),
        gamma_(gamma) {}

  std::pair<Point, Point> next() override {
    auto [x, y] = inner_->next();
    Point b_out = y + b_ - (x - r_) / gamma_;
    return {std::move(x), std::move(b_out)};
  }

 private:
  std::unique_ptr<FSession> inner_;
  Point r_;
  Point b_;
  double gamma_;
};

}  // namespace

std::unique_ptr<dr::BSession> FToBAdapter::open(const Point& r, const Point& b,
                                                double gamma,
                                                const Point& s_bar,
                                                const Point& /*b_bar*/) {
  auto session = fproc_.open(-b, r, 1.0 / gamma, s_bar);
  return std::make_unique<AdaptedBSession>(std::move(session), r, b, gamma);
}

dr::SplitTriple embed_to_dr(const PrimalDualTriple& triple) {
  return {triple.x, -triple.p, triple.z};
}

AdmmOuterResult admm_outer_step(std::int64_t k, const PrimalDualTriple& cur,
                                const PrimalDualTriple& prev,
                                const ADMMParams& params, double alpha_k,
                                double rho_k, FProcedure& fproc,
                                const ShiftedProxG& prox, bool record_trials) {
  const double c = params.c;
  AdmmStepInfo info;
  info.k = k;
  info.hat = admm_extrapolate(cur, prev, alpha_k);
  const auto& hat = info.hat;

  auto session = fproc.open(hat.p, hat.z, c, hat.x);
  bool accepted = false;
  InnerTrial trial;
  std::int64_t l = 0;
  while (l < params.inner_budget) {
    ++l;
    auto [x_l, y_l] = session->next();
    Point p_l = multiplier_candidate(hat.p, x_l, hat.z, y_l, c);
    Point z_l = z_subproblem(p_l, x_l, c, prox);
    accepted = admm_acceptance(y_l, p_l, hat.p, z_l, hat.z, x_l, c,
                               params.core.sigma, params.criterion);
    trial = {std::move(x_l), std::move(y_l), std::move(p_l), std::move(z_l),
             accepted};
    if (record_trials) info.trials.push_back(trial);
    if (accepted) break;
  }
  if (!accepted) {
    throw BudgetExceeded<PrimalDualTriple>("admm inner loop: budget exhausted",
                                           hat, 0, params.inner_budget);
  }
  info.inner_used = l;
  if (trial.x == trial.z) return AdmmSolved{k, std::move(trial), l};

  info.multiplier_stall = (trial.p - hat.p) == c * (trial.z - hat.z);
  info.theta = theta_admm(hat, trial.x, trial.z, trial.p, c);
  if (!(info.theta > 0.0)) {
    throw Error("admm: theta <= 0 on an accepted iterate");
  }
  info.rho_k = rho_k;
  info.next.x = trial.x;
  info.next.z = trial.z;
  info.next.p =
      p_update(hat.p, hat.z, trial.z, trial.x, info.theta, rho_k, c);
  info.accepted = std::move(trial);
  return info;
}

AdmmRun run_admm(const CompositeProblem& problem, const ADMMParams& params,
                 const PrimalDualTriple& init, const AdmmObserver& observer) {
  validate(params);
  const Index n = problem.dim();
  if (init.x.size() != n || init.z.size() != n || init.p.size() != n) {
    throw DimensionMismatch("run_admm: initial triple does not match problem");
  }
  require_finite(init.x, "run_admm init x");
  require_finite(init.z, "run_admm init z");
  require_finite(init.p, "run_admm init p");

  SolverPair solvers = problem.make_solvers(params.c);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  AdmmRun run;
  PrimalDualTriple cur = init;
  PrimalDualTriple prev = init;
  std::int64_t inner_total = 0;
  auto finish = [&](const Point& z, std::int64_t outer, double kkt) {
    run.solution = z;
    run.final_triple = cur;
    run.record.outer_iters = outer;
    run.record.inner_iters_total = inner_total;
    run.record.final_kkt = kkt;
    run.record.final_objective = problem.objective(z);
    run.record.wall_seconds = elapsed();
  };

  for (std::int64_t k = 0;; ++k) {
    if (k % params.kkt_stride == 0 || k == params.max_outer) {
      const double kkt = problem.kkt_residual(cur.z);
      if (kkt <= params.epsilon) {
        finish(cur.z, k, kkt);
        return run;
      }
      if (k == params.max_outer) {
        finish(cur.z, k, kkt);
        run.record.status = RunStatus::kBudgetExceeded;
        throw BudgetExceeded<AdmmRun>("run_admm: outer budget exhausted",
                                      std::move(run), k, inner_total);
      }
    }

    AdmmOuterResult res;
    try {
      res = admm_outer_step(k, cur, prev, params, params.core.alpha,
                            params.core.rho_hi, *solvers.fprocedure,
                            *solvers.prox, observer.record_trials);
    } catch (const BudgetExceeded<PrimalDualTriple>& e) {
      inner_total += e.inner_iterations();
      finish(cur.z, k, problem.kkt_residual(cur.z));
      run.record.status = RunStatus::kBudgetExceeded;
      throw BudgetExceeded<AdmmRun>(e.what(), std::move(run), k, inner_total);
    }

    if (auto* solved = std::get_if<AdmmSolved>(&res)) {
      inner_total += solved->inner_used;
      cur = {solved->accepted.x, solved->accepted.z, solved->accepted.p};
      finish(solved->accepted.z, k + 1,
             problem.kkt_residual(solved->accepted.z));
      return run;
    }
    auto& step = std::get<AdmmStepInfo>(res);
    inner_total += step.inner_used;
    if (step.multiplier_stall) ++run.multiplier_stall_events;
    if (observer.on_step) observer.on_step(step);
    prev = std::move(cur);
    cur = std::move(step.next);
  }
}

AdmmRun run_admm(const CompositeProblem& problem, const ADMMParams& params) {
  return run_admm(problem, params, PrimalDualTriple::zeros(problem.dim()));
}

}  // namespace irsplit::admm
