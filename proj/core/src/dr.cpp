#include "irsplit/dr.hpp"

#include "irsplit/prox.hpp"

#include <chrono>
#include <string>

namespace irsplit::dr {

void validate(const DRParams& params) {
  if (!(params.gamma > 0.0)) throw ParamError("gamma > 0 violated");
  if (params.inner_budget <= 0) throw ParamError("inner_budget > 0 violated");
  hpp::validate_params(params.core);
}

Point L1Resolvent::apply(double gamma, const Point& u) const {
  return soft_threshold(u, gamma * nu_);
}

namespace {

class ResolventBSession final : public BSession {
 public:
  ResolventBSession(const ResolventMap& jb, Point target, double gamma)
      : jb_(jb), target_(std::move(target)), gamma_(gamma) {}

  std::pair<Point, Point> next() override {
    if (!cached_) {
      Point s = jb_.apply(gamma_, target_);
      Point b = (target_ - s) / gamma_;
      cached_.emplace(std::move(s), std::move(b));
    }
    return *cached_;
  }

 private:
  const ResolventMap& jb_;
  Point target_;
  double gamma_;
  std::optional<std::pair<Point, Point>> cached_;
};

}  // namespace

std::unique_ptr<BSession> ResolventBProcedure::open(const Point& r,
                                                    const Point& b,
                                                    double gamma,
                                                    const Point& /*s_bar*/,
                                                    const Point& /*b_bar*/) {
  return std::make_unique<ResolventBSession>(jb_, r + gamma * b, gamma);
}

SplitTriple dr_extrapolate(const SplitTriple& cur, const SplitTriple& prev,
                           double alpha_k) {
  return {hpp::extrapolate(cur.s, prev.s, alpha_k),
          hpp::extrapolate(cur.b, prev.b, alpha_k),
          hpp::extrapolate(cur.r, prev.r, alpha_k)};
}

AStepResult a_step(const Point& s, const Point& b, double gamma,
                   const ResolventMap& resolvent) {
  require_same_dim(s, b, "a_step");
  if (!(gamma > 0.0)) throw ParamError("a_step: gamma > 0 violated");
  AStepResult out;
  out.r = resolvent.apply(gamma, s - gamma * b);
  require_same_dim(s, out.r, "a_step resolvent output");
  out.a = (s - out.r) / gamma - b;
  return out;
}

bool dr_acceptance(const SplitTriple& hat, const Point& s, const Point& b,
                   const Point& r, double gamma, double sigma) {
  const Point target = hat.r + gamma * hat.b;
  const Point gb = gamma * b;
  const double lhs = (s + gb - target).squaredNorm();
  const double rhs =
      sigma * sigma * ((r + gb - target).squaredNorm() + (s - r).squaredNorm());
  const double floor =
      rounding_level(s.norm() + gb.norm() + target.norm());
  return lhs <= rhs + floor * floor;
}

double theta(const SplitTriple& hat, const Point& s, const Point& b,
             const Point& r, double gamma) {
  const Point v = s - r;
  const double vv = v.squaredNorm();
  if (vv == 0.0) throw ZeroDenominator("theta: s = r");
  return ((hat.r - r) + gamma * (hat.b - b)).dot(v) / vv;
}

SplitTriple dr_update(const SplitTriple& hat, const Point& s, const Point& r,
                      double theta, double rho_k, double gamma) {
  const double rt = rho_k * theta;
  SplitTriple next;
  next.s = s;
  next.r = r;
  next.b = hat.b - ((1.0 - rt) * r + rt * s - hat.r) / gamma;
  return next;
}

InnerResult inner_loop(const SplitTriple& hat, const DRParams& params,
                       BProcedure& bproc, const ResolventMap& resolvent) {
  auto session = bproc.open(hat.r, hat.b, params.gamma, hat.s, hat.b);
  SplitTriple last = hat;
  for (std::int64_t l = 1; l <= params.inner_budget; ++l) {
    auto [s, b] = session->next();
    auto [r, a] = a_step(s, b, params.gamma, resolvent);
    if (dr_acceptance(hat, s, b, r, params.gamma, params.core.sigma)) {
      return {std::move(s), std::move(b), std::move(r), std::move(a), l};
    }
    last = {std::move(s), std::move(b), std::move(r)};
  }
  throw BudgetExceeded<SplitTriple>("dr inner loop: budget exhausted",
                                    std::move(last), 0, params.inner_budget);
}

DrOuterResult dr_outer_step(std::int64_t k, const SplitTriple& cur,
                            const SplitTriple& prev, const DRParams& params,
                            double alpha_k, double rho_k, BProcedure& bproc,
                            const ResolventMap& resolvent,
                            double sr_tolerance) {
  DrStepInfo info;
  info.k = k;
  info.hat = dr_extrapolate(cur, prev, alpha_k);
  info.accepted = inner_loop(info.hat, params, bproc, resolvent);
  const auto& acc = info.accepted;
  if ((acc.s - acc.r).norm() <= sr_tolerance) {
    return DrSolved{k, std::move(info.accepted)};
  }
  info.theta = theta(info.hat, acc.s, acc.b, acc.r, params.gamma);
  if (!(info.theta > 0.0)) {
    throw Error("dr: theta <= 0 on an accepted iterate");
  }
  info.rho_k = rho_k;
  info.next =
      dr_update(info.hat, acc.s, acc.r, info.theta, rho_k, params.gamma);
  return info;
}

DrRun run_dr(const SplitTriple& init, const DRParams& params,
             BProcedure& bproc, const ResolventMap& resolvent,
             const DrStop& stop, const DrObserver& observer) {
  validate(params);
  require_same_dim(init.s, init.b, "run_dr init");
  require_same_dim(init.s, init.r, "run_dr init");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  SplitTriple cur = init;
  SplitTriple prev = init;
  DrRun run;
  std::int64_t inner_total = 0;
  for (std::int64_t k = 0; k < stop.max_outer; ++k) {
    DrOuterResult res =
        dr_outer_step(k, cur, prev, params, params.core.alpha,
                      params.core.rho_hi, bproc, resolvent, stop.sr_tolerance);
    if (auto* solved = std::get_if<DrSolved>(&res)) {
      inner_total += solved->accepted.inner_used;
      run.solution = solved->accepted.r;
      run.final_triple = {solved->accepted.s, solved->accepted.b,
                          solved->accepted.r};
      run.record.outer_iters = k;
      run.record.inner_iters_total = inner_total;
      run.record.final_kkt = (solved->accepted.s - solved->accepted.r).norm();
      run.record.wall_seconds = elapsed();
      return run;
    }
    auto& step = std::get<DrStepInfo>(res);
    inner_total += step.accepted.inner_used;
    if (observer) observer(step);
    prev = std::move(cur);
    cur = std::move(step.next);
  }
  run.solution = cur.r;
  run.final_triple = cur;
  run.record.outer_iters = stop.max_outer;
  run.record.inner_iters_total = inner_total;
  run.record.final_kkt = (cur.s - cur.r).norm();
  run.record.wall_seconds = elapsed();
  run.record.status = RunStatus::kBudgetExceeded;
  throw BudgetExceeded<DrRun>("run_dr: outer budget exhausted", std::move(run),
                              stop.max_outer, inner_total);
}

Point classical_dr_step(const Point& z, double gamma, const ResolventMap& ja,
                        const ResolventMap& jb) {
  const Point jbz = jb.apply(gamma, z);
  return ja.apply(gamma, 2.0 * jbz - z) + z - jbz;
}

HppEmbedding embed_to_hpp(const SplitTriple& cur, const SplitTriple& hat,
                          const Point& s_acc, const Point& b_acc,
                          const Point& r_acc, double gamma) {
  return {cur.r + gamma * cur.b, hat.r + gamma * hat.b, r_acc + gamma * b_acc,
          s_acc - r_acc};
}

}  // namespace irsplit::dr
