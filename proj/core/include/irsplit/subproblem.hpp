#pragma once

// Concrete F-procedures (conjugate gradients, L-BFGS) and the FISTA
// baseline. Sessions advance exactly one step per next(); the caller's
// acceptance test decides when to stop.

#include "irsplit/design_matrix.hpp"
#include "irsplit/problem.hpp"
#include "irsplit/types.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace irsplit {

/// Symmetric positive definite matrix-vector product.
using LinearOperator = std::function<Point(const Point&)>;

/// Conjugate gradients on H x = rhs. The reported y = H x - rhs is
/// recomputed from x every step, so it is the exact gradient of
/// (1/2) xᵀHx - rhsᵀx up to rounding in one product.
class CgSession final : public FSession {
 public:
  CgSession(LinearOperator op, Point rhs, Point x0);

  /// One CG step; returns (x_ℓ, y_ℓ). Once the residual is exactly zero the
  /// iterate stays put. Throws CgBreakdown on nonpositive curvature.
  std::pair<Point, Point> next() override;

  const Point& x() const { return x_; }
  Point gradient() const { return -residual_; }
  std::int64_t steps() const { return steps_; }

 private:
  LinearOperator op_;
  Point rhs_;
  Point x_;
  Point residual_;  // rhs - H x
  Point direction_;
  double rr_ = 0.0;
  std::int64_t steps_ = 0;
};

inline std::pair<Point, Point> cg_next(CgSession& session) {
  return session.next();
}

/// F-procedure for f(x) = (1/2)‖Ax - b‖²: CG on (AᵀA + cI) x = Aᵀb - p + cz
/// warm-started at x̄. A is referenced, not copied.
std::unique_ptr<FProcedure> make_quadratic_fprocedure(const DesignMatrix& a,
                                                      const Point& b);

/// Value and gradient of a smooth function; writes the gradient into `grad`.
using SmoothObjective = std::function<double(const Point& x, Point& grad)>;

struct LbfgsOptions {
  int memory = 10;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 50;
};

/// Limited-memory BFGS with Armijo backtracking. Pairs with nonpositive
/// curvature are skipped.
class LbfgsSession final : public FSession {
 public:
  LbfgsSession(SmoothObjective objective, Point x0, LbfgsOptions options = {});

  /// One quasi-Newton step; returns (x_ℓ, ∇(x_ℓ)). Throws LineSearchFailure
  /// after options.max_backtracks halvings.
  std::pair<Point, Point> next() override;

  const Point& x() const { return x_; }
  const Point& gradient() const { return grad_; }
  double value() const { return value_; }
  std::size_t memory_size() const { return steps_.size(); }

 private:
  Point direction() const;

  SmoothObjective objective_;
  LbfgsOptions options_;
  Point x_;
  Point grad_;
  double value_ = 0.0;
  std::vector<Point> steps_;
  std::vector<Point> grad_diffs_;
  std::vector<double> rho_;
};

inline std::pair<Point, Point> lbfgs_next(LbfgsSession& session) {
  return session.next();
}

/// F-procedure running L-BFGS on f(x) + <p, x> + (c/2)‖x - z‖² for the
/// smooth part f of `problem`, which must outlive the procedure.
std::unique_ptr<FProcedure> make_lbfgs_fprocedure(
    const CompositeProblem& problem, LbfgsOptions options = {});

struct FistaConfig {
  double initial_lipschitz = 1.0;
  double backtrack_factor = 2.0;
  double epsilon = 1e-6;
  std::int64_t max_iters = 200000;
  /// Keep the better of the prox step and the previous iterate so the
  /// objective never increases.
  bool monotone = true;
  bool record_objective = false;
};

void validate(const FistaConfig& config);

struct FistaRun {
  Point solution;
  RunRecord record;
  double final_lipschitz = 0.0;
  std::vector<double> objective_trace;  ///< F(x_k), when recorded
};

/// Accelerated proximal gradient with backtracking on the Lipschitz
/// estimate; stops when kkt_residual(x_k) ≤ ε. Throws BudgetExceeded<FistaRun>.
FistaRun fista_solve(const CompositeProblem& problem, const FistaConfig& config,
                     const Point& x0);
FistaRun fista_solve(const CompositeProblem& problem,
                     const FistaConfig& config);

}  // namespace irsplit
