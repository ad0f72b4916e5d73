#include "irsplit/problems.hpp"
#include "irsplit/prox.hpp"

#include <algorithm>
#include <cmath>

namespace irsplit {

double l1_kkt_dist_inf(const Point& grad, const Point& x, double nu,
                       Index skip) {
  require_same_dim(grad, x, "l1_kkt_dist_inf");
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double r;
    if (i < skip) {
      r = std::abs(grad[i]);
    } else if (x[i] > 0.0) {
      r = std::abs(grad[i] + nu);
    } else if (x[i] < 0.0) {
      r = std::abs(grad[i] - nu);
    } else {
      r = std::max(std::abs(grad[i]) - nu, 0.0);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

LassoProblem::LassoProblem(DesignMatrix a, Point b, double nu)
    : a_(std::move(a)), b_(std::move(b)), nu_(nu) {
  if (!(nu_ >= 0.0) || !std::isfinite(nu_)) {
    throw ParamError("LassoProblem: nu >= 0 violated");
  }
  if (b_.size() != a_.rows()) {
    throw DimensionMismatch("LassoProblem: b has length " +
                            std::to_string(b_.size()) + ", A has " +
                            std::to_string(a_.rows()) + " rows");
  }
  require_finite(b_, "LassoProblem b");
}

double LassoProblem::smooth_value(const Point& x) const {
  return 0.5 * (a_.apply(x) - b_).squaredNorm();
}

Point LassoProblem::smooth_gradient(const Point& x) const {
  return a_.apply_transpose(a_.apply(x) - b_);
}

double LassoProblem::nonsmooth_value(const Point& x) const {
  return nu_ * x.lpNorm<1>();
}

Point LassoProblem::prox_nonsmooth(const Point& u, double t) const {
  return soft_threshold(u, t * nu_);
}

double LassoProblem::kkt_residual(const Point& x) const {
  return l1_kkt_dist_inf(smooth_gradient(x), x, nu_);
}

SolverPair LassoProblem::make_solvers(double c) const {
  if (!(c > 0.0)) throw ParamError("lasso solvers: c > 0 violated");
  return {make_quadratic_fprocedure(a_, b_),
          std::make_unique<ProxShiftedG>(*this)};
}

Point lasso_f_gradient(const LassoProblem& prob, const Point& x) {
  return prob.smooth_gradient(x);
}

double lasso_kkt_dist_inf(const LassoProblem& prob, const Point& x) {
  return prob.kkt_residual(x);
}

SolverPair lasso_make_solvers(const LassoProblem& prob, double c) {
  return prob.make_solvers(c);
}

}  // namespace irsplit
