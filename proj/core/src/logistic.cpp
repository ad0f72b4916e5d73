#include "irsplit/problems.hpp"
#include "irsplit/prox.hpp"

#include <algorithm>
#include <cmath>

namespace irsplit {

namespace {

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) {
  return std::log1p(std::exp(-std::abs(t))) + std::max(-t, 0.0);
}

// 1 / (1 + exp(t))
double sigmoid_neg(double t) {
  if (t >= 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

}  // namespace

LogisticProblem::LogisticProblem(DesignMatrix features, Point labels,
                                 double nu)
    : features_(std::move(features)), labels_(std::move(labels)), nu_(nu) {
  if (!(nu_ >= 0.0) || !std::isfinite(nu_)) {
    throw ParamError("LogisticProblem: nu >= 0 violated");
  }
  if (labels_.size() != features_.rows()) {
    throw DimensionMismatch("LogisticProblem: " +
                            std::to_string(labels_.size()) + " labels for " +
                            std::to_string(features_.rows()) + " samples");
  }
  for (Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1.0 && labels_[i] != -1.0) {
      throw DomainError("LogisticProblem: label " + std::to_string(i) +
                        " is not +1 or -1");
    }
  }
}

ValueGradient logistic_value_gradient(const LogisticProblem& prob, double v,
                                      const Point& w) {
  const Index n = prob.features().cols();
  if (w.size() != n) {
    throw DimensionMismatch("logistic_value_gradient: w has length " +
                            std::to_string(w.size()) + ", expected " +
                            std::to_string(n));
  }
  const Point& b = prob.labels();
  const Point score = prob.features().apply(w);
  Point weight(b.size());
  double value = 0.0;
  for (Index i = 0; i < b.size(); ++i) {
    const double t = b[i] * (score[i] + v);
    value += softplus_neg(t);
    weight[i] = -b[i] * sigmoid_neg(t);
  }
  ValueGradient out;
  out.value = value;
  out.gradient.resize(n + 1);
  out.gradient[0] = weight.sum();
  out.gradient.tail(n) = prob.features().apply_transpose(weight);
  return out;
}

double LogisticProblem::smooth_value(const Point& x) const {
  if (x.size() != dim()) throw DimensionMismatch("logistic: x length");
  return logistic_value_gradient(*this, x[0], x.tail(dim() - 1)).value;
}

Point LogisticProblem::smooth_gradient(const Point& x) const {
  if (x.size() != dim()) throw DimensionMismatch("logistic: x length");
  return logistic_value_gradient(*this, x[0], x.tail(dim() - 1)).gradient;
}

Eigen::MatrixXd LogisticProblem::smooth_hessian(const Point& x) const {
  if (x.size() != dim()) throw DimensionMismatch("logistic: x length");
  const Index q = samples();
  Eigen::MatrixXd design(q, dim());
  design.col(0).setOnes();
  design.rightCols(dim() - 1) = features_.to_dense();
  const Point score = design * x;
  Point curvature(q);
  for (Index i = 0; i < q; ++i) {
    const double s = sigmoid_neg(labels_[i] * score[i]);
    curvature[i] = s * (1.0 - s);
  }
  return design.transpose() * curvature.asDiagonal() * design;
}

double LogisticProblem::nonsmooth_value(const Point& x) const {
  return nu_ * x.tail(x.size() - 1).lpNorm<1>();
}

Point LogisticProblem::prox_nonsmooth(const Point& u, double t) const {
  return soft_threshold_tail(u, t * nu_, 1);
}

double LogisticProblem::kkt_residual(const Point& x) const {
  return l1_kkt_dist_inf(smooth_gradient(x), x, nu_, 1);
}

SolverPair LogisticProblem::make_solvers(double c) const {
  if (!(c > 0.0)) throw ParamError("logistic solvers: c > 0 violated");
  return {make_lbfgs_fprocedure(*this), std::make_unique<ProxShiftedG>(*this)};
}

double logistic_kkt_dist_inf(const LogisticProblem& prob, double v,
                             const Point& w) {
  Point x(w.size() + 1);
  x[0] = v;
  x.tail(w.size()) = w;
  return prob.kkt_residual(x);
}

SolverPair logistic_make_solvers(const LogisticProblem& prob, double c) {
  return prob.make_solvers(c);
}

}  // namespace irsplit
