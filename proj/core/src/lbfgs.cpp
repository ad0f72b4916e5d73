#include "irsplit/subproblem.hpp"

#include <cmath>
#include <limits>

namespace irsplit {

LbfgsSession::LbfgsSession(SmoothObjective objective, Point x0,
                           LbfgsOptions options)
    : objective_(std::move(objective)), options_(options), x_(std::move(x0)) {
  if (options_.memory < 1) throw ParamError("L-BFGS memory >= 1 violated");
  if (!(options_.backtrack > 0.0 && options_.backtrack < 1.0)) {
    throw ParamError("L-BFGS backtrack factor in (0, 1) violated");
  }
  grad_.resize(x_.size());
  value_ = objective_(x_, grad_);
}

// Two-loop recursion: d = -H g with H₀ = (sᵀy / yᵀy) I.
Point LbfgsSession::direction() const {
  Point q = grad_;
  const std::size_t m = steps_.size();
  std::vector<double> alpha(m);
  for (std::size_t i = m; i-- > 0;) {
    alpha[i] = rho_[i] * steps_[i].dot(q);
    q -= alpha[i] * grad_diffs_[i];
  }
  if (m > 0) {
    q *= steps_.back().dot(grad_diffs_.back()) / grad_diffs_.back().squaredNorm();
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double beta = rho_[i] * grad_diffs_[i].dot(q);
    q += (alpha[i] - beta) * steps_[i];
  }
  return -q;
}

std::pair<Point, Point> LbfgsSession::next() {
  const double gnorm = grad_.norm();
  if (gnorm == 0.0) return {x_, grad_};

  Point d = direction();
  double slope = grad_.dot(d);
  if (!(slope < 0.0)) {
    steps_.clear();
    grad_diffs_.clear();
    rho_.clear();
    d = -grad_;
    slope = -gnorm * gnorm;
  }
  // Without curvature pairs the first trial is a unit-length move.
  double t = steps_.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;

  // Near the optimum the decrease c₁ t gᵀd falls below the rounding error in
  // evaluating f; allow that much slack.
  const double noise =
      16.0 * std::numeric_limits<double>::epsilon() * (std::abs(value_) + 1.0);

  Point x_new;
  Point g_new(x_.size());
  double f_new = 0.0;
  bool accepted = false;
  for (int i = 0; i <= options_.max_backtracks; ++i) {
    x_new = x_ + t * d;
    f_new = objective_(x_new, g_new);
    if (std::isfinite(f_new) &&
        f_new <= value_ + options_.armijo * t * slope + noise) {
      accepted = true;
      break;
    }
    t *= options_.backtrack;
  }
  if (!accepted) throw LineSearchFailure("L-BFGS: Armijo backtracking failed");

  Point s = x_new - x_;
  Point y = g_new - grad_;
  const double sy = s.dot(y);
  if (sy > 0.0 && y.squaredNorm() > 0.0) {
    if (static_cast<int>(steps_.size()) == options_.memory) {
      steps_.erase(steps_.begin());
      grad_diffs_.erase(grad_diffs_.begin());
      rho_.erase(rho_.begin());
    }
    steps_.push_back(std::move(s));
    grad_diffs_.push_back(std::move(y));
    rho_.push_back(1.0 / sy);
  }
  x_ = std::move(x_new);
  grad_ = std::move(g_new);
  value_ = f_new;
  return {x_, grad_};
}

namespace {

class LbfgsFProcedure final : public FProcedure {
 public:
  LbfgsFProcedure(const CompositeProblem& problem, LbfgsOptions options)
      : problem_(problem), options_(options) {}

  std::unique_ptr<FSession> open(const Point& p, const Point& z, double c,
                                 const Point& x_bar) override {
    if (!(c > 0.0)) throw ParamError("L-BFGS F-procedure: c > 0 violated");
    const Index n = problem_.dim();
    if (p.size() != n || z.size() != n || x_bar.size() != n) {
      throw DimensionMismatch("L-BFGS F-procedure: argument length");
    }
    const CompositeProblem* prob = &problem_;
    SmoothObjective augmented = [prob, p, z, c](const Point& x, Point& grad) {
      const Point dx = x - z;
      grad = prob->smooth_gradient(x) + p + c * dx;
      return prob->smooth_value(x) + p.dot(x) + 0.5 * c * dx.squaredNorm();
    };
    return std::make_unique<LbfgsSession>(std::move(augmented), x_bar,
                                          options_);
  }

 private:
  const CompositeProblem& problem_;
  LbfgsOptions options_;
};

}  // namespace

std::unique_ptr<FProcedure> make_lbfgs_fprocedure(
    const CompositeProblem& problem, LbfgsOptions options) {
  return std::make_unique<LbfgsFProcedure>(problem, options);
}

}  // namespace irsplit
