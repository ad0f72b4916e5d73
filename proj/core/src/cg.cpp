#include "irsplit/subproblem.hpp"

namespace irsplit {

CgSession::CgSession(LinearOperator op, Point rhs, Point x0)
    : op_(std::move(op)), rhs_(std::move(rhs)), x_(std::move(x0)) {
  require_same_dim(rhs_, x_, "CgSession");
  residual_ = rhs_ - op_(x_);
  direction_ = residual_;
  rr_ = residual_.squaredNorm();
}

std::pair<Point, Point> CgSession::next() {
  ++steps_;
  if (rr_ == 0.0) return {x_, -residual_};

  Point hd = op_(direction_);
  double curvature = direction_.dot(hd);
  if (!(curvature > 0.0)) {
    // Past convergence the conjugate direction can degenerate through
    // rounding; restart from steepest descent before declaring breakdown.
    direction_ = residual_;
    hd = op_(direction_);
    curvature = direction_.dot(hd);
    if (!(curvature > 0.0)) {
      throw CgBreakdown("conjugate gradients: nonpositive curvature");
    }
  }
  x_ += (rr_ / curvature) * direction_;
  // Explicit residual keeps y an exact gradient at x rather than a drifting
  // recurrence.
  residual_ = rhs_ - op_(x_);
  const double rr_new = residual_.squaredNorm();
  direction_ = residual_ + (rr_new / rr_) * direction_;
  rr_ = rr_new;
  return {x_, -residual_};
}

namespace {

class QuadraticFProcedure final : public FProcedure {
 public:
  QuadraticFProcedure(const DesignMatrix& a, const Point& b)
      : a_(a), atb_(a.apply_transpose(b)) {}

  std::unique_ptr<FSession> open(const Point& p, const Point& z, double c,
                                 const Point& x_bar) override {
    if (!(c > 0.0)) throw ParamError("quadratic F-procedure: c > 0 violated");
    require_same_dim(p, atb_, "quadratic F-procedure p");
    require_same_dim(z, atb_, "quadratic F-procedure z");
    require_same_dim(x_bar, atb_, "quadratic F-procedure x_bar");
    const DesignMatrix* a = &a_;
    LinearOperator op = [a, c](const Point& x) -> Point {
      return a->apply_transpose(a->apply(x)) + c * x;
    };
    return std::make_unique<CgSession>(std::move(op), atb_ - p + c * z, x_bar);
  }

 private:
  const DesignMatrix& a_;
  Point atb_;
};

}  // namespace

std::unique_ptr<FProcedure> make_quadratic_fprocedure(const DesignMatrix& a,
                                                      const Point& b) {
  if (b.size() != a.rows()) {
    throw DimensionMismatch("make_quadratic_fprocedure: b length");
  }
  return std::make_unique<QuadraticFProcedure>(a, b);
}

}  // namespace irsplit
