#pragma once

// Interfaces shared by the ADMM layer, the subproblem engines and the
// concrete problems: min f(x) + g(x) with f smooth and g prox-friendly.

#include "irsplit/types.hpp"

#include <memory>
#include <utility>

namespace irsplit {

/// Successive iterates (x_ℓ, y_ℓ) of an x-subproblem solver with
/// y_ℓ ∈ ∂_x[f(x) + <p, x> + (c/2)‖x - z‖²] at x_ℓ and y_ℓ → 0.
class FSession {
 public:
  virtual ~FSession() = default;
  virtual std::pair<Point, Point> next() = 0;
};

/// Opens a session for min f(x) + <p, x> + (c/2)‖x - z‖², started at x_bar.
class FProcedure {
 public:
  virtual ~FProcedure() = default;
  virtual std::unique_ptr<FSession> open(const Point& p, const Point& z,
                                         double c, const Point& x_bar) = 0;
};

/// Exact minimizer of g(z) - <p, z> + (c/2)‖x - z‖².
class ShiftedProxG {
 public:
  virtual ~ShiftedProxG() = default;
  virtual Point solve(const Point& p, const Point& x, double c) const = 0;
};

struct SolverPair {
  std::unique_ptr<FProcedure> fprocedure;
  std::unique_ptr<ShiftedProxG> prox;
};

class CompositeProblem {
 public:
  virtual ~CompositeProblem() = default;

  virtual Index dim() const = 0;
  virtual double smooth_value(const Point& x) const = 0;
  virtual Point smooth_gradient(const Point& x) const = 0;
  virtual double nonsmooth_value(const Point& x) const = 0;
  /// argmin_z g(z) + ‖z - u‖² / (2t)
  virtual Point prox_nonsmooth(const Point& u, double t) const = 0;
  /// dist_∞(0, ∂(f + g)(x))
  virtual double kkt_residual(const Point& x) const = 0;
  virtual SolverPair make_solvers(double c) const = 0;

  double objective(const Point& x) const {
    return smooth_value(x) + nonsmooth_value(x);
  }
};

/// ShiftedProxG through the plain prox of g: z = prox_{g/c}(x + p/c).
class ProxShiftedG final : public ShiftedProxG {
 public:
  explicit ProxShiftedG(const CompositeProblem& problem) : problem_(problem) {}
  Point solve(const Point& p, const Point& x, double c) const override {
    return problem_.prox_nonsmooth(x + p / c, 1.0 / c);
  }

 private:
  const CompositeProblem& problem_;
};

}  // namespace irsplit
