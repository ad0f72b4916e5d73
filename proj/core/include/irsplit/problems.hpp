#pragma once

// LASSO and ℓ1-regularized logistic regression, their KKT residuals,
// synthetic instances and dataset loaders.

#include "irsplit/design_matrix.hpp"
#include "irsplit/problem.hpp"
#include "irsplit/subproblem.hpp"
#include "irsplit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace irsplit {

/// min (1/2)‖Ax - b‖² + ν‖x‖₁
class LassoProblem final : public CompositeProblem {
 public:
  LassoProblem(DesignMatrix a, Point b, double nu);

  const DesignMatrix& a() const { return a_; }
  const Point& b() const { return b_; }
  double nu() const { return nu_; }

  Index dim() const override { return a_.cols(); }
  double smooth_value(const Point& x) const override;
  Point smooth_gradient(const Point& x) const override;
  double nonsmooth_value(const Point& x) const override;
  Point prox_nonsmooth(const Point& u, double t) const override;
  double kkt_residual(const Point& x) const override;
  /// CG F-procedure and soft thresholding at ν/c. The solvers reference
  /// this problem.
  SolverPair make_solvers(double c) const override;

 private:
  DesignMatrix a_;
  Point b_;
  double nu_;
};

Point lasso_f_gradient(const LassoProblem& prob, const Point& x);
double lasso_kkt_dist_inf(const LassoProblem& prob, const Point& x);
SolverPair lasso_make_solvers(const LassoProblem& prob, double c);

/// min Σ log(1 + exp(-b_i(a_iᵀw + v))) + ν‖w‖₁ over x = (v, w); the bias v
/// sits at index 0 and is not regularized.
class LogisticProblem final : public CompositeProblem {
 public:
  /// labels must be ±1.
  LogisticProblem(DesignMatrix features, Point labels, double nu);

  const DesignMatrix& features() const { return features_; }
  const Point& labels() const { return labels_; }
  double nu() const { return nu_; }
  Index samples() const { return features_.rows(); }

  Index dim() const override { return features_.cols() + 1; }
  double smooth_value(const Point& x) const override;
  Point smooth_gradient(const Point& x) const override;
  double nonsmooth_value(const Point& x) const override;
  Point prox_nonsmooth(const Point& u, double t) const override;
  double kkt_residual(const Point& x) const override;
  /// L-BFGS F-procedure; the prox shrinks w only.
  SolverPair make_solvers(double c) const override;

  /// Hessian of f at x = (v, w), dense (dim × dim).
  Eigen::MatrixXd smooth_hessian(const Point& x) const;

 private:
  DesignMatrix features_;
  Point labels_;
  double nu_;
};

struct ValueGradient {
  double value = 0.0;
  Point gradient;  ///< over (v, w)
};

ValueGradient logistic_value_gradient(const LogisticProblem& prob, double v,
                                      const Point& w);
double logistic_kkt_dist_inf(const LogisticProblem& prob, double v,
                             const Point& w);
SolverPair logistic_make_solvers(const LogisticProblem& prob, double c);

/// Componentwise ℓ∞ distance from 0 to grad + ν∂‖·‖₁(x) over the
/// coordinates from `skip` on; the first `skip` coordinates contribute |grad|.
double l1_kkt_dist_inf(const Point& grad, const Point& x, double nu,
                       Index skip = 0);

struct SyntheticLasso {
  LassoProblem problem;
  Point x_true;
};

/// Standard normal A (sparse storage when density < 1), ground truth with
/// max(1, n/10) nonzeros, b = A x♮ + noise·N(0, I). With `normalize` the
/// entries are divided by sqrt(m · density) so columns have unit expected
/// norm. ν defaults to 0.1‖Aᵀb‖∞ when nu ≤ 0. Deterministic per seed.
SyntheticLasso synthetic_lasso(Index m, Index n, double density, double noise,
                               std::uint64_t seed, double nu = 0.0,
                               bool normalize = true);

struct SyntheticLogistic {
  LogisticProblem problem;
  Point x_true;  ///< (v, w) used to draw the labels
};

/// q samples of n - 1 standard normal features; labels drawn from the
/// logistic model at a sparse ground truth. ν = nu_fraction · ν_max where
/// ν_max is the smallest ν making w = 0 optimal.
SyntheticLogistic synthetic_logistic(Index q, Index n, std::uint64_t seed,
                                     double nu_fraction = 0.15);

/// Smallest ν for which w = 0 (with the optimal bias) solves the logistic
/// problem.
double logistic_nu_max(const DesignMatrix& features, const Point& labels);

/// High-accuracy minimizer: FISTA followed by Newton refinement on the
/// support, returned once the KKT residual is at most tol (best effort).
Point reference_solution(const LassoProblem& prob, double tol = 1e-12);
Point reference_solution(const LogisticProblem& prob, double tol = 1e-12);

struct LabeledData {
  SparseMatrix features;
  Point labels;  ///< remapped to ±1
};

/// LIBSVM text: "label idx:val ..." with 1-based indices. Labels {±1} are
/// kept, {0, 1} maps 0 to -1, {1, 2} maps 2 to -1. n_features = 0 infers the
/// width from the largest index. Throws ParseError naming the line.
LabeledData parse_libsvm(std::istream& in, Index n_features = 0);
LogisticProblem load_libsvm(const std::filesystem::path& path, double nu,
                            Index n_features = 0);
void write_libsvm(std::ostream& out, const DesignMatrix& features,
                  const Point& labels);

/// Comma-separated numeric rows for A and a single column for b.
DenseMatrix parse_dense_csv(std::istream& in, bool skip_header = false);
LassoProblem load_dense_csv(const std::filesystem::path& path_a,
                            const std::filesystem::path& path_b, double nu,
                            bool skip_header = false);
void write_dense_csv(std::ostream& out, const DenseMatrix& m);

}  // namespace irsplit
