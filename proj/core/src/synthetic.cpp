#include "irsplit/problems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace irsplit {

namespace {

std::vector<Index> sample_support(Index n, Index k, std::mt19937_64& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  // Partial Fisher-Yates; std::shuffle's draw pattern is not pinned down.
  for (Index i = 0; i < k; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

DesignMatrix random_matrix(Index m, Index n, double density,
                           std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  if (density >= 1.0) {
    DenseMatrix a(m, n);
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) a(i, j) = normal(rng);
    }
    return DesignMatrix(std::move(a));
  }
  std::uniform_real_distribution<double> unit;
  std::vector<Eigen::Triplet<double>> entries;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (unit(rng) < density) entries.emplace_back(i, j, normal(rng));
    }
  }
  SparseMatrix a(m, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return DesignMatrix(std::move(a));
}

using Hessian = std::function<Eigen::MatrixXd(const Point&)>;

// Newton steps on the support equations ∇_S f(x) + ν sign(x_S) = 0. Stops
// when a sign would flip or the residual stops improving.
Point polish(const CompositeProblem& prob, Point x, double nu, Index skip,
             const Hessian& hessian, double tol) {
  double kkt = prob.kkt_residual(x);
  for (int it = 0; it < 50 && kkt > tol; ++it) {
    std::vector<Index> support;
    for (Index i = 0; i < x.size(); ++i) {
      if (i < skip || x[i] != 0.0) support.push_back(i);
    }
    if (support.empty()) break;
    const Point g = prob.smooth_gradient(x);
    const Eigen::MatrixXd h = hessian(x);
    const Index s = static_cast<Index>(support.size());
    Eigen::MatrixXd hs(s, s);
    Point rs(s);
    for (Index a = 0; a < s; ++a) {
      const Index i = support[a];
      rs[a] = g[i];
      if (i >= skip) rs[a] += x[i] > 0.0 ? nu : -nu;
      for (Index b = 0; b < s; ++b) hs(a, b) = h(i, support[b]);
    }
    const Point d = hs.ldlt().solve(-rs);
    Point trial = x;
    bool flipped = false;
    for (Index a = 0; a < s; ++a) {
      const Index i = support[a];
      trial[i] += d[a];
      if (i >= skip && (trial[i] > 0.0) != (x[i] > 0.0)) flipped = true;
    }
    if (flipped || !trial.allFinite()) break;
    const double trial_kkt = prob.kkt_residual(trial);
    if (!(trial_kkt < kkt)) break;
    x = std::move(trial);
    kkt = trial_kkt;
  }
  return x;
}

Point fista_point(const CompositeProblem& prob, double epsilon) {
  FistaConfig cfg;
  cfg.epsilon = epsilon;
  cfg.max_iters = 500000;
  try {
    return fista_solve(prob, cfg).solution;
  } catch (const BudgetExceeded<FistaRun>& e) {
    return e.last().solution;
  }
}

}  // namespace

SyntheticLasso synthetic_lasso(Index m, Index n, double density, double noise,
                               std::uint64_t seed, double nu,
                               bool normalize) {
  if (m < 1 || n < 1) throw ParamError("synthetic_lasso: m, n >= 1 violated");
  if (!(density > 0.0 && density <= 1.0)) {
    throw ParamError("synthetic_lasso: density in (0, 1] violated");
  }
  if (!(noise >= 0.0)) throw ParamError("synthetic_lasso: noise >= 0 violated");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  const double scale =
      normalize ? 1.0 / std::sqrt(static_cast<double>(m) * density) : 1.0;
  DesignMatrix a = random_matrix(m, n, density, rng, scale);
  Point x_true = Point::Zero(n);
  for (Index j : sample_support(n, std::max<Index>(1, n / 10), rng)) {
    x_true[j] = normal(rng);
  }
  Point b = a.apply(x_true);
  for (Index i = 0; i < m; ++i) b[i] += noise * normal(rng);
  if (nu <= 0.0) nu = 0.1 * a.apply_transpose(b).lpNorm<Eigen::Infinity>();
  return {LassoProblem(std::move(a), std::move(b), nu), std::move(x_true)};
}

double logistic_nu_max(const DesignMatrix& features, const Point& labels) {
  const double pos = static_cast<double>((labels.array() > 0.0).count());
  const double neg = static_cast<double>(labels.size()) - pos;
  if (pos == 0.0 || neg == 0.0) {
    throw DomainError("logistic_nu_max: both classes must be present");
  }
  // Optimal bias with w = 0 is log(pos/neg); the w-gradient there is
  // Σ -b_i s_i a_i with s_i = neg/total for positives, pos/total otherwise.
  const double total = pos + neg;
  Point weight(labels.size());
  for (Index i = 0; i < labels.size(); ++i) {
    weight[i] = labels[i] > 0.0 ? -neg / total : pos / total;
  }
  return features.apply_transpose(weight).lpNorm<Eigen::Infinity>();
}

SyntheticLogistic synthetic_logistic(Index q, Index n, std::uint64_t seed,
                                     double nu_fraction) {
  if (q < 2 || n < 2) {
    throw ParamError("synthetic_logistic: q >= 2 and n >= 2 violated");
  }
  if (!(nu_fraction >= 0.0)) {
    throw ParamError("synthetic_logistic: nu_fraction >= 0 violated");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;

  const Index features = n - 1;
  DesignMatrix a = random_matrix(q, features, 1.0, rng);
  Point x_true = Point::Zero(n);
  x_true[0] = 0.5 * normal(rng);
  for (Index j : sample_support(features, std::max<Index>(1, features / 4),
                                rng)) {
    x_true[j + 1] = normal(rng);
  }
  const Point score = a.apply(x_true.tail(features)).array() + x_true[0];
  Point labels(q);
  for (Index i = 0; i < q; ++i) {
    const double p_pos = 1.0 / (1.0 + std::exp(-score[i]));
    labels[i] = unit(rng) < p_pos ? 1.0 : -1.0;
  }
  if ((labels.array() > 0.0).all()) labels[0] = -1.0;
  if ((labels.array() < 0.0).all()) labels[0] = 1.0;
  const double nu = nu_fraction * logistic_nu_max(a, labels);
  return {LogisticProblem(std::move(a), std::move(labels), nu),
          std::move(x_true)};
}

Point reference_solution(const LassoProblem& prob, double tol) {
  const Eigen::MatrixXd dense = prob.a().to_dense();
  const Eigen::MatrixXd gram = dense.transpose() * dense;
  Point x = fista_point(prob, std::max(tol, 1e-10));
  return polish(prob, std::move(x), prob.nu(), 0,
                [&](const Point&) { return gram; }, tol);
}

Point reference_solution(const LogisticProblem& prob, double tol) {
  Point x = fista_point(prob, std::max(tol, 1e-9));
  return polish(prob, std::move(x), prob.nu(), 1,
                [&](const Point& y) { return prob.smooth_hessian(y); }, tol);
}

}  // namespace irsplit
