#include "irsplit/admm.hpp"
#include "irsplit/dr.hpp"
#include "irsplit/problems.hpp"
#include "irsplit/subproblem.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace irsplit;
using namespace irsplit::dr;
using irsplit::oracles::vec;

namespace {

// B = ∇(½ xᵀQx - qᵀx) with Q symmetric positive definite, A = ∂(ν‖·‖₁).
struct QuadraticL1Pair {
  Eigen::MatrixXd q_mat;
  Point q;
  double nu;

  static QuadraticL1Pair make(Index n, std::uint64_t seed, double nu = 0.3) {
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd g(n, n);
    std::normal_distribution<double> nd;
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) g(i, j) = nd(rng);
    }
    Eigen::MatrixXd q_mat = g.transpose() * g / static_cast<double>(n);
    q_mat.diagonal().array() += 0.2;
    return {q_mat, oracles::random_point(n, rng), nu};
  }

  // Hand-written resolvents, independent of the library's.
  Point jb(double gamma, const Point& u) const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(q.size(), q.size()) +
                        gamma * q_mat;
    return h.llt().solve(u + gamma * q);
  }
  Point ja(double gamma, const Point& u) const {
    Point out(u.size());
    const double k = gamma * nu;
    for (Index i = 0; i < u.size(); ++i) {
      out(i) = u(i) > k ? u(i) - k : (u(i) < -k ? u(i) + k : 0.0);
    }
    return out;
  }
  Point classical_step(double gamma, const Point& z) const {
    const Point s = jb(gamma, z);
    return ja(gamma, 2.0 * s - z) + z - s;
  }
  Point b_of(const Point& x) const { return q_mat * x - q; }
};

DRParams exact_params(double gamma = 1.0) {
  DRParams p;
  p.gamma = gamma;
  p.core.alpha = 0.0;
  p.core.beta = 0.5;
  p.core.sigma = 0.0;
  p.core.rho_lo = p.core.rho_hi = 1.0;
  return p;
}

// Successive trials s_ℓ = J(target) + 2^-ℓ e for B = I; never exact.
class HalvingBProcedure final : public BProcedure {
 public:
  std::unique_ptr<BSession> open(const Point& r, const Point& b, double gamma,
                                 const Point&, const Point&) override {
    class Session final : public BSession {
     public:
      Session(Point exact) : exact_(std::move(exact)) {}
      std::pair<Point, Point> next() override {
        scale_ *= 0.5;
        Point s = exact_ + scale_ * Point::Ones(exact_.size());
        return {s, s};
      }

     private:
      Point exact_;
      double scale_ = 1.0;
    };
    return std::make_unique<Session>((r + gamma * b) / (1.0 + gamma));
  }
};

}  // namespace

TEST(DrExtrapolate, Examples) {
  SplitTriple cur{vec({1.0}), vec({1.0}), vec({1.0})};
  SplitTriple prev{vec({0.0}), vec({0.0}), vec({0.0})};
  auto hat = dr_extrapolate(cur, prev, 0.2);
  EXPECT_DOUBLE_EQ(hat.s(0), 1.2);
  EXPECT_DOUBLE_EQ(hat.b(0), 1.2);
  EXPECT_DOUBLE_EQ(hat.r(0), 1.2);
  auto same = dr_extrapolate(cur, prev, 0.0);
  EXPECT_EQ(same.s, cur.s);
  auto first = dr_extrapolate(cur, cur, 0.7);
  EXPECT_EQ(first.r, cur.r);
}

TEST(AStep, ZeroOperator) {
  FunctionResolvent identity([](double, const Point& u) { return u; });
  auto res = a_step(vec({2.0, -1.0}), vec({0.5, 0.5}), 2.0, identity);
  EXPECT_EQ(res.r, vec({1.0, -2.0}));
  EXPECT_TRUE(res.a.isZero(0.0));
}

TEST(AStep, L1MatchesGridAndIdentity) {
  L1Resolvent l1(0.7);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Point s = oracles::random_point(3, rng, 2.0);
    const Point b = oracles::random_point(3, rng);
    const double gamma = 0.5 + (trial % 5) * 0.3;
    auto res = a_step(s, b, gamma, l1);
    const Point u = s - gamma * b;
    EXPECT_LE((res.r + gamma * res.a - u).norm(), 1e-14);
    // Grid search on each coordinate of argmin 0.7|x| + (x - u)²/(2γ).
    for (Index i = 0; i < 3; ++i) {
      double best = 0.0, best_val = INFINITY;
      for (int g = -20000; g <= 20000; ++g) {
        const double x = g * 1e-3;
        const double val = 0.7 * std::abs(x) + (x - u(i)) * (x - u(i)) / (2 * gamma);
        if (val < best_val) {
          best_val = val;
          best = x;
        }
      }
      ASSERT_NEAR(res.r(i), best, 1e-3);
      // a ∈ ∂(0.7|·|)(r)
      if (res.r(i) != 0.0) {
        ASSERT_NEAR(res.a(i), 0.7 * (res.r(i) > 0 ? 1 : -1), 1e-12);
      } else {
        ASSERT_LE(std::abs(res.a(i)), 0.7 + 1e-12);
      }
    }
  }
}

TEST(AStep, QuadraticMatchesDenseSolve) {
  const auto pair = QuadraticL1Pair::make(6, 9);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  const Point s = vec({1, 2, 3, -1, 0, 0.5});
  const Point b = vec({0.1, 0.2, -0.3, 0.4, 0, 1});
  auto res = a_step(s, b, 0.8, jq);
  EXPECT_LE((res.a - pair.b_of(res.r)).norm(), 1e-12);
}

TEST(DrAcceptance, Examples) {
  SplitTriple hat{vec({0.0, 0.0}), vec({0.0, 0.0}), vec({1.0, 0.0})};
  // exact: s + γb = r̂ + γb̂
  EXPECT_TRUE(dr_acceptance(hat, vec({0.4, 0.0}), vec({0.6, 0.0}),
                            vec({0.1, 0.0}), 1.0, 0.0));
  EXPECT_FALSE(dr_acceptance(hat, vec({0.5, 0.0}), vec({0.6, 0.0}),
                             vec({0.1, 0.0}), 1.0, 0.0));
}

TEST(DrAcceptance, AgreesWithHppCriterionUnderEmbedding) {
  // w = (1, 0), z̃ = (0.6, 0), v = (0.5, 0) realised by r = (0.6, 0), b = 0,
  // s = (1.1, 0) and r̂ = (1, 0), b̂ = 0.
  SplitTriple hat{vec({0.0, 0.0}), vec({0.0, 0.0}), vec({1.0, 0.0})};
  const Point s = vec({1.1, 0.0}), b = vec({0.0, 0.0}), r = vec({0.6, 0.0});
  for (double sigma : {0.0, 0.1, 0.15, 0.2, 0.5, 0.99}) {
    const auto e = embed_to_hpp(hat, hat, s, b, r, 1.0);
    const bool hpp_verdict =
        hpp::error_criterion_holds(e.w, {e.z_tilde, e.v, 1.0}, sigma);
    EXPECT_EQ(dr_acceptance(hat, s, b, r, 1.0, sigma), hpp_verdict)
        << "sigma=" << sigma;
  }
  EXPECT_TRUE(dr_acceptance(hat, s, b, r, 1.0, 0.5));
}

TEST(Theta, ExactIsOneAndHandExample) {
  SplitTriple hat{vec({0.0}), vec({0.25}), vec({0.5})};
  // exact B-solve: s + γb = r̂ + γb̂ = 0.75
  const Point s = vec({0.5}), b = vec({0.25}), r = vec({0.2});
  EXPECT_NEAR(theta(hat, s, b, r, 1.0), 1.0, 1e-15);

  SplitTriple hand{vec({0.0, 0.0}), vec({0.0, 0.0}), vec({1.0, 0.0})};
  EXPECT_DOUBLE_EQ(theta(hand, vec({0.5, 0.0}), vec({0.0, 0.0}),
                         vec({0.0, 0.0}), 1.0),
                   2.0);
  EXPECT_THROW(theta(hand, vec({0.5, 0.0}), vec({0.0, 0.0}), vec({0.5, 0.0}),
                     1.0),
               ZeroDenominator);
}

TEST(DrUpdate, ExactStepIsClassicalAndBoundary) {
  const double gamma = 0.7;
  SplitTriple hat{vec({0.3, 0.1}), vec({1.0, -2.0}), vec({0.5, 0.5})};
  const Point s = vec({0.9, -0.4}), r = vec({0.2, 0.3});
  auto next = dr_update(hat, s, r, 1.0, 1.0, gamma);
  const Point z_hat = hat.r + gamma * hat.b;
  EXPECT_LE((next.r + gamma * next.b - (z_hat - (s - r))).norm(), 1e-14);
  EXPECT_EQ(next.s, s);
  EXPECT_EQ(next.r, r);
  auto still = dr_update(hat, s, r, 0.0, 1.5, gamma);
  EXPECT_LE((still.r + gamma * still.b - z_hat).norm(), 1e-14);
}

TEST(InnerLoop, ExactResolventUsesOneStep) {
  const auto pair = QuadraticL1Pair::make(5, 2);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  ResolventBProcedure bproc(jq);
  L1Resolvent ja(pair.nu);
  std::mt19937_64 rng(1);
  SplitTriple hat{Point::Zero(5), Point::Ones(5),
                  oracles::random_point(5, rng)};
  auto res = inner_loop(hat, exact_params(), bproc, ja);
  EXPECT_EQ(res.inner_used, 1);
}

TEST(InnerLoop, CgBackedProcedureAcceptsQuickly) {
  auto inst = synthetic_lasso(30, 20, 1.0, 0.01, 3);
  auto fproc = make_quadratic_fprocedure(inst.problem.a(), inst.problem.b());
  admm::FToBAdapter bproc(*fproc);
  L1Resolvent ja(inst.problem.nu());
  DRParams p = exact_params();
  p.core.sigma = 0.99;
  std::mt19937_64 rng(4);
  SplitTriple hat{Point::Zero(20), oracles::random_point(20, rng),
                  oracles::random_point(20, rng)};
  auto res = inner_loop(hat, p, bproc, ja);
  EXPECT_LE(res.inner_used, 5);
  EXPECT_TRUE(dr_acceptance(hat, res.s, res.b, res.r, 1.0, 0.99));
  // b ∈ B(s) for B = ∇(½‖A·-b‖²)
  EXPECT_LE((res.b - lasso_f_gradient(inst.problem, res.s)).norm(), 1e-10);
}

TEST(InnerLoop, SigmaZeroNeverExactExhaustsBudget) {
  HalvingBProcedure bproc;
  FunctionResolvent identity([](double, const Point& u) { return u; });
  DRParams p = exact_params();
  p.inner_budget = 40;
  SplitTriple hat{vec({0.0}), vec({1.0}), vec({1.0})};
  EXPECT_THROW(inner_loop(hat, p, bproc, identity),
               BudgetExceeded<SplitTriple>);
}

TEST(ClassicalDr, IdentityResolventsFixEverything) {
  FunctionResolvent identity([](double, const Point& u) { return u; });
  const Point z = vec({1.0, -2.0});
  EXPECT_EQ(classical_dr_step(z, 1.0, identity, identity), z);
}

TEST(ClassicalDr, MatchesHandWrittenStep) {
  const auto pair = QuadraticL1Pair::make(10, 3);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  L1Resolvent ja(pair.nu);
  std::mt19937_64 rng(8);
  const Point z = oracles::random_point(10, rng);
  EXPECT_LE((classical_dr_step(z, 0.9, ja, jq) - pair.classical_step(0.9, z))
                .norm(),
            1e-13);
}

TEST(RunDr, ExactConfigurationReproducesClassicalTrajectory) {
  const auto pair = QuadraticL1Pair::make(10, 11);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  ResolventBProcedure bproc(jq);
  L1Resolvent ja(pair.nu);
  const double gamma = 1.0;
  std::vector<Point> trajectory;
  DrStop stop;
  stop.max_outer = 50;
  std::mt19937_64 rng(12);
  SplitTriple init{Point::Zero(10), oracles::random_point(10, rng),
                   oracles::random_point(10, rng)};
  try {
    run_dr(init, exact_params(gamma), bproc, ja, stop,
           [&](const DrStepInfo& info) {
             trajectory.push_back(info.next.r + gamma * info.next.b);
           });
  } catch (const BudgetExceeded<DrRun>&) {
  }
  ASSERT_EQ(trajectory.size(), 50u);
  Point z = init.r + gamma * init.b;
  for (const auto& zk : trajectory) {
    z = pair.classical_step(gamma, z);
    ASSERT_LE((zk - z).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(RunDr, StartAtSolutionStopsImmediately) {
  const auto pair = QuadraticL1Pair::make(10, 11);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  ResolventBProcedure bproc(jq);
  L1Resolvent ja(pair.nu);
  // Fixed point of the classical recursion, then x* = J_B(z*).
  Point z = Point::Zero(10);
  for (int i = 0; i < 5000; ++i) z = pair.classical_step(1.0, z);
  const Point x = pair.jb(1.0, z);
  SplitTriple init{x, pair.b_of(x), x};
  DrStop stop;
  stop.sr_tolerance = 1e-9;
  auto run = run_dr(init, exact_params(), bproc, ja, stop);
  EXPECT_EQ(run.record.outer_iters, 0);
  EXPECT_LE((run.solution - x).norm(), 1e-9);
}

TEST(RunDr, InertialRelaxedConvergesAndEmbeddingHolds) {
  const auto pair = QuadraticL1Pair::make(10, 21);
  FunctionResolvent jq([&](double g, const Point& u) { return pair.jb(g, u); });
  L1Resolvent ja(pair.nu);
  // Inexact B-procedure: CG on (I + γQ)s = target.
  class CgB final : public BProcedure {
   public:
    explicit CgB(const QuadraticL1Pair& p) : p_(p) {}
    std::unique_ptr<BSession> open(const Point& r, const Point& b, double gamma,
                                   const Point& s_bar, const Point&) override {
      const QuadraticL1Pair* p = &p_;
      LinearOperator op = [p, gamma](const Point& x) -> Point {
        return x + gamma * (p->q_mat * x);
      };
      const Point target = r + gamma * b;
      class S final : public BSession {
       public:
        S(std::unique_ptr<CgSession> cg, const QuadraticL1Pair* p)
            : cg_(std::move(cg)), p_(p) {}
        std::pair<Point, Point> next() override {
          Point s = cg_->next().first;
          return {s, p_->b_of(s)};
        }

       private:
        std::unique_ptr<CgSession> cg_;
        const QuadraticL1Pair* p_;
      };
      return std::make_unique<S>(
          std::make_unique<CgSession>(op, target + gamma * p_.q, s_bar), p);
    }

   private:
    const QuadraticL1Pair& p_;
  } bproc(pair);

  Point z = Point::Zero(10);
  for (int i = 0; i < 5000; ++i) z = pair.classical_step(1.0, z);
  const Point x_star = pair.jb(1.0, z);
  const Point z_star = x_star + pair.b_of(x_star);

  DRParams p;
  p.gamma = 1.0;
  p.core = hpp::coupled_params(0.18966, 0.18976, 0.9);
  p.core.rho_lo = p.core.rho_hi = 1.4882;
  std::vector<hpp::IterationDiagnostics> traj;
  SplitTriple cur = SplitTriple::zeros(10);
  int checked = 0;
  DrStop stop;
  stop.sr_tolerance = 1e-7;
  stop.max_outer = 2000;
  auto run = run_dr(SplitTriple::zeros(10), p, bproc, ja, stop,
                    [&](const DrStepInfo& info) {
                      const auto& a = info.accepted;
                      const auto e =
                          embed_to_hpp(cur, info.hat, a.s, a.b, a.r, p.gamma);
                      hpp::ProxCertificate cert{e.z_tilde, e.v, 1.0};
                      EXPECT_TRUE(hpp::error_criterion_holds(e.w, cert,
                                                             p.core.sigma));
                      EXPECT_GT(info.theta, 0.0);
                      const Point z_next =
                          hpp::relaxed_projection(e.w, cert, info.rho_k);
                      EXPECT_LE((z_next - (info.next.r + p.gamma * info.next.b))
                                    .norm(),
                                1e-12 * std::max(1.0, z_next.norm()));
                      hpp::IterationDiagnostics d;
                      d.w = e.w;
                      d.z_tilde = e.z_tilde;
                      d.v = e.v;
                      d.z_next = z_next;
                      traj.push_back(d);
                      cur = info.next;
                      ++checked;
                    });
  EXPECT_GT(checked, 5);
  EXPECT_LE((run.solution - x_star).norm(), 1e-6);
  EXPECT_FALSE(hpp::fejer_check(traj, z_star, p.core).has_value());
}
