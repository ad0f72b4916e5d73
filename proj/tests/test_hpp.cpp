#include "irsplit/hpp.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace irsplit;
using namespace irsplit::hpp;
using irsplit::oracles::vec;

namespace {

// Bisection on a bracketing interval; the oracle for every closed form here.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// All real roots of a ν² - b ν + c on [-10, 10] by sign changes on a grid,
// each refined by bisection.
std::vector<double> brute_force_roots(double a, double b, double c) {
  auto f = [&](double x) { return a * x * x - b * x + c; };
  std::vector<double> roots;
  const int steps = 20000;
  for (int i = 0; i < steps; ++i) {
    const double lo = -10.0 + 20.0 * i / steps;
    const double hi = -10.0 + 20.0 * (i + 1) / steps;
    if ((f(lo) > 0.0) != (f(hi) > 0.0)) roots.push_back(bisect(f, lo, hi));
  }
  return roots;
}

InertiaRelaxParams plain(double sigma = 0.0) {
  InertiaRelaxParams p;
  p.alpha = 0.0;
  p.beta = 0.5;
  p.sigma = sigma;
  p.rho_lo = p.rho_hi = 1.0;
  return p;
}

}  // namespace

TEST(RhoBarOfBeta, OneThirdGivesOne) {
  EXPECT_NEAR(rho_bar_of_beta(1.0 / 3.0), 1.0, 1e-12);
}

TEST(RhoBarOfBeta, Limits) {
  EXPECT_NEAR(rho_bar_of_beta(1e-12), 2.0, 1e-9);
  EXPECT_NEAR(rho_bar_of_beta(1.0 - 1e-9), 0.0, 1e-9);
}

TEST(RhoBarOfBeta, StandardSettings) {
  EXPECT_NEAR(rho_bar_of_beta(0.18976), 1.4882, 5e-5);
  EXPECT_NEAR(rho_bar_of_beta(0.1001), 1.7606, 5e-5);
}

TEST(RhoBarOfBeta, DomainErrors) {
  EXPECT_THROW(rho_bar_of_beta(0.0), DomainError);
  EXPECT_THROW(rho_bar_of_beta(1.0), DomainError);
  EXPECT_THROW(rho_bar_of_beta(-0.5), DomainError);
  EXPECT_THROW(rho_bar_of_beta(std::nan("")), DomainError);
}

TEST(RhoBarOfBeta, StrictlyDecreasing) {
  double prev = rho_bar_of_beta(1e-4);
  for (int i = 2; i < 10000; ++i) {
    const double cur = rho_bar_of_beta(i * 1e-4);
    ASSERT_LT(cur, prev) << "beta=" << i * 1e-4;
    prev = cur;
  }
}

TEST(BetaOfRhoBar, OneGivesOneThird) {
  EXPECT_NEAR(beta_of_rho_bar(1.0), 1.0 / 3.0, 1e-12);
}

TEST(BetaOfRhoBar, MatchesBisectionInverse) {
  for (double rb : {0.1, 0.5, 1.0, 1.4882, 1.7606, 1.99}) {
    const double oracle =
        bisect([&](double b) { return rho_bar_of_beta(b) - rb; }, 1e-15,
               1.0 - 1e-15);
    EXPECT_NEAR(beta_of_rho_bar(rb), oracle, 1e-12) << "rho_bar=" << rb;
  }
  EXPECT_NEAR(beta_of_rho_bar(1.4882), 0.18976, 5e-5);
}

TEST(BetaOfRhoBar, DomainErrors) {
  EXPECT_THROW(beta_of_rho_bar(0.0), DomainError);
  EXPECT_THROW(beta_of_rho_bar(2.0), DomainError);
  EXPECT_THROW(beta_of_rho_bar(std::numeric_limits<double>::infinity()),
               DomainError);
}

TEST(InversePair, IdentitiesOverSamples) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ub(1e-6, 1.0 - 1e-6);
  std::uniform_real_distribution<double> ur(1e-6, 2.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double b = ub(rng);
    const double r = ur(rng);
    ASSERT_NEAR(beta_of_rho_bar(rho_bar_of_beta(b)), b, 1e-10);
    ASSERT_NEAR(rho_bar_of_beta(beta_of_rho_bar(r)), r, 1e-10);
  }
}

TEST(QEval, RhoBarOneIsAffine) {
  EXPECT_NEAR(q_eval(1.0 / 3.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(q_eval(0.25, 1.0), 0.25, 1e-15);
}

TEST(QEval, PositiveAtZero) {
  for (double rb = 0.05; rb < 2.0; rb += 0.05) {
    EXPECT_GT(q_eval(0.0, rb), 0.0);
    EXPECT_NEAR(q_eval(0.0, rb), 2.0 / rb - 1.0, 1e-14);
  }
}

TEST(QEval, BetaIsRootAndQDecreasesBeforeIt) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ur(1e-3, 2.0 - 1e-3);
  for (int i = 0; i < 1000; ++i) {
    const double rb = ur(rng);
    const double beta = beta_of_rho_bar(rb);
    ASSERT_NEAR(q_eval(beta, rb), 0.0, 1e-10) << "rho_bar=" << rb;
    double prev = q_eval(0.0, rb);
    for (int j = 1; j <= 20; ++j) {
      const double cur = q_eval(beta * j / 20.0, rb);
      ASSERT_LT(cur, prev);
      prev = cur;
    }
  }
}

TEST(SmallestPositiveRoot, AffineCase) {
  EXPECT_NEAR(smallest_positive_root(0.0, 3.0, 1.0), 1.0 / 3.0, 1e-15);
}

TEST(SmallestPositiveRoot, ConvexCaseSmallerRoot) {
  EXPECT_NEAR(smallest_positive_root(1.0, 3.0, 2.0), 1.0, 1e-15);
}

TEST(SmallestPositiveRoot, ConcaveCaseMatchesBruteForce) {
  // Roots of -ν² - 3ν + 2: (-3 ± √17)/2; the positive one is 0.5616.
  const auto roots = brute_force_roots(-1.0, 3.0, 2.0);
  ASSERT_EQ(roots.size(), 2u);
  const double positive = std::max(roots[0], roots[1]);
  EXPECT_NEAR(smallest_positive_root(-1.0, 3.0, 2.0), positive, 1e-12);
  EXPECT_NEAR(positive, 0.5616, 1e-4);
}

TEST(SmallestPositiveRoot, RandomCoefficientsMatchBruteForce) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ua(-2.0, 2.0);
  std::uniform_real_distribution<double> ub(0.5, 5.0);
  std::uniform_real_distribution<double> uc(0.1, 3.0);
  int checked = 0;
  while (checked < 50) {
    const double a = ua(rng), b = ub(rng), c = uc(rng);
    if (b * b - 4 * a * c <= 0.01) continue;
    double best = std::numeric_limits<double>::infinity();
    for (double r : brute_force_roots(a, b, c)) {
      if (r > 0.0) best = std::min(best, r);
    }
    if (!std::isfinite(best)) continue;
    ASSERT_NEAR(smallest_positive_root(a, b, c), best, 1e-10)
        << a << " " << b << " " << c;
    ++checked;
  }
}

TEST(SmallestPositiveRoot, PreconditionErrors) {
  EXPECT_THROW(smallest_positive_root(1.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(smallest_positive_root(1.0, 3.0, 0.0), DomainError);
  EXPECT_THROW(smallest_positive_root(1.0, 1.0, 1.0), DomainError);
}

TEST(ValidateParams, AcceptsStandardAndDegenerateSettings) {
  InertiaRelaxParams p;
  p.alpha = 0.18966;
  p.beta = 0.18976;
  p.sigma = 0.99;
  p.rho_lo = p.rho_hi = 1.4882;
  EXPECT_NO_THROW(validate_params(p));
  p.alpha = 0.1;
  p.beta = 0.1001;
  p.rho_lo = p.rho_hi = 1.7606;
  EXPECT_NO_THROW(validate_params(p));
  EXPECT_NO_THROW(validate_params(plain()));
}

TEST(ValidateParams, NamesViolatedCondition) {
  auto message = [](const InertiaRelaxParams& p) {
    try {
      validate_params(p);
    } catch (const ParamError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  InertiaRelaxParams p = plain();
  p.alpha = 0.4;
  p.beta = 1.0 / 3.0;
  EXPECT_NE(message(p).find("alpha < beta"), std::string::npos);

  p = plain();
  p.sigma = 1.0;
  EXPECT_NE(message(p).find("sigma"), std::string::npos);

  p = plain();
  p.rho_lo = 1.5;
  p.rho_hi = 1.2;
  EXPECT_NE(message(p).find("rho_lo <= rho_hi"), std::string::npos);

  p = plain();
  p.rho_lo = p.rho_hi = 2.0;
  EXPECT_NE(message(p).find("rho_hi < 2"), std::string::npos);

  p = plain();
  p.alpha = 0.1;
  p.beta = 0.2;
  p.rho_lo = p.rho_hi = 1.8;
  EXPECT_NE(message(p).find("rho_bar_of_beta"), std::string::npos);

  p = plain();
  p.lambda = 0.0;
  EXPECT_NE(message(p).find("lambda"), std::string::npos);

  p = plain();
  p.beta = 1.0;
  EXPECT_NE(message(p).find("beta < 1"), std::string::npos);
}

TEST(ValidateParams, CoupledParamsSitOnCurve) {
  const auto p = coupled_params(0.1, 0.2, 0.5);
  EXPECT_DOUBLE_EQ(p.rho_hi, rho_bar_of_beta(0.2));
  EXPECT_DOUBLE_EQ(p.rho_lo, p.rho_hi);
  EXPECT_NO_THROW(validate_params(p));
}

TEST(Extrapolate, Examples) {
  const Point z = vec({1.0, 0.0});
  const Point zp = vec({0.0, 0.0});
  EXPECT_EQ(extrapolate(z, zp, 0.0), z);
  EXPECT_EQ(extrapolate(z, z, 0.7), z);
  EXPECT_EQ(extrapolate(z, zp, 0.5), vec({1.5, 0.0}));
  EXPECT_THROW(extrapolate(z, vec({0.0}), 0.5), DimensionMismatch);
}

TEST(ErrorCriterion, Examples) {
  const Point w = vec({1.0, 0.0});
  ProxCertificate exact{vec({0.5, 0.0}), vec({0.5, 0.0}), 1.0};
  EXPECT_TRUE(error_criterion_holds(w, exact, 0.0));
  ProxCertificate off{vec({0.6, 0.0}), vec({0.5, 0.0}), 1.0};
  EXPECT_FALSE(error_criterion_holds(w, off, 0.0));
  // LHS 0.01, RHS 0.25 (0.16 + 0.25) = 0.1025
  EXPECT_TRUE(error_criterion_holds(w, off, 0.5));
  EXPECT_NEAR(error_ratio(w, off, 0.5), 0.01 / 0.1025, 1e-12);
  EXPECT_FALSE(error_criterion_holds(w, off, 0.1));
}

TEST(GaussBounds, ExactCollapsesToEquality) {
  const Point w = vec({1.0, 2.0});
  ProxCertificate exact{vec({0.5, 1.0}), vec({0.5, 1.0}), 1.0};
  EXPECT_TRUE(gauss_bounds_hold(w, exact, 0.0));
  ProxCertificate off{vec({0.6, 0.0}), vec({0.5, 0.0}), 1.0};
  EXPECT_TRUE(gauss_bounds_hold(vec({1.0, 0.0}), off, 0.5));
}

TEST(GaussBounds, HoldForRandomAcceptedCertificates) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.0, 0.999);
  std::uniform_real_distribution<double> ul(0.1, 5.0);
  int accepted = 0;
  int zero_v_consistent = 0;
  while (accepted < 10000) {
    const Index n = 1 + static_cast<Index>(rng() % 6);
    const double sigma = us(rng);
    const double lambda = ul(rng);
    const Point w = oracles::random_point(n, rng);
    const Point zt = oracles::random_point(n, rng);
    // λv = (w - z̃) + e with ‖e‖ a random fraction of the admissible size.
    Point e = oracles::random_point(n, rng);
    const double bound = sigma * (zt - w).norm();
    e *= std::uniform_real_distribution<double>(0.0, 1.0)(rng) * bound /
         std::max(e.norm(), 1e-300);
    ProxCertificate cert{zt, ((w - zt) + e) / lambda, lambda};
    if (!error_criterion_holds(w, cert, sigma)) continue;
    ++accepted;
    ASSERT_TRUE(gauss_bounds_hold(w, cert, sigma))
        << "sigma=" << sigma << " n=" << n;
    if ((cert.v.norm() == 0.0) == ((zt - w).norm() == 0.0)) {
      ++zero_v_consistent;
    }
  }
  EXPECT_EQ(zero_v_consistent, accepted);
}

TEST(RelaxedProjection, Examples) {
  const Point w = vec({1.0, 0.0});
  ProxCertificate exact{vec({0.5, 0.0}), vec({0.5, 0.0}), 1.0};
  EXPECT_TRUE(relaxed_projection(w, exact, 1.0).isApprox(exact.z_tilde));
  ProxCertificate c{vec({0.0, 0.0}), vec({1.0, 0.0}), 1.0};
  EXPECT_EQ(relaxed_projection(w, c, 1.5), vec({-0.5, 0.0}));
  ProxCertificate zero{vec({0.0, 0.0}), vec({0.0, 0.0}), 1.0};
  EXPECT_THROW(relaxed_projection(w, zero, 1.0), ZeroV);
}

TEST(HppIterate, IdentityOperatorHalves) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  auto res = hpp_iterate(HppState::start(vec({1.0})), oracle, plain(), 0.0, 1.0);
  auto& step = std::get<HppStep>(res);
  EXPECT_EQ(step.state.z_cur, vec({0.5}));
  EXPECT_EQ(step.state.z_prev, vec({1.0}));
  EXPECT_EQ(step.state.k, 1);
  EXPECT_DOUBLE_EQ(step.diagnostics.tau, 1.0);
}

TEST(HppIterate, StartAtZeroIsSolution) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  auto res = hpp_iterate(HppState::start(vec({0.0})), oracle, plain(), 0.0, 1.0);
  ASSERT_TRUE(std::holds_alternative<ExactSolution>(res));
  EXPECT_EQ(std::get<ExactSolution>(res).z, vec({0.0}));
}

TEST(HppIterate, FiftyIterationsGeometric) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  HppState s = HppState::start(vec({1.0}));
  for (int k = 0; k < 50; ++k) {
    s = std::get<HppStep>(hpp_iterate(s, oracle, plain(), 0.0, 1.0)).state;
  }
  EXPECT_EQ(s.z_cur(0), std::ldexp(1.0, -50));
}

TEST(HppIterate, RejectsBadSchedules) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  InertiaRelaxParams p = coupled_params(0.2, 0.25, 0.0);
  HppState s = HppState::start(vec({1.0}));
  s.alpha_prev = 0.1;
  EXPECT_THROW(hpp_iterate(s, oracle, p, 0.05, p.rho_hi), ParamError);
  EXPECT_THROW(hpp_iterate(s, oracle, p, 0.3, p.rho_hi), ParamError);
  EXPECT_THROW(hpp_iterate(s, oracle, p, 0.1, p.rho_hi + 0.1), ParamError);
}

TEST(HppIterate, RejectsUnacceptableCertificate) {
  class Liar final : public InexactResolventOracle {
   public:
    OracleResult find(const Point& w, double lambda, double) override {
      return ProxCertificate{w, w, lambda};  // z̃ = w, v = w: LHS = ‖w‖²
    }
  } liar;
  EXPECT_THROW(hpp_iterate(HppState::start(vec({1.0})), liar, plain(0.5), 0.0,
                           1.0),
               OracleFailure);
}

TEST(RunHpp, IdentityConvergesQuickly) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  HppStop stop;
  stop.v_tolerance = 1e-8;
  auto run = run_hpp(vec({1.0}), oracle, plain(), stop);
  EXPECT_LE(run.record.outer_iters, 40);
  EXPECT_LE(std::abs(run.final_point(0)), 1e-8);
}

TEST(RunHpp, ZeroBudgetThrowsWithStart) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(1, 1));
  oracles::ExactOracle oracle(op);
  HppStop stop;
  stop.max_iters = 0;
  try {
    run_hpp(vec({1.0}), oracle, plain(), stop);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded<HppRun>& e) {
    EXPECT_EQ(e.last().final_point, vec({1.0}));
    EXPECT_EQ(e.last().record.status, RunStatus::kBudgetExceeded);
  }
}

TEST(RunHpp, RotationConvergesWithFejer) {
  oracles::LinearCatalogOperator op("rotation", oracles::rotation_operator());
  oracles::ExactOracle oracle(op);
  InertiaRelaxParams p = plain();
  HppStop stop;
  stop.v_tolerance = 1e-9;
  stop.max_iters = 2000;
  auto run = run_hpp(vec({1.0, -2.0}), oracle, p, stop);
  EXPECT_LE(run.final_point.norm(), 1e-8);
  EXPECT_FALSE(fejer_check(run.trajectory, op.zero(), p).has_value());
  for (std::size_t k = 1; k < run.trajectory.size(); ++k) {
    EXPECT_LE(run.trajectory[k].z_next.norm(),
              run.trajectory[k - 1].z_next.norm() * (1.0 + 1e-12));
  }
}

TEST(FejerCheck, ExactNonInertialHoldsWithoutTolerance) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(2, 2));
  oracles::ExactOracle oracle(op);
  HppStop stop;
  stop.max_iters = 60;
  stop.v_tolerance = 1e-12;
  auto run = run_hpp(vec({1.0, -3.0}), oracle, plain(), stop);
  EXPECT_FALSE(fejer_check(run.trajectory, op.zero(), plain(), 0.0).has_value());
}

TEST(FejerCheck, StationaryStart) {
  oracles::LinearCatalogOperator op("identity", Eigen::MatrixXd::Identity(2, 2));
  IterationDiagnostics d;
  d.w = d.z_tilde = d.z_next = Point::Zero(2);
  EXPECT_FALSE(fejer_check({d}, op.zero(), plain(), 0.0).has_value());
}

TEST(FejerCheck, DetectsViolation) {
  IterationDiagnostics d;
  d.w = vec({1.0});
  d.z_tilde = vec({0.5});
  d.z_next = vec({2.0});  // moved away from z* = 0
  auto at = fejer_check({d}, vec({0.0}), plain());
  ASSERT_TRUE(at.has_value());
  EXPECT_EQ(*at, 0u);
}

class CatalogRun : public ::testing::TestWithParam<int> {};

TEST_P(CatalogRun, InertialPerturbedRunsSatisfyFejerAndPartialSums) {
  const auto ops = oracles::operator_catalog();
  struct Setting {
    double alpha, beta, sigma;
  };
  const Setting settings[] = {
      {0.0, 0.5, 0.5}, {0.18966, 0.18976, 0.99}, {0.1, 0.1001, 0.9},
      {0.3, 0.33, 0.3}};
  const auto& setting = settings[GetParam()];
  for (const auto& op : ops) {
    InertiaRelaxParams p =
        coupled_params(setting.alpha, setting.beta, setting.sigma);
    if (setting.alpha == 0.0) p.rho_lo = p.rho_hi = 1.5;
    oracles::PerturbedOracle oracle(*op, 100 + GetParam());
    std::mt19937_64 rng(7);
    const Point z0 = oracles::random_point(op->dim(), rng, 3.0);
    HppStop stop;
    stop.max_iters = 400;
    stop.v_tolerance = 1e-5;
    HppRun run;
    try {
      run = run_hpp(z0, oracle, p, stop);
    } catch (const BudgetExceeded<HppRun>& e) {
      run = e.last();
    }
    ASSERT_FALSE(run.trajectory.empty()) << op->name();
    const Point z_star = op->zero();
    EXPECT_FALSE(fejer_check(run.trajectory, z_star, p).has_value())
        << op->name();
    EXPECT_FALSE(partial_sum_check(z0, run.trajectory, z_star, p).has_value())
        << op->name();
    // Increments die out along the run.
    const double first = (run.trajectory.front().z_next - z0).norm();
    const double last = std::sqrt(run.trajectory.back().increment_sq);
    EXPECT_LT(last, first) << op->name();
    for (const auto& d : run.trajectory) {
      ASSERT_GT(d.tau, 0.0);
      ASSERT_LE(d.error_ratio, 1.0);
      ASSERT_TRUE(gauss_bounds_hold(d.w, {d.z_tilde, d.v, d.lambda}, p.sigma));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Settings, CatalogRun, ::testing::Range(0, 4));
