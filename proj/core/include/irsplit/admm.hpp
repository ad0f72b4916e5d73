#pragma once

// Partially inexact relative-error inertial-relaxed ADMM for min f + g.
//
// The f-subproblem is solved by an F-procedure until a relative error test
// on its gradient certificate y passes; the g-subproblem is solved exactly.
// Mapped by (s, b, r) = (x, -p, z) with γ = 1/c this is the Douglas-Rachford
// layer with A = ∂g and B = ∂f.

#include "irsplit/dr.hpp"
#include "irsplit/hpp.hpp"
#include "irsplit/problem.hpp"
#include "irsplit/types.hpp"

#include <functional>
#include <variant>
#include <vector>

namespace irsplit::admm {

struct PrimalDualTriple {
  Point x;
  Point z;
  Point p;

  static PrimalDualTriple zeros(Index n) {
    return {Point::Zero(n), Point::Zero(n), Point::Zero(n)};
  }
};

enum class Criterion {
  kSumSquares,  ///< ‖y‖² ≤ σ²(‖u‖² + ‖v‖²)
  kMaxForm,     ///< ‖y‖ ≤ σ max{‖u‖, ‖v‖}; stronger, faster in practice
};

const char* to_string(Criterion c) noexcept;
Criterion criterion_from_string(const std::string& s);

struct ADMMParams {
  double c = 1.0;
  hpp::InertiaRelaxParams core;
  Criterion criterion = Criterion::kMaxForm;
  double epsilon = 1e-6;
  std::int64_t inner_budget = 10000;
  std::int64_t max_outer = 10000;
  std::int64_t kkt_stride = 1;  ///< evaluate the KKT residual every n-th step
};

void validate(const ADMMParams& params);

/// σ = 0.99, c = 1, α = 0.18966, β = 0.18976, ρ̄ = 1.4882, MaxForm, ε = 1e-6.
ADMMParams lasso_defaults();
/// As lasso_defaults with α = 0.1, β = 0.1001, ρ̄ = 1.7606.
ADMMParams logistic_defaults();

PrimalDualTriple admm_extrapolate(const PrimalDualTriple& cur,
                                  const PrimalDualTriple& prev,
                                  double alpha_k);

/// p_ℓ = p̂ + c(x_ℓ - ẑ) - y_ℓ
Point multiplier_candidate(const Point& p_hat, const Point& x_l,
                           const Point& z_hat, const Point& y_l, double c);

bool admm_acceptance(const Point& y_l, const Point& p_l, const Point& p_hat,
                     const Point& z_l, const Point& z_hat, const Point& x_l,
                     double c, double sigma, Criterion criterion);

Point z_subproblem(const Point& p_l, const Point& x_l, double c,
                   const ShiftedProxG& prox);

/// θ = <c(ẑ - z_ℓ) - (p̂ - p_ℓ), x_ℓ - z_ℓ> / (c‖x_ℓ - z_ℓ‖²). Throws
/// ZeroDenominator when x_ℓ = z_ℓ.
double theta_admm(const PrimalDualTriple& hat, const Point& x_l,
                  const Point& z_l, const Point& p_l, double c);

/// p⁺ = p̂ + c[(1 - ρθ) z⁺ + ρθ x⁺ - ẑ]
Point p_update(const Point& p_hat, const Point& z_hat, const Point& z_next,
               const Point& x_next, double theta, double rho_k, double c);

/// B-procedure for B = ∂f built from an F-procedure:
///   B(r, b, γ, s̄, b̄, ℓ) = F(-b, r, γ⁻¹, s̄, ℓ) + (0, b - γ⁻¹(F₁(...) - r)).
/// b̄ is ignored. The F-procedure must outlive the adapter.
class FToBAdapter final : public dr::BProcedure {
 public:
  explicit FToBAdapter(FProcedure& fproc) : fproc_(fproc) {}
  std::unique_ptr<dr::BSession> open(const Point& r, const Point& b,
                                     double gamma, const Point& s_bar,
                                     const Point& b_bar) override;

 private:
  FProcedure& fproc_;
};

/// (s, b, r) = (x, -p, z); the matching γ is 1/c.
dr::SplitTriple embed_to_dr(const PrimalDualTriple& triple);

struct InnerTrial {
  Point x;
  Point y;
  Point p;
  Point z;
  bool accepted = false;
};

struct AdmmStepInfo {
  std::int64_t k = 0;
  PrimalDualTriple hat;
  std::vector<InnerTrial> trials;  ///< filled only when recording is on
  std::int64_t inner_used = 0;
  InnerTrial accepted;
  double theta = 0.0;
  double rho_k = 1.0;
  PrimalDualTriple next;
  /// p_ℓ - p̂ = c(z_ℓ - ẑ) held exactly; a solution indicator that the
  /// iteration records but does not act on.
  bool multiplier_stall = false;
};

/// x_ℓ = z_ℓ exactly after acceptance: z_ℓ is a solution.
struct AdmmSolved {
  std::int64_t k = 0;
  InnerTrial accepted;
  std::int64_t inner_used = 0;
};

using AdmmOuterResult = std::variant<AdmmStepInfo, AdmmSolved>;

/// One outer iteration. Throws BudgetExceeded<PrimalDualTriple> (hat point)
/// when the inner loop exhausts params.inner_budget.
AdmmOuterResult admm_outer_step(std::int64_t k, const PrimalDualTriple& cur,
                                const PrimalDualTriple& prev,
                                const ADMMParams& params, double alpha_k,
                                double rho_k, FProcedure& fproc,
                                const ShiftedProxG& prox,
                                bool record_trials = false);

struct AdmmObserver {
  std::function<void(const AdmmStepInfo&)> on_step;
  bool record_trials = false;
};

struct AdmmRun {
  Point solution;  ///< z at termination; exact zeros where g is ℓ1
  PrimalDualTriple final_triple;
  RunRecord record;
  std::int64_t multiplier_stall_events = 0;
};

/// Outer loop with constant α_k = α, ρ_k = ρ̄, stopping when the KKT
/// residual at z^k drops to ε (or x_ℓ = z_ℓ exactly). Throws
/// BudgetExceeded<AdmmRun> when max_outer passes.
AdmmRun run_admm(const CompositeProblem& problem, const ADMMParams& params,
                 const PrimalDualTriple& init,
                 const AdmmObserver& observer = {});

/// Same, starting at (0, 0, 0).
AdmmRun run_admm(const CompositeProblem& problem, const ADMMParams& params);

}  // namespace irsplit::admm
