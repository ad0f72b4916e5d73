#pragma once

// Relative-error inertial-relaxed hybrid proximal projection for 0 ∈ T(z).
//
// One iteration extrapolates w = z + α_k (z - z_prev), asks an inexact
// resolvent oracle for a pair (z̃, v) with v ∈ T(z̃) that passes the relative
// error test against w, and then moves along v past the separating
// hyperplane {z : <z, v> = <z̃, v>} by a relaxation factor ρ_k.

#include "irsplit/types.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace irsplit::hpp {

/// Standard parameter values are quoted to four decimals, so the coupling
/// ρ̄ ≤ ψ(β) is checked with this much slack.
inline constexpr double kRhoBarRoundingSlack = 5e-5;

struct InertiaRelaxParams {
  double alpha = 0.0;   ///< inertial cap
  double beta = 0.5;    ///< coupling parameter, alpha < beta < 1
  double sigma = 0.0;   ///< relative error tolerance in [0, 1)
  double rho_lo = 1.0;
  double rho_hi = 1.0;  ///< must not exceed rho_bar_of_beta(beta)
  double lambda = 1.0;  ///< constant proximal stepsize
};

/// ψ(β) = 2(β-1)² / (2(β-1)² + 3β - 1), the largest relaxation compatible
/// with inertia bounded by β. Decreasing from 2 (β→0) to 0 (β→1).
double rho_bar_of_beta(double beta);

/// φ(ρ̄), the inverse of rho_bar_of_beta on (0, 2).
double beta_of_rho_bar(double rho_bar);

/// q(ν) = 2(ρ̄⁻¹-1)ν² - (4ρ̄⁻¹-1)ν + 2ρ̄⁻¹ - 1; beta_of_rho_bar(ρ̄) is its
/// smallest positive root.
double q_eval(double nu, double rho_bar);

/// Smallest positive root of aν² - bν + c for b, c > 0 and b² > 4ac, in the
/// rationalized form 2c / (b + sqrt(b² - 4ac)). Valid for a of any sign.
double smallest_positive_root(double a, double b, double c);

/// Throws ParamError naming the first violated condition.
void validate_params(const InertiaRelaxParams& p);

/// Parameters on the coupling curve: ρ̲ = ρ̄ = ψ(β).
InertiaRelaxParams coupled_params(double alpha, double beta, double sigma,
                                  double lambda = 1.0);

struct ProxCertificate {
  Point z_tilde;
  Point v;  ///< v ∈ T(z_tilde), producer contract
  double lambda = 1.0;
};

/// The oracle found v = 0, so z is a zero of T.
struct ExactSolution {
  Point z;
};

using OracleResult = std::variant<ProxCertificate, ExactSolution>;

/// Inexact resolvent: given w, λ and σ, return a certificate satisfying the
/// relative error test against w. A session object; one run owns it.
class InexactResolventOracle {
 public:
  virtual ~InexactResolventOracle() = default;
  /// Throws OracleFailure when no acceptable certificate is found.
  virtual OracleResult find(const Point& w, double lambda, double sigma) = 0;
};

struct HppState {
  Point z_cur;
  Point z_prev;
  std::int64_t k = 0;
  double alpha_prev = 0.0;  ///< last α_k used, for the monotonicity check

  static HppState start(const Point& z0) { return {z0, z0, 0, 0.0}; }
};

struct IterationDiagnostics {
  Point w;
  Point z_tilde;
  Point v;
  Point z_next;
  double lambda = 1.0;
  double alpha_k = 0.0;
  double rho_k = 1.0;
  double tau = 0.0;           ///< <w - z̃, v> / ‖v‖²
  double s_next = 0.0;        ///< s_{k+1}
  double error_ratio = 0.0;   ///< LHS / RHS of the relative error test
  double increment_sq = 0.0;  ///< ‖z^k - z^{k-1}‖²
  double delta = 0.0;         ///< α_k (1 + α_k) ‖z^k - z^{k-1}‖²
};

Point extrapolate(const Point& z_cur, const Point& z_prev, double alpha_k);

/// ‖λv + z̃ - w‖² ≤ σ² (‖z̃ - w‖² + ‖λv‖²)
bool error_criterion_holds(const Point& w, const ProxCertificate& cert,
                           double sigma);

/// LHS / RHS of the relative error test. 0 when both vanish, +inf when only
/// the RHS does.
double error_ratio(const Point& w, const ProxCertificate& cert, double sigma);

/// Two-sided bound on ‖λv‖ in terms of ‖z̃ - w‖ implied by an accepted
/// certificate. The upper bound is vacuous at σ = 0.
bool gauss_bounds_hold(const Point& w, const ProxCertificate& cert,
                       double sigma);

/// z⁺ = w - ρ_k (<w - z̃, v> / ‖v‖²) v. Throws ZeroV when v = 0.
Point relaxed_projection(const Point& w, const ProxCertificate& cert,
                         double rho_k);

/// s_{k+1} = (2-ρ̄) max{ρ̄⁻¹ ‖z⁺ - w‖², ρ̲ (1-σ²)² ‖z̃ - w‖²}
double fejer_gap(const Point& z_next, const Point& w, const Point& z_tilde,
                 const InertiaRelaxParams& params);

struct HppStep {
  HppState state;
  IterationDiagnostics diagnostics;
};

using HppIterateResult = std::variant<HppStep, ExactSolution>;

/// One full iteration. Returns ExactSolution when the oracle reports v = 0.
HppIterateResult hpp_iterate(const HppState& state,
                             InexactResolventOracle& oracle,
                             const InertiaRelaxParams& params, double alpha_k,
                             double rho_k);

struct HppStop {
  std::int64_t max_iters = 1000;
  double v_tolerance = 0.0;  ///< 0 stops only on v = 0 exactly
};

struct HppRun {
  Point final_point;
  std::vector<IterationDiagnostics> trajectory;
  RunRecord record;
  bool exact_solution = false;  ///< stopped on v = 0 (or ‖v‖ ≤ tolerance)
};

/// Constant α_k = α and ρ_k = ρ̄. Throws BudgetExceeded<HppRun> when
/// max_iters iterations pass without a stop.
HppRun run_hpp(const Point& z0, InexactResolventOracle& oracle,
               const InertiaRelaxParams& params, const HppStop& stop = {});

/// First index k at which ‖z^{k+1} - z*‖² + s_{k+1} ≤ (1 + tol_rel) ‖w^k - z*‖²
/// fails, or nullopt if it holds along the whole trajectory.
std::optional<std::size_t> fejer_check(
    const std::vector<IterationDiagnostics>& trajectory, const Point& z_star,
    const InertiaRelaxParams& params, double tol_rel = 1e-9);

/// First k ≥ 1 at which φ_k + Σ_{j=1..k} s_j ≤ φ_0 + (1-α)⁻¹ Σ_{j<k} δ_j
/// fails (φ_k = ‖z^k - z*‖²), or nullopt. z0 is the starting point.
std::optional<std::size_t> partial_sum_check(
    const Point& z0, const std::vector<IterationDiagnostics>& trajectory,
    const Point& z_star, const InertiaRelaxParams& params,
    double tol_rel = 1e-9);

}  // namespace irsplit::hpp
