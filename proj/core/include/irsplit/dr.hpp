#pragma once

// Partially inexact inertial-relaxed Douglas-Rachford splitting for
// 0 ∈ A(x) + B(x). The resolvent of A is exact; the B subproblem
//   b ∈ B(s),  s + γ b ≈ r̂ + γ b̂
// is solved incrementally by a B-procedure until a relative error test
// passes. Under z = r + γ b the method is an instance of hpp_iterate with
// λ = 1 applied to the splitting operator S_{γ,A,B}.

#include "irsplit/hpp.hpp"
#include "irsplit/types.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <variant>

namespace irsplit::dr {

struct SplitTriple {
  Point s;
  Point b;
  Point r;

  static SplitTriple zeros(Index n) {
    return {Point::Zero(n), Point::Zero(n), Point::Zero(n)};
  }
};

struct DRParams {
  double gamma = 1.0;
  hpp::InertiaRelaxParams core;
  std::int64_t inner_budget = 10000;
};

void validate(const DRParams& params);

/// Successive trial pairs (s_ℓ, b_ℓ) with b_ℓ ∈ B(s_ℓ) and
/// s_ℓ + γ b_ℓ → r + γ b.
class BSession {
 public:
  virtual ~BSession() = default;
  virtual std::pair<Point, Point> next() = 0;
};

/// Opens a session for one instance of s + γ B(s) ∋ r + γ b, warm-started
/// at (s_bar, b_bar). The sequence must converge; this is a producer
/// contract the interface cannot check.
class BProcedure {
 public:
  virtual ~BProcedure() = default;
  virtual std::unique_ptr<BSession> open(const Point& r, const Point& b,
                                         double gamma, const Point& s_bar,
                                         const Point& b_bar) = 0;
};

/// Exact resolvent u ↦ (I + γA)⁻¹ u.
class ResolventMap {
 public:
  virtual ~ResolventMap() = default;
  virtual Point apply(double gamma, const Point& u) const = 0;
};

/// Resolvent backed by a callable.
class FunctionResolvent final : public ResolventMap {
 public:
  using Fn = std::function<Point(double, const Point&)>;
  explicit FunctionResolvent(Fn fn) : fn_(std::move(fn)) {}
  Point apply(double gamma, const Point& u) const override {
    return fn_(gamma, u);
  }

 private:
  Fn fn_;
};

/// Resolvent of ∂(ν‖·‖₁): soft thresholding at γν.
class L1Resolvent final : public ResolventMap {
 public:
  explicit L1Resolvent(double nu) : nu_(nu) {}
  Point apply(double gamma, const Point& u) const override;

 private:
  double nu_;
};

/// One-step B-procedure from an exact resolvent of B:
/// s = J_{γB}(r + γb), b_out = (r + γb - s)/γ.
class ResolventBProcedure final : public BProcedure {
 public:
  explicit ResolventBProcedure(const ResolventMap& jb) : jb_(jb) {}
  std::unique_ptr<BSession> open(const Point& r, const Point& b, double gamma,
                                 const Point& s_bar,
                                 const Point& b_bar) override;

 private:
  const ResolventMap& jb_;
};

SplitTriple dr_extrapolate(const SplitTriple& cur, const SplitTriple& prev,
                           double alpha_k);

struct AStepResult {
  Point r;
  Point a;  ///< a ∈ A(r), r + γa = s - γb
};

AStepResult a_step(const Point& s, const Point& b, double gamma,
                   const ResolventMap& resolvent);

/// ‖s + γb - (r̂ + γb̂)‖² ≤ σ² (‖r + γb - (r̂ + γb̂)‖² + ‖s - r‖²)
bool dr_acceptance(const SplitTriple& hat, const Point& s, const Point& b,
                   const Point& r, double gamma, double sigma);

/// θ = <(r̂ - r) + γ(b̂ - b), s - r> / ‖s - r‖². Throws ZeroDenominator when
/// s = r.
double theta(const SplitTriple& hat, const Point& s, const Point& b,
             const Point& r, double gamma);

/// s⁺ = s, r⁺ = r, b⁺ = b̂ - γ⁻¹[(1 - ρθ) r + ρθ s - r̂].
SplitTriple dr_update(const SplitTriple& hat, const Point& s, const Point& r,
                      double theta, double rho_k, double gamma);

struct InnerResult {
  Point s;
  Point b;
  Point r;
  Point a;
  std::int64_t inner_used = 0;
};

/// Runs the B-procedure from the extrapolated triple until dr_acceptance
/// holds. Throws BudgetExceeded<SplitTriple> (last trial) after
/// params.inner_budget trials.
InnerResult inner_loop(const SplitTriple& hat, const DRParams& params,
                       BProcedure& bproc, const ResolventMap& resolvent);

struct DrStepInfo {
  std::int64_t k = 0;
  SplitTriple hat;
  InnerResult accepted;
  double theta = 0.0;
  double rho_k = 1.0;
  SplitTriple next;
};

/// s = r after an accepted inner loop: r solves 0 ∈ A(x) + B(x).
struct DrSolved {
  std::int64_t k = 0;
  InnerResult accepted;
};

using DrOuterResult = std::variant<DrStepInfo, DrSolved>;

/// One outer iteration from (cur, prev). Returns DrSolved when
/// ‖s - r‖ ≤ sr_tolerance.
DrOuterResult dr_outer_step(std::int64_t k, const SplitTriple& cur,
                            const SplitTriple& prev, const DRParams& params,
                            double alpha_k, double rho_k, BProcedure& bproc,
                            const ResolventMap& resolvent,
                            double sr_tolerance = 0.0);

struct DrStop {
  std::int64_t max_outer = 1000;
  double sr_tolerance = 0.0;
};

struct DrRun {
  Point solution;  ///< r at the stopping iteration
  SplitTriple final_triple;
  RunRecord record;
};

using DrObserver = std::function<void(const DrStepInfo&)>;

/// Constant α_k = α, ρ_k = ρ̄. Throws BudgetExceeded<DrRun> when max_outer
/// passes without s = r.
DrRun run_dr(const SplitTriple& init, const DRParams& params,
             BProcedure& bproc, const ResolventMap& resolvent,
             const DrStop& stop = {}, const DrObserver& observer = {});

/// z⁺ = J_{γA}(2 J_{γB}(z) - z) + z - J_{γB}(z)
Point classical_dr_step(const Point& z, double gamma, const ResolventMap& ja,
                        const ResolventMap& jb);

struct HppEmbedding {
  Point z;
  Point w;
  Point z_tilde;
  Point v;
};

/// z = r + γb, w = r̂ + γb̂, z̃ = r_acc + γ b_acc, v = s_acc - r_acc.
HppEmbedding embed_to_hpp(const SplitTriple& cur, const SplitTriple& hat,
                          const Point& s_acc, const Point& b_acc,
                          const Point& r_acc, double gamma);

}  // namespace irsplit::dr
