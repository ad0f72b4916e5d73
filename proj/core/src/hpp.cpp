#include "irsplit/hpp.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace irsplit::hpp {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

double rho_bar_of_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw DomainError("rho_bar_of_beta: beta = " + fmt(beta) +
                      " outside (0, 1)");
  }
  const double num = 2.0 * (beta - 1.0) * (beta - 1.0);
  return num / (num + 3.0 * beta - 1.0);
}

double beta_of_rho_bar(double rho_bar) {
  if (!(rho_bar > 0.0 && rho_bar < 2.0)) {
    throw DomainError("beta_of_rho_bar: rho_bar = " + fmt(rho_bar) +
                      " outside (0, 2)");
  }
  return 2.0 * (2.0 - rho_bar) /
         (4.0 - rho_bar + std::sqrt(16.0 * rho_bar - 7.0 * rho_bar * rho_bar));
}

double q_eval(double nu, double rho_bar) {
  if (!(rho_bar > 0.0 && rho_bar < 2.0)) {
    throw DomainError("q_eval: rho_bar = " + fmt(rho_bar) + " outside (0, 2)");
  }
  const double inv = 1.0 / rho_bar;
  return 2.0 * (inv - 1.0) * nu * nu - (4.0 * inv - 1.0) * nu + 2.0 * inv - 1.0;
}

double smallest_positive_root(double a, double b, double c) {
  const double disc = b * b - 4.0 * a * c;
  if (!(b > 0.0) || !(c > 0.0) || !(disc > 0.0)) {
    throw DomainError("smallest_positive_root: requires b > 0, c > 0 and "
                      "b^2 - 4ac > 0 (a=" + fmt(a) + ", b=" + fmt(b) +
                      ", c=" + fmt(c) + ")");
  }
  return 2.0 * c / (b + std::sqrt(disc));
}

void validate_params(const InertiaRelaxParams& p) {
  const double vals[] = {p.alpha, p.beta, p.sigma, p.rho_lo, p.rho_hi, p.lambda};
  for (double v : vals) {
    if (!std::isfinite(v)) throw ParamError("parameters must be finite");
  }
  if (!(p.alpha >= 0.0)) throw ParamError("0 <= alpha violated");
  if (!(p.alpha < p.beta)) throw ParamError("alpha < beta violated");
  if (!(p.beta < 1.0)) throw ParamError("beta < 1 violated");
  if (!(p.sigma >= 0.0 && p.sigma < 1.0)) {
    throw ParamError("0 <= sigma < 1 violated");
  }
  if (!(p.rho_lo > 0.0)) throw ParamError("0 < rho_lo violated");
  if (!(p.rho_lo <= p.rho_hi)) throw ParamError("rho_lo <= rho_hi violated");
  if (!(p.rho_hi < 2.0)) throw ParamError("rho_hi < 2 violated");
  // Without inertia the coupling is vacuous: any ρ̄ < 2 is admissible.
  if (p.alpha > 0.0) {
    const double cap = rho_bar_of_beta(p.beta);
    if (!(p.rho_hi <= cap + kRhoBarRoundingSlack)) {
      throw ParamError("rho_hi <= rho_bar_of_beta(beta) violated (rho_hi=" +
                       fmt(p.rho_hi) + ", bound=" + fmt(cap) + ")");
    }
  }
  if (!(p.lambda > 0.0)) throw ParamError("lambda > 0 violated");
}

InertiaRelaxParams coupled_params(double alpha, double beta, double sigma,
                                  double lambda) {
  const double rho = rho_bar_of_beta(beta);
  InertiaRelaxParams p{alpha, beta, sigma, rho, rho, lambda};
  validate_params(p);
  return p;
}

Point extrapolate(const Point& z_cur, const Point& z_prev, double alpha_k) {
  require_same_dim(z_cur, z_prev, "extrapolate");
  if (alpha_k == 0.0) return z_cur;
  return z_cur + alpha_k * (z_cur - z_prev);
}

namespace {

struct ErrorTerms {
  double lhs;
  double rhs;
  double floor;  ///< squared rounding level of the residual λv + z̃ - w
};

ErrorTerms error_terms(const Point& w, const ProxCertificate& cert,
                       double sigma) {
  require_same_dim(w, cert.z_tilde, "error criterion");
  require_same_dim(w, cert.v, "error criterion");
  const Point lv = cert.lambda * cert.v;
  const double lhs = (lv + cert.z_tilde - w).squaredNorm();
  const double rhs =
      sigma * sigma * ((cert.z_tilde - w).squaredNorm() + lv.squaredNorm());
  const double r = rounding_level(lv.norm() + cert.z_tilde.norm() + w.norm());
  return {lhs, rhs, r * r};
}

}  // namespace

bool error_criterion_holds(const Point& w, const ProxCertificate& cert,
                           double sigma) {
  const auto [lhs, rhs, floor] = error_terms(w, cert, sigma);
  return lhs <= rhs + floor;
}

double error_ratio(const Point& w, const ProxCertificate& cert, double sigma) {
  const ErrorTerms t = error_terms(w, cert, sigma);
  if (t.rhs > 0.0) return t.lhs / t.rhs;
  return t.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool gauss_bounds_hold(const Point& w, const ProxCertificate& cert,
                       double sigma) {
  require_same_dim(w, cert.z_tilde, "gauss_bounds_hold");
  const double dist = (cert.z_tilde - w).norm();
  const double lv = std::abs(cert.lambda) * cert.v.norm();
  const double s2 = 1.0 - sigma * sigma;
  const double root = std::sqrt(std::max(0.0, 1.0 - s2 * s2));
  const double lower = s2 / (1.0 + root) * dist;
  const double upper = root < 1.0 ? s2 / (1.0 - root) * dist
                                  : std::numeric_limits<double>::infinity();
  // Rounding slack: at σ = 0 both bounds collapse onto ‖λv‖ itself.
  const double slack = 1e-12 * (dist + lv);
  const bool upper_ok = sigma == 0.0 || lv <= upper + slack;
  return lower <= lv + slack && upper_ok;
}

Point relaxed_projection(const Point& w, const ProxCertificate& cert,
                         double rho_k) {
  require_same_dim(w, cert.z_tilde, "relaxed_projection");
  require_same_dim(w, cert.v, "relaxed_projection");
  const double vv = cert.v.squaredNorm();
  if (vv == 0.0) throw ZeroV("relaxed_projection: v = 0, z_tilde solves");
  const double tau = (w - cert.z_tilde).dot(cert.v) / vv;
  return w - (rho_k * tau) * cert.v;
}

double fejer_gap(const Point& z_next, const Point& w, const Point& z_tilde,
                 const InertiaRelaxParams& params) {
  const double s2 = 1.0 - params.sigma * params.sigma;
  const double a = (z_next - w).squaredNorm() / params.rho_hi;
  const double b = params.rho_lo * s2 * s2 * (z_tilde - w).squaredNorm();
  return (2.0 - params.rho_hi) * std::max(a, b);
}

HppIterateResult hpp_iterate(const HppState& state,
                             InexactResolventOracle& oracle,
                             const InertiaRelaxParams& params, double alpha_k,
                             double rho_k) {
  if (!(alpha_k >= state.alpha_prev && alpha_k <= params.alpha)) {
    throw ParamError("alpha_k must be nondecreasing and at most alpha (alpha_k=" +
                     fmt(alpha_k) + ")");
  }
  if (!(rho_k >= params.rho_lo && rho_k <= params.rho_hi)) {
    throw ParamError("rho_k outside [rho_lo, rho_hi]");
  }
  const Point w = extrapolate(state.z_cur, state.z_prev, alpha_k);
  OracleResult found = oracle.find(w, params.lambda, params.sigma);
  if (auto* sol = std::get_if<ExactSolution>(&found)) return *sol;

  auto& cert = std::get<ProxCertificate>(found);
  require_same_dim(w, cert.z_tilde, "oracle certificate");
  require_same_dim(w, cert.v, "oracle certificate");
  if (cert.v.squaredNorm() == 0.0) return ExactSolution{cert.z_tilde};
  if (!error_criterion_holds(w, cert, params.sigma)) {
    throw OracleFailure("oracle certificate violates the relative error test");
  }

  IterationDiagnostics d;
  d.w = w;
  d.lambda = cert.lambda;
  d.alpha_k = alpha_k;
  d.rho_k = rho_k;
  d.tau = (w - cert.z_tilde).dot(cert.v) / cert.v.squaredNorm();
  d.error_ratio = error_ratio(w, cert, params.sigma);
  d.z_next = relaxed_projection(w, cert, rho_k);
  d.s_next = fejer_gap(d.z_next, w, cert.z_tilde, params);
  d.increment_sq = (state.z_cur - state.z_prev).squaredNorm();
  d.delta = alpha_k * (1.0 + alpha_k) * d.increment_sq;
  d.z_tilde = std::move(cert.z_tilde);
  d.v = std::move(cert.v);

  HppStep step;
  step.state = HppState{d.z_next, state.z_cur, state.k + 1, alpha_k};
  step.diagnostics = std::move(d);
  return step;
}

HppRun run_hpp(const Point& z0, InexactResolventOracle& oracle,
               const InertiaRelaxParams& params, const HppStop& stop) {
  validate_params(params);
  require_finite(z0, "run_hpp z0");
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  HppRun run;
  HppState state = HppState::start(z0);
  for (std::int64_t k = 0; k < stop.max_iters; ++k) {
    HppIterateResult res =
        hpp_iterate(state, oracle, params, params.alpha, params.rho_hi);
    if (auto* sol = std::get_if<ExactSolution>(&res)) {
      run.final_point = sol->z;
      run.exact_solution = true;
      run.record.outer_iters = k;
      run.record.final_kkt = 0.0;
      run.record.wall_seconds = elapsed();
      return run;
    }
    auto& step = std::get<HppStep>(res);
    const double vnorm = step.diagnostics.v.norm();
    const Point z_tilde = step.diagnostics.z_tilde;
    run.trajectory.push_back(std::move(step.diagnostics));
    state = std::move(step.state);
    if (stop.v_tolerance > 0.0 && vnorm <= stop.v_tolerance) {
      run.final_point = z_tilde;
      run.exact_solution = true;
      run.record.outer_iters = k + 1;
      run.record.final_kkt = vnorm;
      run.record.wall_seconds = elapsed();
      return run;
    }
  }
  run.final_point = state.z_cur;
  run.record.outer_iters = stop.max_iters;
  run.record.final_kkt =
      run.trajectory.empty() ? 0.0 : run.trajectory.back().v.norm();
  run.record.wall_seconds = elapsed();
  run.record.status = RunStatus::kBudgetExceeded;
  throw BudgetExceeded<HppRun>("run_hpp: iteration budget exhausted",
                               std::move(run), stop.max_iters, 0);
}

std::optional<std::size_t> fejer_check(
    const std::vector<IterationDiagnostics>& trajectory, const Point& z_star,
    const InertiaRelaxParams& params, double tol_rel) {
  for (std::size_t k = 0; k < trajectory.size(); ++k) {
    const auto& d = trajectory[k];
    const double lhs = (d.z_next - z_star).squaredNorm() +
                       fejer_gap(d.z_next, d.w, d.z_tilde, params);
    const double rhs = (d.w - z_star).squaredNorm();
    if (lhs > rhs * (1.0 + tol_rel)) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> partial_sum_check(
    const Point& z0, const std::vector<IterationDiagnostics>& trajectory,
    const Point& z_star, const InertiaRelaxParams& params, double tol_rel) {
  const double phi0 = (z0 - z_star).squaredNorm();
  const double scale = 1.0 / (1.0 - params.alpha);
  double s_sum = 0.0;
  double delta_sum = 0.0;
  for (std::size_t k = 1; k <= trajectory.size(); ++k) {
    const auto& prev = trajectory[k - 1];
    s_sum += fejer_gap(prev.z_next, prev.w, prev.z_tilde, params);
    delta_sum += prev.delta;
    const double phi_k = (prev.z_next - z_star).squaredNorm();
    const double lhs = phi_k + s_sum;
    const double rhs = phi0 + scale * delta_sum;
    if (lhs > rhs * (1.0 + tol_rel)) return k;
  }
  return std::nullopt;
}

}  // namespace irsplit::hpp
