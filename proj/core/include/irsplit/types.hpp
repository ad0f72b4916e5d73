#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace irsplit {

/// Finite-dimensional real vector; every iterate in the library is a Point.
using Point = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a scalar map.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

/// A parameter set violates one of the convergence conditions. The message
/// names the violated inequality.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// A relaxed projection was requested with v = 0; the certificate point is
/// itself a solution.
class ZeroV : public Error {
 public:
  using Error::Error;
};

/// The step ratio theta has a zero denominator (s = r, or x = z).
class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

/// An inexact resolvent oracle failed to produce an acceptable certificate.
class OracleFailure : public Error {
 public:
  using Error::Error;
};

/// Nonpositive curvature met inside conjugate gradients.
class CgBreakdown : public Error {
 public:
  using Error::Error;
};

class LineSearchFailure : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Iteration budget exhausted. Carries the last state so callers can inspect
/// or resume.
template <class State>
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, State last, std::int64_t outer,
                 std::int64_t inner)
      : Error(what), last_(std::move(last)), outer_(outer), inner_(inner) {}

  const State& last() const noexcept { return last_; }
  std::int64_t outer_iterations() const noexcept { return outer_; }
  std::int64_t inner_iterations() const noexcept { return inner_; }

 private:
  State last_;
  std::int64_t outer_;
  std::int64_t inner_;
};

enum class RunStatus { kConverged, kBudgetExceeded, kError };

const char* to_string(RunStatus s) noexcept;
RunStatus run_status_from_string(const std::string& s);

/// Per-run metrics shared by every solver.
struct RunRecord {
  std::int64_t outer_iters = 0;
  std::int64_t inner_iters_total = 0;
  double wall_seconds = 0.0;
  double final_kkt = 0.0;
  double final_objective = 0.0;
  RunStatus status = RunStatus::kConverged;
};

/// Absolute rounding level of a difference of vectors whose norms sum to
/// `scale`. Acceptance tests add its square to their right-hand side so an
/// exact solve passes at σ = 0.
inline double rounding_level(double scale) {
  return 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

void require_same_dim(const Point& a, const Point& b, const char* what);
void require_finite(const Point& a, const char* what);

}  // namespace irsplit
