#include "irsplit/types.hpp"

namespace irsplit {

const char* to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::kConverged:
      return "converged";
    case RunStatus::kBudgetExceeded:
      return "budget_exceeded";
    case RunStatus::kError:
      return "error";
  }
  return "error";
}

RunStatus run_status_from_string(const std::string& s) {
  if (s == "converged") return RunStatus::kConverged;
  if (s == "budget_exceeded") return RunStatus::kBudgetExceeded;
  if (s == "error") return RunStatus::kError;
  throw Error("unknown run status '" + s + "'");
}

void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionMismatch(std::string(what) + ": dimension " +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()));
  }
}

void require_finite(const Point& a, const char* what) {
  if (!a.allFinite()) {
    throw NonFiniteInput(std::string(what) + ": non-finite entry");
  }
}

}  // namespace irsplit
