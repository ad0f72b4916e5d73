#pragma once

#include "irsplit/types.hpp"

namespace irsplit {

/// Prox of κ‖·‖₁: componentwise sign(t_i) max(|t_i| - κ, 0).
Point soft_threshold(const Point& t, double kappa);

/// Soft thresholding on all coordinates except the first `skip` ones, which
/// pass through unchanged.
Point soft_threshold_tail(const Point& t, double kappa, Index skip);

}  // namespace irsplit
