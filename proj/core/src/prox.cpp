#include "irsplit/prox.hpp"

#include <cmath>

namespace irsplit {

Point soft_threshold(const Point& t, double kappa) {
  return soft_threshold_tail(t, kappa, 0);
}

Point soft_threshold_tail(const Point& t, double kappa, Index skip) {
  if (!(kappa >= 0.0)) throw DomainError("soft_threshold: kappa < 0");
  Point out(t.size());
  for (Index i = 0; i < t.size(); ++i) {
    if (i < skip) {
      out[i] = t[i];
      continue;
    }
    const double mag = std::abs(t[i]) - kappa;
    out[i] = mag > 0.0 ? std::copysign(mag, t[i]) : 0.0;
  }
  return out;
}

}  // namespace irsplit
