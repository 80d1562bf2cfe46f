#pragma once

#include <cmath>
#include <stdexcept>

namespace emarket {

/// Bracketed bisection for a root of f on [lo, hi]. f(lo) and f(hi) must not
/// share a strict sign; stops when the bracket is narrower than tol.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw std::invalid_argument("bisect: root is not bracketed");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace emarket
