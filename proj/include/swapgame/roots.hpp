#pragma once

#include <cmath>
#include <stdexcept>

namespace swapgame {

/// Bisection on [lo, hi] until the bracket width falls below xtol.
/// Requires f(lo) and f(hi) of opposite (or zero) sign.
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect_root: endpoints do not bracket a root");
  }
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace swapgame
