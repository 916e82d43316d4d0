#pragma once

#include <utility>

namespace phstab::detail {

/// Golden-section minimisation on [lo, hi]. Returns the best evaluated
/// (x, f(x)); every evaluation is tracked, so cusp-shaped minima (smallest
/// singular values at eigenvalue crossings) are handled as well as smooth
/// ones. Stops at width xtol, max_iter, or double resolution.
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double xtol,
                                     int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  double best_x = f1 <= f2 ? x1 : x2;
  double best_f = f1 <= f2 ? f1 : f2;
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    if (f1 < best_f) {
      best_f = f1;
      best_x = x1;
    }
    if (f2 < best_f) {
      best_f = f2;
      best_x = x2;
    }
    if (!(x1 < x2)) break;  // interval exhausted at double resolution
  }
  return {best_x, best_f};
}

}  // namespace phstab::detail
