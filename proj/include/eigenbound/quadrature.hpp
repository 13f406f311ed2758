#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace eigenbound {

// Trapezoid rule with interval doubling. For smooth integrands that extend
// periodically (or evenly, with vanishing odd derivatives at both endpoints)
// the trapezoid sum converges geometrically, so the doubling loop reaches
// tight tolerances in a handful of levels.
template <class F>
double integrate_doubling(F&& f, double a, double b, double rel_tol,
                          double abs_tol = 0.0, int max_level = 24) {
  double h = b - a;
  double t = 0.5 * h * (f(a) + f(b));
  std::int64_t n = 1;
  for (int level = 0; level < max_level; ++level) {
    double mid_sum = 0.0;
    double step = h / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i)
      mid_sum += f(a + (static_cast<double>(i) + 0.5) * step);
    double t_next = 0.5 * t + 0.5 * step * mid_sum;
    n *= 2;
    double err = std::abs(t_next - t);
    t = t_next;
    // The absolute floor lets integrals whose true value is 0 (odd or
    // sign-cancelling integrands) terminate; a pure relative test can never
    // be met by rounding noise around zero.
    if (level >= 2 && err <= rel_tol * std::abs(t) + abs_tol + 1e-300)
      return t;
  }
  throw std::runtime_error("integrate_doubling: tolerance not reached");
}

// Composite Simpson weights on a uniform grid with an odd number of nodes.
inline std::vector<double> simpson_weights(int n_nodes, double step) {
  if (n_nodes < 3 || n_nodes % 2 == 0)
    throw std::invalid_argument("simpson_weights: need odd n_nodes >= 3");
  std::vector<double> w(n_nodes, 0.0);
  for (int i = 0; i + 2 < n_nodes; i += 2) {
    w[i] += step / 3.0;
    w[i + 1] += 4.0 * step / 3.0;
    w[i + 2] += step / 3.0;
  }
  return w;
}

}  // namespace eigenbound
