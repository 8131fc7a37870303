#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "levscat/errors.hpp"

namespace levscat {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

namespace detail {

struct AdaptiveSimpsonState {
  const std::function<double(double)>* f;
  double tol_abs;
  long evals = 0;
  long eval_cap = 4000000;
  double error_accum = 0.0;
};

inline double adaptive_simpson_rec(AdaptiveSimpsonState& st, double a, double b,
                                   double fa, double fm, double fb, double whole,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  st.evals += 2;
  const double h = b - a;
  const double left = h / 12.0 * (fa + 4.0 * flm + fm);
  const double right = h / 12.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || st.evals > st.eval_cap) {
    st.error_accum += std::abs(delta) / 15.0;
    if (std::abs(delta) / 15.0 > st.tol_abs)
      throw numerical_error("adaptive quadrature did not converge", st.error_accum);
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * st.tol_abs * (h > 0 ? h : 1.0)) {
    st.error_accum += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(st, a, m, fa, flm, fm, left, depth - 1) +
         adaptive_simpson_rec(st, m, b, fm, frm, fb, right, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to relative tolerance rel_tol.
/// Throws numerical_error (carrying the achieved estimate) on non-convergence.
inline QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                           double a, double b, double rel_tol,
                                           double abs_floor = 1e-300) {
  if (!(b >= a)) throw validation_error("integrate_adaptive: need b >= a");
  QuadratureResult res;
  if (a == b) return res;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  detail::AdaptiveSimpsonState st;
  st.f = &f;
  st.evals = 3;
  // tolerance per unit length, scaled by a first-pass magnitude estimate
  const double scale = std::max(std::abs(whole), abs_floor);
  st.tol_abs = rel_tol * scale / (b - a);
  res.value = detail::adaptive_simpson_rec(st, a, b, fa, fm, fb, whole, 48);
  res.error_estimate = st.error_accum;
  res.evaluations = st.evals;
  return res;
}

/// Composite Simpson weights for n samples at uniform spacing dt; the last
/// three intervals fall back to the 3/8 rule when the interval count is odd.
/// n >= 4 required.
inline std::vector<double> simpson_weights(std::size_t n, double dt) {
  if (n < 4) throw validation_error("simpson_weights: need at least 4 samples");
  std::vector<double> w(n, 0.0);
  const std::size_t m = n - 1; // interval count
  const std::size_t simpson_end = (m % 2 == 0) ? m : m - 3;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2) {
    w[i] += dt / 3.0;
    w[i + 1] += 4.0 * dt / 3.0;
    w[i + 2] += dt / 3.0;
  }
  if (m % 2 != 0) {
    const std::size_t s = n - 4;
    w[s] += 3.0 * dt / 8.0;
    w[s + 1] += 9.0 * dt / 8.0;
    w[s + 2] += 9.0 * dt / 8.0;
    w[s + 3] += 3.0 * dt / 8.0;
  }
  return w;
}

} // namespace levscat
