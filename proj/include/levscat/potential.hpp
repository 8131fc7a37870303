#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "levscat/errors.hpp"
#include "levscat/quadrature.hpp"

namespace levscat {

enum class PotentialKind { free, square_well, gaussian, exponential, tabulated };

inline const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::free: return "free";
    case PotentialKind::square_well: return "square_well";
    case PotentialKind::gaussian: return "gaussian";
    case PotentialKind::exponential: return "exponential";
    case PotentialKind::tabulated: return "tabulated";
  }
  return "?";
}

/// A spherically symmetric short-range potential with a certified decay
/// envelope |V(r)| <= c_env (1+r)^{-beta_decay}, beta_decay > 1.  V is treated
/// as exactly zero beyond r_cut.  Units: hbar = 2m = 1, so H = -Delta + V and
/// energies are inverse squared lengths.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::free;
  double strength = 0.0;   // V0 > 0; the value inside an attractive well is -V0
  double range = 1.0;      // a (square well), sigma (gaussian), mu (exponential)
  double r_cut = 1.0;
  double beta_decay = 6.0;
  double c_env = 0.0;

  // tabulated data (monotone cubic between samples, hard zero beyond)
  std::vector<double> table_r;
  std::vector<double> table_v;
  std::vector<double> table_slope;
  std::string table_path;

  bool is_free() const { return kind == PotentialKind::free; }

  double evaluate(double r) const {
    if (r < 0.0) throw validation_error("evaluate: r must be >= 0");
    if (r > r_cut) return 0.0;
    switch (kind) {
      case PotentialKind::free: return 0.0;
      case PotentialKind::square_well: return (r <= range) ? -strength : 0.0;
      case PotentialKind::gaussian: {
        const double z = r / range;
        return -strength * std::exp(-z * z);
      }
      case PotentialKind::exponential: return -strength * std::exp(-r / range);
      case PotentialKind::tabulated: return eval_table(r);
    }
    return 0.0;
  }

  /// Largest |V| over the support; exact for the analytic kinds.
  double max_abs() const {
    if (kind == PotentialKind::tabulated) {
      double m = 0.0;
      for (double v : table_v) m = std::max(m, std::abs(v));
      return m;
    }
    return (kind == PotentialKind::free) ? 0.0 : strength;
  }

  /// Lower bound of V, used to bracket bound-state energies.
  double min_value() const {
    if (kind == PotentialKind::tabulated) {
      double m = 0.0;
      for (double v : table_v) m = std::min(m, v);
      return m;
    }
    return (kind == PotentialKind::free) ? 0.0 : -strength;
  }

  /// True when V does not change sign (node-theorem counting is then exact).
  bool sign_definite() const {
    if (kind != PotentialKind::tabulated) return true;
    bool has_pos = false, has_neg = false;
    for (double v : table_v) {
      if (v > 0.0) has_pos = true;
      if (v < 0.0) has_neg = true;
    }
    return !(has_pos && has_neg);
  }

  double eval_table(double r) const {
    if (table_r.empty()) return 0.0;
    if (r <= table_r.front()) return table_v.front();
    if (r >= table_r.back()) return 0.0;
    const auto it = std::upper_bound(table_r.begin(), table_r.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - table_r.begin()) - 1;
    const double h = table_r[i + 1] - table_r[i];
    const double t = (r - table_r[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * table_v[i] + h * h10 * table_slope[i] + h01 * table_v[i + 1] +
           h * h11 * table_slope[i + 1];
  }
};

namespace detail {

/// Fritsch-Carlson monotone cubic slopes.
inline std::vector<double> pchip_slopes(const std::vector<double>& x,
                                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    s[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = s[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i - 1] * s[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d0 = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d0 * s0 <= 0.0) return 0.0;
    if (s0 * s1 < 0.0 && std::abs(d0) > 3.0 * std::abs(s0)) return 3.0 * s0;
    return d0;
  };
  d[0] = end_slope(h[0], h[1], s[0], s[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  return d;
}

inline void require_positive_finite(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw validation_error(std::string(name) + " must be finite and > 0");
}

/// Largest |V|(1+r)^beta over a dense sample: a certificate constant.
inline double envelope_constant(const PotentialSpec& p, int samples = 512) {
  double c = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double r = p.r_cut * static_cast<double>(i) / samples;
    c = std::max(c, std::abs(p.evaluate(r)) * std::pow(1.0 + r, p.beta_decay));
  }
  return c;
}

} // namespace detail

/// Checks |V(r)| <= c_env (1+r)^{-beta} on a dense sample of [0, r_cut].
inline bool envelope_holds(const PotentialSpec& p, int samples = 512) {
  for (int i = 0; i <= samples; ++i) {
    const double r = p.r_cut * static_cast<double>(i) / samples;
    const double bound = p.c_env * std::pow(1.0 + r, -p.beta_decay);
    if (std::abs(p.evaluate(r)) > bound * (1.0 + 1e-12) + 1e-300) return false;
  }
  return true;
}

inline PotentialSpec make_free() {
  PotentialSpec p;
  p.kind = PotentialKind::free;
  p.strength = 0.0;
  p.range = 1.0;
  p.r_cut = 1.0;
  p.beta_decay = 6.0;
  p.c_env = 0.0;
  return p;
}

inline PotentialSpec make_square_well(double v0, double a, double r_cut = 0.0) {
  detail::require_positive_finite(v0, "V0");
  detail::require_positive_finite(a, "a");
  PotentialSpec p;
  p.kind = PotentialKind::square_well;
  p.strength = v0;
  p.range = a;
  p.r_cut = (r_cut > 0.0) ? r_cut : a;
  if (p.r_cut < a) throw validation_error("square_well: r_cut must be >= a");
  p.beta_decay = 6.0;
  p.c_env = detail::envelope_constant(p) * 1.000001;
  return p;
}

inline PotentialSpec make_gaussian(double v0, double sigma, double r_cut = 0.0) {
  detail::require_positive_finite(v0, "V0");
  detail::require_positive_finite(sigma, "sigma");
  PotentialSpec p;
  p.kind = PotentialKind::gaussian;
  p.strength = v0;
  p.range = sigma;
  p.r_cut = (r_cut > 0.0) ? r_cut : 7.0 * sigma;
  p.beta_decay = 6.0;
  p.c_env = detail::envelope_constant(p) * 1.000001;
  return p;
}

inline PotentialSpec make_exponential(double v0, double mu, double r_cut = 0.0) {
  detail::require_positive_finite(v0, "V0");
  detail::require_positive_finite(mu, "mu");
  PotentialSpec p;
  p.kind = PotentialKind::exponential;
  p.strength = v0;
  p.range = mu;
  p.r_cut = (r_cut > 0.0) ? r_cut : mu * (32.0 + std::log1p(v0));
  p.beta_decay = 6.0;
  p.c_env = detail::envelope_constant(p) * 1.000001;
  return p;
}

/// Tabulated potential: monotone cubic between samples, zero beyond the last
/// sample.  The decay certificate (c_env, beta) is caller-supplied and is
/// validated against the samples, not inferred.
inline PotentialSpec make_tabulated(std::vector<double> r, std::vector<double> v,
                                    double beta, double c_env,
                                    std::string path = {}) {
  if (r.size() != v.size() || r.size() < 4)
    throw validation_error("tabulated: need >= 4 (r, V) samples of equal length");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i]) || r[i] < 0.0)
      throw validation_error("tabulated: samples must be finite with r >= 0");
    if (i > 0 && !(r[i] > r[i - 1]))
      throw validation_error("tabulated: r samples must be strictly increasing");
  }
  if (!(beta > 1.0))
    throw validation_error("tabulated: decay certificate requires beta > 1");
  if (!(c_env > 0.0) || !std::isfinite(c_env))
    throw validation_error("tabulated: c_env must be finite and > 0");
  PotentialSpec p;
  p.kind = PotentialKind::tabulated;
  p.table_r = std::move(r);
  p.table_v = std::move(v);
  p.table_slope = detail::pchip_slopes(p.table_r, p.table_v);
  p.table_path = std::move(path);
  p.r_cut = p.table_r.back();
  p.range = p.r_cut;
  p.strength = p.max_abs();
  p.beta_decay = beta;
  p.c_env = c_env;
  if (!envelope_holds(p))
    throw validation_error("tabulated: samples violate the declared envelope "
                           "c(1+r)^-beta");
  return p;
}

/// Born constant nu = integral of V(r) r^2 dr over [0, r_cut] (the spherical
/// reduction of (4pi)^-1 * integral of V over R^3).  Closed form where one
/// exists, cross-checked against adaptive quadrature at tolerance rel_tol.
inline double born_nu(const PotentialSpec& p, double rel_tol = 1e-8) {
  if (p.kind == PotentialKind::free) return 0.0;

  double closed = 0.0;
  bool have_closed = true;
  switch (p.kind) {
    case PotentialKind::square_well:
      closed = -p.strength * p.range * p.range * p.range / 3.0;
      break;
    case PotentialKind::gaussian: {
      const double s = p.range, z = p.r_cut / s;
      closed = -p.strength * s * s * s *
               (0.25 * std::sqrt(M_PI) * std::erf(z) - 0.5 * z * std::exp(-z * z));
      break;
    }
    case PotentialKind::exponential: {
      const double m = p.range, z = p.r_cut / m;
      closed = -p.strength * m * m * m * (2.0 - std::exp(-z) * (2.0 + 2.0 * z + z * z));
      break;
    }
    default:
      have_closed = false;
      break;
  }

  const auto f = [&p](double r) { return p.evaluate(r) * r * r; };
  if (p.kind == PotentialKind::tabulated) {
    // exact per-segment Gauss-Legendre (cubic * r^2 has degree 5)
    static const double gx[4] = {-0.8611363115940526, -0.33998104358485626,
                                 0.33998104358485626, 0.8611363115940526};
    static const double gw[4] = {0.34785484513745385, 0.6521451548625461,
                                 0.6521451548625461, 0.34785484513745385};
    double acc = 0.0;
    // leading clamp segment [0, r_0]
    if (p.table_r.front() > 0.0) {
      const double r0 = p.table_r.front();
      acc += p.table_v.front() * r0 * r0 * r0 / 3.0;
    }
    for (std::size_t i = 0; i + 1 < p.table_r.size(); ++i) {
      const double a = p.table_r[i], b = p.table_r[i + 1];
      const double c = 0.5 * (a + b), h = 0.5 * (b - a);
      for (int q = 0; q < 4; ++q) acc += gw[q] * h * f(c + h * gx[q]);
    }
    closed = acc;
    have_closed = true;
  }

  const QuadratureResult quad = integrate_adaptive(f, 0.0, p.r_cut, rel_tol,
                                                   std::abs(closed) + 1e-30);
  if (have_closed) {
    const double tol = std::max(64.0 * rel_tol * std::abs(closed), 1e-12);
    if (std::abs(quad.value - closed) > tol)
      throw inconsistency_error(
          "born_nu: closed form and quadrature disagree: " +
          std::to_string(closed) + " vs " + std::to_string(quad.value));
    return closed;
  }
  return quad.value;
}

} // namespace levscat
