#pragma once

// Approach to equilibrium of the reduced coin density.
//
// The transient of lambda_plus(t) around its limit Lambda_plus is a fast
// oscillation under a power-law envelope ~ K / t^c. This module extracts the
// envelope from a time series, fits (c, K) in log space, and implements the
// two-level master equation with time-dependent population rates
//
//   w_+- (t) = w_b + xi(t),   w_-+ (t) = w_a - xi(t),
//   xi(t) = (K/t^c) [ omega sin(omega t + delta)
//                     + (c/t - w_a - w_b) cos(omega t + delta) ],
//
// whose exact solution is
//
//   lambda_+(t) = Lambda_+ + (K/t^c) cos(omega t + delta) + d e^{-(w_a+w_b) t}
//
// provided the asymptotic rates satisfy detailed balance
// w_b / w_a = Lambda_- / Lambda_+.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qwalk/density.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

struct SeriesPoint {
  std::int64_t t = 0;
  double value = 0.0;
};

/// lambda_plus(t) for every recorded trajectory row.
inline std::vector<SeriesPoint> lambda_series(
    std::span<const TrajectoryRow> rows) {
  std::vector<SeriesPoint> out;
  out.reserve(rows.size());
  for (const TrajectoryRow& row : rows) {
    const EigenPair e = eigensystem(reduced_density(row.summary));
    out.push_back({row.summary.time, e.lambda_plus});
  }
  return out;
}

enum class EnvelopeBranch { upper, lower };

/// Local extrema of x(t) = lambda_plus(t) - Lambda_plus on one side of zero;
/// upper-branch values are > 0, lower-branch values < 0.
struct EnvelopeSeries {
  EnvelopeBranch branch = EnvelopeBranch::upper;
  std::vector<SeriesPoint> peaks;
};

struct Envelopes {
  EnvelopeSeries upper;
  EnvelopeSeries lower;
};

namespace detail {

inline Envelopes scan_extrema(std::span<const SeriesPoint> series,
                              double lambda_plus_inf, int window) {
  Envelopes env;
  env.upper.branch = EnvelopeBranch::upper;
  env.lower.branch = EnvelopeBranch::lower;
  const std::int64_t n = static_cast<std::int64_t>(series.size());
  const std::int64_t w = window;
  for (std::int64_t i = w; i < n - w; ++i) {
    const double x = series[i].value - lambda_plus_inf;
    bool is_max = x > 0.0;
    bool is_min = x < 0.0;
    for (std::int64_t j = i - w; j <= i + w && (is_max || is_min); ++j) {
      if (j == i) continue;
      const double y = series[j].value - lambda_plus_inf;
      if (y >= x) is_max = false;
      if (y <= x) is_min = false;
    }
    if (is_max) env.upper.peaks.push_back({series[i].t, x});
    if (is_min) env.lower.peaks.push_back({series[i].t, x});
  }
  return env;
}

}  // namespace detail

/// Extract both envelope branches. A point qualifies when it strictly
/// dominates its `window` nearest neighbours on each side (the oscillation is
/// dense, so minimal smoothing). min_peaks = 0 disables the per-branch count
/// check used by the default contract.
inline Envelopes extract_envelope(std::span<const SeriesPoint> series,
                                  double lambda_plus_inf, int window = 2,
                                  std::size_t min_peaks = 5) {
  if (series.size() < 16) {
    throw validation_error("series too short: need at least 16 samples");
  }
  if (window < 1) throw validation_error("peak window must be >= 1");
  Envelopes env = detail::scan_extrema(series, lambda_plus_inf, window);
  if (min_peaks > 0 && (env.upper.peaks.size() < min_peaks ||
                        env.lower.peaks.size() < min_peaks)) {
    throw validation_error(
        "too few envelope peaks: each branch needs at least " +
        std::to_string(min_peaks) + " points (upper " +
        std::to_string(env.upper.peaks.size()) + ", lower " +
        std::to_string(env.lower.peaks.size()) + ")");
  }
  return env;
}

/// Least-squares power law through envelope peaks: straight line on
/// (ln t, ln |value|), exponent c = -slope, amplitude K = exp(intercept).
/// A fit with c <= 0 is reported with decaying = false, not an error.
struct PowerLawFit {
  double exponent_c = 0.0;
  double amplitude_k = 0.0;
  double residual_rms = 0.0;  // in log space
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t n_peaks = 0;
  bool decaying = true;
};

inline PowerLawFit fit_power_law(const EnvelopeSeries& env, double t_lo,
                                 double t_hi) {
  std::vector<double> lt, lv;
  for (const SeriesPoint& p : env.peaks) {
    const double t = static_cast<double>(p.t);
    if (t < t_lo || t > t_hi || t <= 0.0) continue;
    lt.push_back(std::log(t));
    lv.push_back(std::log(std::abs(p.value)));
  }
  const std::size_t n = lt.size();
  if (n < 20) {
    throw validation_error(
        "insufficient data: need at least 20 peaks inside the fit window");
  }
  double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += lt[i];
    sv += lv[i];
    stt += lt[i] * lt[i];
    stv += lt[i] * lv[i];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * stt - st * st;
  const double slope = (dn * stv - st * sv) / denom;
  const double intercept = (sv - slope * st) / dn;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = lv[i] - (slope * lt[i] + intercept);
    ss += r * r;
  }
  PowerLawFit fit;
  fit.exponent_c = -slope;
  fit.amplitude_k = std::exp(intercept);
  fit.residual_rms = std::sqrt(ss / dn);
  fit.window_lo = t_lo;
  fit.window_hi = t_hi;
  fit.n_peaks = n;
  fit.decaying = fit.exponent_c > 0.0;
  return fit;
}

/// Constants of the rate model. w_a and w_b are the asymptotic population
/// rates (towards lambda_plus and lambda_minus respectively); detailed
/// balance ties them to the stationary pair.
struct MasterModel {
  double w_a = 0.0;
  double w_b = 0.0;
  double amplitude_k = 0.0;
  double exponent_c = 0.5;
  double omega = 0.0;
  double delta = 0.0;
  double coeff_d = 0.0;
  double lambda_plus_inf = 0.5;
  double lambda_minus_inf = 0.5;
};

/// w_b/w_a - Lambda_-/Lambda_+; zero exactly at detailed balance.
inline double detailed_balance_residual(double w_a, double w_b,
                                        double lambda_plus_inf) {
  if (!(w_a > 0.0)) throw validation_error("w_a must be positive");
  if (!(lambda_plus_inf > 0.0 && lambda_plus_inf < 1.0)) {
    throw validation_error("lambda_plus_inf must lie in (0, 1)");
  }
  return w_b / w_a - (1.0 - lambda_plus_inf) / lambda_plus_inf;
}

/// Build a model whose stationary pair satisfies detailed balance. When
/// lambda_plus_inf is omitted it is derived as w_a / (w_a + w_b); when given
/// it must be consistent with the rates (vacuously so if both rates vanish).
inline MasterModel make_master_model(
    double w_a, double w_b, double amplitude_k, double exponent_c,
    double omega, double delta, double coeff_d,
    std::optional<double> lambda_plus_inf = std::nullopt) {
  if (w_a < 0.0 || w_b < 0.0) {
    throw validation_error("asymptotic rates w_a, w_b must be >= 0");
  }
  if (!(exponent_c > 0.0)) {
    throw validation_error("power-law exponent c must be positive");
  }
  MasterModel m;
  m.w_a = w_a;
  m.w_b = w_b;
  m.amplitude_k = amplitude_k;
  m.exponent_c = exponent_c;
  m.omega = omega;
  m.delta = delta;
  m.coeff_d = coeff_d;
  if (lambda_plus_inf) {
    const double lp = *lambda_plus_inf;
    if (!(lp >= 0.0 && lp <= 1.0)) {
      throw validation_error("lambda_plus_inf must lie in [0, 1]");
    }
    // Detailed balance in cross-multiplied form, well defined at zero rates.
    if (std::abs(w_b * lp - w_a * (1.0 - lp)) > 1e-9 * (w_a + w_b)) {
      throw validation_error(
          "detailed balance violated: w_b/w_a must equal "
          "lambda_minus/lambda_plus");
    }
    m.lambda_plus_inf = lp;
  } else {
    if (!(w_a + w_b > 0.0)) {
      throw validation_error(
          "lambda_plus_inf must be given when both rates vanish");
    }
    m.lambda_plus_inf = w_a / (w_a + w_b);
  }
  m.lambda_minus_inf = 1.0 - m.lambda_plus_inf;
  return m;
}

/// xi(t), the decaying modulation shared by both rates. Singular at t = 0.
inline double rate_modulation(const MasterModel& m, double t) {
  if (!(t > 0.0)) throw validation_error("rates are defined for t > 0 only");
  const double phase = m.omega * t + m.delta;
  return m.amplitude_k / std::pow(t, m.exponent_c) *
         (m.omega * std::sin(phase) +
          (m.exponent_c / t - m.w_a - m.w_b) * std::cos(phase));
}

struct RatePair {
  double w_plus_minus = 0.0;  // transition lambda_+ -> lambda_-
  double w_minus_plus = 0.0;  // transition lambda_- -> lambda_+
  bool nonnegative = true;
};

inline RatePair population_rates(const MasterModel& m, double t) {
  const double xi = rate_modulation(m, t);
  RatePair r;
  r.w_plus_minus = m.w_b + xi;
  r.w_minus_plus = m.w_a - xi;
  r.nonnegative = r.w_plus_minus >= 0.0 && r.w_minus_plus >= 0.0;
  return r;
}

struct ClosedFormPoint {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  bool in_range = true;  // both components within [0, 1]
};

/// Exact solution of the rate equations at time t > 0.
inline ClosedFormPoint closed_form_solution(const MasterModel& m, double t) {
  if (!(t > 0.0)) {
    throw validation_error("closed form is defined for t > 0 only");
  }
  const double lp = m.lambda_plus_inf +
                    m.amplitude_k / std::pow(t, m.exponent_c) *
                        std::cos(m.omega * t + m.delta) +
                    m.coeff_d * std::exp(-(m.w_a + m.w_b) * t);
  ClosedFormPoint p;
  p.lambda_plus = lp;
  p.lambda_minus = 1.0 - lp;
  p.in_range = lp >= 0.0 && lp <= 1.0;
  return p;
}

struct MasterPoint {
  double t = 0.0;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
};

struct MasterSolution {
  std::vector<MasterPoint> points;
  double min_rate = 0.0;         // most negative rate seen over the span
  double max_truncation = 0.0;   // largest per-step local error estimate
};

/// Fixed-step fourth-order integration of
///   d lambda_+ / dt = lambda_- w_-+ - lambda_+ w_+-
/// reduced to the scalar lambda_+ (lambda_- := 1 - lambda_+, so the sum is
/// conserved exactly). The initial condition is the closed form at t0. Each
/// step is compared against two half steps; an estimated local error above
/// 1e-4 rejects the step size.
inline MasterSolution integrate_master(const MasterModel& m, double t0,
                                       double t1, double dt = 0.01) {
  if (!(t0 > 0.0)) throw validation_error("t0 must be positive");
  if (!(t1 >= t0)) throw validation_error("t1 must be >= t0");
  if (!(dt > 0.0)) throw validation_error("dt must be positive");

  MasterSolution sol;
  sol.min_rate = std::numeric_limits<double>::infinity();

  auto rhs = [&](double t, double s) {
    const RatePair r = population_rates(m, t);
    sol.min_rate = std::min({sol.min_rate, r.w_plus_minus, r.w_minus_plus});
    return (1.0 - s) * r.w_minus_plus - s * r.w_plus_minus;
  };
  auto rk4 = [&](double t, double s, double h) {
    const double k1 = rhs(t, s);
    const double k2 = rhs(t + h / 2, s + h / 2 * k1);
    const double k3 = rhs(t + h / 2, s + h / 2 * k2);
    const double k4 = rhs(t + h, s + h * k3);
    return s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  };

  double t = t0;
  double s = closed_form_solution(m, t0).lambda_plus;
  sol.points.push_back({t, s, 1.0 - s});
  while (t < t1) {
    const double h = std::min(dt, t1 - t);
    const double full = rk4(t, s, h);
    const double half = rk4(t + h / 2, rk4(t, s, h / 2), h / 2);
    const double est = std::abs(full - half) / 15.0;
    sol.max_truncation = std::max(sol.max_truncation, est);
    if (est > 1e-4) {
      throw numeric_error(
          "step size rejected: local truncation estimate above 1e-4 at t = " +
          std::to_string(t));
    }
    s = half;
    t += h;
    sol.points.push_back({t, s, 1.0 - s});
  }
  return sol;
}

}  // namespace qwalk
