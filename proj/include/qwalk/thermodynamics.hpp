#pragma once

// Equilibrium thermodynamics of the coin-position entanglement.
//
// The long-time interference term Q0 enters only through the scalar
//
//   chi = |Q0|^2 + (Re Q0 / tan theta)^2,        0 <= chi < 1/4,
//
// which fixes the asymptotic eigenvalues Lambda_+- = 1/2 +- sqrt(chi) of the
// reduced coin density. Identifying those with canonical weights
// e^{+-beta eps}/Z of a two-level system (energies -eps, +eps; eps := 1)
// yields the entanglement temperature and the rest of the thermodynamic
// functions. Isotherm generators invert the closed forms over grids of
// initial conditions.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "qwalk/density.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/initial_states.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

/// Interference scalar chi with provenance (the Q0 and theta it came from,
/// when known).
struct ChiParameter {
  double chi = 0.0;
  std::optional<cplx> q0;
  double theta = 0.0;

  explicit ChiParameter(double chi_) : chi(chi_) { check(); }
  ChiParameter(double chi_, cplx q0_, double theta_)
      : chi(chi_), q0(q0_), theta(theta_) {
    check();
  }

 private:
  void check() const {
    if (!(chi >= 0.0 && chi < 0.25)) {
      throw validation_error(
          "chi = |Q0|^2 + (Re Q0/tan theta)^2 must lie in [0, 1/4)");
    }
  }
};

/// All equilibrium functions in units of eps = 1. chi = 0 is the infinite
/// temperature point: beta = 0, T = +inf, A = -inf (flagged, not an overflow).
struct ThermoRecord {
  double epsilon = 1.0;
  double chi = 0.0;
  double beta = 0.0;            // inverse temperature, 1/eps units
  double temperature = 0.0;     // eps units; +inf at chi = 0
  double partition = 0.0;       // Z = 2 cosh(beta eps)
  double helmholtz = 0.0;       // A = -T ln Z; -inf at chi = 0
  double internal_energy = 0.0; // U = -2 eps sqrt(chi)
  double entropy_bits = 0.0;    // S0 in bits, max 1
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  bool infinite_temperature = false;
};

/// chi0 = 3/4 - 1/sqrt(2), the unbiased-coin value for a state initially
/// localized with chirality (1, 0).
inline double characteristic_chi() {
  return 0.75 - 1.0 / std::numbers::sqrt2;
}

/// chi from an asymptotic interference term. theta must be in (0, pi/2].
inline ChiParameter chi_from_q0(cplx q0, const CoinParameter& coin) {
  if (coin.sin_theta == 0.0) {
    throw validation_error("chi is undefined at theta = 0 (tan theta = 0)");
  }
  const double along = q0.real() * coin.cos_theta / coin.sin_theta;
  const double chi = std::norm(q0) + along * along;
  return ChiParameter(chi, q0, coin.theta);
}

/// Map chi onto the full canonical record.
inline ThermoRecord thermo_functions(const ChiParameter& param) {
  const double chi = param.chi;
  ThermoRecord r;
  r.chi = chi;
  const double root = std::sqrt(chi);
  r.lambda_plus = 0.5 + root;
  r.lambda_minus = 0.5 - root;
  r.entropy_bits = entropy_bits_of(r.lambda_plus);
  if (chi == 0.0) {
    r.beta = 0.0;
    r.temperature = std::numeric_limits<double>::infinity();
    r.partition = 2.0;
    r.helmholtz = -std::numeric_limits<double>::infinity();
    r.internal_energy = 0.0;
    r.infinite_temperature = true;
    return r;
  }
  const double m = 2.0 * root;  // tanh(beta eps) = Lambda_+ - Lambda_-
  r.beta = std::atanh(m);
  r.temperature = 1.0 / r.beta;
  r.partition = 2.0 * std::cosh(r.beta);
  r.helmholtz = -r.temperature * std::log(r.partition);
  r.internal_energy = -m;
  return r;
}

inline ThermoRecord thermo_functions(double chi) {
  return thermo_functions(ChiParameter(chi));
}

/// Asymptotic interference term for a localized start under the unbiased
/// coin, as a closed form in the Bloch angles.
inline cplx q0_localized_hadamard(const BlochAngles& angles) {
  const double amp = 0.5 * (1.0 - 1.0 / std::numbers::sqrt2);
  const double cg = std::cos(angles.gamma);
  const double sg = std::sin(angles.gamma);
  return amp * cplx{cg + sg * std::cos(angles.phi),
                    sg * std::numbers::sqrt2 * std::sin(angles.phi)};
}

/// chi for a localized start under the unbiased coin (through Q0).
inline ChiParameter chi_localized_hadamard(const BlochAngles& angles) {
  return chi_from_q0(q0_localized_hadamard(angles), hadamard_coin());
}

/// Same quantity collapsed to its closed form
/// chi = chi0 (1 + cos(phi) sin(2 gamma)).
inline double chi_localized_closed_form(const BlochAngles& angles) {
  return characteristic_chi() *
         (1.0 + std::cos(angles.phi) * std::sin(2.0 * angles.gamma));
}

/// Gaussian (extended) family: Q0 = cos(gamma) tan(theta) / 2 and
/// chi = (cos(gamma) / (2 cos(theta)))^2, valid while
/// |cos gamma| < |cos theta|.
inline ChiParameter q0_chi_distributed(double gamma,
                                       const CoinParameter& coin) {
  if (!(std::abs(std::cos(gamma)) < std::abs(coin.cos_theta))) {
    throw validation_error(
        "distributed initial condition requires |cos gamma| < |cos theta|");
  }
  const cplx q0{0.5 * std::cos(gamma) * coin.sin_theta / coin.cos_theta, 0.0};
  const double half = std::cos(gamma) / (2.0 * coin.cos_theta);
  return ChiParameter(half * half, q0, coin.theta);
}

/// beta * eps for the Gaussian family, directly from the angles:
/// (1/2) ln[(|cos theta| + |cos gamma|) / (|cos theta| - |cos gamma|)].
inline double beta_distributed(double gamma, const CoinParameter& coin) {
  const double ct = std::abs(coin.cos_theta);
  const double cg = std::abs(std::cos(gamma));
  if (!(cg < ct)) {
    throw validation_error(
        "distributed initial condition requires |cos gamma| < |cos theta|");
  }
  return 0.5 * std::log((ct + cg) / (ct - cg));
}

/// Reference temperature of the unbiased localized walk, T0 = 1/beta(chi0)
/// = 2/ln(1 + sqrt 2); every other temperature is reported against it.
inline double characteristic_temperature() {
  return 1.0 / std::atanh(2.0 * std::sqrt(characteristic_chi()));
}

/// One connected piece of a level set; (x, y) is (gamma, phi) for the
/// localized map and (gamma, theta) for the distributed one.
struct IsothermPoint {
  int branch = 0;
  double x = 0.0;
  double y = 0.0;
};

struct IsothermCurve {
  double level = 0.0;  // T/T0 (localized) or T in eps units (distributed)
  bool reachable = true;
  std::vector<IsothermPoint> points;
};

namespace detail {

// Bisection for a monotone continuous f with a sign change on [lo, hi].
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  const bool rising = flo < 0.0;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == rising) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

}  // namespace detail

/// Localized-family isotherm at T = t_ratio * T0: the level set of
/// cos(phi) sin(2 gamma) = R with R = (tanh beta / tanh beta0)^2 - 1,
/// solved per gamma grid line (both phi branches). R = 0 degenerates into
/// five straight lines; |R| > 1 means the temperature is unreachable and an
/// empty, flagged curve is returned. Levels are usually quoted rounded, so R
/// is snapped onto the boundary when within 1e-3 past it.
inline IsothermCurve isotherm_localized(double t_ratio, int samples = 512) {
  if (!(t_ratio > 0.0)) {
    throw validation_error("temperature ratio must be positive");
  }
  if (samples < 2) throw validation_error("need at least 2 grid samples");
  const double pi = std::numbers::pi;
  const double tanh0 = 2.0 * std::sqrt(characteristic_chi());
  const double beta = std::atanh(tanh0) / t_ratio;
  const double ratio = std::tanh(beta) / tanh0;
  double r = ratio * ratio - 1.0;

  IsothermCurve curve;
  curve.level = t_ratio;
  if (r > 1.0) {
    if (r > 1.0 + 1e-3) {
      curve.reachable = false;
      return curve;
    }
    r = 1.0;
  }
  r = std::max(r, -1.0);

  if (std::abs(r) < 1e-12) {
    // cos(phi) sin(2 gamma) = 0: three gamma lines and two phi lines.
    const double gamma_lines[] = {0.0, pi / 2, pi};
    const double phi_lines[] = {pi / 2, 3 * pi / 2};
    int branch = 0;
    for (double g : gamma_lines) {
      for (int i = 0; i < samples; ++i) {
        curve.points.push_back({branch, g, 2 * pi * i / (samples - 1)});
      }
      ++branch;
    }
    for (double p : phi_lines) {
      for (int i = 0; i < samples; ++i) {
        curve.points.push_back({branch, pi * i / (samples - 1), p});
      }
      ++branch;
    }
    return curve;
  }

  for (int i = 0; i < samples; ++i) {
    const double gamma = pi * i / (samples - 1);
    const double s2g = std::sin(2.0 * gamma);
    if (std::abs(s2g) < 1e-15 || std::abs(r / s2g) > 1.0) continue;
    auto f = [&](double phi) { return std::cos(phi) * s2g - r; };
    double phi;
    if (f(0.0) == 0.0) {
      phi = 0.0;
    } else if (f(pi) == 0.0) {
      phi = pi;
    } else if (f(0.0) * f(pi) > 0.0) {
      continue;
    } else {
      phi = detail::bisect(f, 0.0, pi);
    }
    curve.points.push_back({0, gamma, phi});
    if (phi > 0.0 && phi < pi) {
      curve.points.push_back({1, gamma, 2 * pi - phi});
    }
  }
  return curve;
}

/// Distributed-family isotherm at temperature T (eps units): per theta grid
/// line, solve |cos gamma| = |cos theta| tanh(1/T); the two gamma branches
/// sit symmetrically about pi/2. T = +inf collapses onto the gamma = pi/2
/// line.
inline IsothermCurve isotherm_distributed(double temperature,
                                          int samples = 512) {
  if (!(temperature > 0.0)) {
    throw validation_error("temperature must be positive");
  }
  if (samples < 2) throw validation_error("need at least 2 grid samples");
  const double pi = std::numbers::pi;
  const double m = std::tanh(1.0 / temperature);  // < 1 for T > 0

  IsothermCurve curve;
  curve.level = temperature;
  for (int i = 0; i < samples; ++i) {
    const double theta = (pi / 2) * i / (samples - 1);
    const double target = std::cos(theta) * m;
    auto f = [&](double g) { return std::cos(g) - target; };
    const double gamma = detail::bisect(f, 0.0, pi / 2);
    curve.points.push_back({0, gamma, theta});
    const double mirror = pi - gamma;
    if (mirror != gamma) curve.points.push_back({1, mirror, theta});
  }
  return curve;
}

/// Tail average of Q(t) over recorded steps t in [t_lo, t_hi], with the
/// sample standard deviation as an uncertainty. The plain mean suppresses the
/// decaying oscillation around the limit.
struct TailEstimate {
  cplx mean{};
  double stddev = 0.0;
  std::size_t count = 0;
};

inline TailEstimate estimate_q0_numeric(std::span<const TrajectoryRow> rows,
                                        std::int64_t t_lo, std::int64_t t_hi) {
  if (rows.empty()) throw validation_error("empty trajectory");
  if (t_lo > t_hi) throw validation_error("window must satisfy t_lo <= t_hi");
  if (t_hi > rows.back().summary.time) {
    throw validation_error("window end exceeds the last recorded step");
  }
  cplx sum{};
  std::size_t count = 0;
  for (const TrajectoryRow& row : rows) {
    if (row.summary.time < t_lo || row.summary.time > t_hi) continue;
    sum += row.summary.q;
    ++count;
  }
  if (count < 100) {
    throw validation_error(
        "window too short: need at least 100 recorded samples");
  }
  const cplx mean = sum / static_cast<double>(count);
  double var = 0.0;
  for (const TrajectoryRow& row : rows) {
    if (row.summary.time < t_lo || row.summary.time > t_hi) continue;
    var += std::norm(row.summary.q - mean);
  }
  return TailEstimate{mean, std::sqrt(var / static_cast<double>(count)),
                      count};
}

}  // namespace qwalk
