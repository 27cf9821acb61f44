#pragma once

// Reduced density operator of the coin after tracing out position:
//
//   rho_c = [ P_L   Q  ]
//           [ Q^*  P_R ]
//
// together with its spectrum/entropy and the classical map obeyed by the
// global chirality distribution (P_L, P_R).

#include <cmath>
#include <complex>
#include <cstdint>

#include "qwalk/errors.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

struct ReducedDensity {
  double p_left = 0.0;
  double p_right = 0.0;
  cplx q{};

  double determinant() const { return p_left * p_right - std::norm(q); }
};

/// Spectrum of rho_c. lambda_plus >= lambda_minus, lambda_plus + lambda_minus
/// = 1; entropy is reported in bits (maximum 1 at the maximally mixed point).
/// basis_angle is the mixing angle of the diagonalizing basis relative to the
/// chirality basis, in [0, pi/2].
struct EigenPair {
  double lambda_plus = 1.0;
  double lambda_minus = 0.0;
  double entropy_bits = 0.0;
  double basis_angle = 0.0;
};

inline constexpr double bits_to_nats = 0.69314718055994530942;  // ln 2

namespace detail {

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

}  // namespace detail

/// Binary Shannon entropy of {lambda, 1 - lambda} in bits, with 0 log 0 := 0.
inline double entropy_bits_of(double lambda_plus) {
  return -detail::xlog2x(lambda_plus) - detail::xlog2x(1.0 - lambda_plus);
}

inline constexpr double density_tolerance = 1e-12;

/// Package a chirality summary as the 2x2 reduced density operator,
/// validating trace and positivity.
inline ReducedDensity reduced_density(const ChiralitySummary& summary) {
  if (std::abs(summary.p_left + summary.p_right - 1.0) > density_tolerance) {
    throw numeric_error("reduced density trace deviates from 1 beyond 1e-12");
  }
  if (std::norm(summary.q) >
      summary.p_left * summary.p_right + density_tolerance) {
    throw numeric_error(
        "reduced density positivity violated: |Q|^2 > P_L P_R beyond 1e-12");
  }
  return ReducedDensity{summary.p_left, summary.p_right, summary.q};
}

/// Eigenvalues lambda_+- = (1 +- sqrt(1 - 4 det rho_c)) / 2 and the
/// entanglement entropy they carry. The determinant is clamped onto
/// [0, 1/4] when within 1e-12 of it; larger excursions raise numeric_error.
inline EigenPair eigensystem(const ReducedDensity& rho) {
  double det = rho.determinant();
  if (det < -density_tolerance || det > 0.25 + density_tolerance) {
    throw numeric_error("det(rho_c) outside [0, 1/4] beyond 1e-12");
  }
  det = std::min(std::max(det, 0.0), 0.25);
  const double root = std::sqrt(1.0 - 4.0 * det);
  EigenPair e;
  e.lambda_plus = 0.5 * (1.0 + root);
  e.lambda_minus = 0.5 * (1.0 - root);
  e.entropy_bits = entropy_bits_of(e.lambda_plus);
  e.basis_angle =
      0.5 * std::atan2(2.0 * std::abs(rho.q), rho.p_left - rho.p_right);
  return e;
}

struct ChiralityPair {
  double p_left = 0.0;
  double p_right = 0.0;
};

/// One step of the classical map for the global chirality distribution:
/// doubly stochastic mixing by the coin plus the interference drive
/// Re[Q] sin(2 theta) (+1, -1). The output sums to 1 exactly; components
/// outside [0, 1] signal an re_q inconsistent with the distribution.
inline ChiralityPair gcd_step(double p_left, double p_right, double re_q,
                              const CoinParameter& coin) {
  const double c2 = coin.cos_theta * coin.cos_theta;
  const double s2 = coin.sin_theta * coin.sin_theta;
  const double drive = re_q * 2.0 * coin.sin_theta * coin.cos_theta;
  const double pl = c2 * p_left + s2 * p_right + drive;
  return ChiralityPair{pl, 1.0 - pl};
}

/// Stationary point of gcd_step under a constant interference term:
/// Pi_{L,R} = (1 +- 2 re_q0 / tan(theta)) / 2. Iterating gcd_step converges
/// to it geometrically with ratio |cos(2 theta)|.
inline ChiralityPair gcd_stationary(double re_q0, const CoinParameter& coin) {
  if (coin.sin_theta == 0.0) {
    throw validation_error("stationary chirality needs theta > 0");
  }
  const double shift = re_q0 * coin.cos_theta / coin.sin_theta;
  const double pl = 0.5 + shift;
  if (pl < 0.0 || pl > 1.0) {
    throw validation_error(
        "stationary chirality outside [0, 1]: |2 re_q0 / tan(theta)| must "
        "not exceed 1");
  }
  return ChiralityPair{pl, 1.0 - pl};
}

}  // namespace qwalk
