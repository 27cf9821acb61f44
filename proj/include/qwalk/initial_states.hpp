#pragma once

// Initial-state families for the walk: a state sharply localized at the
// origin with arbitrary chirality (Bloch angles gamma, phi), and a spatially
// extended Gaussian profile sharing one chirality spinor across sites.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

#include "qwalk/errors.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

/// Chirality direction on the Bloch sphere: gamma in [0, pi], phi in [0, 2pi].
struct BlochAngles {
  double gamma;
  double phi;

  BlochAngles(double gamma_, double phi_) : gamma(gamma_), phi(phi_) {
    if (!(gamma_ >= 0.0 && gamma_ <= std::numbers::pi)) {
      throw validation_error("gamma must lie in [0, pi]");
    }
    if (!(phi_ >= 0.0 && phi_ <= 2 * std::numbers::pi)) {
      throw validation_error("phi must lie in [0, 2pi]");
    }
  }
};

/// Gaussian profile of initial standard deviation sigma0 (lattice units),
/// truncated at +-cutoff_sites and renormalized. cutoff_sites = 0 selects the
/// default ceil(6 sigma0); an explicit smaller cutoff is rejected.
struct GaussianSpec {
  double sigma0;
  BlochAngles angles;
  std::int64_t cutoff_sites;

  GaussianSpec(double sigma0_, BlochAngles angles_,
               std::int64_t cutoff_sites_ = 0)
      : sigma0(sigma0_), angles(angles_), cutoff_sites(cutoff_sites_) {
    if (!(sigma0_ > 0.0)) throw validation_error("sigma0 must be positive");
    const auto min_cutoff =
        static_cast<std::int64_t>(std::ceil(6.0 * sigma0_));
    if (cutoff_sites == 0) {
      cutoff_sites = min_cutoff;
    } else if (cutoff_sites < min_cutoff) {
      throw validation_error(
          "truncation window too small: cutoff_sites must be >= ceil(6 sigma0)");
    }
  }

  /// The closed-form asymptotics used downstream assume sigma0 >> 1; we
  /// document sigma0 >= 10 as that regime. Smaller values are allowed but
  /// callers should surface a warning.
  bool in_asymptotic_regime() const { return sigma0 >= 10.0; }
};

/// State localized at the origin, a_0 = cos(gamma/2), b_0 = e^{i phi}
/// sin(gamma/2); unit norm by construction.
inline SpinorField localized(const BlochAngles& angles) {
  SpinorField f;
  f.offset = 0;
  f.time = 0;
  f.a = {cplx{std::cos(angles.gamma / 2), 0.0}};
  f.b = {std::polar(std::sin(angles.gamma / 2), angles.phi)};
  return f;
}

/// Extended Gaussian state: a_k = sqrt(g_k) cos(gamma/2),
/// b_k = e^{i phi} sqrt(g_k) sin(gamma/2), with the sampled weights g_k
/// renormalized over the truncated window so the total probability is 1.
inline SpinorField gaussian(const GaussianSpec& spec) {
  const std::int64_t w = spec.cutoff_sites;
  const std::size_t n = static_cast<std::size_t>(2 * w + 1);
  std::vector<double> g(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(static_cast<std::int64_t>(i) - w);
    g[i] = std::exp(-k * k / (2.0 * spec.sigma0 * spec.sigma0));
    total += g[i];
  }
  const double ca = std::cos(spec.angles.gamma / 2);
  const cplx cb = std::polar(std::sin(spec.angles.gamma / 2), spec.angles.phi);
  SpinorField f;
  f.offset = -w;
  f.time = 0;
  f.a.resize(n);
  f.b.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double amp = std::sqrt(g[i] / total);
    f.a[i] = cplx{amp * ca, 0.0};
    f.b[i] = amp * cb;
  }
  return f;
}

/// Phase that ties an extended initial condition to the coin bias through
/// cos(phi) = tan(theta)/tan(gamma). Returns the principal branch in [0, pi];
/// the mirror 2pi - phi solves the same constraint.
inline double distributed_phase(const CoinParameter& coin, double gamma) {
  const double pi = std::numbers::pi;
  if (gamma == 0.0 || gamma == pi ||
      (gamma == pi / 2 && coin.theta == pi / 2)) {
    throw validation_error(
        "tan(theta)/tan(gamma) is singular at gamma in {0, pi} and at "
        "gamma = theta = pi/2");
  }
  const double ratio = std::tan(coin.theta) / std::tan(gamma);
  if (std::abs(ratio) > 1.0) {
    throw validation_error(
        "no phase satisfies cos(phi) = tan(theta)/tan(gamma): |ratio| > 1");
  }
  return std::acos(ratio);
}

/// Applicability flags for the extended-family closed forms.
struct DistributedValidity {
  // |cos(gamma)| < |cos(theta)|: the closed-form temperature applies.
  bool temperature_formula_valid = false;
  // |tan(theta)/tan(gamma)| <= 1: the phase constraint has a solution.
  bool phase_solvable = false;
};

inline DistributedValidity distributed_validity(const CoinParameter& coin,
                                                double gamma) {
  DistributedValidity v;
  v.temperature_formula_valid =
      std::abs(std::cos(gamma)) < std::abs(std::cos(coin.theta));
  const double tg = std::tan(gamma);
  v.phase_solvable =
      tg != 0.0 && std::abs(std::tan(coin.theta) / tg) <= 1.0;
  return v;
}

/// Parsed initial-condition specification (see the JSON schema in io.hpp).
struct InitialSpec {
  enum class Kind { localized, gaussian };
  Kind kind = Kind::localized;
  BlochAngles angles{0.0, 0.0};
  double sigma0 = 0.0;            // gaussian only
  std::int64_t cutoff_sites = 0;  // gaussian only; 0 = auto

  SpinorField build() const {
    if (kind == Kind::localized) return localized(angles);
    return gaussian(GaussianSpec(sigma0, angles, cutoff_sites));
  }
};

}  // namespace qwalk
