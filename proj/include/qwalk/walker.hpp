#pragma once

// Exact unitary evolution of the discrete-time quantum walk on the line.
//
// The state is a two-component complex amplitude field (a_k, b_k) over a
// finite lattice window; the window grows by one site per side per step, so
// the stored support always covers the light cone and everything outside it
// is exactly zero. One step of the walk with coin bias theta:
//
//   a_k(t+1) = a_{k+1}(t) cos(theta) + b_{k+1}(t) sin(theta)
//   b_k(t+1) = a_{k-1}(t) sin(theta) - b_{k-1}(t) cos(theta)
//
// The upper component carries left chirality, the lower one right chirality.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using cplx = std::complex<double>;

/// Coin bias angle; theta = pi/4 is the unbiased (Hadamard) coin.
struct CoinParameter {
  double theta;
  double cos_theta;
  double sin_theta;

  explicit CoinParameter(double theta_) : theta(theta_) {
    if (!(theta_ >= 0.0 && theta_ <= std::numbers::pi / 2)) {
      throw validation_error("coin angle theta must lie in [0, pi/2]");
    }
    cos_theta = std::cos(theta_);
    sin_theta = std::sin(theta_);
  }
};

inline CoinParameter hadamard_coin() {
  return CoinParameter(std::numbers::pi / 4);
}

/// Spinor amplitude field over a contiguous lattice window.
/// Site k is stored at index k - offset; amplitudes outside the window are 0.
struct SpinorField {
  std::int64_t offset = 0;  // lattice index of the first stored site
  std::vector<cplx> a;      // left-chirality amplitudes
  std::vector<cplx> b;      // right-chirality amplitudes
  std::int64_t time = 0;

  std::int64_t size() const { return static_cast<std::int64_t>(a.size()); }
  std::int64_t k_min() const { return offset; }
  std::int64_t k_max() const { return offset + size() - 1; }

  cplx amp_left(std::int64_t k) const {
    const std::int64_t i = k - offset;
    return (i >= 0 && i < size()) ? a[static_cast<std::size_t>(i)] : cplx{};
  }
  cplx amp_right(std::int64_t k) const {
    const std::int64_t i = k - offset;
    return (i >= 0 && i < size()) ? b[static_cast<std::size_t>(i)] : cplx{};
  }

  double norm() const {
    double s = 0.0;
    for (const cplx& v : a) s += std::norm(v);
    for (const cplx& v : b) s += std::norm(v);
    return s;
  }
};

/// Global chirality probabilities and the interference term
/// Q(t) = sum_k a_k(t) b_k(t)^* at one time step.
struct ChiralitySummary {
  double p_left = 0.0;
  double p_right = 0.0;
  cplx q{};
  std::int64_t time = 0;
};

namespace detail {

// One walk step written into a caller-owned destination field (buffers are
// reused across steps by evolve; src and dst must be distinct objects).
inline void step_into(const SpinorField& src, const CoinParameter& coin,
                      SpinorField& dst) {
  const std::size_t n = src.a.size();
  const double c = coin.cos_theta;
  const double s = coin.sin_theta;
  dst.offset = src.offset - 1;
  dst.time = src.time + 1;
  dst.a.assign(n + 2, cplx{});
  dst.b.assign(n + 2, cplx{});
  // New index j holds site k = src.offset - 1 + j; sources sit at old index j
  // (for a, pulling from site k+1) and j - 2 (for b, pulling from site k-1).
  for (std::size_t j = 0; j < n; ++j) {
    dst.a[j] = c * src.a[j] + s * src.b[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    dst.b[j + 2] = s * src.a[j] - c * src.b[j];
  }
}

}  // namespace detail

/// One unitary step of the walk. Total map: theta = 0 (decoupled shift) and
/// theta = pi/2 (pure swap) are valid degenerate coins.
inline SpinorField step(const SpinorField& field, const CoinParameter& coin) {
  SpinorField next;
  detail::step_into(field, coin, next);
  return next;
}

/// Chirality probabilities and interference term, exact sums over the window.
inline ChiralitySummary observables(const SpinorField& field) {
  ChiralitySummary out;
  out.time = field.time;
  double pl = 0.0, pr = 0.0;
  cplx q{};
  const std::size_t n = field.a.size();
  for (std::size_t i = 0; i < n; ++i) {
    pl += std::norm(field.a[i]);
    pr += std::norm(field.b[i]);
    q += field.a[i] * std::conj(field.b[i]);
  }
  out.p_left = pl;
  out.p_right = pr;
  out.q = q;
  return out;
}

/// P(k,t) = |a_k|^2 + |b_k|^2 for every stored site with nonzero weight.
inline std::map<std::int64_t, double> position_distribution(
    const SpinorField& field) {
  std::map<std::int64_t, double> dist;
  for (std::int64_t i = 0; i < field.size(); ++i) {
    const double p = std::norm(field.a[static_cast<std::size_t>(i)]) +
                     std::norm(field.b[static_cast<std::size_t>(i)]);
    if (p > 0.0) dist[field.offset + i] = p;
  }
  return dist;
}

/// <x|y> over the union of the two windows; missing sites contribute zero.
inline cplx inner_product(const SpinorField& x, const SpinorField& y) {
  const std::int64_t lo = std::max(x.k_min(), y.k_min());
  const std::int64_t hi = std::min(x.k_max(), y.k_max());
  cplx acc{};
  for (std::int64_t k = lo; k <= hi; ++k) {
    acc += std::conj(x.amp_left(k)) * y.amp_left(k) +
           std::conj(x.amp_right(k)) * y.amp_right(k);
  }
  return acc;
}

/// Default cap on stored sites per field (two growing buffers of this many
/// complex pairs; ~32 MB each at the cap).
inline constexpr std::size_t default_max_sites = 1u << 20;

struct TrajectoryRow {
  ChiralitySummary summary;
  double norm = 0.0;  // p_left + p_right; drift is monitored, never repaired
};

/// Advance a state by `steps` without recording observables.
inline SpinorField evolve_field(const SpinorField& init,
                                const CoinParameter& coin, std::int64_t steps,
                                std::size_t max_sites = default_max_sites) {
  if (steps < 0) throw validation_error("steps must be >= 0");
  const std::size_t final_sites =
      init.a.size() + 2 * static_cast<std::size_t>(steps);
  if (final_sites > max_sites) {
    throw resource_limit_error(
        "lattice window would reach " + std::to_string(final_sites) +
        " sites, above the configured maximum of " + std::to_string(max_sites));
  }
  SpinorField cur = init;
  SpinorField next;
  cur.a.reserve(final_sites);
  cur.b.reserve(final_sites);
  next.a.reserve(final_sites);
  next.b.reserve(final_sites);
  for (std::int64_t t = 0; t < steps; ++t) {
    detail::step_into(cur, coin, next);
    std::swap(cur, next);
  }
  return cur;
}

/// Deterministic trajectory driver: records observables at t = 0 and then at
/// every step divisible by record_every, giving floor(steps/record_every) + 1
/// rows. Throws resource_limit_error before running if the final window would
/// exceed max_sites.
inline std::vector<TrajectoryRow> evolve(
    const SpinorField& init, const CoinParameter& coin, std::int64_t steps,
    std::int64_t record_every = 1, std::size_t max_sites = default_max_sites) {
  if (steps < 0) throw validation_error("steps must be >= 0");
  if (record_every < 1) throw validation_error("record_every must be >= 1");
  const std::size_t final_sites =
      init.a.size() + 2 * static_cast<std::size_t>(steps);
  if (final_sites > max_sites) {
    throw resource_limit_error(
        "lattice window would reach " + std::to_string(final_sites) +
        " sites, above the configured maximum of " + std::to_string(max_sites));
  }

  std::vector<TrajectoryRow> rows;
  rows.reserve(static_cast<std::size_t>(steps / record_every) + 1);

  SpinorField cur = init;
  SpinorField next;
  cur.a.reserve(final_sites);
  cur.b.reserve(final_sites);
  next.a.reserve(final_sites);
  next.b.reserve(final_sites);

  auto record = [&rows](const SpinorField& f) {
    ChiralitySummary s = observables(f);
    rows.push_back({s, s.p_left + s.p_right});
  };
  record(cur);
  for (std::int64_t t = 1; t <= steps; ++t) {
    detail::step_into(cur, coin, next);
    std::swap(cur, next);
    if (t % record_every == 0) record(cur);
  }
  return rows;
}

}  // namespace qwalk
