#pragma once

// Test-only helpers: an independent map-based implementation of the walk used
// as an oracle for the windowed implementation, plus deterministic random
// state generation. The oracle keeps amplitudes in an ordered map keyed by
// lattice site, so window/offset bookkeeping cannot hide mistakes.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <utility>

#include "qwalk/walker.hpp"

namespace qwtest {

using qwalk::cplx;

using AmpMap = std::map<std::int64_t, std::pair<cplx, cplx>>;

inline AmpMap to_map(const qwalk::SpinorField& f) {
  AmpMap m;
  for (std::int64_t k = f.k_min(); k <= f.k_max(); ++k) {
    const cplx a = f.amp_left(k);
    const cplx b = f.amp_right(k);
    if (a != cplx{} || b != cplx{}) m[k] = {a, b};
  }
  return m;
}

// Scatter form of the update: site k sends a_k c + b_k s to the left
// neighbour's upper component and a_k s - b_k c to the right neighbour's
// lower one.
inline AmpMap map_step(const AmpMap& m, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  AmpMap out;
  for (const auto& [k, ab] : m) {
    const auto& [a, b] = ab;
    out[k - 1].first += a * c + b * s;
    out[k + 1].second += a * s - b * c;
  }
  return out;
}

inline double map_distance(const AmpMap& x, const qwalk::SpinorField& f) {
  double worst = 0.0;
  auto upd = [&](double d) { worst = std::max(worst, d); };
  for (const auto& [k, ab] : x) {
    upd(std::abs(ab.first - f.amp_left(k)));
    upd(std::abs(ab.second - f.amp_right(k)));
  }
  for (std::int64_t k = f.k_min(); k <= f.k_max(); ++k) {
    const auto it = x.find(k);
    if (it == x.end()) {
      upd(std::abs(f.amp_left(k)));
      upd(std::abs(f.amp_right(k)));
    }
  }
  return worst;
}

inline qwalk::SpinorField random_state(std::mt19937& rng, std::int64_t sites,
                                       std::int64_t offset) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  qwalk::SpinorField f;
  f.offset = offset;
  f.a.resize(static_cast<std::size_t>(sites));
  f.b.resize(static_cast<std::size_t>(sites));
  for (std::int64_t i = 0; i < sites; ++i) {
    f.a[static_cast<std::size_t>(i)] = cplx{gauss(rng), gauss(rng)};
    f.b[static_cast<std::size_t>(i)] = cplx{gauss(rng), gauss(rng)};
  }
  const double scale = 1.0 / std::sqrt(f.norm());
  for (auto& v : f.a) v *= scale;
  for (auto& v : f.b) v *= scale;
  return f;
}

}  // namespace qwtest
