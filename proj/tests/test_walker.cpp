#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qwalk/initial_states.hpp"
#include "qwalk/walker.hpp"
#include "test_support.hpp"

using namespace qwalk;
using Catch::Approx;

namespace {
const double pi = std::numbers::pi;
const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

TEST_CASE("coin parameter validates its range") {
  CHECK_NOTHROW(CoinParameter(0.0));
  CHECK_NOTHROW(CoinParameter(pi / 2));
  CHECK_THROWS_AS(CoinParameter(-0.1), validation_error);
  CHECK_THROWS_AS(CoinParameter(1.8), validation_error);
}

TEST_CASE("one unbiased step from a localized (1,0) state") {
  const SpinorField f1 = step(localized(BlochAngles(0.0, 0.0)), hadamard_coin());
  CHECK(f1.time == 1);
  CHECK(std::abs(f1.amp_left(-1) - cplx{inv_sqrt2, 0}) < 1e-15);
  CHECK(std::abs(f1.amp_right(1) - cplx{inv_sqrt2, 0}) < 1e-15);
  CHECK(std::abs(f1.amp_right(-1)) == 0.0);
  CHECK(std::abs(f1.amp_left(1)) == 0.0);
  CHECK(f1.norm() == Approx(1.0).margin(1e-14));
}

TEST_CASE("theta = 0 is a pure left mover") {
  const SpinorField f1 = step(localized(BlochAngles(0.0, 0.0)), CoinParameter(0.0));
  CHECK(std::abs(f1.amp_left(-1) - cplx{1, 0}) == 0.0);
  CHECK(position_distribution(f1) ==
        std::map<std::int64_t, double>{{-1, 1.0}});
}

TEST_CASE("two unbiased steps from (1,0)") {
  const CoinParameter coin = hadamard_coin();
  const SpinorField f2 = step(step(localized(BlochAngles(0.0, 0.0)), coin), coin);
  CHECK(std::abs(f2.amp_left(-2) - cplx{0.5, 0}) < 1e-15);
  CHECK(std::abs(f2.amp_left(0) - cplx{0.5, 0}) < 1e-15);
  CHECK(std::abs(f2.amp_right(0) - cplx{0.5, 0}) < 1e-15);
  CHECK(std::abs(f2.amp_right(2) - cplx{-0.5, 0}) < 1e-15);

  const auto dist = position_distribution(f2);
  REQUIRE(dist.size() == 3);
  CHECK(dist.at(-2) == Approx(0.25).margin(1e-15));
  CHECK(dist.at(0) == Approx(0.5).margin(1e-15));
  CHECK(dist.at(2) == Approx(0.25).margin(1e-15));
}

TEST_CASE("chirality observables at t = 1 and t = 2") {
  const CoinParameter coin = hadamard_coin();
  SpinorField f = step(localized(BlochAngles(0.0, 0.0)), coin);
  ChiralitySummary s1 = observables(f);
  CHECK(s1.p_left == Approx(0.5).margin(1e-14));
  CHECK(s1.p_right == Approx(0.5).margin(1e-14));
  CHECK(std::abs(s1.q) < 1e-15);

  f = step(f, coin);
  ChiralitySummary s2 = observables(f);
  CHECK(s2.p_left == Approx(0.5).margin(1e-14));
  CHECK(s2.p_right == Approx(0.5).margin(1e-14));
  CHECK(s2.q.real() == Approx(0.25).margin(1e-14));
  CHECK(std::abs(s2.q.imag()) < 1e-15);
}

TEST_CASE("initial interference is sin(gamma) e^{-i phi} / 2") {
  for (const auto& [g, p] : {std::pair{pi / 2, 0.0}, {pi / 3, 0.95532},
                             {1.1, 4.0}, {pi / 2, pi / 2}}) {
    const cplx want = 0.5 * std::sin(g) * std::exp(cplx{0.0, -p});
    const cplx got_loc = observables(localized(BlochAngles(g, p))).q;
    CHECK(std::abs(got_loc - want) < 1e-14);
    const cplx got_gauss =
        observables(gaussian(GaussianSpec(10.0, BlochAngles(g, p)))).q;
    CHECK(std::abs(got_gauss - want) < 1e-12);
  }
}

TEST_CASE("evolve records the documented rows") {
  const auto rows = evolve(localized(BlochAngles(0.0, 0.0)), hadamard_coin(), 2);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].summary.time == 0);
  CHECK(std::abs(rows[0].summary.q) < 1e-15);
  CHECK(std::abs(rows[1].summary.q) < 1e-15);
  CHECK(rows[2].summary.q.real() == Approx(0.25).margin(1e-14));
  for (const auto& r : rows) CHECK(r.norm == Approx(1.0).margin(1e-13));
}

TEST_CASE("evolve with steps = 0 returns observables of the input") {
  const SpinorField init = gaussian(GaussianSpec(10.0, BlochAngles(1.0, 0.3)));
  const auto rows = evolve(init, CoinParameter(0.6), 0);
  REQUIRE(rows.size() == 1);
  const ChiralitySummary direct = observables(init);
  CHECK(rows[0].summary.p_left == direct.p_left);
  CHECK(rows[0].summary.q == direct.q);
}

TEST_CASE("evolve row count follows the thinning stride") {
  const auto rows =
      evolve(localized(BlochAngles(0.3, 0.4)), hadamard_coin(), 10, 3);
  CHECK(rows.size() == 4);  // t = 0, 3, 6, 9
  CHECK(rows.back().summary.time == 9);
  CHECK_THROWS_AS(evolve(localized(BlochAngles(0, 0)), hadamard_coin(), 5, 0),
                  validation_error);
  CHECK_THROWS_AS(evolve(localized(BlochAngles(0, 0)), hadamard_coin(), -1),
                  validation_error);
}

TEST_CASE("window growth beyond the cap is rejected up front") {
  CHECK_THROWS_AS(
      evolve(localized(BlochAngles(0, 0)), hadamard_coin(), 1000, 1, 100),
      resource_limit_error);
  CHECK_THROWS_AS(
      evolve_field(localized(BlochAngles(0, 0)), hadamard_coin(), 1000, 100),
      resource_limit_error);
}

TEST_CASE("evolve_field matches the recording driver") {
  const SpinorField init = localized(BlochAngles(0.9, 1.7));
  const CoinParameter coin(0.5);
  const SpinorField f = evolve_field(init, coin, 37);
  CHECK(f.time == 37);
  const auto rows = evolve(init, coin, 37, 37);
  const ChiralitySummary s = observables(f);
  CHECK(s.p_left == Approx(rows.back().summary.p_left).margin(1e-15));
  CHECK(std::abs(s.q - rows.back().summary.q) < 1e-15);
}

TEST_CASE("norm is conserved over long runs") {
  const auto rows =
      evolve(localized(BlochAngles(0.0, 0.0)), hadamard_coin(), 2000, 10);
  for (const auto& r : rows) {
    CHECK(std::abs(r.norm - 1.0) < 1e-10);
    CHECK(std::abs(r.summary.p_left + r.summary.p_right - 1.0) < 1e-12);
  }
}

TEST_CASE("step agrees with the map-based oracle on random states") {
  std::mt19937 rng(20260809);
  for (int trial = 0; trial < 10; ++trial) {
    SpinorField f = qwtest::random_state(rng, 7, -3);
    qwtest::AmpMap m = qwtest::to_map(f);
    const CoinParameter coin(0.1 + 0.15 * trial);
    for (int t = 0; t < 25; ++t) {
      f = step(f, coin);
      m = qwtest::map_step(m, coin.theta);
    }
    CHECK(qwtest::map_distance(m, f) < 1e-13);
  }
}

TEST_CASE("unitarity: inner products are preserved by step") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const SpinorField x = qwtest::random_state(rng, 5, -2);
    const SpinorField y = qwtest::random_state(rng, 9, -4);
    const CoinParameter coin(0.05 + 0.07 * trial);
    const cplx before = inner_product(x, y);
    const cplx after = inner_product(step(x, coin), step(y, coin));
    CHECK(std::abs(before - after) < 1e-12);
  }
}

TEST_CASE("inner product basics") {
  std::mt19937 rng(99);
  const SpinorField psi = qwtest::random_state(rng, 11, -5);
  CHECK(std::abs(inner_product(psi, psi) - cplx{1, 0}) < 1e-12);
  CHECK(std::abs(inner_product(localized(BlochAngles(0, 0)),
                               localized(BlochAngles(pi, 0)))) < 1e-15);
}

TEST_CASE("parity: odd k + t sites stay empty from a localized start") {
  SpinorField f = localized(BlochAngles(1.2, 0.7));
  const CoinParameter coin = hadamard_coin();
  for (int t = 1; t <= 7; ++t) {
    f = step(f, coin);
    for (const auto& [k, p] : position_distribution(f)) {
      CHECK((k + t) % 2 == 0);
    }
  }
}

TEST_CASE("support confinement: the window tracks the light cone") {
  SpinorField f = localized(BlochAngles(0.4, 0.2));
  const CoinParameter coin(0.9);
  for (int t = 1; t <= 20; ++t) {
    f = step(f, coin);
    CHECK(f.k_min() == -t);
    CHECK(f.k_max() == t);
  }
  SpinorField g = gaussian(GaussianSpec(2.0, BlochAngles(0.4, 0.2)));
  const std::int64_t half = g.k_max();
  g = evolve_field(g, coin, 15);
  CHECK(g.k_min() == -half - 15);
  CHECK(g.k_max() == half + 15);
}

TEST_CASE("degenerate coins are accepted") {
  // theta = pi/2 swaps chirality while reflecting the direction of motion.
  SpinorField f = localized(BlochAngles(0.0, 0.0));
  f = step(f, CoinParameter(pi / 2));
  CHECK(std::abs(f.amp_right(1) - cplx{1, 0}) < 1e-15);
  const auto rows = evolve(f, CoinParameter(pi / 2), 6);
  for (const auto& r : rows) CHECK(r.norm == Approx(1.0).margin(1e-14));
}
