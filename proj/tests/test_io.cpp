#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/initial_states.hpp"
#include "qwalk/io.hpp"
#include "qwalk/thermodynamics.hpp"
#include "qwalk/walker.hpp"

using namespace qwalk;
using Catch::Approx;

namespace {
std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}
}  // namespace

TEST_CASE("format_full round-trips doubles") {
  CHECK(format_full(1.0 / 3.0) == "0.33333333333333331");
  CHECK(format_full(0.0) == "0");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const double v = u(rng);
    CHECK(std::stod(format_full(v)) == v);
  }
}

TEST_CASE("trajectory CSV schema") {
  const auto rows =
      evolve(localized(BlochAngles(0.4, 0.2)), hadamard_coin(), 5);
  std::ostringstream full, slim;
  write_trajectory_csv(full, rows, true);
  write_trajectory_csv(slim, rows, false);

  const auto lf = lines_of(full.str());
  REQUIRE(lf.size() == 7);
  CHECK(lf[0] ==
        "t,p_left,p_right,re_q,im_q,norm,lambda_plus,lambda_minus,"
        "entropy_bits");
  CHECK(lines_of(slim.str())[0] == "t,p_left,p_right,re_q,im_q,norm");
  CHECK(lf[1].rfind("0,", 0) == 0);

  // a body field carries full precision
  const std::string& row = lf[2];
  const auto first_comma = row.find(',');
  const auto second_comma = row.find(',', first_comma + 1);
  const std::string p_left =
      row.substr(first_comma + 1, second_comma - first_comma - 1);
  CHECK(std::stod(p_left) ==
        Approx(rows[1].summary.p_left).margin(0.0));
}

TEST_CASE("isotherm CSV schema") {
  const std::vector<IsothermCurve> curves = {isotherm_localized(1.3, 16),
                                             isotherm_localized(0.5, 16)};
  std::ostringstream os;
  write_isotherm_csv(os, curves);
  const auto ls = lines_of(os.str());
  CHECK(ls[0] == "t_ratio_or_T,branch_id,x,y");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    CHECK(ls[i].rfind("1.3", 0) == 0);  // the unreachable 0.5 adds no rows
  }
  CHECK(ls.size() == 1 + curves[0].points.size());
}

TEST_CASE("envelope and master CSV schemas") {
  Envelopes env;
  env.upper.peaks = {{3, 0.25}, {9, 0.125}};
  env.lower.peaks = {{6, -0.2}};
  std::ostringstream os;
  write_envelope_csv(os, env);
  const auto ls = lines_of(os.str());
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] == "branch,t,value");
  CHECK(ls[1] == "upper,3,0.25");
  CHECK(ls[3] == "lower,6,-0.20000000000000001");

  std::ostringstream ms;
  const std::vector<MasterComparisonRow> rows = {{1.0, 0.5, 0.5},
                                                 {2.0, 0.75, 0.25}};
  write_master_csv(ms, rows);
  const auto ml = lines_of(ms.str());
  CHECK(ml[0] == "t,lambda_plus_numeric,lambda_plus_closed,abs_err");
  CHECK(ml[2] == "2,0.75,0.25,0.5");
}

TEST_CASE("thermo JSON uses infinity sentinels at chi = 0") {
  const nlohmann::json cold = thermo_to_json(thermo_functions(0.1));
  CHECK(cold["temperature"].is_number());
  CHECK(cold["infinite_temperature"] == false);
  CHECK(cold["entropy_bits"].get<double>() > 0.0);

  const nlohmann::json hot = thermo_to_json(thermo_functions(0.0));
  CHECK(hot["temperature"] == "inf");
  CHECK(hot["helmholtz"] == "-inf");
  CHECK(hot["t_over_t0"] == "inf");
  CHECK(hot["infinite_temperature"] == true);
  CHECK(hot["partition"] == 2.0);
}

TEST_CASE("thermo JSON ratio against the reference temperature") {
  const nlohmann::json j =
      thermo_to_json(thermo_functions(characteristic_chi()));
  CHECK(j["t_over_t0"].get<double>() == Approx(1.0).margin(1e-12));
}

TEST_CASE("fit JSON carries the documented keys") {
  PowerLawFit fit;
  fit.exponent_c = 0.49;
  fit.amplitude_k = 0.1;
  fit.residual_rms = 0.02;
  fit.window_lo = 100;
  fit.window_hi = 5000;
  fit.n_peaks = 321;
  const nlohmann::json j = fit_to_json(fit);
  CHECK(j["exponent_c"] == 0.49);
  CHECK(j["amplitude_K"] == 0.1);
  CHECK(j["residual_rms"] == 0.02);
  CHECK(j["window"][0] == 100.0);
  CHECK(j["window"][1] == 5000.0);
  CHECK(j["n_peaks"] == 321);
  CHECK(j["decaying"] == true);
}

TEST_CASE("initial spec JSON round trip") {
  InitialSpec loc;
  loc.kind = InitialSpec::Kind::localized;
  loc.angles = BlochAngles(0.7, 5.9);
  const InitialSpec loc2 = initial_spec_from_json(initial_spec_to_json(loc));
  CHECK(loc2.kind == InitialSpec::Kind::localized);
  CHECK(loc2.angles.gamma == 0.7);
  CHECK(loc2.angles.phi == 5.9);

  InitialSpec g;
  g.kind = InitialSpec::Kind::gaussian;
  g.angles = BlochAngles(1.2, 0.0);
  g.sigma0 = 11.5;
  g.cutoff_sites = 100;
  const nlohmann::json gj = initial_spec_to_json(g);
  CHECK(gj["kind"] == "gaussian");
  CHECK(gj["sigma0"] == 11.5);
  const InitialSpec g2 = initial_spec_from_json(gj);
  CHECK(g2.sigma0 == 11.5);
  CHECK(g2.cutoff_sites == 100);
}

TEST_CASE("initial spec JSON rejects malformed input") {
  CHECK_THROWS_AS(initial_spec_from_json({{"kind", "ring"},
                                          {"gamma", 0.1},
                                          {"phi", 0.0}}),
                  validation_error);
  CHECK_THROWS_AS(initial_spec_from_json({{"kind", "localized"}}),
                  validation_error);
  CHECK_THROWS_AS(initial_spec_from_json({{"kind", "gaussian"},
                                          {"gamma", 0.1},
                                          {"phi", 0.0}}),
                  validation_error);
  // gaussian cutoff below the 6 sigma floor
  CHECK_THROWS_AS(initial_spec_from_json({{"kind", "gaussian"},
                                          {"gamma", 0.1},
                                          {"phi", 0.0},
                                          {"sigma0", 10.0},
                                          {"cutoff_sites", 10}}),
                  validation_error);
  CHECK_THROWS_AS(initial_spec_from_json({{"kind", "localized"},
                                          {"gamma", 9.0},
                                          {"phi", 0.0}}),
                  validation_error);
}

TEST_CASE("identical runs serialize identically") {
  const auto rows1 =
      evolve(localized(BlochAngles(1.0, 0.5)), CoinParameter(0.6), 64);
  const auto rows2 =
      evolve(localized(BlochAngles(1.0, 0.5)), CoinParameter(0.6), 64);
  std::ostringstream a, b;
  write_trajectory_csv(a, rows1);
  write_trajectory_csv(b, rows2);
  CHECK(a.str() == b.str());
}
