#pragma once

// File formats.
//
//   trajectory CSV   t,p_left,p_right,re_q,im_q,norm
//                    [,lambda_plus,lambda_minus,entropy_bits]
//   isotherm CSV     t_ratio_or_T,branch_id,x,y
//   envelope CSV     branch,t,value
//   master CSV       t,lambda_plus_numeric,lambda_plus_closed,abs_err
//   thermo JSON      every ThermoRecord field; infinities become the
//                    sentinels "inf" / "-inf"
//   fit JSON         exponent_c, amplitude_K, residual_rms, window, n_peaks
//   initial JSON     {"kind":"localized","gamma":g,"phi":p} or
//                    {"kind":"gaussian","sigma0":s,"gamma":g,"phi":p
//                     [,"cutoff_sites":n]}
//
// Numbers in CSV bodies are written with 17 significant digits so files
// round-trip and identical runs are byte identical.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "qwalk/density.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/initial_states.hpp"
#include "qwalk/thermodynamics.hpp"
#include "qwalk/transient.hpp"
#include "qwalk/walker.hpp"

namespace qwalk {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trajectory_csv(std::ostream& os,
                                 std::span<const TrajectoryRow> rows,
                                 bool with_density = true) {
  os << "t,p_left,p_right,re_q,im_q,norm";
  if (with_density) os << ",lambda_plus,lambda_minus,entropy_bits";
  os << "\n";
  for (const TrajectoryRow& row : rows) {
    const ChiralitySummary& s = row.summary;
    os << s.time << ',' << format_full(s.p_left) << ','
       << format_full(s.p_right) << ',' << format_full(s.q.real()) << ','
       << format_full(s.q.imag()) << ',' << format_full(row.norm);
    if (with_density) {
      const EigenPair e = eigensystem(reduced_density(s));
      os << ',' << format_full(e.lambda_plus) << ','
         << format_full(e.lambda_minus) << ',' << format_full(e.entropy_bits);
    }
    os << "\n";
  }
}

inline void write_isotherm_csv(std::ostream& os,
                               std::span<const IsothermCurve> curves) {
  os << "t_ratio_or_T,branch_id,x,y\n";
  for (const IsothermCurve& curve : curves) {
    for (const IsothermPoint& p : curve.points) {
      os << format_full(curve.level) << ',' << p.branch << ','
         << format_full(p.x) << ',' << format_full(p.y) << "\n";
    }
  }
}

inline void write_envelope_csv(std::ostream& os, const Envelopes& env) {
  os << "branch,t,value\n";
  for (const SeriesPoint& p : env.upper.peaks) {
    os << "upper," << p.t << ',' << format_full(p.value) << "\n";
  }
  for (const SeriesPoint& p : env.lower.peaks) {
    os << "lower," << p.t << ',' << format_full(p.value) << "\n";
  }
}

struct MasterComparisonRow {
  double t = 0.0;
  double numeric = 0.0;
  double closed = 0.0;
};

inline void write_master_csv(std::ostream& os,
                             std::span<const MasterComparisonRow> rows) {
  os << "t,lambda_plus_numeric,lambda_plus_closed,abs_err\n";
  for (const MasterComparisonRow& r : rows) {
    os << format_full(r.t) << ',' << format_full(r.numeric) << ','
       << format_full(r.closed) << ','
       << format_full(std::abs(r.numeric - r.closed)) << "\n";
  }
}

// JSON helpers ---------------------------------------------------------------

inline nlohmann::json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline nlohmann::json thermo_to_json(const ThermoRecord& r) {
  nlohmann::json j;
  j["epsilon"] = r.epsilon;
  j["chi"] = r.chi;
  j["beta"] = json_number(r.beta);
  j["temperature"] = json_number(r.temperature);
  j["t_over_t0"] = json_number(r.temperature / characteristic_temperature());
  j["partition"] = json_number(r.partition);
  j["helmholtz"] = json_number(r.helmholtz);
  j["internal_energy"] = r.internal_energy;
  j["entropy_bits"] = r.entropy_bits;
  j["lambda_plus"] = r.lambda_plus;
  j["lambda_minus"] = r.lambda_minus;
  j["infinite_temperature"] = r.infinite_temperature;
  return j;
}

inline nlohmann::json fit_to_json(const PowerLawFit& fit) {
  nlohmann::json j;
  j["exponent_c"] = fit.exponent_c;
  j["amplitude_K"] = fit.amplitude_k;
  j["residual_rms"] = fit.residual_rms;
  j["window"] = {fit.window_lo, fit.window_hi};
  j["n_peaks"] = fit.n_peaks;
  j["decaying"] = fit.decaying;
  return j;
}

inline nlohmann::json initial_spec_to_json(const InitialSpec& spec) {
  nlohmann::json j;
  if (spec.kind == InitialSpec::Kind::localized) {
    j["kind"] = "localized";
  } else {
    j["kind"] = "gaussian";
    j["sigma0"] = spec.sigma0;
    if (spec.cutoff_sites > 0) j["cutoff_sites"] = spec.cutoff_sites;
  }
  j["gamma"] = spec.angles.gamma;
  j["phi"] = spec.angles.phi;
  return j;
}

inline InitialSpec initial_spec_from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const BlochAngles angles(j.at("gamma").get<double>(),
                             j.at("phi").get<double>());
    InitialSpec spec;
    spec.angles = angles;
    if (kind == "localized") {
      spec.kind = InitialSpec::Kind::localized;
    } else if (kind == "gaussian") {
      spec.kind = InitialSpec::Kind::gaussian;
      spec.sigma0 = j.at("sigma0").get<double>();
      spec.cutoff_sites = j.value("cutoff_sites", std::int64_t{0});
      // Validate eagerly so a bad spec fails here, not mid-run.
      GaussianSpec check(spec.sigma0, spec.angles, spec.cutoff_sites);
      (void)check;
    } else {
      throw validation_error("initial kind must be localized or gaussian");
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error(std::string{"bad initial spec: "} + e.what());
  }
}

}  // namespace qwalk
