// qwalk: command-line front end for the quantum-walk entanglement
// thermodynamics toolkit.
//
// Subcommands: evolve, thermo, isotherms, transient, master.
// Every file-emitting run writes a <out>.meta.json sidecar echoing the fully
// resolved configuration. Exit codes: 0 success, 2 validation error,
// 3 resource limit, 4 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
  std::string out = "-";
  unsigned jobs = 1;
  std::string format;  // empty = per-command default (json for thermo, csv otherwise)

  std::string resolve_format(const std::string& fallback) const {
    return format.empty() ? fallback : format;
  }
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw qwalk::io_error("cannot open " + path + " for writing");
  os << body;
  os.flush();
  if (!os) throw qwalk::io_error("write failed for " + path);
}

// Body goes to stdout when path is "-"; the sidecar is skipped in that case.
void emit(const std::string& path, const std::string& body,
          const std::string& command, const json& params) {
  if (path == "-") {
    std::cout << body;
    return;
  }
  write_file(path, body);
  json meta;
  meta["artifact"] = "qwalk";
  meta["version"] = qwalk::version;
  meta["command"] = command;
  meta["generated_at"] = timestamp_utc();  // excluded from determinism checks
  meta["parameters"] = params;
  meta["output"] = path;
  write_file(path + ".meta.json", meta.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// shared initial-condition flags

struct InitFlags {
  std::string kind = "localized";
  double gamma = 0.0;
  double phi = 0.0;
  double sigma0 = 10.0;
  std::int64_t cutoff_sites = 0;
  std::string init_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--init", kind, "initial family: localized|gaussian")
        ->check(CLI::IsMember({"localized", "gaussian"}));
    cmd->add_option("--gamma", gamma, "Bloch angle gamma in [0, pi], radians");
    cmd->add_option("--phi", phi, "Bloch angle phi in [0, 2pi], radians");
    cmd->add_option("--sigma0", sigma0,
                    "initial standard deviation (gaussian, lattice units)");
    cmd->add_option("--cutoff-sites", cutoff_sites,
                    "gaussian truncation half-width (0 = ceil(6 sigma0))");
    cmd->add_option("--init-file", init_file,
                    "JSON file with the initial spec (overrides the flags)");
  }

  qwalk::InitialSpec resolve() const {
    if (!init_file.empty()) {
      std::ifstream is(init_file);
      if (!is) throw qwalk::io_error("cannot read " + init_file);
      json j;
      try {
        is >> j;
      } catch (const json::exception& e) {
        throw qwalk::validation_error(std::string{"bad initial spec JSON: "} +
                                      e.what());
      }
      return qwalk::initial_spec_from_json(j);
    }
    qwalk::InitialSpec spec;
    spec.angles = qwalk::BlochAngles(gamma, phi);
    if (kind == "gaussian") {
      spec.kind = qwalk::InitialSpec::Kind::gaussian;
      spec.sigma0 = sigma0;
      spec.cutoff_sites = cutoff_sites;
      qwalk::GaussianSpec check(sigma0, spec.angles, cutoff_sites);
      if (!check.in_asymptotic_regime()) {
        std::cerr << "warning: sigma0 < 10 is outside the sigma0 >> 1 regime "
                     "assumed by the distributed closed forms\n";
      }
    }
    return spec;
  }
};

// ---------------------------------------------------------------------------
// evolve

int cmd_evolve(const GlobalOpts& g, const InitFlags& init, double theta,
               std::int64_t steps, std::int64_t record_every,
               std::size_t max_sites, bool density) {
  const std::string fmt = g.resolve_format("csv");
  const qwalk::InitialSpec spec = init.resolve();
  const qwalk::CoinParameter coin(theta);
  const auto rows =
      qwalk::evolve(spec.build(), coin, steps, record_every, max_sites);

  json params;
  params["initial"] = qwalk::initial_spec_to_json(spec);
  params["theta"] = theta;
  params["steps"] = steps;
  params["record_every"] = record_every;
  params["max_sites"] = max_sites;
  params["density"] = density;
  params["format"] = fmt;

  std::ostringstream body;
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& row : rows) {
      json r;
      r["t"] = row.summary.time;
      r["p_left"] = row.summary.p_left;
      r["p_right"] = row.summary.p_right;
      r["re_q"] = row.summary.q.real();
      r["im_q"] = row.summary.q.imag();
      r["norm"] = row.norm;
      if (density) {
        const auto e =
            qwalk::eigensystem(qwalk::reduced_density(row.summary));
        r["lambda_plus"] = e.lambda_plus;
        r["lambda_minus"] = e.lambda_minus;
        r["entropy_bits"] = e.entropy_bits;
      }
      arr.push_back(std::move(r));
    }
    body << arr.dump(2) << "\n";
  } else {
    qwalk::write_trajectory_csv(body, rows, density);
  }
  emit(g.out, body.str(), "evolve", params);
  return 0;
}

// ---------------------------------------------------------------------------
// thermo

int cmd_thermo(const GlobalOpts& g, std::optional<double> chi, bool localized,
               bool distributed, std::optional<double> gamma,
               std::optional<double> phi, std::optional<double> theta) {
  const int modes = int(chi.has_value()) + int(localized) + int(distributed);
  if (modes != 1) {
    throw qwalk::validation_error(
        "choose exactly one of --chi, --localized, --distributed");
  }

  json params;
  qwalk::ThermoRecord rec;
  if (chi) {
    rec = qwalk::thermo_functions(*chi);
    params["mode"] = "chi";
    params["chi"] = *chi;
  } else if (localized) {
    if (!gamma || !phi) {
      throw qwalk::validation_error("--localized needs --gamma and --phi");
    }
    rec = qwalk::thermo_functions(
        qwalk::chi_localized_hadamard(qwalk::BlochAngles(*gamma, *phi)));
    params["mode"] = "localized";
    params["gamma"] = *gamma;
    params["phi"] = *phi;
    params["theta"] = std::numbers::pi / 4;
  } else {
    if (!gamma || !theta) {
      throw qwalk::validation_error("--distributed needs --gamma and --theta");
    }
    rec = qwalk::thermo_functions(
        qwalk::q0_chi_distributed(*gamma, qwalk::CoinParameter(*theta)));
    params["mode"] = "distributed";
    params["gamma"] = *gamma;
    params["theta"] = *theta;
  }
  const std::string fmt = g.resolve_format("json");
  params["format"] = fmt;

  std::ostringstream body;
  if (fmt == "csv") {
    const json j = qwalk::thermo_to_json(rec);
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += it.key();
      if (it->is_number_float()) {
        row += qwalk::format_full(it->get<double>());
      } else if (it->is_boolean()) {
        row += it->get<bool>() ? "true" : "false";
      } else {
        row += it->get<std::string>();
      }
    }
    body << header << "\n" << row << "\n";
  } else {
    body << qwalk::thermo_to_json(rec).dump(2) << "\n";
  }
  emit(g.out, body.str(), "thermo", params);
  return 0;
}

// ---------------------------------------------------------------------------
// isotherms

int cmd_isotherms(const GlobalOpts& g, const std::string& mode,
                  const std::vector<double>& levels, int samples) {
  if (levels.empty()) throw qwalk::validation_error("--levels is empty");
  std::vector<qwalk::IsothermCurve> curves(levels.size());
  qwalk::parallel_for(levels.size(), g.jobs, [&](std::size_t i) {
    curves[i] = mode == "localized"
                    ? qwalk::isotherm_localized(levels[i], samples)
                    : qwalk::isotherm_distributed(levels[i], samples);
  });
  for (const auto& c : curves) {
    if (!c.reachable) {
      std::cerr << "warning: level " << c.level
                << " is below the minimum reachable temperature ratio; "
                   "no points emitted\n";
    }
  }

  json params;
  params["mode"] = mode;
  params["levels"] = levels;
  params["samples"] = samples;
  params["jobs"] = g.jobs;
  const std::string fmt = g.resolve_format("csv");
  params["format"] = fmt;

  std::ostringstream body;
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& c : curves) {
      for (const auto& p : c.points) {
        arr.push_back({{"t_ratio_or_T", c.level},
                       {"branch_id", p.branch},
                       {"x", p.x},
                       {"y", p.y}});
      }
    }
    body << arr.dump(2) << "\n";
  } else {
    qwalk::write_isotherm_csv(body, curves);
  }
  emit(g.out, body.str(), "isotherms", params);
  return 0;
}

// ---------------------------------------------------------------------------
// transient

int cmd_transient(const GlobalOpts& g, const InitFlags& init, double theta,
                  std::int64_t steps, std::optional<double> fit_lo,
                  std::optional<double> fit_hi, int window,
                  std::string fit_out, std::size_t max_sites) {
  const qwalk::InitialSpec spec = init.resolve();
  const qwalk::CoinParameter coin(theta);
  if (steps < 16) throw qwalk::validation_error("transient needs steps >= 16");

  const auto rows = qwalk::evolve(spec.build(), coin, steps, 1, max_sites);
  const auto series = qwalk::lambda_series(rows);

  // Stationary eigenvalue: closed form where one exists, else the tail
  // average of Q(t).
  double lambda_inf = 0.0;
  std::string lambda_source;
  const bool is_localized = spec.kind == qwalk::InitialSpec::Kind::localized;
  const double pi = std::numbers::pi;
  if (is_localized && std::abs(theta - pi / 4) < 1e-12) {
    lambda_inf =
        0.5 + std::sqrt(qwalk::chi_localized_hadamard(spec.angles).chi);
    lambda_source = "closed_form_localized_unbiased";
  } else if (!is_localized &&
             qwalk::distributed_validity(coin, spec.angles.gamma)
                 .temperature_formula_valid) {
    lambda_inf =
        0.5 +
        std::sqrt(qwalk::q0_chi_distributed(spec.angles.gamma, coin).chi);
    lambda_source = "closed_form_distributed";
  } else {
    if (steps < 500) {
      throw qwalk::validation_error(
          "no closed form applies here; the tail estimate needs steps >= 500");
    }
    const auto tail = qwalk::estimate_q0_numeric(
        rows, static_cast<std::int64_t>(0.8 * double(steps)), steps);
    lambda_inf = 0.5 + std::sqrt(qwalk::chi_from_q0(tail.mean, coin).chi);
    lambda_source = "tail_average_estimate";
  }

  const double lo = fit_lo.value_or(double(steps) / 10.0);
  const double hi = fit_hi.value_or(double(steps));

  // Tolerant extraction: distributed starts can leave one branch empty, which
  // is itself the negligible-transient signal.
  const qwalk::Envelopes env =
      qwalk::extract_envelope(series, lambda_inf, window, 0);

  auto peaks_in_window = [&](const qwalk::EnvelopeSeries& e) {
    std::size_t n = 0;
    for (const auto& p : e.peaks) {
      if (double(p.t) >= lo && double(p.t) <= hi && p.t > 0) ++n;
    }
    return n;
  };
  const std::size_t n_up = peaks_in_window(env.upper);
  const std::size_t n_dn = peaks_in_window(env.lower);

  json fit_json;
  fit_json["lambda_plus_inf"] = lambda_inf;
  fit_json["lambda_source"] = lambda_source;
  fit_json["n_peaks_upper"] = n_up;
  fit_json["n_peaks_lower"] = n_dn;
  if (n_up >= 20 || n_dn >= 20) {
    const bool use_upper = n_up >= 20;
    const auto fit =
        qwalk::fit_power_law(use_upper ? env.upper : env.lower, lo, hi);
    json f = qwalk::fit_to_json(fit);
    for (auto it = f.begin(); it != f.end(); ++it) fit_json[it.key()] = *it;
    fit_json["branch"] = use_upper ? "upper" : "lower";
    fit_json["fit_available"] = true;
    fit_json["negligible_transient"] = fit.amplitude_k < 0.01;
  } else {
    fit_json["fit_available"] = false;
    fit_json["reason"] = "fewer than 20 envelope peaks in the fit window";
    fit_json["negligible_transient"] = true;
  }

  json params;
  params["initial"] = qwalk::initial_spec_to_json(spec);
  params["theta"] = theta;
  params["steps"] = steps;
  params["fit_window"] = {lo, hi};
  params["peak_window"] = window;
  params["max_sites"] = max_sites;
  const std::string fmt = g.resolve_format("csv");
  params["format"] = fmt;

  std::ostringstream body;
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& p : env.upper.peaks) {
      arr.push_back({{"branch", "upper"}, {"t", p.t}, {"value", p.value}});
    }
    for (const auto& p : env.lower.peaks) {
      arr.push_back({{"branch", "lower"}, {"t", p.t}, {"value", p.value}});
    }
    body << arr.dump(2) << "\n";
  } else {
    qwalk::write_envelope_csv(body, env);
  }
  emit(g.out, body.str(), "transient", params);

  if (fit_out.empty()) {
    fit_out = g.out == "-" ? "-" : g.out + ".fit.json";
  }
  if (fit_out == "-") {
    std::cout << fit_json.dump(2) << "\n";
  } else {
    write_file(fit_out, fit_json.dump(2) + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// master

int cmd_master(const GlobalOpts& g, double w_a, double w_b, double k, double c,
               double omega, double delta, double d,
               std::optional<double> lambda_plus, double t0, double t1,
               double dt) {
  const qwalk::MasterModel model =
      qwalk::make_master_model(w_a, w_b, k, c, omega, delta, d, lambda_plus);
  const qwalk::MasterSolution sol = qwalk::integrate_master(model, t0, t1, dt);
  if (sol.min_rate < 0.0) {
    std::cerr << "warning: population rates went negative over the span "
                 "(min rate "
              << sol.min_rate << ")\n";
  }

  std::vector<qwalk::MasterComparisonRow> rows;
  rows.reserve(sol.points.size());
  for (const auto& p : sol.points) {
    rows.push_back({p.t, p.lambda_plus,
                    qwalk::closed_form_solution(model, p.t).lambda_plus});
  }

  json params;
  params["w_a"] = w_a;
  params["w_b"] = w_b;
  params["K"] = k;
  params["c"] = c;
  params["omega"] = omega;
  params["delta"] = delta;
  params["d"] = d;
  params["lambda_plus_inf"] = model.lambda_plus_inf;
  params["t0"] = t0;
  params["t1"] = t1;
  params["dt"] = dt;
  const std::string fmt = g.resolve_format("csv");
  params["format"] = fmt;

  std::ostringstream body;
  if (fmt == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"t", r.t},
                     {"lambda_plus_numeric", r.numeric},
                     {"lambda_plus_closed", r.closed},
                     {"abs_err", std::abs(r.numeric - r.closed)}});
    }
    body << arr.dump(2) << "\n";
  } else {
    qwalk::write_master_csv(body, rows);
  }
  emit(g.out, body.str(), "master", params);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum walk entanglement thermodynamics toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "output path ('-' = stdout)");
  app.add_option("--jobs", g.jobs, "max worker threads for sweeps");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));

  // evolve
  auto* evolve = app.add_subcommand("evolve", "run a trajectory");
  evolve->fallthrough();
  InitFlags evolve_init;
  evolve_init.attach(evolve);
  double theta = std::numbers::pi / 4;
  std::int64_t steps = 0;
  std::int64_t record_every = 1;
  std::size_t max_sites = qwalk::default_max_sites;
  bool no_density = false;
  evolve->add_option("--theta", theta, "coin bias in [0, pi/2], radians")
      ->required();
  evolve->add_option("--steps", steps, "number of walk steps")->required();
  evolve->add_option("--record-every", record_every, "row thinning stride");
  evolve->add_option("--max-sites", max_sites, "lattice window cap");
  evolve->add_flag("--no-density", no_density,
                   "omit the eigenvalue/entropy columns");

  // thermo
  auto* thermo = app.add_subcommand("thermo", "equilibrium record");
  thermo->fallthrough();
  std::optional<double> th_chi, th_gamma, th_phi, th_theta;
  bool th_localized = false, th_distributed = false;
  thermo->add_option("--chi", th_chi, "interference scalar in [0, 1/4)");
  thermo->add_flag("--localized", th_localized,
                   "localized start, unbiased coin (needs --gamma --phi)");
  thermo->add_flag("--distributed", th_distributed,
                   "gaussian start (needs --gamma --theta)");
  thermo->add_option("--gamma", th_gamma, "Bloch angle gamma, radians");
  thermo->add_option("--phi", th_phi, "Bloch angle phi, radians");
  thermo->add_option("--theta", th_theta, "coin bias, radians");

  // isotherms
  auto* iso = app.add_subcommand("isotherms", "level curves of temperature");
  iso->fallthrough();
  std::string iso_mode = "localized";
  std::vector<double> iso_levels;
  int iso_samples = 512;
  iso->add_option("--mode", iso_mode, "localized|distributed")
      ->check(CLI::IsMember({"localized", "distributed"}));
  iso->add_option("--levels", iso_levels,
                  "comma-separated T/T0 (localized) or T (distributed)")
      ->required()
      ->delimiter(',');
  iso->add_option("--samples", iso_samples, "grid points per curve");

  // transient
  auto* transient =
      app.add_subcommand("transient", "envelope extraction and power-law fit");
  transient->fallthrough();
  InitFlags tr_init;
  tr_init.attach(transient);
  double tr_theta = std::numbers::pi / 4;
  std::int64_t tr_steps = 20000;
  std::optional<double> tr_fit_lo, tr_fit_hi;
  int tr_window = 2;
  std::string tr_fit_out;
  std::size_t tr_max_sites = qwalk::default_max_sites;
  transient->add_option("--theta", tr_theta, "coin bias, radians");
  transient->add_option("--steps", tr_steps, "number of walk steps");
  transient->add_option("--fit-lo", tr_fit_lo,
                        "fit window start (default steps/10)");
  transient->add_option("--fit-hi", tr_fit_hi,
                        "fit window end (default steps)");
  transient->add_option("--window", tr_window,
                        "neighbours a peak must dominate on each side");
  transient->add_option("--fit-out", tr_fit_out,
                        "fit JSON path (default <out>.fit.json)");
  transient->add_option("--max-sites", tr_max_sites, "lattice window cap");

  // master
  auto* master =
      app.add_subcommand("master", "rate-model integration vs closed form");
  master->fallthrough();
  double m_wa = 0.2, m_wb = 0.2, m_k = 0.05, m_c = 0.5, m_omega = 1.0,
         m_delta = 0.0, m_d = 0.0, m_t0 = 1.0, m_t1 = 100.0, m_dt = 0.01;
  std::optional<double> m_lambda;
  master->add_option("--wa", m_wa, "asymptotic rate towards lambda_plus");
  master->add_option("--wb", m_wb, "asymptotic rate towards lambda_minus");
  master->add_option("--K", m_k, "envelope amplitude");
  master->add_option("--c", m_c, "power-law exponent (> 0)");
  master->add_option("--omega", m_omega, "oscillation frequency");
  master->add_option("--delta", m_delta, "oscillation phase");
  master->add_option("--d", m_d, "exponential-term coefficient");
  master->add_option("--lambda-plus", m_lambda,
                     "stationary lambda_plus (default w_a/(w_a+w_b))");
  master->add_option("--t0", m_t0, "integration start (> 0)");
  master->add_option("--t1", m_t1, "integration end");
  master->add_option("--dt", m_dt, "integration step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*evolve) {
      return cmd_evolve(g, evolve_init, theta, steps, record_every, max_sites,
                        !no_density);
    }
    if (*thermo) {
      return cmd_thermo(g, th_chi, th_localized, th_distributed, th_gamma,
                        th_phi, th_theta);
    }
    if (*iso) return cmd_isotherms(g, iso_mode, iso_levels, iso_samples);
    if (*transient) {
      return cmd_transient(g, tr_init, tr_theta, tr_steps, tr_fit_lo,
                           tr_fit_hi, tr_window, tr_fit_out, tr_max_sites);
    }
    if (*master) {
      return cmd_master(g, m_wa, m_wb, m_k, m_c, m_omega, m_delta, m_d,
                        m_lambda, m_t0, m_t1, m_dt);
    }
  } catch (const qwalk::resource_limit_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qwalk::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const qwalk::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qwalk::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
