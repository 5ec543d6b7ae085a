#include "latticeguide/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>

#include "latticeguide/jsonout.hpp"
#include "latticeguide/modes.hpp"
#include "latticeguide/oracle.hpp"
#include "latticeguide/parallel.hpp"
#include "latticeguide/spectrum.hpp"

namespace latticeguide {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fd(double v) { return JsonValue::format_double(v); }

void write_output(const RunConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(config.out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path " + config.out_path);
  out << text;
}

JsonValue params_json(const LatticeParams& p) {
  return JsonValue::Object{
      {"a1", p.a1}, {"a2", p.a2}, {"a3", p.a3}, {"mu", p.mu}, {"beta", p.beta}};
}

JsonValue window_json(const FrequencyWindow& w) {
  return JsonValue::Object{{"omega_lo", w.lo}, {"omega_hi", w.hi}};
}

JsonValue doubles_json(const std::vector<double>& v) {
  JsonValue::Array a;
  a.reserve(v.size());
  for (double x : v) a.emplace_back(x);
  return a;
}

JsonValue intervals_json(const std::vector<Interval>& v) {
  JsonValue::Array a;
  for (const Interval& i : v)
    a.push_back(JsonValue::Object{{"omega_lo", i.lo}, {"omega_hi", i.hi}});
  return a;
}

JsonValue gap_json(const SpectralGap& g, int index) {
  return JsonValue::Object{{"index", index},
                           {"type", gap_type_name(g.type)},
                           {"omega_b", g.omega_b},
                           {"omega_t", g.omega_t},
                           {"lambda_b", g.omega_b * g.omega_b},
                           {"lambda_t", g.omega_t * g.omega_t},
                           {"edge_b_sigma", g.edge_b_sigma},
                           {"edge_t_sigma", g.edge_t_sigma},
                           {"w_inside", doubles_json(g.w_inside)}};
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

int config_error(std::ostream& err, const std::string& what) {
  err << "config error: " << what << "\n";
  return kExitConfig;
}

void validate_scan_config(const RunConfig& config) {
  validate_window(config.window);
  if (config.window.lo <= 0.0)
    throw SpectralError(Errc::NonPositiveParameter, "window omega_lo must be > 0");
}

}  // namespace

int cmd_gaps(const RunConfig& config, std::ostream& err) {
  try {
    validate_scan_config(config);
  } catch (const SpectralError& e) {
    return config_error(err, e.what());
  }
  BandScan scan;
  try {
    scan = find_gaps(config.params, config.window, config.resolution, config.tol);
  } catch (const SpectralError& e) {
    if (e.code() == Errc::ClassificationViolation) {
      err << e.what() << "\n";
      return kExitClassification;
    }
    if (e.code() == Errc::ResolutionTooCoarse) return config_error(err, e.what());
    throw;
  }

  const SigmaPoints sig = sigma_points(config.params, config.window);
  const std::vector<double> wp = w_points(config.params, config.window, config.tol);

  if (config.format == RunConfig::Format::kJson) {
    JsonValue::Array gaps;
    for (std::size_t i = 0; i < scan.gaps.size(); ++i)
      gaps.push_back(gap_json(scan.gaps[i], static_cast<int>(i)));
    JsonValue doc(JsonValue::Object{
        {"command", "gaps"},
        {"params", params_json(config.params)},
        {"window", window_json(config.window)},
        {"resolution", scan.resolution},
        {"sigma", JsonValue::Object{{"s1", doubles_json(sig.s1)},
                                    {"s2", doubles_json(sig.s2)},
                                    {"s3", doubles_json(sig.s3)}}},
        {"w_points", doubles_json(wp)},
        {"bands", intervals_json(scan.bands)},
        {"gaps", std::move(gaps)},
        {"embedded_points", doubles_json(scan.embedded_points)},
        {"unresolved", intervals_json(scan.unresolved)}});
    write_output(config, doc.dump());
  } else {
    std::string text =
        "index,type,omega_b,omega_t,lambda_b,lambda_t,edge_b_sigma,edge_t_sigma,n_w_inside\n";
    for (std::size_t i = 0; i < scan.gaps.size(); ++i) {
      const SpectralGap& g = scan.gaps[i];
      text += csv_join({std::to_string(i), gap_type_name(g.type), fd(g.omega_b), fd(g.omega_t),
                        fd(g.omega_b * g.omega_b), fd(g.omega_t * g.omega_t),
                        g.edge_b_sigma ? "1" : "0", g.edge_t_sigma ? "1" : "0",
                        std::to_string(g.w_inside.size())});
    }
    write_output(config, text);
  }
  return kExitOk;
}

int cmd_eigen(const RunConfig& config, std::ostream& err) {
  try {
    validate_scan_config(config);
    if (config.params.mu <= 0.0)
      throw SpectralError(Errc::NonPositiveParameter, "mu must be set and > 0");
  } catch (const SpectralError& e) {
    return config_error(err, e.what());
  }

  const BandScan scan = find_gaps(config.params, config.window, config.resolution, config.tol);
  if (config.gap_index >= 0 && config.gap_index >= static_cast<int>(scan.gaps.size())) {
    err << "gap index " << config.gap_index << " does not exist (found " << scan.gaps.size()
        << " gaps)\n";
    return kExitBadGapIndex;
  }

  std::vector<GuidedMode> modes;
  std::vector<LatticeField> profiles;
  for (std::size_t gi = 0; gi < scan.gaps.size(); ++gi) {
    if (config.gap_index >= 0 && static_cast<int>(gi) != config.gap_index) continue;
    ModeSearchOptions opts;
    opts.gap_index = static_cast<int>(gi);
    for (GuidedMode m : find_guided_modes(config.params, scan.gaps[gi], opts, config.tol)) {
      const int residual_K = config.profile_K > 0 ? config.profile_K : 12;
      try {
        LatticeField field = mode_profile(m, config.params, residual_K, config.tol);
        m.residual = fd_residual(field, m.omega, config.params, config.tol);
        if (config.profile_K > 0) {
          m.decay = decay_rate(field);
          profiles.push_back(std::move(field));
        }
      } catch (const SpectralError& e) {
        err << "mode " << m.omega << ": profile unavailable (" << e.what() << ")\n";
        if (config.profile_K > 0) profiles.push_back(LatticeField::zeros(config.profile_K));
      }
      modes.push_back(m);
    }
  }

  if (config.format == RunConfig::Format::kJson) {
    JsonValue::Array arr;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      JsonValue::Object o{{"gap_index", modes[i].gap_index},
                          {"omega", modes[i].omega},
                          {"lambda", modes[i].lambda},
                          {"F_value", modes[i].F_value},
                          {"mu", modes[i].mu},
                          {"beta", modes[i].beta}};
      o.emplace_back("residual",
                     modes[i].residual ? JsonValue(*modes[i].residual) : JsonValue(nullptr));
      o.emplace_back("decay_rate",
                     modes[i].decay ? JsonValue(*modes[i].decay) : JsonValue(nullptr));
      o.emplace_back("near_coincident", modes[i].near_coincident);
      if (config.profile_K > 0) {
        const LatticeField& f = profiles[i];
        o.emplace_back("profile",
                       JsonValue::Object{{"K", f.K}, {"values", doubles_json(f.values)}});
      }
      arr.push_back(std::move(o));
    }
    JsonValue doc(JsonValue::Object{{"command", "eigen"},
                                    {"params", params_json(config.params)},
                                    {"window", window_json(config.window)},
                                    {"gap_count", static_cast<long long>(scan.gaps.size())},
                                    {"modes", std::move(arr)}});
    write_output(config, doc.dump());
  } else {
    std::string text = "gap_index,omega,lambda,F_value,mu,beta,residual,decay_rate\n";
    for (const GuidedMode& m : modes) {
      text += csv_join({std::to_string(m.gap_index), fd(m.omega), fd(m.lambda), fd(m.F_value),
                        fd(m.mu), fd(m.beta), m.residual ? fd(*m.residual) : "",
                        m.decay ? fd(*m.decay) : ""});
    }
    write_output(config, text);
  }
  return kExitOk;
}

int cmd_bands(const RunConfig& config, std::ostream& err) {
  try {
    validate_scan_config(config);
    if (config.beta_samples < 2)
      throw SpectralError(Errc::NonPositiveParameter, "beta_samples must be >= 2");
  } catch (const SpectralError& e) {
    return config_error(err, e.what());
  }

  struct Row {
    double beta;
    int gap_index = -1;
    std::string gap_type;
    double omega_b = 0, omega_t = 0;
    bool has_mode = false;
    double mode_omega = 0, mode_lambda = 0, F_value = 0, residual = 0;
    bool has_residual = false;
    std::string error;
  };

  const int nb = config.beta_samples;
  std::vector<std::vector<Row>> per_beta(nb);
  std::vector<char> failed(nb, 0);

  parallel_for(static_cast<std::size_t>(nb), [&](std::size_t bi) {
    const double beta = kPi * static_cast<double>(bi) / (nb - 1);
    LatticeParams p = config.params;
    p.beta = beta;
    p = normalize_params(p);
    std::vector<Row>& rows = per_beta[bi];
    try {
      const BandScan scan = find_gaps(p, config.window, config.resolution, config.tol);
      for (std::size_t gi = 0; gi < scan.gaps.size(); ++gi) {
        const SpectralGap& g = scan.gaps[gi];
        ModeSearchOptions opts;
        opts.gap_index = static_cast<int>(gi);
        std::vector<GuidedMode> modes;
        if (p.mu > 0.0 && p.mu < 1.0)
          modes = find_guided_modes(p, g, opts, config.tol);
        if (modes.empty()) {
          Row r;
          r.beta = beta;
          r.gap_index = static_cast<int>(gi);
          r.gap_type = gap_type_name(g.type);
          r.omega_b = g.omega_b;
          r.omega_t = g.omega_t;
          rows.push_back(r);
        }
        for (const GuidedMode& m : modes) {
          Row r;
          r.beta = beta;
          r.gap_index = static_cast<int>(gi);
          r.gap_type = gap_type_name(g.type);
          r.omega_b = g.omega_b;
          r.omega_t = g.omega_t;
          r.has_mode = true;
          r.mode_omega = m.omega;
          r.mode_lambda = m.lambda;
          r.F_value = m.F_value;
          try {
            LatticeField f = mode_profile(m, p, 12, config.tol);
            r.residual = fd_residual(f, m.omega, p, config.tol);
            r.has_residual = true;
          } catch (const SpectralError&) {
            r.has_residual = false;
          }
          rows.push_back(r);
        }
      }
    } catch (const std::exception& e) {
      Row r;
      r.beta = beta;
      r.error = e.what();
      rows.assign(1, r);
      failed[bi] = 1;
    }
  });

  int n_failed = 0;
  for (char f : failed) n_failed += f;

  if (config.format == RunConfig::Format::kJson) {
    JsonValue::Array arr;
    for (const auto& rows : per_beta) {
      for (const Row& r : rows) {
        JsonValue::Object o{{"beta", r.beta}};
        if (r.error.empty()) {
          o.emplace_back("gap_index", r.gap_index);
          o.emplace_back("gap_type", r.gap_type);
          o.emplace_back("omega_b", r.omega_b);
          o.emplace_back("omega_t", r.omega_t);
          o.emplace_back("mode_omega", r.has_mode ? JsonValue(r.mode_omega) : JsonValue(nullptr));
          o.emplace_back("mode_lambda",
                         r.has_mode ? JsonValue(r.mode_lambda) : JsonValue(nullptr));
          o.emplace_back("F_value", r.has_mode ? JsonValue(r.F_value) : JsonValue(nullptr));
          o.emplace_back("residual", r.has_residual ? JsonValue(r.residual) : JsonValue(nullptr));
          o.emplace_back("errors", "");
        } else {
          o.emplace_back("errors", r.error);
        }
        arr.push_back(std::move(o));
      }
    }
    JsonValue doc(JsonValue::Object{{"command", "bands"},
                                    {"params", params_json(config.params)},
                                    {"window", window_json(config.window)},
                                    {"beta_samples", static_cast<long long>(nb)},
                                    {"rows", std::move(arr)}});
    write_output(config, doc.dump());
  } else {
    std::string text =
        "beta,gap_index,gap_type,omega_b,omega_t,mode_omega,mode_lambda,F_value,residual,errors\n";
    for (const auto& rows : per_beta) {
      for (const Row& r : rows) {
        if (r.error.empty()) {
          text += csv_join({fd(r.beta), std::to_string(r.gap_index), r.gap_type, fd(r.omega_b),
                            fd(r.omega_t), r.has_mode ? fd(r.mode_omega) : "",
                            r.has_mode ? fd(r.mode_lambda) : "", r.has_mode ? fd(r.F_value) : "",
                            r.has_residual ? fd(r.residual) : "", ""});
        } else {
          std::string msg = r.error;
          for (char& c : msg)
            if (c == ',' || c == '\n') c = ';';
          text += csv_join({fd(r.beta), "", "", "", "", "", "", "", "", msg});
        }
      }
    }
    write_output(config, text);
  }

  if (n_failed * 10 > nb) {  // more than 10% of rows failed
    err << n_failed << " of " << nb << " beta rows failed\n";
    return kExitSweepFailures;
  }
  return kExitOk;
}

int cmd_dispersion(const RunConfig& config, std::ostream& err) {
  try {
    validate_scan_config(config);
    if (config.dispersion_grid < 1)
      throw SpectralError(Errc::NonPositiveParameter, "dispersion grid must be >= 1");
  } catch (const SpectralError& e) {
    return config_error(err, e.what());
  }

  const int n = config.dispersion_grid;
  struct Row {
    double xi, eta;
    std::vector<DispersionRoot> roots;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n) * n);
  parallel_for(rows.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    const double xi = 2.0 * kPi * i / n;
    const double eta = 2.0 * kPi * j / n;
    rows[idx] = {xi, eta,
                 dispersion_roots(xi, eta, config.params, config.window, config.resolution,
                                  config.tol)};
  });

  if (config.format == RunConfig::Format::kJson) {
    JsonValue::Array arr;
    for (const Row& r : rows) {
      JsonValue::Array roots, degen;
      for (const DispersionRoot& d : r.roots) {
        roots.emplace_back(d.omega);
        degen.emplace_back(d.degenerate);
      }
      arr.push_back(JsonValue::Object{{"xi", r.xi},
                                      {"eta", r.eta},
                                      {"roots", std::move(roots)},
                                      {"degenerate", std::move(degen)}});
    }
    JsonValue doc(JsonValue::Object{{"command", "dispersion"},
                                    {"params", params_json(config.params)},
                                    {"window", window_json(config.window)},
                                    {"grid", static_cast<long long>(n)},
                                    {"rows", std::move(arr)}});
    write_output(config, doc.dump());
  } else {
    std::string text = "xi,eta,roots,degenerate\n";
    for (const Row& r : rows) {
      std::string roots, degen;
      for (std::size_t i = 0; i < r.roots.size(); ++i) {
        if (i) {
          roots += ';';
          degen += ';';
        }
        roots += fd(r.roots[i].omega);
        degen += r.roots[i].degenerate ? '1' : '0';
      }
      text += csv_join({fd(r.xi), fd(r.eta), roots, degen});
    }
    write_output(config, text);
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& err) {
  try {
    validate_scan_config(config);
    if (config.params.mu <= 0.0)
      throw SpectralError(Errc::NonPositiveParameter, "mu must be set and > 0");
  } catch (const SpectralError& e) {
    return config_error(err, e.what());
  }

  struct Check {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = true;
  };
  std::vector<Check> checks;
  std::vector<std::string> notes;
  auto add = [&](const std::string& name, double value, double threshold) {
    checks.push_back({name, value, threshold, value <= threshold});
  };

  const BandScan scan = find_gaps(config.params, config.window, config.resolution, config.tol);
  int total_modes = 0;
  for (std::size_t gi = 0; gi < scan.gaps.size(); ++gi) {
    const SpectralGap& g = scan.gaps[gi];
    ModeSearchOptions opts;
    opts.gap_index = static_cast<int>(gi);
    std::vector<GuidedMode> modes;
    if (config.params.mu < 1.0) modes = find_guided_modes(config.params, g, opts, config.tol);
    if (modes.empty()) {
      notes.push_back("gap " + std::to_string(gi) + ": no modes, nothing to verify");
      continue;
    }
    total_modes += static_cast<int>(modes.size());

    const std::vector<double> oracle =
        oracle_eigenfrequencies(config.params, g, config.K, config.grid, {}, config.tol);
    for (const GuidedMode& m : modes) {
      double dw = std::numeric_limits<double>::infinity();
      for (double o : oracle) dw = std::min(dw, std::fabs(o - m.omega));
      add("gap" + std::to_string(gi) + ".mode" + fd(m.omega) + ".oracle_delta_omega", dw,
          config.verify_dw);

      LatticeField f = mode_profile(m, config.params, 20, config.tol);
      add("gap" + std::to_string(gi) + ".mode" + fd(m.omega) + ".fd_residual",
          fd_residual(f, m.omega, config.params, config.tol), config.verify_residual);
      const double rho = decay_rate(f);
      add("gap" + std::to_string(gi) + ".mode" + fd(m.omega) + ".decay_rate", rho, 1.0);

      const double F2 = F_beta_2d(m.omega, config.params, 1e-10, config.tol);
      add("gap" + std::to_string(gi) + ".mode" + fd(m.omega) + ".quad_agreement",
          std::fabs(m.F_value - F2) / std::max(1.0, std::fabs(m.F_value)), config.verify_quad);
    }
    // quadrature agreement at interior samples away from the W points
    int taken = 0;
    for (int j = 1; j <= 16 && taken < 10; ++j) {
      const double om = g.omega_b + (g.omega_t - g.omega_b) * j / 17.0;
      bool near_pole = false;
      for (double w : g.w_inside) near_pole |= std::fabs(om - w) < 1e-3;
      if (near_pole) continue;
      const double F1 = F_beta(om, config.params, config.tol);
      const double F2 = F_beta_2d(om, config.params, 1e-10, config.tol);
      add("gap" + std::to_string(gi) + ".sample" + std::to_string(j) + ".quad_agreement",
          std::fabs(F1 - F2) / std::max(1.0, std::fabs(F1)), config.verify_quad);
      ++taken;
    }
  }

  bool all_pass = true;
  for (const Check& c : checks) all_pass &= c.pass;

  JsonValue::Array checks_json;
  for (const Check& c : checks) {
    checks_json.push_back(JsonValue::Object{{"name", c.name},
                                            {"value", c.value},
                                            {"threshold", c.threshold},
                                            {"pass", c.pass}});
  }
  JsonValue::Array notes_json;
  for (const std::string& n : notes) notes_json.emplace_back(n);
  JsonValue doc(JsonValue::Object{{"command", "verify"},
                                  {"params", params_json(config.params)},
                                  {"window", window_json(config.window)},
                                  {"K", static_cast<long long>(config.K)},
                                  {"grid", static_cast<long long>(config.grid)},
                                  {"mode_count", static_cast<long long>(total_modes)},
                                  {"checks", std::move(checks_json)},
                                  {"notes", std::move(notes_json)},
                                  {"overall", all_pass}});
  write_output(config, doc.dump());

  if (!all_pass) {
    for (const Check& c : checks)
      if (!c.pass)
        err << "verify failed: " << c.name << " = " << c.value << " > " << c.threshold << "\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace latticeguide
