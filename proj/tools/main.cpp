#include <CLI11.hpp>
#include <fstream>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "latticeguide/commands.hpp"
#include "latticeguide/errors.hpp"

namespace lg = latticeguide;

namespace {

struct CliState {
  std::vector<double> a{1.0, 1.0, 1.0};
  double beta = 0.0;
  double mu = 1.0;
  double omega_min = 0.05;
  double omega_max = 6.3;
  double resolution = 0.0;
  int K = 40;
  int grid = 200;
  int beta_samples = 17;
  int gap = -1;
  int profile = 0;
  int dgrid = 16;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CliState& s) {
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--a", s.a, "lattice periods a1,a2,a3")->delimiter(',')->expected(3);
  cmd->add_option("--beta", s.beta, "quasi-momentum (radians)");
  cmd->add_option("--mu", s.mu, "defect weight");
  cmd->add_option("--omega-min", s.omega_min, "window lower edge in omega");
  cmd->add_option("--omega-max", s.omega_max, "window upper edge in omega");
  cmd->add_option("--resolution", s.resolution, "scan resolution in omega (0 = auto)");
  cmd->add_option("--K", s.K, "lattice truncation radius");
  cmd->add_option("--grid", s.grid, "oracle scan grid per gap");
  cmd->add_option("--beta-samples", s.beta_samples, "rows of a beta sweep");
  cmd->add_option("--gap", s.gap, "gap index (-1 = all)");
  cmd->add_option("--profile", s.profile, "attach mode profiles up to |k|+|l| <= K");
  cmd->add_option("--dispersion-grid", s.dgrid, "(xi, eta) samples per axis");
  cmd->add_option("--format", s.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", s.out, "output path (default stdout)");
}

int build_config(const CliState& s, lg::RunConfig& config) {
  try {
    config.params = lg::normalize_params({s.a[0], s.a[1], s.a[2], s.mu, s.beta});
  } catch (const lg::SpectralError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lg::kExitConfig;
  }
  config.window = {s.omega_min, s.omega_max};
  config.resolution = s.resolution;
  config.K = s.K;
  config.grid = s.grid;
  config.beta_samples = s.beta_samples;
  config.gap_index = s.gap;
  config.profile_K = s.profile;
  config.dispersion_grid = s.dgrid;
  config.format =
      s.format == "csv" ? lg::RunConfig::Format::kCsv : lg::RunConfig::Format::kJson;
  config.out_path = s.out;
  if (const char* tol = std::getenv("LATTICE_GUIDE_TOL")) {
    const double v = std::strtod(tol, nullptr);
    if (v > 0.0) config.tol.quad_rel = v;
  }
  return lg::kExitOk;
}

// Flat key=value config file with '#' comments. Keys are the long flag names
// without the leading dashes. Values injected before the explicit flags, so
// command-line flags win (TakeLast policy).
std::vector<std::string> expand_config(int argc, char** argv, std::string& error) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  std::size_t drop_at = 0, drop_count = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      drop_at = i;
      drop_count = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      drop_at = i;
      drop_count = 1;
    }
  }
  if (path.empty()) return args;
  args.erase(args.begin() + drop_at, args.begin() + drop_at + drop_count);

  std::ifstream in(path);
  if (!in) {
    error = "cannot open config file " + path;
    return {};
  }
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      error = "config line without '=': " + line;
      return {};
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
      value.erase(value.begin());
    injected.push_back("--" + key + "=" + value);
  }

  // keep program name and the subcommand, then config values, then user flags
  std::vector<std::string> out;
  out.push_back(args[0]);
  std::size_t i = 1;
  if (i < args.size() && !args[i].empty() && args[i][0] != '-') out.push_back(args[i++]);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + i, args.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for the weighted periodic lattice graph operator"};
  app.require_subcommand(1);

  CliState s;
  CLI::App* c_gaps = app.add_subcommand("gaps", "band/gap scan over a frequency window");
  CLI::App* c_eigen = app.add_subcommand("eigen", "guided-mode eigenvalues inside gaps");
  CLI::App* c_bands = app.add_subcommand("bands", "beta sweep: gap map + guided-mode curves");
  CLI::App* c_disp = app.add_subcommand("dispersion", "Bloch dispersion roots on a momentum grid");
  CLI::App* c_verify = app.add_subcommand("verify", "cross-check analytic modes against the lattice oracle");
  for (CLI::App* c : {c_gaps, c_eigen, c_bands, c_disp, c_verify}) add_common(c, s);

  std::string cfg_error;
  const std::vector<std::string> args = expand_config(argc, argv, cfg_error);
  if (!cfg_error.empty()) {
    std::cerr << "config error: " << cfg_error << "\n";
    return lg::kExitConfig;
  }
  std::vector<const char*> cargs;
  cargs.reserve(args.size());
  for (const std::string& a : args) cargs.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lg::kExitConfig;
  }

  lg::RunConfig config;
  if (int rc = build_config(s, config); rc != lg::kExitOk) return rc;

  try {
    if (c_gaps->parsed()) return lg::cmd_gaps(config, std::cerr);
    if (c_eigen->parsed()) return lg::cmd_eigen(config, std::cerr);
    if (c_bands->parsed()) return lg::cmd_bands(config, std::cerr);
    if (c_disp->parsed()) return lg::cmd_dispersion(config, std::cerr);
    if (c_verify->parsed()) return lg::cmd_verify(config, std::cerr);
  } catch (const lg::SpectralError& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == lg::Errc::ClassificationViolation) return lg::kExitClassification;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return lg::kExitConfig;
}
