// Acceptance suite: runs every criterion end to end and prints one PASS/FAIL
// line per criterion. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latticeguide/commands.hpp"
#include "latticeguide/modes.hpp"
#include "latticeguide/oracle.hpp"
#include "latticeguide/spectrum.hpp"

using namespace latticeguide;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;
std::vector<std::string> g_detail;

void detail(const std::string& line) { g_detail.push_back(line); }

void report(int criterion, bool pass, const std::string& summary) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, summary.c_str());
  for (const auto& line : g_detail) std::printf("         %s\n", line.c_str());
  g_detail.clear();
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Combo {
  const char* config;
  double a3;
  double beta_frac;  // beta = frac * pi
  LatticeParams params(double mu) const {
    return normalize_params({1.0, 1.0, a3, mu, beta_frac * kPi});
  }
};

const std::vector<Combo> kCombos = {
    {"A", 1.0, 0.2}, {"A", 1.0, 0.5}, {"A", 1.0, 0.8},
    {"B", 2.0, 0.2}, {"B", 2.0, 0.5}, {"B", 2.0, 0.8},
};
const double kMus[] = {0.3, 0.5, 0.8};
const FrequencyWindow kModesWindow{0.1, 2.0 * kPi};
const FrequencyWindow kScanWindow{0.1, 6.0 * kPi};

struct ComboData {
  Combo combo;
  BandScan scan;                                    // over kModesWindow
  std::map<double, std::vector<std::vector<GuidedMode>>> modes;  // mu -> per gap
};

std::vector<ComboData> compute_combo_data() {
  std::vector<ComboData> out;
  for (const Combo& c : kCombos) {
    ComboData d;
    d.combo = c;
    d.scan = find_gaps(c.params(1.0), kModesWindow, 1e-3);
    for (double mu : kMus) {
      const LatticeParams p = c.params(mu);
      std::vector<std::vector<GuidedMode>> per_gap;
      for (std::size_t gi = 0; gi < d.scan.gaps.size(); ++gi) {
        ModeSearchOptions opts;
        opts.gap_index = static_cast<int>(gi);
        per_gap.push_back(find_guided_modes(p, d.scan.gaps[gi], opts));
      }
      d.modes[mu] = std::move(per_gap);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::string combo_name(const Combo& c, double mu) {
  std::ostringstream ss;
  ss << c.config << " beta=" << c.beta_frac << "pi mu=" << mu;
  return ss.str();
}

// ---- criterion 1: analytic modes vs truncated-lattice oracle at K=40 ----
void criterion_1(const std::vector<ComboData>& data) {
  const auto t0 = std::chrono::steady_clock::now();
  int matched = 0, unmatched = 0;
  for (const ComboData& d : data) {
    for (double mu : kMus) {
      const LatticeParams p = d.combo.params(mu);
      const auto& per_gap = d.modes.at(mu);
      for (std::size_t gi = 0; gi < d.scan.gaps.size(); ++gi) {
        if (per_gap[gi].empty()) continue;
        const std::vector<double> oracle =
            oracle_eigenfrequencies(p, d.scan.gaps[gi], 40, 160);
        for (const GuidedMode& m : per_gap[gi]) {
          double dw = std::numeric_limits<double>::infinity();
          for (double o : oracle) dw = std::min(dw, std::fabs(o - m.omega));
          if (dw <= 1e-3) {
            ++matched;
          } else {
            ++unmatched;
            detail(combo_name(d.combo, mu) + " gap" + std::to_string(gi) + ": mode omega=" +
                   fmt(m.omega) + " has no oracle match (nearest |dw|=" + fmt(dw) +
                   ", edge distance " +
                   fmt(std::min(m.omega - d.scan.gaps[gi].omega_b,
                                d.scan.gaps[gi].omega_t - m.omega)) +
                   ")");
          }
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < 600.0;
  report(1, unmatched == 0 && in_time,
         "oracle equivalence at K=40: " + std::to_string(matched) + "/" +
             std::to_string(matched + unmatched) + " analytic modes matched to 1e-3 in " +
             fmt(secs) + " s" + (in_time ? "" : " (over the 10 min budget)"));
}

// ---- criterion 2: 1D reduction vs direct 2D quadrature ----
void criterion_2(const std::vector<ComboData>& data) {
  const auto t0 = std::chrono::steady_clock::now();
  int per_config_target = 100;
  std::map<std::string, int> sampled;
  double worst = 0.0;
  std::string worst_at;
  for (const ComboData& d : data) {
    const LatticeParams p = d.combo.params(0.5);
    int& count = sampled[d.combo.config];
    for (const SpectralGap& g : d.scan.gaps) {
      const double width = g.omega_t - g.omega_b;
      for (int j = 1; j <= 12 && count < per_config_target * 3; ++j) {
        const double om = g.omega_b + width * (0.02 + 0.96 * j / 13.0);
        bool near_pole = false;
        for (double w : g.w_inside) near_pole |= std::fabs(om - w) < 1e-3;
        if (near_pole) continue;
        const double f1 = F_beta(om, p);
        const double f2 = F_beta_2d(om, p);
        const double rel = std::fabs(f1 - f2) / std::max(1.0, std::fabs(f1));
        if (rel > worst) {
          worst = rel;
          worst_at = combo_name(d.combo, 0.5) + " omega=" + fmt(om);
        }
        ++count;
      }
    }
  }
  bool enough = true;
  for (const auto& [cfg, count] : sampled) {
    if (count < per_config_target) {
      enough = false;
      detail(std::string("config ") + cfg + ": only " + std::to_string(count) + " samples");
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(2, worst <= 1e-8 && enough && secs < 60.0,
         "quadrature consistency: worst relative gap " + fmt(worst) + " at " + worst_at +
             " over " + std::to_string(sampled["A"]) + "+" + std::to_string(sampled["B"]) +
             " samples in " + fmt(secs) + " s");
}

// ---- criterion 3: mode-count bounds per gap type ----
void criterion_3(const std::vector<ComboData>& data) {
  int ok_cases = 0, bad_cases = 0;
  for (const ComboData& d : data) {
    for (double mu : kMus) {
      const auto& per_gap = d.modes.at(mu);
      for (std::size_t gi = 0; gi < d.scan.gaps.size(); ++gi) {
        const SpectralGap& g = d.scan.gaps[gi];
        const auto& modes = per_gap[gi];
        bool ok = true;
        std::string why;
        if (g.type == GapType::TypeI) {
          const double w0 = g.w_inside.at(0);
          int below = 0, above = 0;
          for (const GuidedMode& m : modes) (m.omega < w0 ? below : above)++;
          ok = below >= 1 && above >= 1;
          if (!ok) why = "type I needs modes on both sides of omega0, got " +
                         std::to_string(below) + "+" + std::to_string(above);
        } else {
          ok = modes.size() >= 1;
          if (!ok) {
            const LatticeParams p = d.combo.params(mu);
            // measure how far 1-F still is from mu at the closest evaluable probes
            const double width = g.omega_t - g.omega_b;
            std::string extra;
            for (double sign : {1.0, -1.0}) {
              const double edge = sign > 0 ? g.omega_b : g.omega_t;
              bool done = false;
              for (double t = 12.0; t >= 8.0 && !done; t -= 1.0) {
                const double dist = width * std::pow(10.0, -t);
                try {
                  extra += " 1-F(edge" + std::string(sign > 0 ? "+" : "-") + fmt(dist) +
                           ")=" + fmt(1.0 - F_beta(edge + sign * dist, p));
                  done = true;
                } catch (const SpectralError&) {
                }
              }
              if (!done) extra += " edge-probe-unevaluable";
            }
            why = "type " + std::string(gap_type_name(g.type)) +
                  " found no root; closest evaluable probes:" + extra;
          }
        }
        if (ok) {
          ++ok_cases;
        } else {
          ++bad_cases;
          detail(combo_name(d.combo, mu) + " gap" + std::to_string(gi) + " (" +
                 fmt(g.omega_b) + ", " + fmt(g.omega_t) + "): " + why);
        }
      }
    }
  }
  // mu >= 1: no modes anywhere
  int spurious = 0;
  for (const ComboData& d : data) {
    for (double mu : {1.0, 1.5, 3.0}) {
      const LatticeParams p = d.combo.params(mu);
      for (const SpectralGap& g : d.scan.gaps)
        spurious += static_cast<int>(find_guided_modes(p, g).size());
    }
  }
  if (spurious > 0) detail("mu >= 1 produced " + std::to_string(spurious) + " spurious modes");
  report(3, bad_cases == 0 && spurious == 0,
         "mode-count bounds: " + std::to_string(ok_cases) + "/" +
             std::to_string(ok_cases + bad_cases) +
             " gap/mu cases satisfy the bound; mu>=1 spurious modes: " +
             std::to_string(spurious));
}

// ---- criterion 4: sigma points lie in the spectrum and outside gaps ----
void criterion_4() {
  int bad_membership = 0, inside_gap = 0, total = 0;
  for (const Combo& c : kCombos) {
    const LatticeParams p = c.params(1.0);
    const SigmaPoints sp = sigma_points(p, kScanWindow);
    const BandScan scan = find_gaps(p, kScanWindow, 1e-3);
    for (const auto* fam : {&sp.s1, &sp.s2, &sp.s3}) {
      for (double s : *fam) {
        ++total;
        if (!in_essential_spectrum(s, p)) {
          ++bad_membership;
          detail(combo_name(c, 1.0) + ": sigma point " + fmt(s) + " not in spectrum");
        }
        for (const SpectralGap& g : scan.gaps) {
          if (s > g.omega_b + 1e-7 && s < g.omega_t - 1e-7) {
            ++inside_gap;
            detail(combo_name(c, 1.0) + ": sigma point " + fmt(s) + " inside gap (" +
                   fmt(g.omega_b) + ", " + fmt(g.omega_t) + ")");
          }
        }
      }
    }
  }
  report(4, bad_membership == 0 && inside_gap == 0,
         "sigma-set inclusion up to 6pi: " + std::to_string(total) +
             " points checked, " + std::to_string(bad_membership) + " membership misses, " +
             std::to_string(inside_gap) + " inside gaps");
}

// ---- criterion 5: trichotomy of every gap below 6pi ----
void criterion_5() {
  int gaps_checked = 0, violations = 0;
  for (const Combo& c : kCombos) {
    try {
      const BandScan scan = find_gaps(c.params(1.0), kScanWindow, 1e-3);
      for (const SpectralGap& g : scan.gaps) {
        ++gaps_checked;
        const bool i = !g.edge_b_sigma && !g.edge_t_sigma && g.w_inside.size() == 1;
        const bool ii = g.edge_b_sigma && !g.edge_t_sigma && g.w_inside.empty();
        const bool iii = !g.edge_b_sigma && g.edge_t_sigma && g.w_inside.empty();
        if (static_cast<int>(i) + static_cast<int>(ii) + static_cast<int>(iii) != 1) {
          ++violations;
          detail(combo_name(c, 1.0) + ": gap (" + fmt(g.omega_b) + ", " + fmt(g.omega_t) +
                 ") matches " + std::to_string(i + ii + iii) + " types");
        }
      }
    } catch (const SpectralError& e) {
      ++violations;
      detail(combo_name(c, 1.0) + ": " + e.what());
    }
  }
  report(5, violations == 0,
         "trichotomy below 6pi: " + std::to_string(gaps_checked) + " gaps, " +
             std::to_string(violations) + " violations");
}

// ---- criterion 6: gap-edge and pole limits of 1 - F ----
void criterion_6(const std::vector<ComboData>& data) {
  int edge_ok = 0, edge_bad = 0, pole_ok = 0, pole_bad = 0;
  for (const ComboData& d : data) {
    const LatticeParams p = d.combo.params(0.5);
    for (const SpectralGap& g : d.scan.gaps) {
      if (g.type != GapType::TypeI) continue;
      const double width = g.omega_t - g.omega_b;
      for (double probe : {g.omega_b + 1e-2 * width, g.omega_t - 1e-2 * width}) {
        const double v = 1.0 - F_beta(probe, p);
        if (v > 0.9) {
          ++edge_ok;
        } else {
          ++edge_bad;
          detail(combo_name(d.combo, 0.5) + ": 1-F = " + fmt(v) + " at probe " + fmt(probe) +
                 " (gap " + fmt(g.omega_b) + ", " + fmt(g.omega_t) + "), needs > 0.9");
        }
      }
      const double w0 = g.w_inside.at(0);
      for (double probe : {w0 - 1e-3, w0 + 1e-3}) {
        const double v = std::fabs(1.0 - F_beta(probe, p));
        if (v < 0.05) {
          ++pole_ok;
        } else {
          ++pole_bad;
          detail(combo_name(d.combo, 0.5) + ": |1-F| = " + fmt(v) + " at omega0 probe " +
                 fmt(probe));
        }
      }
    }
  }
  report(6, edge_bad == 0 && pole_bad == 0,
         "gap-edge limits: edge probes " + std::to_string(edge_ok) + "/" +
             std::to_string(edge_ok + edge_bad) + " above 0.9, pole probes " +
             std::to_string(pole_ok) + "/" + std::to_string(pole_ok + pole_bad) +
             " below 0.05");
}

// ---- criterion 7: reconstructed mode quality at K = 20 ----
void criterion_7() {
  const LatticeParams p = normalize_params({1, 1, 2, 0.5, kPi / 2});
  const BandScan scan = find_gaps(p, {0.1, kPi}, 1e-3);
  const SpectralGap* gap = nullptr;
  for (const auto& g : scan.gaps)
    if (g.omega_b < kPi / 2 && kPi / 2 < g.omega_t) gap = &g;
  bool ok = gap != nullptr;
  std::string summary = "mode quality (config B, mu=0.5, K=20): ";
  if (!ok) {
    report(7, false, summary + "gap not found");
    return;
  }
  const auto modes = find_guided_modes(p, *gap);
  ok = modes.size() == 2;
  int checked = 0;
  for (const GuidedMode& m : modes) {
    const LatticeField f = mode_profile(m, p, 20);
    const double resid = fd_residual(f, m.omega, p);
    double sym = 0.0;
    for (int k = 0; k <= 20; ++k)
      for (int l = 0; l <= 20; ++l) {
        sym = std::max(sym, std::fabs(f.at(k, l) - f.at(-k, l)));
        sym = std::max(sym, std::fabs(f.at(k, l) - f.at(k, -l)));
      }
    double total = 0.0, boundary = 0.0;
    for (int k = -20; k <= 20; ++k)
      for (int l = -20; l <= 20; ++l) {
        const double e = f.at(k, l) * f.at(k, l);
        total += e;
        if (std::max(std::abs(k), std::abs(l)) == 20) boundary += e;
      }
    const double rho = decay_rate(f);
    const bool mode_ok = resid <= 1e-6 && f.at(0, 0) == 1.0 && sym <= 1e-10 && rho < 1.0 &&
                         boundary / total < 1e-6;
    if (!mode_ok)
      detail("mode " + fmt(m.omega) + ": residual " + fmt(resid) + ", sym " + fmt(sym) +
             ", rho " + fmt(rho) + ", boundary fraction " + fmt(boundary / total));
    ok = ok && mode_ok;
    ++checked;
  }
  report(7, ok, summary + std::to_string(checked) + " modes checked");
}

// ---- criterion 8: symmetry of scans and mode lists ----
void criterion_8() {
  const FrequencyWindow win{0.2, 5.0};
  const auto base = normalize_params({1.3, 0.8, 2, 0.5, 1.1});
  const auto swapped = normalize_params({0.8, 1.3, 2, 0.5, 1.1});
  const auto reflected = normalize_params({1.3, 0.8, 2, 0.5, 2 * kPi - 1.1});

  double worst = 0.0;
  bool ok = true;
  const BandScan s0 = find_gaps(base, win);
  for (const auto& variant : {swapped, reflected}) {
    const BandScan s1 = find_gaps(variant, win);
    if (s1.gaps.size() != s0.gaps.size()) {
      ok = false;
      detail("gap count differs under symmetry");
      continue;
    }
    for (std::size_t i = 0; i < s0.gaps.size(); ++i) {
      worst = std::max(worst, std::fabs(s0.gaps[i].omega_b - s1.gaps[i].omega_b));
      worst = std::max(worst, std::fabs(s0.gaps[i].omega_t - s1.gaps[i].omega_t));
      const auto m0 = find_guided_modes(base, s0.gaps[i]);
      const auto m1 = find_guided_modes(variant, s1.gaps[i]);
      if (m0.size() != m1.size()) {
        ok = false;
        detail("mode count differs under symmetry in gap " + std::to_string(i));
        continue;
      }
      for (std::size_t j = 0; j < m0.size(); ++j)
        worst = std::max(worst, std::fabs(m0[j].omega - m1[j].omega));
    }
  }
  ok = ok && worst <= 1e-10;
  report(8, ok, "symmetry suite: worst deviation " + fmt(worst) + " (a1<->a2, beta->2pi-beta)");
}

// ---- criterion 9: dispersion identity on random theta ----
void criterion_9() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ut(0.1, 3.0);
  int hit = 0, total = 20;
  for (int i = 0; i < total; ++i) {
    const double theta = ut(rng);
    const auto p = normalize_params({1, 1, 1, 1, theta});
    const auto roots =
        dispersion_roots(theta, theta, p, {std::max(0.05, theta - 0.5), theta + 0.5});
    bool found = false;
    for (const auto& r : roots) found |= std::fabs(r.omega - theta) <= 1e-9;
    if (found)
      ++hit;
    else
      detail("theta = " + fmt(theta) + ": no root within 1e-9");
  }
  report(9, hit == total,
         "dispersion identity: " + std::to_string(hit) + "/" + std::to_string(total) +
             " random theta recovered to 1e-9");
}

// ---- criterion 10: CLI verify exit 0 + byte-identical reruns ----
void criterion_10() {
#ifndef ACCEPTANCE_CLI_BINARY
  report(10, false, "CLI binary path not wired into the build");
#else
  const std::string bin = ACCEPTANCE_CLI_BINARY;
  const std::string base = " verify --a 1,1,2 --beta 1.5707963267948966 --mu 0.5"
                           " --omega-min 0.1 --omega-max 6.3 --K 40 --grid 200 --out ";
  auto run = [&](const std::string& env, const std::string& out) {
    return std::system((env + bin + base + out + " 2>/dev/null").c_str());
  };
  const int rc1 = run("LATTICE_GUIDE_THREADS=1 ", "/tmp/lg_acc_v1.json");
  const int rc2 = run("LATTICE_GUIDE_THREADS=3 ", "/tmp/lg_acc_v2.json");
  const int rc3 = run("LATTICE_GUIDE_THREADS=1 ", "/tmp/lg_acc_v3.json");

  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string v1 = slurp("/tmp/lg_acc_v1.json");
  const bool exits_ok = rc1 == 0 && rc2 == 0 && rc3 == 0;
  const bool bytes_ok = !v1.empty() && v1 == slurp("/tmp/lg_acc_v2.json") &&
                        v1 == slurp("/tmp/lg_acc_v3.json");
  if (!exits_ok)
    detail("verify exit codes: " + std::to_string(rc1 / 256) + ", " + std::to_string(rc2 / 256) +
           ", " + std::to_string(rc3 / 256));
  if (!bytes_ok) detail("outputs differ across runs/thread counts");
  report(10, exits_ok && bytes_ok,
         "CLI reproducibility: verify exits 0 and outputs are byte-identical across "
         "LATTICE_GUIDE_THREADS");
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite: configs A=(1,1,1) and B=(1,1,2), beta in {0.2, 0.5, 0.8} pi\n");
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ComboData> data = compute_combo_data();

  criterion_1(data);
  criterion_2(data);
  criterion_3(data);
  criterion_4();
  criterion_5();
  criterion_6(data);
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance suite finished in %.1f s with %d failing criteria\n", secs, g_failures);
  return g_failures;
}
