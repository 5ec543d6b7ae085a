#include "latticeguide/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace latticeguide {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distance from omega to the nearest point of sigma_1 u sigma_2 u sigma_3.
double sigma_distance(double omega, const LatticeParams& p) {
  double d = std::numeric_limits<double>::infinity();
  for (double a : {p.a1, p.a2}) {
    double m = std::round(omega * a / kPi);
    if (m < 1.0) m = 1.0;
    d = std::min(d, std::fabs(omega - kPi * m / a));
  }
  for (double sgn : {1.0, -1.0}) {
    const double r = std::remainder(omega * p.a3 - sgn * p.beta, kTwoPi);
    d = std::min(d, std::fabs(r) / p.a3);
  }
  return d;
}

double sigma12_distance(double omega, const LatticeParams& p) {
  double d = std::numeric_limits<double>::infinity();
  for (double a : {p.a1, p.a2}) {
    double m = std::round(omega * a / kPi);
    if (m < 1.0) m = 1.0;
    d = std::min(d, std::fabs(omega - kPi * m / a));
  }
  return d;
}

double default_resolution(const LatticeParams& p) {
  return std::min({p.a1, p.a2, p.a3}) * 1e-3;
}

}  // namespace

const char* gap_type_name(GapType t) {
  switch (t) {
    case GapType::TypeI: return "I";
    case GapType::TypeII: return "II";
    case GapType::TypeIII: return "III";
  }
  return "?";
}

bool in_essential_spectrum(double omega, const LatticeParams& p, const Tolerances& tol) {
  if (omega <= 0.0) {
    // lambda = 0 belongs to the spectrum iff beta = 0.
    return omega == 0.0 && p.beta < tol.point_match;
  }
  if (sigma_distance(omega, p) <= tol.point_match) return true;
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  if (std::fabs(s1) < tol.sin_singular || std::fabs(s2) < tol.sin_singular)
    return true;  // zeros of sin(omega a_i) are sigma_1 / sigma_2 points
  const PhiValue ph = phi_beta(omega, p, tol);
  if (ph.pole) return false;
  const Interval fr = f_range(omega, p, tol);
  return fr.lo <= ph.value && ph.value <= fr.hi;
}

bool verify_gap(const Interval& gap, const LatticeParams& p, int count, const Tolerances& tol) {
  for (int j = 1; j <= count; ++j) {
    const double om = gap.lo + gap.width() * j / (count + 1.0);
    if (in_essential_spectrum(om, p, tol)) return false;
  }
  return true;
}

SpectralGap classify_gap(const Interval& gap, const LatticeParams& p, const Tolerances& tol) {
  if (!(gap.lo < gap.hi))
    throw SpectralError(Errc::NonPositiveParameter, "gap interval requires lo < hi");

  SpectralGap out;
  out.omega_b = gap.lo;
  out.omega_t = gap.hi;
  out.edge_b_sigma = sigma12_distance(gap.lo, p) <= tol.sigma_match;
  out.edge_t_sigma = sigma12_distance(gap.hi, p) <= tol.sigma_match;

  const double margin = tol.sigma_match;
  for (double w : w_points(p, FrequencyWindow{std::max(gap.lo, 1e-12), gap.hi}, tol)) {
    if (w > gap.lo + margin && w < gap.hi - margin) out.w_inside.push_back(w);
  }

  if (!out.edge_b_sigma && !out.edge_t_sigma && out.w_inside.size() == 1) {
    out.type = GapType::TypeI;
  } else if (out.edge_b_sigma && !out.edge_t_sigma && out.w_inside.empty()) {
    out.type = GapType::TypeII;
  } else if (!out.edge_b_sigma && out.edge_t_sigma && out.w_inside.empty()) {
    out.type = GapType::TypeIII;
  } else {
    std::ostringstream msg;
    msg << "gap (" << gap.lo << ", " << gap.hi << ") has edge flags (" << out.edge_b_sigma
        << ", " << out.edge_t_sigma << ") and " << out.w_inside.size()
        << " W(beta) points inside; matches no type";
    throw SpectralError(Errc::ClassificationViolation, msg.str());
  }
  return out;
}

BandScan find_gaps(const LatticeParams& p, const FrequencyWindow& w, double resolution,
                   const Tolerances& tol) {
  validate_window(w);
  if (w.lo <= 0.0)
    throw SpectralError(Errc::NonPositiveParameter, "scan window requires lo > 0");
  const double res = resolution > 0.0 ? resolution : default_resolution(p);

  const SigmaPoints sig = sigma_points(p, w);
  std::vector<double> special;
  for (const auto* v : {&sig.s1, &sig.s2, &sig.s3})
    special.insert(special.end(), v->begin(), v->end());
  std::sort(special.begin(), special.end());
  // Precondition: the grid resolves the spacing between distinct sigma points.
  for (std::size_t i = 1; i < special.size(); ++i) {
    const double d = special[i] - special[i - 1];
    if (d > 1e-9 && d < 10.0 * res) {
      std::ostringstream msg;
      msg << "resolution " << res << " leaves fewer than 10 samples between sigma points "
          << special[i - 1] << " and " << special[i];
      throw SpectralError(Errc::ResolutionTooCoarse, msg.str());
    }
  }
  const std::vector<double> wp = w_points(p, w, tol);

  // Sample set: uniform grid plus probes near every special point.
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>((w.hi - w.lo) / res) + special.size() * 6 + 16);
  for (double x = w.lo; x < w.hi; x += res) xs.push_back(x);
  xs.push_back(w.hi);
  auto push_probes = [&](double s, bool include_self) {
    if (include_self && s >= w.lo && s <= w.hi) xs.push_back(s);
    for (double d : {1e-7, 0.1 * res}) {
      for (double x : {s - d, s + d})
        if (x >= w.lo && x <= w.hi) xs.push_back(x);
    }
  };
  for (double s : special) push_probes(s, true);
  for (double v : wp) push_probes(v, true);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<char> member(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    member[i] = in_essential_spectrum(xs[i], p, tol) ? 1 : 0;

  // Refine every transition by bisection on the membership predicate (the sign
  // of whichever edge function phi - f_max / phi - f_min flips there).
  struct EdgeHit {
    double omega;
    std::size_t left_sample;
  };
  std::vector<EdgeHit> edges;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (member[i] == member[i + 1]) continue;
    double lo = xs[i], hi = xs[i + 1];
    const bool ml = member[i];
    while (hi - lo > tol.edge_bisect) {
      const double mid = 0.5 * (lo + hi);
      if (in_essential_spectrum(mid, p, tol) == static_cast<bool>(ml))
        lo = mid;
      else
        hi = mid;
    }
    edges.push_back({0.5 * (lo + hi), i});
  }

  // Grid-consistency check: two or more transitions inside one uniform cell
  // are only credible next to a known special point.
  {
    std::vector<std::size_t> cell_count(
        static_cast<std::size_t>((w.hi - w.lo) / res) + 2, 0);
    for (const EdgeHit& e : edges) {
      const auto cell = static_cast<std::size_t>((e.omega - w.lo) / res);
      if (cell < cell_count.size()) ++cell_count[cell];
    }
    for (std::size_t c = 0; c < cell_count.size(); ++c) {
      if (cell_count[c] < 2) continue;
      const double clo = w.lo + c * res, chi = clo + res;
      const bool assisted =
          std::any_of(special.begin(), special.end(),
                      [&](double s) { return s >= clo - res && s <= chi + res; }) ||
          std::any_of(wp.begin(), wp.end(),
                      [&](double v) { return v >= clo - res && v <= chi + res; });
      if (!assisted) {
        std::ostringstream msg;
        msg << cell_count[c] << " membership transitions inside grid cell (" << clo << ", "
            << chi << "); decrease the resolution";
        throw SpectralError(Errc::ResolutionTooCoarse, msg.str());
      }
    }
  }

  // Snap refined edges onto sigma points they hug (the membership plateau
  // around a sigma point has the width of the proximity tolerance).
  const double snap_tol = std::max(4.0 * tol.edge_bisect, 2.5 * tol.point_match);
  auto snap = [&](double e) {
    double best = e, bd = snap_tol;
    for (double s : special) {
      const double d = std::fabs(e - s);
      if (d <= bd) {
        bd = d;
        best = s;
      }
    }
    return best;
  };
  for (EdgeHit& e : edges) e.omega = snap(e.omega);

  // Assemble alternating regions.
  struct Region {
    double lo, hi;
    bool member;
  };
  std::vector<Region> regions;
  {
    double cur = w.lo;
    bool state = member[0];
    for (const EdgeHit& e : edges) {
      const double hi = std::max(cur, e.omega);
      regions.push_back({cur, hi, state});  // zero width = isolated point
      cur = hi;
      state = !state;
    }
    regions.push_back({cur, w.hi, state});
  }

  BandScan out;
  out.window = w;
  out.resolution = res;

  const double degen_width = std::max(4.0 * tol.edge_bisect, 4.0 * tol.point_match);
  std::vector<Interval> gap_candidates;
  std::vector<char> clipped_lo, clipped_hi;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Region& reg = regions[r];
    if (reg.member) {
      if (reg.hi - reg.lo <= degen_width)
        out.embedded_points.push_back(snap(0.5 * (reg.lo + reg.hi)));
      else
        out.bands.push_back({reg.lo, reg.hi});
    } else {
      if (reg.hi - reg.lo <= 0.0) continue;
      gap_candidates.push_back({reg.lo, reg.hi});
      clipped_lo.push_back(r == 0 ? 1 : 0);
      clipped_hi.push_back(r + 1 == regions.size() ? 1 : 0);
    }
  }

  for (std::size_t i = 0; i < gap_candidates.size(); ++i) {
    // A window boundary is not a certified spectrum edge unless it happens to
    // carry a sigma point (then the membership flip is real).
    const Interval& g = gap_candidates[i];
    const bool lo_cut = clipped_lo[i] && sigma_distance(g.lo, p) > tol.point_match;
    const bool hi_cut = clipped_hi[i] && sigma_distance(g.hi, p) > tol.point_match;
    if (lo_cut || hi_cut) {
      out.unresolved.push_back(g);
      continue;
    }
    out.gaps.push_back(classify_gap(g, p, tol));
  }
  return out;
}

std::vector<DispersionRoot> dispersion_roots(double xi, double eta, const LatticeParams& p,
                                             const FrequencyWindow& w, double resolution,
                                             const Tolerances& tol) {
  validate_window(w);
  const double res = resolution > 0.0 ? resolution : default_resolution(p);
  const double cx = std::cos(xi), ce = std::cos(eta), cb = std::cos(p.beta);

  auto lhs = [&](double om) {
    const double s1 = std::sin(om * p.a1), c1 = std::cos(om * p.a1);
    const double s2 = std::sin(om * p.a2), c2 = std::cos(om * p.a2);
    const double s3 = std::sin(om * p.a3), c3 = std::cos(om * p.a3);
    return s2 * s3 * (c1 - cx) + s3 * s1 * (c2 - ce) + s1 * s2 * (c3 - cb);
  };

  std::vector<DispersionRoot> roots;
  double prev_x = w.lo, prev_v = lhs(w.lo);
  for (double x = w.lo + res; x < w.hi + res; x += res) {
    const double cur_x = std::min(x, w.hi);
    const double cur_v = lhs(cur_x);
    if (prev_v == 0.0) {
      roots.push_back({prev_x, false});
    } else if (prev_v * cur_v < 0.0) {
      double lo = prev_x, hi = cur_x, vlo = prev_v;
      while (hi - lo > tol.edge_bisect) {
        const double mid = 0.5 * (lo + hi);
        const double vm = lhs(mid);
        if (vm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((vlo < 0.0) == (vm < 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      roots.push_back({0.5 * (lo + hi), false});
    }
    if (cur_x >= w.hi) {
      if (cur_v == 0.0) roots.push_back({w.hi, false});
      break;
    }
    prev_x = cur_x;
    prev_v = cur_v;
  }

  // Common zeros of all three sine prefactors make the relation vanish
  // identically; report them flagged.
  for (long n = std::max(1L, static_cast<long>(std::floor(w.lo * p.a1 / kPi))); ; ++n) {
    const double om = kPi * static_cast<double>(n) / p.a1;
    if (om > w.hi + 1e-12) break;
    if (om < w.lo - 1e-12) continue;
    if (std::fabs(std::sin(om * p.a2)) < tol.sin_singular &&
        std::fabs(std::sin(om * p.a3)) < tol.sin_singular) {
      bool merged = false;
      for (DispersionRoot& r : roots) {
        if (std::fabs(r.omega - om) <= 1e-9) {
          r.degenerate = true;
          merged = true;
          break;
        }
      }
      if (!merged) roots.push_back({om, true});
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const DispersionRoot& a, const DispersionRoot& b) { return a.omega < b.omega; });
  std::vector<DispersionRoot> dedup;
  for (const DispersionRoot& r : roots) {
    if (!dedup.empty() && r.omega - dedup.back().omega <= 1e-9)
      dedup.back().degenerate = dedup.back().degenerate || r.degenerate;
    else
      dedup.push_back(r);
  }
  return dedup;
}

}  // namespace latticeguide
