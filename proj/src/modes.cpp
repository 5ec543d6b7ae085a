#include "latticeguide/modes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "latticeguide/quadrature.hpp"

namespace latticeguide {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// phi - f(xi, eta) = A(eta) - B cos(xi) with B = 1/sin(omega a1). The two
// factors of A^2 - B^2 are
//   P(eta) = A - B = phi - tan(omega a1 / 2) + (cos(omega a2) - cos eta)/sin(omega a2)
//   Q(eta) = A + B = phi + cot(omega a1 / 2) + (cos(omega a2) - cos eta)/sin(omega a2)
// (tan/cot of the half-angle absorb the cancellation near sigma_1 edges).
// Inside a gap both keep a common sign s; with btilde = s / sin(omega a2) the
// magnitudes evaluate cancellation-free as
//   |P|(eta) = |P|min + |btilde| * q(eta),  q = 2 sin^2(eta/2) or 2 cos^2(eta/2)
// so near-edge integrands stay positive instead of losing all digits to
// rounding in pP - b2 cos(eta).
struct Reduced {
  double phi = 0.0;
  double sign = 1.0;   // common sign of P and Q (equals the sign of A)
  double p_min = 0.0;  // min over eta of |P|
  double q_min = 0.0;  // min over eta of |Q|
  double b_abs = 0.0;  // |1 / sin(omega a2)|
  double sB = 0.0;     // sign * B = (|Q| - |P|) / 2, constant in eta
  bool peak_at_zero = true;  // where |P|, |Q| attain their minima
  bool pole = false;         // phi_beta pole: F = 1 exactly

  double qfun(double eta) const {
    const double t = peak_at_zero ? std::sin(0.5 * eta) : std::cos(0.5 * eta);
    return 2.0 * t * t;
  }
  double pmag(double eta) const { return p_min + b_abs * qfun(eta); }
  double qmag(double eta) const { return q_min + b_abs * qfun(eta); }
};

Reduced reduce(double omega, const LatticeParams& p, const Tolerances& tol) {
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  if (std::fabs(s1) < tol.sin_singular || std::fabs(s2) < tol.sin_singular)
    throw SpectralError(Errc::SingularFrequency, "sin(omega a1) or sin(omega a2) vanishes");

  Reduced r;
  const PhiValue ph = phi_beta(omega, p, tol);
  if (ph.pole) {
    r.pole = true;
    return r;
  }
  r.phi = ph.value;

  const double h1 = 0.5 * omega * p.a1;
  const double t1 = std::sin(h1) / std::cos(h1);   // tan(omega a1 / 2)
  const double k1 = std::cos(h1) / std::sin(h1);   // cot(omega a1 / 2)
  const double q2 = std::cos(omega * p.a2) / s2;
  const double b2 = 1.0 / s2;
  const double pP = r.phi - t1 + q2;
  const double pQ = r.phi + k1 + q2;

  const double e[4] = {pP - b2, pP + b2, pQ - b2, pQ + b2};
  const bool all_pos = e[0] > 0 && e[1] > 0 && e[2] > 0 && e[3] > 0;
  const bool all_neg = e[0] < 0 && e[1] < 0 && e[2] < 0 && e[3] < 0;
  if (!all_pos && !all_neg) {
    std::ostringstream msg;
    msg << "phi - f changes sign at omega = " << omega << "; not inside a gap";
    throw SpectralError(Errc::InsideSpectrum, msg.str());
  }
  r.sign = all_pos ? 1.0 : -1.0;
  const double btilde = r.sign * b2;
  r.b_abs = std::fabs(btilde);
  r.p_min = r.sign * pP - r.b_abs;
  r.q_min = r.sign * pQ - r.b_abs;
  r.peak_at_zero = btilde > 0.0;
  r.sB = 0.5 * r.sign * (pQ - pP);  // = sign * B with B = 1/sin(omega a1)
  return r;
}

}  // namespace

double F_beta(double omega, const LatticeParams& p, const Tolerances& tol) {
  const Reduced r = reduce(omega, p, tol);
  if (r.pole) return 1.0;  // limit of 1/(1 - f/phi) as |phi| -> inf

  quadrature::Options qopt;
  qopt.rel_tol = tol.quad_rel;
  const double J = quadrature::integrate(
      [&](double eta) { return 1.0 / std::sqrt(r.pmag(eta) * r.qmag(eta)); }, 0.0, kPi, qopt);
  const double mean = r.phi * r.sign * J / kPi;
  return 1.0 / mean;
}

double F_beta_2d(double omega, const LatticeParams& p, double rel_tol, const Tolerances& tol) {
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  if (std::fabs(s1) < tol.sin_singular || std::fabs(s2) < tol.sin_singular)
    throw SpectralError(Errc::SingularFrequency, "sin(omega a1) or sin(omega a2) vanishes");
  const PhiValue ph = phi_beta(omega, p, tol);
  if (ph.pole)
    throw SpectralError(Errc::QuadratureFailure,
                        "phi_beta pole: outside the 2D oracle's contract");
  const double phi = ph.value;
  const double c1 = std::cos(omega * p.a1), c2 = std::cos(omega * p.a2);

  // Defensive sign re-check of the denominator over the cell corners/extrema.
  {
    const double e1a = (1.0 - c1) / s1, e1b = (-1.0 - c1) / s1;
    const double e2a = (1.0 - c2) / s2, e2b = (-1.0 - c2) / s2;
    const double fmin = std::min(e1a, e1b) + std::min(e2a, e2b);
    const double fmax = std::max(e1a, e1b) + std::max(e2a, e2b);
    if (phi >= fmin && phi <= fmax)
      throw SpectralError(Errc::InsideSpectrum, "phi - f changes sign over the cell");
  }

  quadrature::Options inner;
  inner.rel_tol = rel_tol * 0.1;
  inner.abs_tol = 1e-15;
  quadrature::Options outer;
  outer.rel_tol = rel_tol;
  outer.abs_tol = 1e-15;

  const double integral = quadrature::integrate(
      [&](double eta) {
        const double fe = (std::cos(eta) - c2) / s2;
        return quadrature::integrate(
            [&](double xi) {
              const double f = (std::cos(xi) - c1) / s1 + fe;
              return phi / (phi - f);
            },
            0.0, kTwoPi, inner);
      },
      0.0, kTwoPi, outer);
  return (4.0 * kPi * kPi) / integral;
}

std::vector<GuidedMode> find_guided_modes(const LatticeParams& p, const SpectralGap& gap,
                                          const ModeSearchOptions& opts, const Tolerances& tol) {
  std::vector<GuidedMode> modes;
  if (p.mu >= 1.0) return modes;  // F >= 0 in gaps, so mu = 1 - F < 1

  if (!verify_gap({gap.omega_b, gap.omega_t}, p, 20, tol))
    throw SpectralError(Errc::GapUnverified, "membership probes hit the essential spectrum");

  const double width = gap.omega_t - gap.omega_b;
  auto h = [&](double om) { return p.mu - (1.0 - F_beta(om, p, tol)); };

  // Search segments delimited by the W(beta) points (F = 1 there, so h stays
  // continuous across them and positive at them).
  std::vector<double> bounds{gap.omega_b};
  for (double w : gap.w_inside) bounds.push_back(w);
  bounds.push_back(gap.omega_t);

  struct Root {
    double omega;
    Interval bracket;
  };
  std::vector<Root> roots;

  for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
    const double lo_edge = bounds[s], hi_edge = bounds[s + 1];

    // Sample set: uniform core with the delta margin, plus log-spaced probes
    // towards the segment ends; the mu-roots approach gap edges like
    // exp(-c/(1-mu)), which a uniform grid cannot reach.
    const double delta = opts.edge_margin_rel * width;
    std::vector<double> xs;
    xs.reserve(opts.grid_points + 48);
    const double span = hi_edge - lo_edge;
    if (span > 4.0 * delta) {
      for (int j = 0; j <= opts.grid_points; ++j)
        xs.push_back(lo_edge + delta + (span - 2.0 * delta) * j / opts.grid_points);
    }
    for (double t = 6.5; t <= 12.0; t += 0.5) {
      const double d = span * std::pow(10.0, -t);
      xs.push_back(lo_edge + d);
      xs.push_back(hi_edge - d);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Gap edges are only known to the edge-refinement tolerance, so probes
    // hugging them can land just outside the true gap; treat those as missing.
    std::vector<double> hv(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      try {
        hv[i] = h(xs[i]);
      } catch (const SpectralError& e) {
        if (e.code() != Errc::InsideSpectrum && e.code() != Errc::SingularFrequency) throw;
        hv[i] = std::numeric_limits<double>::quiet_NaN();
      }
    }

    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      if (std::isnan(hv[i]) || std::isnan(hv[i + 1])) continue;
      if (hv[i] == 0.0) {
        roots.push_back({xs[i], {xs[i], xs[i]}});
        continue;
      }
      if (hv[i] * hv[i + 1] >= 0.0) continue;
      double lo = xs[i], hi = xs[i + 1];
      double vlo = hv[i];
      double best = lo, best_h = std::fabs(vlo);
      // Bisection to the omega tolerance, continued to the certificate
      // tolerance while the bracket remains splittable.
      while (hi - lo > tol.root_bisect ||
             (best_h > opts.certificate_tol &&
              hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double vm = h(mid);
        if (std::fabs(vm) < best_h) {
          best_h = std::fabs(vm);
          best = mid;
        }
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
      if (best_h <= opts.certificate_tol) roots.push_back({best, {xs[i], xs[i + 1]}});
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const Root& a, const Root& b) { return a.omega < b.omega; });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (i + 1 < roots.size() && roots[i + 1].omega - roots[i].omega <= tol.root_bisect)
      continue;  // duplicate of the same root from adjacent brackets
    GuidedMode m;
    m.omega = roots[i].omega;
    m.lambda = m.omega * m.omega;
    m.F_value = F_beta(m.omega, p, tol);
    m.gap_index = opts.gap_index;
    m.mu = p.mu;
    m.beta = p.beta;
    m.bracket = roots[i].bracket;
    modes.push_back(m);
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const bool close_prev = i > 0 && modes[i].omega - modes[i - 1].omega < 1e-6;
    const bool close_next = i + 1 < modes.size() && modes[i + 1].omega - modes[i].omega < 1e-6;
    modes[i].near_coincident = close_prev || close_next;
  }
  return modes;
}

LatticeField LatticeField::zeros(int K) {
  LatticeField f;
  f.K = K;
  f.values.assign(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1), 0.0);
  return f;
}

double LatticeField::at(int k, int l) const {
  return values[static_cast<std::size_t>(k + K) * side() + (l + K)];
}

double& LatticeField::at(int k, int l) {
  return values[static_cast<std::size_t>(k + K) * side() + (l + K)];
}

LatticeField mode_profile(const GuidedMode& mode, const LatticeParams& p, int K,
                          const Tolerances& tol) {
  if (K < 1) throw SpectralError(Errc::NonPositiveParameter, "profile needs K >= 1");
  const double omega = mode.omega;
  const Reduced r = reduce(omega, p, tol);
  if (r.pole)
    throw SpectralError(Errc::SingularFrequency, "mode sits on a phi_beta pole");

  // The xi-integral of cos(k xi) / (A - B cos xi) has the closed form
  // sign(A) * 2 pi * rho^k / sqrt(A^2 - B^2) with rho = sign(A) B / (|A| + D),
  // leaving one adaptive quadrature in eta per coefficient.
  quadrature::Options qopt;
  qopt.rel_tol = tol.quad_rel;
  qopt.abs_tol = 1e-14;

  const double amp = (1.0 - p.mu) * r.phi * r.sign / kTwoPi;
  LatticeField field = LatticeField::zeros(K);

  double u00 = 0.0;
  for (int k = 0; k <= K; ++k) {
    for (int l = 0; l <= K; ++l) {
      const std::complex<double> I = quadrature::integrate(
          [&](double eta) -> std::complex<double> {
            const double pm = r.pmag(eta), qm = r.qmag(eta);
            const double D = std::sqrt(pm * qm);
            const double rho = r.sB / (0.5 * (pm + qm) + D);
            const double radial = std::pow(rho, k) / D;
            return radial * std::exp(std::complex<double>(0.0, -l * eta));
          },
          0.0, kTwoPi, qopt);
      if (std::fabs(I.imag() * amp) > 1e-10) {
        std::ostringstream msg;
        msg << "imaginary part " << I.imag() * amp << " of u(" << k << "," << l
            << ") exceeds 1e-10";
        throw SpectralError(Errc::QuadratureFailure, msg.str());
      }
      const double v = amp * I.real();
      if (k == 0 && l == 0) u00 = v;
      for (int sk : {k, -k})
        for (int sl : {l, -l}) field.at(sk, sl) = v;
    }
  }

  // Self-consistency at (k,l) = (0,0): the inverse transform reproduces the
  // eigenvalue criterion, so u00 must equal 1 at a converged root.
  if (std::fabs(u00 - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "u(0,0) = " << u00 << " deviates from 1 beyond 1e-8";
    throw SpectralError(Errc::NormalizationInconsistency, msg.str());
  }
  for (double& v : field.values) v /= u00;
  return field;
}

double decay_rate(const LatticeField& field) {
  if (field.K < 4)
    throw SpectralError(Errc::NonPositiveParameter, "decay fit needs K >= 4");
  std::vector<std::pair<double, double>> pts;  // (ring, log max)
  bool any_above_floor = false;
  for (int ring = 2; ring <= field.K; ++ring) {
    double mx = 0.0;
    for (int k = -field.K; k <= field.K; ++k) {
      const int l_abs = ring - std::abs(k);
      if (l_abs < 0 || l_abs > field.K) continue;
      mx = std::max(mx, std::fabs(field.at(k, l_abs)));
      mx = std::max(mx, std::fabs(field.at(k, -l_abs)));
    }
    if (mx >= 1e-14) any_above_floor = true;
    if (mx > 0.0) pts.emplace_back(ring, std::log(mx));
  }
  if (!any_above_floor || pts.size() < 2)
    throw SpectralError(Errc::DegenerateField, "all ring maxima below 1e-14");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(slope);
}

}  // namespace latticeguide
