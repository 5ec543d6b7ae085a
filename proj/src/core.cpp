#include "latticeguide/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace latticeguide {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_positive_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw SpectralError(Errc::NonFinite, std::string(name) + " is not finite");
  if (v <= 0.0)
    throw SpectralError(Errc::NonPositiveParameter, std::string(name) + " must be > 0");
}

// Deduplicate a sorted list of omega values (absolute tolerance).
void dedupe_sorted(std::vector<double>& v, double tol) {
  std::vector<double> out;
  for (double x : v) {
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  }
  v.swap(out);
}

}  // namespace

LatticeParams normalize_params(const LatticeParams& raw) {
  check_positive_finite(raw.a1, "a1");
  check_positive_finite(raw.a2, "a2");
  check_positive_finite(raw.a3, "a3");
  check_positive_finite(raw.mu, "mu");
  if (!std::isfinite(raw.beta)) throw SpectralError(Errc::NonFinite, "beta is not finite");

  // beta <- |((beta + pi) mod 2 pi) - pi| folds by 2 pi periodicity and evenness.
  double m = std::fmod(raw.beta + kPi, kTwoPi);
  if (m < 0.0) m += kTwoPi;
  double folded = std::fabs(m - kPi);

  LatticeParams p = raw;
  p.beta = folded;
  return p;
}

void validate_window(const FrequencyWindow& w) {
  if (!std::isfinite(w.lo) || !std::isfinite(w.hi))
    throw SpectralError(Errc::NonFinite, "window bounds not finite");
  if (w.lo < 0.0 || !(w.lo < w.hi))
    throw SpectralError(Errc::NonPositiveParameter, "window requires 0 <= lo < hi");
}

PhiValue phi_beta(double omega, const LatticeParams& p, const Tolerances& tol) {
  const double s = std::sin(omega * p.a3);
  const double num = std::cos(omega * p.a3) - std::cos(p.beta);
  if (std::fabs(s) < tol.sin_singular) {
    if (std::fabs(num) < tol.removable) return {0.0, false};  // removable, limit value 0
    return {0.0, true};
  }
  return {num / s, false};
}

double f_value(double xi, double eta, double omega, const LatticeParams& p,
               const Tolerances& tol) {
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  if (std::fabs(s1) < tol.sin_singular || std::fabs(s2) < tol.sin_singular)
    throw SpectralError(Errc::SingularFrequency, "sin(omega a1) or sin(omega a2) vanishes");
  return (std::cos(xi) - std::cos(omega * p.a1)) / s1 +
         (std::cos(eta) - std::cos(omega * p.a2)) / s2;
}

Interval f_range(double omega, const LatticeParams& p, const Tolerances& tol) {
  Interval r{0.0, 0.0};
  for (double a : {p.a1, p.a2}) {
    const double s = std::sin(omega * a);
    if (std::fabs(s) < tol.sin_singular)
      throw SpectralError(Errc::SingularFrequency, "sin(omega a_i) vanishes");
    const double c = std::cos(omega * a);
    const double v1 = (1.0 - c) / s;
    const double v2 = (-1.0 - c) / s;
    r.lo += std::min(v1, v2);
    r.hi += std::max(v1, v2);
  }
  return r;
}

double g_beta(double omega, const LatticeParams& p, const Tolerances& tol) {
  const double s3 = std::sin(omega * p.a3);
  if (std::fabs(s3) < tol.sin_singular)
    throw SpectralError(Errc::SingularFrequency, "sin(omega a3) vanishes");
  double sum = (std::cos(omega * p.a3) - std::cos(p.beta)) / s3;
  for (double a : {p.a1, p.a2}) {
    const double s = std::sin(omega * a);
    if (std::fabs(s) < tol.sin_singular)
      throw SpectralError(Errc::SingularFrequency, "sin(omega a_i) vanishes");
    sum += std::cos(omega * a) / s;
  }
  return sum;
}

SigmaPoints sigma_points(const LatticeParams& p, const FrequencyWindow& w) {
  validate_window(w);
  SigmaPoints out;
  const double eps = 1e-12;

  auto collect_multiples = [&](double a, std::vector<double>& dst) {
    for (long n = std::max(1L, static_cast<long>(std::floor(w.lo * a / kPi))); ; ++n) {
      const double om = kPi * static_cast<double>(n) / a;
      if (om > w.hi + eps) break;
      if (om >= w.lo - eps && om > eps) dst.push_back(om);
    }
  };
  collect_multiples(p.a1, out.s1);
  collect_multiples(p.a2, out.s2);

  for (double sgn : {1.0, -1.0}) {
    const long n_lo = static_cast<long>(std::floor((w.lo * p.a3 - sgn * p.beta) / kTwoPi)) - 1;
    const long n_hi = static_cast<long>(std::ceil((w.hi * p.a3 + sgn * p.beta) / kTwoPi)) + 1;
    for (long n = n_lo; n <= n_hi; ++n) {
      const double om = std::fabs(sgn * p.beta + kTwoPi * static_cast<double>(n)) / p.a3;
      if (om >= w.lo - eps && om <= w.hi + eps && om > eps) out.s3.push_back(om);
    }
  }

  for (auto* v : {&out.s1, &out.s2, &out.s3}) {
    std::sort(v->begin(), v->end());
    dedupe_sorted(*v, eps);
  }
  return out;
}

std::vector<double> w_points(const LatticeParams& p, const FrequencyWindow& w,
                             const Tolerances& tol) {
  validate_window(w);
  std::vector<double> out;
  // Candidates are the zeros of sin(omega a3); keep those phi_beta reports as
  // non-removable poles, so the list stays consistent with phi_beta's rule.
  for (long n = std::max(1L, static_cast<long>(std::floor(w.lo * p.a3 / kPi))); ; ++n) {
    const double om = kPi * static_cast<double>(n) / p.a3;
    if (om > w.hi + 1e-12) break;
    if (om < w.lo - 1e-12) continue;
    if (phi_beta(om, p, tol).pole) out.push_back(om);
  }
  return out;
}

}  // namespace latticeguide
