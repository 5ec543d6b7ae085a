#ifndef LATTICEGUIDE_CORE_HPP
#define LATTICEGUIDE_CORE_HPP

#include <vector>

#include "latticeguide/errors.hpp"

namespace latticeguide {

// Numerical knobs shared across the library. The defaults separate true
// singularities from near-singular evaluation, which the quadrature handles.
struct Tolerances {
  double sin_singular = 1e-12;  // |sin(omega a_i)| below this counts as singular
  double removable = 1e-9;      // |cos(omega a3) - cos(beta)| below this: removable zero
  double point_match = 1e-9;    // omega proximity to a listed point set
  double sigma_match = 1e-8;    // gap-edge distance test against sigma_1 u sigma_2
  double edge_bisect = 1e-10;   // band/gap edge refinement width in omega
  double root_bisect = 1e-12;   // guided-mode root polish width in omega
  double quad_rel = 1e-10;      // adaptive quadrature relative tolerance
};

// Periods of the grating, the defect weight and the quasi-momentum along the
// invariant direction. Spectra depend on beta only through cos(beta), so beta
// is stored folded into [0, pi].
struct LatticeParams {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;
  double mu = 1.0;
  double beta = 0.0;
};

// Validates positivity/finiteness and folds beta into [0, pi].
// Throws NonPositiveParameter / NonFinite.
LatticeParams normalize_params(const LatticeParams& raw);

struct FrequencyWindow {
  double lo = 0.0;
  double hi = 0.0;
};

// Throws NonPositiveParameter unless 0 <= lo < hi and both finite.
void validate_window(const FrequencyWindow& w);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Value of the vertical-edge symbol phi_beta(omega). `pole` marks the
// non-removable zeros of sin(omega a3); removable zeros carry the continuous
// extension value 0.
struct PhiValue {
  double value = 0.0;
  bool pole = false;
};

// phi_beta(omega) = (cos(omega a3) - cos(beta)) / sin(omega a3).
PhiValue phi_beta(double omega, const LatticeParams& p, const Tolerances& tol = {});

// f(xi, eta, omega) = (cos xi - cos(omega a1))/sin(omega a1)
//                   + (cos eta - cos(omega a2))/sin(omega a2).
// Throws SingularFrequency when sin(omega a1) or sin(omega a2) vanishes.
double f_value(double xi, double eta, double omega, const LatticeParams& p,
               const Tolerances& tol = {});

// Range of f(., ., omega) over (xi, eta) in [0, 2pi]^2. Always contains 0.
Interval f_range(double omega, const LatticeParams& p, const Tolerances& tol = {});

// g_beta(omega) = cot(omega a1) + cot(omega a2) + phi_beta(omega).
// Throws SingularFrequency when any sin(omega a_i) vanishes.
double g_beta(double omega, const LatticeParams& p, const Tolerances& tol = {});

// The omega values of sigma_1, sigma_2 (pi n / a_i) and sigma_3
// (|+-beta + 2 pi n| / a3) inside the window; each list sorted, deduplicated.
struct SigmaPoints {
  std::vector<double> s1;
  std::vector<double> s2;
  std::vector<double> s3;
};

SigmaPoints sigma_points(const LatticeParams& p, const FrequencyWindow& w);

// The non-removable poles of phi_beta in the window: {pi n / a3, n >= 1} for
// beta not in {0, pi}; the odd (beta = 0) or even (beta = pi) multiples of
// pi/a3 otherwise, starting from the smallest positive one.
std::vector<double> w_points(const LatticeParams& p, const FrequencyWindow& w,
                             const Tolerances& tol = {});

}  // namespace latticeguide

#endif  // LATTICEGUIDE_CORE_HPP
