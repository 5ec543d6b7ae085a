#ifndef LATTICEGUIDE_SPECTRUM_HPP
#define LATTICEGUIDE_SPECTRUM_HPP

#include <vector>

#include "latticeguide/core.hpp"

namespace latticeguide {

enum class GapType { TypeI, TypeII, TypeIII };

const char* gap_type_name(GapType t);

// A spectral gap (omega_b, omega_t) with its trichotomy classification:
//   TypeI   : neither edge in sigma_1 u sigma_2, exactly one W(beta) point inside
//   TypeII  : lower edge in sigma_1 u sigma_2, no W point inside
//   TypeIII : upper edge in sigma_1 u sigma_2, no W point inside
struct SpectralGap {
  double omega_b = 0.0;
  double omega_t = 0.0;
  GapType type = GapType::TypeI;
  std::vector<double> w_inside;
  bool edge_b_sigma = false;
  bool edge_t_sigma = false;
};

struct BandScan {
  FrequencyWindow window;
  std::vector<Interval> bands;
  std::vector<SpectralGap> gaps;
  std::vector<double> embedded_points;  // isolated sigma points splitting gaps
  std::vector<Interval> unresolved;     // non-member regions clipped by the window
  double resolution = 0.0;
};

// lambda = omega^2 in the essential spectrum? True on sigma_1 u sigma_2 u
// sigma_3 (point proximity) and wherever phi_beta(omega) lies in the range of
// f(., ., omega); a non-removable pole of phi_beta outside the sigma sets is
// not in the spectrum. omega = 0 is in the spectrum iff beta = 0.
bool in_essential_spectrum(double omega, const LatticeParams& p, const Tolerances& tol = {});

// Grid scan of the window with bisection refinement of every membership
// transition. resolution <= 0 selects the default min(a1,a2,a3) * 1e-3.
BandScan find_gaps(const LatticeParams& p, const FrequencyWindow& w,
                   double resolution = 0.0, const Tolerances& tol = {});

// Classifies a verified gap interval. Throws ClassificationViolation when the
// edge-flag / W-point combination matches none of the three types.
SpectralGap classify_gap(const Interval& gap, const LatticeParams& p,
                         const Tolerances& tol = {});

// Membership probes at `count` interior points; true iff all are outside the
// essential spectrum.
bool verify_gap(const Interval& gap, const LatticeParams& p, int count = 20,
                const Tolerances& tol = {});

struct DispersionRoot {
  double omega = 0.0;
  bool degenerate = false;  // all three sine prefactors vanish at the root
};

// Roots in the window of the three-term dispersion relation at Bloch momenta
// (xi, eta), located by sign-change bracketing and bisection.
std::vector<DispersionRoot> dispersion_roots(double xi, double eta, const LatticeParams& p,
                                             const FrequencyWindow& w, double resolution = 0.0,
                                             const Tolerances& tol = {});

}  // namespace latticeguide

#endif  // LATTICEGUIDE_SPECTRUM_HPP
