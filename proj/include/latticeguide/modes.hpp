#ifndef LATTICEGUIDE_MODES_HPP
#define LATTICEGUIDE_MODES_HPP

#include <optional>
#include <vector>

#include "latticeguide/core.hpp"
#include "latticeguide/spectrum.hpp"

namespace latticeguide {

// One guided-mode eigenvalue lambda = omega^2 inside a gap, with the value of
// the eigenvalue criterion F_beta at the root and solver diagnostics.
struct GuidedMode {
  double omega = 0.0;
  double lambda = 0.0;
  double F_value = 0.0;
  int gap_index = -1;
  double mu = 0.0;
  double beta = 0.0;
  Interval bracket;                    // sign-change bracket handed to the polisher
  std::optional<double> residual;      // filled by lattice-oracle verification
  std::optional<double> decay;         // filled when a profile is fitted
  bool near_coincident = false;        // another root within 1e-6
};

// Truncated array of vertex values u_{k,l} on [-K, K]^2, u_{0,0} = 1.
struct LatticeField {
  int K = 0;
  std::vector<double> values;  // row-major over (k + K) * (2K + 1) + (l + K)

  static LatticeField zeros(int K);
  double at(int k, int l) const;
  double& at(int k, int l);
  int side() const { return 2 * K + 1; }
};

// F_beta(omega): reciprocal of the mean of phi/(phi - f) over the Bloch cell,
// evaluated through the closed-form xi-integral and one adaptive quadrature in
// eta. Exactly 1 at the poles of phi_beta. Requires omega inside a gap.
double F_beta(double omega, const LatticeParams& p, const Tolerances& tol = {});

// Independent oracle: direct two-dimensional adaptive quadrature of the same
// integrand. Poles of phi_beta are outside its contract (the 1D path owns
// them).
double F_beta_2d(double omega, const LatticeParams& p, double rel_tol = 1e-10,
                 const Tolerances& tol = {});

struct ModeSearchOptions {
  int grid_points = 1000;          // uniform samples per search segment
  double edge_margin_rel = 1e-6;   // delta as a fraction of the gap width
  int gap_index = -1;              // recorded on the returned modes
  double certificate_tol = 1e-9;   // required |mu - (1 - F)| at the root
};

// Solves mu = 1 - F_beta(omega) inside a verified gap. Empty for mu >= 1.
// Type-I gaps are searched separately on both sides of their W(beta) point.
std::vector<GuidedMode> find_guided_modes(const LatticeParams& p, const SpectralGap& gap,
                                          const ModeSearchOptions& opts = {},
                                          const Tolerances& tol = {});

// Transverse profile u_{k,l} via the inverse discrete Fourier transform of
// phi/(phi - f); u_{0,0} normalized to 1.
LatticeField mode_profile(const GuidedMode& mode, const LatticeParams& p, int K,
                          const Tolerances& tol = {});

// Least-squares decay rate exp(slope) of log max-ring amplitude versus the
// ring index |k| + |l| over rings 2..K.
double decay_rate(const LatticeField& field);

}  // namespace latticeguide

#endif  // LATTICEGUIDE_MODES_HPP
