#ifndef LATTICEGUIDE_ORACLE_HPP
#define LATTICEGUIDE_ORACLE_HPP

#include <Eigen/SparseCore>
#include <vector>

#include "latticeguide/core.hpp"
#include "latticeguide/modes.hpp"
#include "latticeguide/spectrum.hpp"

namespace latticeguide {

// Finite section of the vertex difference equations on [-K, K]^2 with zero
// values outside the box. 5-point stencil: 1/sin(omega a1) east/west,
// 1/sin(omega a2) north/south, -2 g_beta(omega) on the diagonal, and the
// defect correction -2 (mu - 1) phi_beta(omega) added at the (0,0) node.
struct TruncatedSystem {
  int K = 0;
  double omega = 0.0;
  Eigen::SparseMatrix<double> matrix;  // (2K+1)^2 square, symmetric

  int size() const { return (2 * K + 1) * (2 * K + 1); }
  int index(int k, int l) const { return (k + K) * (2 * K + 1) + (l + K); }
};

struct OracleOptions {
  long dense_cap = 251L * 251L;  // SizeLimit above this many unknowns
  double kernel_tol = 1e-3;      // absolute near-kernel threshold on refined minima
  int max_power_iters = 64;
};

TruncatedSystem assemble_truncated_system(double omega, const LatticeParams& p, int K,
                                          const Tolerances& tol = {});

// Maximum absolute residual of the difference equations over the interior
// nodes |k|, |l| <= K-1, with the defect-corrected equation at (0,0).
double fd_residual(const LatticeField& field, double omega, const LatticeParams& p,
                   const Tolerances& tol = {});

// Smallest singular value of the truncated system: direct sparse
// factorization plus deterministic inverse iteration; the reported value is
// ||A v|| / ||v|| at the converged iterate.
double smallest_singular_indicator(double omega, const LatticeParams& p, int K,
                                   const OracleOptions& opts = {}, const Tolerances& tol = {});

// Near-kernel vector at omega, normalized to u(0,0) = 1.
LatticeField oracle_mode_field(double omega, const LatticeParams& p, int K,
                               const OracleOptions& opts = {}, const Tolerances& tol = {});

// Grid scan of the indicator over the gap interior; strict local minima are
// refined by golden-section search and filtered against the near-kernel
// threshold and 10x the smallest refined minimum.
std::vector<double> oracle_eigenfrequencies(const LatticeParams& p, const SpectralGap& gap,
                                            int K, int grid, const OracleOptions& opts = {},
                                            const Tolerances& tol = {});

}  // namespace latticeguide

#endif  // LATTICEGUIDE_ORACLE_HPP
