#include "latticeguide/oracle.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace latticeguide {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Shift a sample off the singular sets pi Z / a_i (deterministically).
double nudge_off_singular(double omega, const LatticeParams& p, const Tolerances& tol) {
  for (int guard = 0; guard < 4; ++guard) {
    const bool singular = std::fabs(std::sin(omega * p.a1)) < tol.sin_singular ||
                          std::fabs(std::sin(omega * p.a2)) < tol.sin_singular ||
                          std::fabs(std::sin(omega * p.a3)) < tol.sin_singular;
    if (!singular) return omega;
    omega += 1e-9;
  }
  return omega;
}

struct Factorized {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  bool use_lu = false;
  bool singular = false;

  explicit Factorized(const Eigen::SparseMatrix<double>& A) {
    ldlt.compute(A);
    if (ldlt.info() == Eigen::Success) return;
    use_lu = true;
    lu.compute(A);
    if (lu.info() != Eigen::Success) singular = true;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return use_lu ? lu.solve(b).eval() : ldlt.solve(b).eval();
  }
};

// Deterministic inverse iteration; returns the normalized near-kernel iterate.
Eigen::VectorXd inverse_iterate(const TruncatedSystem& sys, const Factorized& fac,
                                int max_iters) {
  const int n = sys.size();
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * std::sin(0.7 * i);
  x.normalize();
  double nu_prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd y = fac.solve(x);
    const double nu = y.norm();
    if (!std::isfinite(nu) || nu == 0.0) break;
    x = y / nu;
    if (std::fabs(nu - nu_prev) <= 1e-10 * nu) break;
    nu_prev = nu;
  }
  return x;
}

double indicator_of_system(const TruncatedSystem& sys, const OracleOptions& opts) {
  Factorized fac(sys.matrix);
  if (fac.singular) return 0.0;
  const Eigen::VectorXd v = inverse_iterate(sys, fac, opts.max_power_iters);
  return (sys.matrix * v).norm();
}

}  // namespace

TruncatedSystem assemble_truncated_system(double omega, const LatticeParams& p, int K,
                                          const Tolerances& tol) {
  if (K < 1) throw SpectralError(Errc::NonPositiveParameter, "K must be >= 1");
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  const double g = g_beta(omega, p, tol);  // throws SingularFrequency as needed
  const double phi = phi_beta(omega, p, tol).value;

  TruncatedSystem sys;
  sys.K = K;
  sys.omega = omega;
  const int n = sys.size();
  const int side = 2 * K + 1;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * 5);
  const double w_e = 1.0 / s1, w_n = 1.0 / s2;
  for (int k = -K; k <= K; ++k) {
    for (int l = -K; l <= K; ++l) {
      const int i = sys.index(k, l);
      double diag = -2.0 * g;
      if (k == 0 && l == 0) diag -= 2.0 * (p.mu - 1.0) * phi;
      trip.emplace_back(i, i, diag);
      if (k + 1 <= K) trip.emplace_back(i, i + side, w_e);
      if (k - 1 >= -K) trip.emplace_back(i, i - side, w_e);
      if (l + 1 <= K) trip.emplace_back(i, i + 1, w_n);
      if (l - 1 >= -K) trip.emplace_back(i, i - 1, w_n);
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

double fd_residual(const LatticeField& field, double omega, const LatticeParams& p,
                   const Tolerances& tol) {
  if (field.K < 2) throw SpectralError(Errc::NonPositiveParameter, "field needs K >= 2");
  if (std::fabs(field.at(0, 0) - 1.0) > 1e-8)
    throw SpectralError(Errc::NormalizationInconsistency, "field violates u(0,0) = 1");
  const double s1 = std::sin(omega * p.a1);
  const double s2 = std::sin(omega * p.a2);
  const double g = g_beta(omega, p, tol);
  const double phi = phi_beta(omega, p, tol).value;

  double worst = 0.0;
  for (int k = -(field.K - 1); k <= field.K - 1; ++k) {
    for (int l = -(field.K - 1); l <= field.K - 1; ++l) {
      double r = (field.at(k + 1, l) + field.at(k - 1, l)) / s1 +
                 (field.at(k, l + 1) + field.at(k, l - 1)) / s2 -
                 2.0 * g * field.at(k, l);
      if (k == 0 && l == 0) r -= 2.0 * (p.mu - 1.0) * phi * field.at(0, 0);
      worst = std::max(worst, std::fabs(r));
    }
  }
  return worst;
}

double smallest_singular_indicator(double omega, const LatticeParams& p, int K,
                                   const OracleOptions& opts, const Tolerances& tol) {
  const long n = (2L * K + 1) * (2L * K + 1);
  if (n > opts.dense_cap) {
    std::ostringstream msg;
    msg << "(2K+1)^2 = " << n << " exceeds the solver cap " << opts.dense_cap;
    throw SpectralError(Errc::SizeLimit, msg.str());
  }
  const TruncatedSystem sys = assemble_truncated_system(omega, p, K, tol);
  return indicator_of_system(sys, opts);
}

LatticeField oracle_mode_field(double omega, const LatticeParams& p, int K,
                               const OracleOptions& opts, const Tolerances& tol) {
  const long n = (2L * K + 1) * (2L * K + 1);
  if (n > opts.dense_cap)
    throw SpectralError(Errc::SizeLimit, "system exceeds the solver cap");
  const TruncatedSystem sys = assemble_truncated_system(omega, p, K, tol);
  Factorized fac(sys.matrix);
  if (fac.singular)
    throw SpectralError(Errc::DegenerateField, "factorization failed (exactly singular)");
  const Eigen::VectorXd v = inverse_iterate(sys, fac, opts.max_power_iters);
  const double center = v[sys.index(0, 0)];
  if (std::fabs(center) < 1e-8 * v.norm())
    throw SpectralError(Errc::NormalizationInconsistency,
                        "near-kernel vector has no weight at the defect node");
  LatticeField f = LatticeField::zeros(K);
  for (int k = -K; k <= K; ++k)
    for (int l = -K; l <= K; ++l) f.at(k, l) = v[sys.index(k, l)] / center;
  return f;
}

std::vector<double> oracle_eigenfrequencies(const LatticeParams& p, const SpectralGap& gap,
                                            int K, int grid, const OracleOptions& opts,
                                            const Tolerances& tol) {
  if (grid < 100) throw SpectralError(Errc::NonPositiveParameter, "grid must be >= 100");
  if (!verify_gap({gap.omega_b, gap.omega_t}, p, 20, tol))
    throw SpectralError(Errc::GapUnverified, "membership probes hit the essential spectrum");

  const double width = gap.omega_t - gap.omega_b;
  const double margin = 1e-6 * width;
  std::vector<double> xs;
  xs.reserve(grid + 24);
  for (int i = 0; i < grid; ++i)
    xs.push_back(gap.omega_b + margin + (width - 2.0 * margin) * i / (grid - 1.0));
  // Defect levels can hug the gap edges; cluster extra samples there so their
  // dips appear as interior minima of the scan.
  for (double t = 2.0; t <= 6.5; t += 0.5) {
    const double d = width * std::pow(10.0, -t);
    xs.push_back(gap.omega_b + d);
    xs.push_back(gap.omega_t - d);
  }
  for (double& x : xs) x = nudge_off_singular(x, p, tol);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> vals(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    vals[i] = smallest_singular_indicator(xs[i], p, K, opts, tol);

  // Strict interior local minima, each refined by golden-section search.
  std::vector<double> refined_om, refined_val;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (!(vals[i] < vals[i - 1] && vals[i] < vals[i + 1])) continue;
    double a = xs[i - 1], b = xs[i + 1];
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = smallest_singular_indicator(nudge_off_singular(x1, p, tol), p, K, opts, tol);
    double f2 = smallest_singular_indicator(nudge_off_singular(x2, p, tol), p, K, opts, tol);
    while (b - a > 1e-6) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kGolden * (b - a);
        f1 = smallest_singular_indicator(nudge_off_singular(x1, p, tol), p, K, opts, tol);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kGolden * (b - a);
        f2 = smallest_singular_indicator(nudge_off_singular(x2, p, tol), p, K, opts, tol);
      }
    }
    refined_om.push_back(0.5 * (a + b));
    refined_val.push_back(std::min(f1, f2));
  }
  if (refined_om.empty()) return {};

  const double global_min = *std::min_element(refined_val.begin(), refined_val.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < refined_om.size(); ++i) {
    if (refined_val[i] <= opts.kernel_tol && refined_val[i] <= 10.0 * global_min)
      out.push_back(refined_om[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace latticeguide
