#ifndef LATTICEGUIDE_QUADRATURE_HPP
#define LATTICEGUIDE_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "latticeguide/errors.hpp"

namespace latticeguide {

// Adaptive Gauss(7)-Kronrod(15) quadrature, globally adaptive: the segment
// with the largest error estimate is bisected first. Subdivision order and the
// final summation order are deterministic, so results are bitwise reproducible.
namespace quadrature {

// Kronrod-15 abscissae (positive half), Kronrod weights and embedded Gauss-7
// weights; node 0 first.
inline constexpr double kAbscissae[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
inline constexpr double kKronrodW[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kGaussW[8] = {
    0.417959183673469, 0.0, 0.381830050505119, 0.0,
    0.279705391489277, 0.0, 0.129484966168870, 0.0};

template <class T>
inline double norm_of(const T& v) {
  if constexpr (std::is_same_v<T, std::complex<double>>)
    return std::abs(v);
  else
    return std::fabs(v);
}

template <class F>
auto g7k15(const F& f, double a, double b, double& err) -> decltype(f(0.0)) {
  using T = decltype(f(0.0));
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  T y0 = f(mid);
  T gk = kKronrodW[0] * y0;
  T g = kGaussW[0] * y0;
  for (int i = 1; i < 8; ++i) {
    const double dx = h * kAbscissae[i];
    T yi = f(mid + dx) + f(mid - dx);
    gk += kKronrodW[i] * yi;
    g += kGaussW[i] * yi;
  }
  gk *= h;
  g *= h;
  err = norm_of<T>(gk - g);
  return gk;
}

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 40000;
};

// Integrates f over [a, b]; throws QuadratureFailure when the segment budget
// runs out before the requested tolerance is met.
template <class F>
auto integrate(const F& f, double a, double b, const Options& opt = {})
    -> decltype(f(0.0)) {
  using T = decltype(f(0.0));
  struct Seg {
    double a, b, err;
    T val;
  };
  // Max-heap on error; ties broken by left endpoint so the split sequence is
  // fully deterministic.
  auto cmp = [](const Seg& x, const Seg& y) {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;
  };
  std::vector<Seg> heap;
  heap.reserve(256);

  auto make_seg = [&](double lo, double hi) {
    Seg s;
    s.a = lo;
    s.b = hi;
    s.val = g7k15(f, lo, hi, s.err);
    return s;
  };

  Seg root = make_seg(a, b);
  T total = root.val;
  double total_err = root.err;
  heap.push_back(root);

  std::size_t splits = 0;
  while (total_err > std::max(opt.abs_tol, opt.rel_tol * norm_of<T>(total))) {
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Seg worst = heap.back();
    heap.pop_back();
    if (worst.err == 0.0) {  // nothing refinable left
      heap.push_back(worst);
      break;
    }
    if ((worst.b - worst.a) <
        1e-15 * (std::fabs(worst.a) + std::fabs(worst.b) + 1.0)) {
      total_err -= worst.err;  // machine-width segment; accept as-is
      worst.err = 0.0;
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), cmp);
      continue;
    }
    if (++splits > opt.max_intervals)
      throw SpectralError(Errc::QuadratureFailure, "segment budget exhausted");

    const double mid = 0.5 * (worst.a + worst.b);
    Seg left = make_seg(worst.a, mid);
    Seg right = make_seg(mid, worst.b);
    total += (left.val + right.val) - worst.val;
    total_err += (left.err + right.err) - worst.err;
    for (const Seg& c : {left, right}) {
      heap.push_back(c);
      std::push_heap(heap.begin(), heap.end(), cmp);
    }
  }

  // Canonical left-to-right summation of the final partition.
  std::sort(heap.begin(), heap.end(),
            [](const Seg& x, const Seg& y) { return x.a < y.a; });
  T sum{};
  for (const Seg& s : heap) sum += s.val;
  return sum;
}

}  // namespace quadrature
}  // namespace latticeguide

#endif  // LATTICEGUIDE_QUADRATURE_HPP
