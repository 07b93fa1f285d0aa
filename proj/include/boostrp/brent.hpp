#ifndef BOOSTRP_BRENT_HPP
#define BOOSTRP_BRENT_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "boostrp/error.hpp"

namespace boostrp {

struct BrentOptions {
  double tol = 1e-8;
  int max_iter = 100;
};

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Brent's combined golden-section / parabolic minimizer on [lo, hi].
///
/// The interior search follows Brent's `localmin`. Both bracket endpoints are
/// evaluated as well and win if they are strictly better, so monotone
/// objectives return the boundary exactly.
template <typename F>
BrentResult brent_minimize(F&& f, double lo, double hi, BrentOptions opt = {}) {
  if (!(opt.tol > 0)) throw ConfigError("Brent tolerance must be positive");
  if (!(lo < hi)) throw ConfigError("Brent bracket must satisfy lo < hi");

  constexpr double golden = 0.3819660112501051;  // (3 - sqrt 5) / 2
  const double rel_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  double a = lo, b = hi;
  double v = a + golden * (b - a);
  double w = v, x = v;
  double fx = f(x);
  double fv = fx, fw = fx;
  double d = 0.0, e = 0.0;

  int it = 0;
  for (;; ++it) {
    const double xm = 0.5 * (a + b);
    const double tol1 = rel_eps * std::abs(x) + opt.tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
    if (it >= opt.max_iter)
      throw ConvergenceError("Brent minimization did not converge in " + std::to_string(opt.max_iter) +
                             " iterations");

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Trial parabola through x, v, w.
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= xm ? a : b) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);

    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }

  BrentResult res{x, fx, it};
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo < res.fx) res = {lo, flo, it};
  if (fhi < res.fx) res = {hi, fhi, it};
  if (res.x == x) {
    // A minimum that stays flat out to one bracket end (an underflowed tail)
    // resolves to that end, so a diverging step lands on the bound.
    const bool lo_flat = flo <= fx && f(0.5 * (lo + x)) <= fx;
    const bool hi_flat = fhi <= fx && f(0.5 * (x + hi)) <= fx;
    if (hi_flat && !lo_flat) res = {hi, fhi, it};
    if (lo_flat && !hi_flat) res = {lo, flo, it};
  }
  return res;
}

/// Minimizer location only; throws ConvergenceError past `max_iter`.
template <typename F>
double scalar_brent_minimize(F&& f, double lo, double hi, double tol = 1e-8, int max_iter = 100) {
  return brent_minimize(std::forward<F>(f), lo, hi, BrentOptions{tol, max_iter}).x;
}

}  // namespace boostrp

#endif  // BOOSTRP_BRENT_HPP
