#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>

namespace fubini::quadrature {

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive Simpson bisection; each accepted panel passes the Richardson test
// |S2 - S1| / 15 <= tol_panel, and the extrapolated value S2 + (S2 - S1)/15 is kept.
Estimate adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                          int max_depth = 48);

// Adaptive Gauss-Kronrod (21-point) on [a, b].
Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                       unsigned max_depth = 30);

template <class Real>
struct LogPanelResult {
  Real value = 0;
  Real error = 0;
};

// Integral of f over [a, b] (0 < a < b) after the substitution t = e^u, using
// 10-point Gauss-Legendre on panels of width at most `width` in u. The error
// estimate is the change against panels of half the width.
template <class Real, class F>
LogPanelResult<Real> log_panel_integral(F&& f, Real a, Real b, Real width = Real(0.25)) {
  using boost::math::quadrature::gauss;
  using std::ceil;
  using std::exp;
  using std::log;
  const Real ua = log(a);
  const Real ub = log(b);
  auto run = [&](Real w) {
    const Real span = ub - ua;
    const long panels = span <= 0 ? 0 : static_cast<long>(ceil(span / w));
    Real total = 0;
    for (long i = 0; i < panels; ++i) {
      const Real lo = ua + span * Real(i) / Real(panels);
      const Real hi = i + 1 == panels ? ub : ua + span * Real(i + 1) / Real(panels);
      total += gauss<Real, 10>::integrate(
          [&](Real u) {
            const Real t = exp(u);
            return f(t) * t;
          },
          lo, hi);
    }
    return total;
  };
  const Real coarse = run(width);
  const Real fine = run(width / 2);
  using std::abs;
  return {fine, abs(fine - coarse)};
}

}  // namespace fubini::quadrature
