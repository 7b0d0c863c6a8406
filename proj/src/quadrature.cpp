#include "fubini/quadrature.hpp"

namespace fubini::quadrature {
namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

void refine(const std::function<double(double)>& f, const Panel& p, double tol, int depth, Estimate& out) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error += std::abs(delta) / 15.0;
    return;
  }
  refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, out);
  refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, out);
}

}  // namespace

Estimate adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
  Estimate out;
  if (!(b > a)) return out;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  refine(f, {a, b, fa, fm, fb, simpson(a, b, fa, fm, fb)}, abs_tol, max_depth, out);
  return out;
}

Estimate gauss_kronrod(const std::function<double(double)>& f, double a, double b, double rel_tol,
                       unsigned max_depth) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, max_depth, rel_tol, &error);
  return {value, error};
}

}  // namespace fubini::quadrature
