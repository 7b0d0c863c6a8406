#pragma once

#include "fubini/summation.hpp"

namespace fubini::summation {

// Half-open integer rectangle [k_lo, k_hi) x [l_lo, l_hi).
struct Rect {
  long double k_lo = 0, k_hi = 0, l_lo = 0, l_hi = 0;
};

// Rows at or beyond this index are integrated by the outer Euler-Maclaurin step.
inline constexpr long double kRowHead = 4096;

// Sum over the rectangle of 1 / (s + c1^2 k^2 + c2^2 l^2).
// Direct: every row summed term by term. Analytic: each row by
// range_sum(..., Analytic); rows beyond kRowHead by Euler-Maclaurin in k
// with a log-panel Gauss-Legendre integral of the row function.
RangeSum rect_sum(double s, double c1, double c2, const Rect& rect, Method method);

}  // namespace fubini::summation
