#pragma once

#include "fubini/sequences.hpp"

namespace fubini::lacunary {

enum class Mode { Direct, BlockAnalytic };
std::string mode_name(Mode m);

// Direct mode enumerates the arctangent sum term by term up to this side length.
inline constexpr long double kDirectMaxSide = 1e7L;
inline constexpr long double kDirectMaxN = 1e14L;

// H(N) = sum_{k=1}^{N} 1/k.
long double harmonic_number(long double N);

// atan(sqrt(n / (t^2 + 1))) / (t + 1) and its first two derivatives in t.
long double arctan_weight(long double n, long double t);
long double arctan_weight_d1(long double n, long double t);
long double arctan_weight_d2(long double n, long double t);
// |h''(t)| <= kSecondDerivativeBound / t^3 for t >= 1 and all n.
inline constexpr double kSecondDerivativeBound = 6.2;

struct Delta {
  long double n = 0;
  double harmonic_part = 0.0;  // (pi/4) sum_{k<=n} x(k)/(k+1)
  double arctan_part = 0.0;    // sum_{k<=sqrt n} x(k)/(k+1) atan(sqrt(n/(k^2+1)))
  double delta = 0.0;
  double error = 0.0;
  double log_n = 0.0;
  double ratio = 0.0;          // delta / log n
};

// Delta(n) for x the indicator of `blocks`.
Delta arctan_discrepancy(const sequences::IntervalList& blocks, long double n, Mode mode);

}  // namespace fubini::lacunary
