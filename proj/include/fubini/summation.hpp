#pragma once

#include <cstdint>

// Sums of rational and algebraic weights over integer ranges, either term by
// term or by Euler-Maclaurin with a closed-form integral and a certified remainder.
namespace fubini::summation {

enum class Family {
  InverseLinear,         // 1 / (s + c t)
  InverseSqrtQuadratic,  // 1 / sqrt(s + c^2 t^2)
  InverseQuadratic,      // 1 / (s + c^2 t^2)
};

struct Weight {
  Family family;
  double s = 1.0;
  double c = 1.0;

  double operator()(double t) const;
  // f', f''', f^(5) at t.
  void odd_derivatives(double t, double& d1, double& d3, double& d5) const;
  // Integral over [a, b], 0 < a <= b.
  double integral(double a, double b) const;
};

enum class Method { Direct, Analytic };

struct RangeSum {
  double value = 0.0;
  double error = 0.0;
};

// Indices below this are always summed term by term in analytic mode.
inline constexpr std::uint64_t kDirectHead = 256;
// Ranges up to this length are summed term by term in analytic mode.
inline constexpr std::uint64_t kDirectSpan = 4096;
// Term-by-term summation needs exactly representable indices.
inline constexpr long double kMaxDirectIndex = 9007199254740992.0L;  // 2^53

// Sum of w(k) for integer k in [a, b).
RangeSum range_sum(const Weight& w, long double a, long double b, Method method = Method::Analytic);

// Term-by-term sum over [a, b) using the active kernel, chunked for parallel use.
double direct_sum(const Weight& w, std::uint64_t a, std::uint64_t b);

// Euler-Maclaurin for [a, b) with three correction terms; requires a >= 1.
RangeSum euler_maclaurin(const Weight& w, double a, double b);

}  // namespace fubini::summation
