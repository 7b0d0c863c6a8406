#include "fubini/summation.hpp"

#include <cmath>
#include <limits>

#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/kernels.hpp"
#include "fubini/parallel.hpp"

namespace fubini::summation {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// 2 zeta(6) / (2 pi)^6
constexpr double kRemainder6 = 3.3067e-5;
constexpr std::uint64_t kChunk = std::uint64_t{1} << 18;

double kernel_sum(const Weight& w, double k0, std::uint64_t n) {
  switch (w.family) {
    case Family::InverseLinear: return kernels::sum_inverse_linear(k0, n, w.s, w.c);
    case Family::InverseSqrtQuadratic: return kernels::sum_inverse_sqrt_quadratic(k0, n, w.s, w.c * w.c);
    case Family::InverseQuadratic: return kernels::sum_inverse_quadratic(k0, n, w.s, w.c * w.c);
  }
  return 0.0;
}

}  // namespace

double Weight::operator()(double t) const {
  switch (family) {
    case Family::InverseLinear: return 1.0 / (s + c * t);
    case Family::InverseSqrtQuadratic: return 1.0 / std::sqrt(s + c * c * (t * t));
    case Family::InverseQuadratic: return 1.0 / (s + c * c * (t * t));
  }
  return 0.0;
}

void Weight::odd_derivatives(double t, double& d1, double& d3, double& d5) const {
  switch (family) {
    case Family::InverseLinear: {
      const double u = 1.0 / (s + c * t);
      const double cu = c * u;
      d1 = -cu * u;
      d3 = -6.0 * cu * cu * cu * u;
      d5 = -120.0 * cu * cu * cu * cu * cu * u;
      return;
    }
    case Family::InverseSqrtQuadratic: {
      const double b2 = s / (c * c);
      const double w = 1.0 / (t * t + b2);
      const double sw = std::sqrt(w);
      const double t2 = t * t;
      d1 = -t * w * sw / c;
      d3 = 3.0 * t * (3.0 * b2 - 2.0 * t2) * w * w * w * sw / c;
      d5 = -15.0 * t * (8.0 * t2 * t2 - 40.0 * b2 * t2 + 15.0 * b2 * b2) * w * w * w * w * w * sw / c;
      return;
    }
    case Family::InverseQuadratic: {
      const double b2 = s / (c * c);
      const double w = 1.0 / (t * t + b2);
      const double t2 = t * t;
      const double w2 = w * w;
      const double scale = 1.0 / (c * c);
      d1 = -2.0 * t * w2 * scale;
      d3 = -24.0 * t * (t2 - b2) * w2 * w2 * scale;
      d5 = -240.0 * t * (3.0 * t2 * t2 - 10.0 * t2 * b2 + 3.0 * b2 * b2) * w2 * w2 * w2 * scale;
      return;
    }
  }
}

double Weight::integral(double a, double b) const {
  const double span = b - a;
  switch (family) {
    case Family::InverseLinear: return std::log1p(c * span / (s + c * a)) / c;
    case Family::InverseSqrtQuadratic: {
      const double b2 = s / (c * c);
      const double ra = std::sqrt(a * a + b2);
      const double rb = std::sqrt(b * b + b2);
      const double num = span + span * (a + b) / (ra + rb);
      return std::log1p(num / (a + ra)) / c;
    }
    case Family::InverseQuadratic: {
      const double scale = 1.0 / (c * c);
      const double b2 = s / (c * c);
      if (b2 == 0.0) return scale * span / (a * b);
      const double beta = std::sqrt(b2);
      return scale * std::atan(span * beta / (b2 + a * b)) / beta;
    }
  }
  return 0.0;
}

RangeSum euler_maclaurin(const Weight& w, double a, double b) {
  if (!(a >= 1.0) || !(b >= a)) throw RangeError("euler_maclaurin: need 1 <= a <= b");
  if (a == b) return {};
  double a1, a3, a5, b1, b3, b5;
  w.odd_derivatives(a, a1, a3, a5);
  w.odd_derivatives(b, b1, b3, b5);
  const double fa = w(a);
  const double fb = w(b);
  CompensatedSum acc;
  acc.add(w.integral(a, b));
  acc.add(0.5 * (fa - fb));
  acc.add((b1 - a1) / 12.0);
  acc.add(-(b3 - a3) / 720.0);
  acc.add((b5 - a5) / 30240.0);
  const double value = acc.value();

  double sixth = 0.0;  // bound on the integral of |f^(6)| over [a, b]
  switch (w.family) {
    case Family::InverseLinear: sixth = std::abs(b5 - a5); break;
    case Family::InverseSqrtQuadratic: sixth = 120.0 / (w.c * std::pow(a, 6)); break;
    case Family::InverseQuadratic: sixth = 720.0 / (w.c * w.c * std::pow(a, 7)); break;
  }
  return {value, kRemainder6 * sixth + 8.0 * kEps * std::abs(value)};
}

double direct_sum(const Weight& w, std::uint64_t a, std::uint64_t b) {
  if (b <= a) return 0.0;
  if (static_cast<long double>(b) > kMaxDirectIndex) throw RangeError("direct_sum: index beyond 2^53");
  const std::uint64_t n = b - a;
  if (n <= kChunk) return kernel_sum(w, static_cast<double>(a), n);
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  const auto parts = parallel_map<double>(chunks, [&](std::size_t i) {
    const std::uint64_t lo = a + i * kChunk;
    const std::uint64_t hi = std::min(b, lo + kChunk);
    return kernel_sum(w, static_cast<double>(lo), hi - lo);
  });
  CompensatedSum acc;
  for (double p : parts) acc.add(p);
  return acc.value();
}

RangeSum range_sum(const Weight& w, long double a, long double b, Method method) {
  if (!(a >= 0) || !(b >= a)) throw RangeError("range_sum: need 0 <= a <= b");
  if (a != std::floor(a) || b != std::floor(b)) throw RangeError("range_sum: endpoints must be integers");
  if (b == a) return {};
  if (method == Method::Direct) {
    const double v = direct_sum(w, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    return {v, 4.0 * kEps * std::abs(v)};
  }
  RangeSum out;
  long double lo = a;
  const long double head_end = std::min(b, std::max(a, static_cast<long double>(kDirectHead)));
  if (head_end > lo) {
    out.value += direct_sum(w, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(head_end));
    lo = head_end;
  }
  if (b > lo) {
    if (b - lo <= static_cast<long double>(kDirectSpan) && b <= kMaxDirectIndex) {
      out.value += direct_sum(w, static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(b));
    } else {
      const double lo_d = static_cast<double>(lo);
      const double b_d = static_cast<double>(b);
      const RangeSum em = euler_maclaurin(w, lo_d, b_d);
      out.value += em.value;
      out.error += em.error;
      // Endpoints above 2^53 may round; each dropped or added index contributes at most w(lo).
      const long double moved = std::abs(lo - static_cast<long double>(lo_d)) + std::abs(b - static_cast<long double>(b_d));
      out.error += static_cast<double>(moved) * w(lo_d);
    }
  }
  out.error += 4.0 * kEps * std::abs(out.value);
  return out;
}

}  // namespace fubini::summation
