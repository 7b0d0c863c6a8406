#include "fubini/block2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/parallel.hpp"
#include "fubini/quadrature.hpp"

namespace fubini::summation {
namespace {

constexpr std::uint64_t kStripe = 256;

struct RowFunction {
  double s, c1, c2;
  long double l_lo, l_hi;
  Method method;

  RangeSum at(double k) const {
    const Weight w{Family::InverseQuadratic, s + c1 * c1 * (k * k), c2};
    return range_sum(w, l_lo, l_hi, method);
  }
  double operator()(double k) const { return at(k).value; }
};

RangeSum enumerate_rows(const RowFunction& row, long double k_lo, long double k_hi) {
  if (k_hi <= k_lo) return {};
  if (k_hi > kMaxDirectIndex) throw RangeError("rect_sum: row index beyond 2^53");
  const auto lo = static_cast<std::uint64_t>(k_lo);
  const auto hi = static_cast<std::uint64_t>(k_hi);
  const std::size_t stripes = static_cast<std::size_t>((hi - lo + kStripe - 1) / kStripe);
  struct Part {
    CompensatedSum value;
    double error = 0.0;
  };
  const auto parts = parallel_map<Part>(stripes, [&](std::size_t i) {
    Part p;
    const std::uint64_t a = lo + i * kStripe;
    const std::uint64_t b = std::min(hi, a + kStripe);
    for (std::uint64_t k = a; k < b; ++k) {
      const RangeSum r = row.at(static_cast<double>(k));
      p.value.add(r.value);
      p.error += r.error;
    }
    return p;
  });
  CompensatedSum acc;
  double error = 0.0;
  for (const auto& p : parts) {
    acc.add(p.value);
    error += p.error;
  }
  return {acc.value(), error};
}

double derivative(const RowFunction& row, double k) {
  auto central = [&](double h) { return (row(k + h) - row(k - h)) / (2.0 * h); };
  const double h = k / 32.0;
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

RangeSum outer_euler_maclaurin(const RowFunction& row, double a, double b) {
  const RangeSum ra = row.at(a);
  const RangeSum rb = row.at(b);
  const auto integral = quadrature::log_panel_integral<double>(row, a, b);
  CompensatedSum acc;
  acc.add(integral.value);
  acc.add(0.5 * (ra.value - rb.value));
  acc.add((derivative(row, b) - derivative(row, a)) / 12.0);
  const double value = acc.value();
  // |R^(n)(k)| <= (n+1)! R(k) / k^n: the omitted f''' term plus the order-4 remainder,
  // and the Richardson error of the derivative estimates.
  const double a3 = ra.value / (a * a * a);
  double error = 0.123 * a3 + 2.0e-7 * ra.value / a;
  error += integral.error + 0.5 * (ra.error + rb.error);
  // The integral sees the row errors through every node.
  error += ra.error * (b - a);
  error += 8.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
  return {value, error};
}

}  // namespace

RangeSum rect_sum(double s, double c1, double c2, const Rect& rect, Method method) {
  if (!(rect.k_lo >= 0) || !(rect.l_lo >= 0) || rect.k_hi < rect.k_lo || rect.l_hi < rect.l_lo) {
    throw RangeError("rect_sum: malformed rectangle");
  }
  if (rect.k_hi == rect.k_lo || rect.l_hi == rect.l_lo) return {};
  const RowFunction row{s, c1, c2, rect.l_lo, rect.l_hi, method};
  if (method == Method::Direct) return enumerate_rows(row, rect.k_lo, rect.k_hi);

  const long double head_end = std::min(rect.k_hi, std::max(rect.k_lo, kRowHead));
  RangeSum out = enumerate_rows(row, rect.k_lo, head_end);
  if (rect.k_hi > head_end) {
    if (rect.k_hi - head_end <= 2 * kRowHead && rect.k_hi <= kMaxDirectIndex) {
      const RangeSum tail = enumerate_rows(row, head_end, rect.k_hi);
      out.value += tail.value;
      out.error += tail.error;
    } else {
      const double a = static_cast<double>(head_end);
      const double b = static_cast<double>(rect.k_hi);
      const RangeSum tail = outer_euler_maclaurin(row, a, b);
      out.value += tail.value;
      out.error += tail.error;
      const long double moved = std::abs(rect.k_hi - static_cast<long double>(b));
      out.error += static_cast<double>(moved) * row(a);
    }
  }
  return out;
}

}  // namespace fubini::summation
