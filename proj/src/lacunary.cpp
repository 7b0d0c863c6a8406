#include "fubini/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fubini/errors.hpp"
#include "fubini/parallel.hpp"
#include "fubini/quadrature.hpp"

namespace fubini::lacunary {
namespace {

constexpr long double kHarmonicDirect = 1048576.0L;  // 2^20
constexpr long double kArctanHead = 256.0L;
constexpr long double kHarmonicEnumerate = 67108864.0L;  // 2^26
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr double kEps = 2.220446049250313e-16;

// sum_{k=lo}^{hi-1} 1/(k+1).
long double harmonic_range(long double lo, long double hi) {
  if (hi <= lo) return 0.0L;
  if (hi <= kHarmonicDirect) {
    long double acc = 0.0L;
    for (long double k = hi; k > lo; k -= 1.0L) acc += 1.0L / k;
    return acc;
  }
  if (lo < kHarmonicDirect) return harmonic_range(lo, kHarmonicDirect) + harmonic_range(kHarmonicDirect, hi);
  auto corr = [](long double N) {
    const long double r = 1.0L / N;
    const long double r2 = r * r;
    return r / 2 - r2 / 12 + r2 * r2 / 120 - r2 * r2 * r2 / 252;
  };
  return std::log(hi / lo) + corr(hi) - corr(lo);
}

long double direct_reciprocal_sum(long double lo, long double hi) {
  if (hi <= lo) return 0.0L;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const auto a = static_cast<std::uint64_t>(lo);
  const auto b = static_cast<std::uint64_t>(hi);
  const std::size_t chunks = static_cast<std::size_t>((b - a + kChunk - 1) / kChunk);
  const auto parts = parallel_map<long double>(chunks, [&](std::size_t c) {
    const std::uint64_t s = a + c * kChunk;
    const std::uint64_t e = std::min(b, s + kChunk);
    long double acc = 0.0L;
    for (std::uint64_t k = e; k > s; --k) acc += 1.0L / static_cast<long double>(k);
    return acc;
  });
  long double total = 0.0L;
  for (long double p : parts) total += p;
  return total;
}

long double direct_arctan_sum(long double n, long double lo, long double hi) {
  if (hi <= lo) return 0.0L;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const auto a = static_cast<std::uint64_t>(lo);
  const auto b = static_cast<std::uint64_t>(hi);
  const std::size_t chunks = static_cast<std::size_t>((b - a + kChunk - 1) / kChunk);
  const auto parts = parallel_map<long double>(chunks, [&](std::size_t c) {
    const std::uint64_t s = a + c * kChunk;
    const std::uint64_t e = std::min(b, s + kChunk);
    long double acc = 0.0L;
    for (std::uint64_t k = e; k-- > s;) acc += arctan_weight(n, static_cast<long double>(k));
    return acc;
  });
  long double total = 0.0L;
  for (long double p : parts) total += p;
  return total;
}

struct Piece {
  long double value = 0;
  long double error = 0;
};

// Euler-Maclaurin with one derivative correction over [A, B), A >= 1.
Piece arctan_em(long double n, long double A, long double B) {
  const auto integral = quadrature::log_panel_integral<long double>([&](long double t) { return arctan_weight(n, t); }, A, B);
  Piece p;
  p.value = integral.value + (arctan_weight(n, A) - arctan_weight(n, B)) / 2 +
            (arctan_weight_d1(n, B) - arctan_weight_d1(n, A)) / 12;
  // (1/12) int_A^inf 6.2 / t^3 dt
  p.error = integral.error + kSecondDerivativeBound / (24.0L * A * A);
  return p;
}

}  // namespace

std::string mode_name(Mode m) { return m == Mode::Direct ? "direct" : "block_analytic"; }

long double harmonic_number(long double N) {
  if (!(N >= 0) || N != std::floor(N) || !std::isfinite(N)) throw RangeError("harmonic_number: N must be a finite nonnegative integer");
  if (N == 0) return 0.0L;
  if (N <= kHarmonicDirect) return harmonic_range(0.0L, N);
  const long double r = 1.0L / N;
  const long double r2 = r * r;
  return std::log(N) + kEulerGamma + r / 2 - r2 / 12 + r2 * r2 / 120 - r2 * r2 * r2 / 252;
}

long double arctan_weight(long double n, long double t) {
  return std::atan(std::sqrt(n / (t * t + 1))) / (t + 1);
}

long double arctan_weight_d1(long double n, long double t) {
  const long double q = t * t + 1;
  const long double g = std::atan(std::sqrt(n / q));
  const long double g1 = -std::sqrt(n) * t / (std::sqrt(q) * (q + n));
  return g1 / (t + 1) - g / ((t + 1) * (t + 1));
}

long double arctan_weight_d2(long double n, long double t) {
  const long double q = t * t + 1;
  const long double g = std::atan(std::sqrt(n / q));
  const long double g1 = -std::sqrt(n) * t / (std::sqrt(q) * (q + n));
  const long double g2 = -std::sqrt(n) / (std::sqrt(q) * (q + n)) * (1 - t * t / q - 2 * t * t / (q + n));
  const long double u = t + 1;
  return g2 / u - 2 * g1 / (u * u) + 2 * g / (u * u * u);
}

Delta arctan_discrepancy(const sequences::IntervalList& blocks, long double n, Mode mode) {
  if (!(n >= 2) || n != std::floor(n) || !std::isfinite(n)) throw RangeError("arctan_discrepancy: n must be an integer >= 2");
  const long double side = std::floor(std::sqrt(n));
  if (mode == Mode::Direct && (n > kDirectMaxN || side > kDirectMaxSide)) {
    throw RangeError("arctan_discrepancy: direct mode needs n <= 1e14");
  }
  long double harmonic = 0.0L, arctan = 0.0L, error = 0.0L;
  for (const auto& iv : blocks.intervals()) {
    const long double h_hi = std::min(iv.hi, n + 1);
    if (h_hi > iv.lo) {
      if (mode == Mode::Direct && h_hi <= kHarmonicEnumerate) {
        harmonic += direct_reciprocal_sum(iv.lo, h_hi);
      } else {
        harmonic += harmonic_range(iv.lo, h_hi);
      }
    }
    const long double a_hi = std::min(iv.hi, side + 1);
    if (a_hi > iv.lo) {
      if (mode == Mode::Direct) {
        arctan += direct_arctan_sum(n, iv.lo, a_hi);
      } else {
        const long double head = std::min(a_hi, std::max(iv.lo, kArctanHead));
        arctan += direct_arctan_sum(n, iv.lo, head);
        if (a_hi > head) {
          const Piece p = arctan_em(n, head, a_hi);
          arctan += p.value;
          error += p.error;
        }
      }
    }
  }
  Delta d;
  d.n = n;
  d.harmonic_part = static_cast<double>(std::numbers::pi_v<long double> / 4 * harmonic);
  d.arctan_part = static_cast<double>(arctan);
  d.delta = static_cast<double>(std::numbers::pi_v<long double> / 4 * harmonic - arctan);
  d.error = static_cast<double>(error) + 16.0 * kEps * (std::abs(d.harmonic_part) + std::abs(d.arctan_part));
  d.log_n = static_cast<double>(std::log(n));
  d.ratio = d.delta / d.log_n;
  return d;
}

}  // namespace fubini::lacunary
