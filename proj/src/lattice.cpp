#include "fubini/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/kernels.hpp"
#include "fubini/parallel.hpp"

namespace fubini::lattice {
namespace {

std::uint64_t isqrt(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

void check_dimension(unsigned p) {
  if (p == 0 || p > kMaxDimension) throw RangeError("lattice: dimension must be in 1..4");
}

using u128 = unsigned __int128;

u128 count_rec(unsigned dim, std::uint64_t rem, bool is_signed) {
  const std::uint64_t s = isqrt(rem);
  if (dim == 1) return is_signed ? 2 * static_cast<u128>(s) + 1 : static_cast<u128>(s) + 1;
  u128 total = 0;
  for (std::uint64_t x = 0; x <= s; ++x) {
    const u128 mult = (is_signed && x > 0) ? 2 : 1;
    total += mult * count_rec(dim - 1, rem - x * x, is_signed);
  }
  return total;
}

constexpr std::uint64_t kLeadChunk = 64;

}  // namespace

double ball_volume_constant(unsigned p, bool is_signed) {
  const double v = std::pow(std::numbers::pi, 0.5 * p) / std::tgamma(1.0 + 0.5 * p);
  return is_signed ? v : std::ldexp(v, -static_cast<int>(p));
}

std::uint64_t count_ball_sq(unsigned p, std::uint64_t r2, bool is_signed) {
  check_dimension(p);
  const double estimate = ball_volume_constant(p, is_signed) * std::pow(static_cast<double>(r2), 0.5 * p);
  if (estimate > 4.0e18) throw RangeError("count_ball: count exceeds the 64-bit range");
  const std::uint64_t s = isqrt(r2);
  if (p == 1) return static_cast<std::uint64_t>(count_rec(1, r2, is_signed));
  const std::size_t chunks = static_cast<std::size_t>(s / kLeadChunk + 1);
  const auto parts = parallel_map<u128>(chunks, [&](std::size_t c) {
    u128 total = 0;
    const std::uint64_t lo = c * kLeadChunk;
    const std::uint64_t hi = std::min(s + 1, lo + kLeadChunk);
    for (std::uint64_t x = lo; x < hi; ++x) {
      const u128 mult = (is_signed && x > 0) ? 2 : 1;
      total += mult * count_rec(p - 1, r2 - x * x, is_signed);
    }
    return total;
  });
  u128 total = 0;
  for (u128 v : parts) total += v;
  if (total > std::numeric_limits<std::uint64_t>::max()) throw RangeError("count_ball: count exceeds the 64-bit range");
  return static_cast<std::uint64_t>(total);
}

std::uint64_t count_ball(unsigned p, double m, bool is_signed) {
  if (!(m >= 0.0) || !std::isfinite(m)) throw RangeError("count_ball: m must be finite and nonnegative");
  const long double m2 = static_cast<long double>(m) * static_cast<long double>(m);
  if (m2 >= 1.8e19L) throw RangeError("count_ball: m^2 exceeds the 64-bit range");
  return count_ball_sq(p, static_cast<std::uint64_t>(std::floor(m2)), is_signed);
}

std::uint64_t radius_sq_for_count(unsigned p, bool is_signed, std::uint64_t count) {
  check_dimension(p);
  if (count <= 1) return 0;
  std::uint64_t hi = 1;
  while (count_ball_sq(p, hi, is_signed) < count) hi *= 2;
  std::uint64_t lo = hi / 2;  // count_ball_sq(lo) < count unless lo == 0
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (count_ball_sq(p, mid, is_signed) >= count) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return count_ball_sq(p, lo, is_signed) >= count ? lo : hi;
}

namespace {

// Visits every point with norm_sq <= r2 in ascending lexicographic order.
template <class F>
void visit_lex(unsigned p, bool is_signed, std::uint64_t r2, F&& f) {
  LatticePoint pt;
  pt.p = p;
  auto rec = [&](auto&& self, unsigned dim, std::uint64_t used) -> void {
    if (dim == p) {
      pt.norm_sq = used;
      f(pt);
      return;
    }
    const auto s = static_cast<std::int64_t>(isqrt(r2 - used));
    for (std::int64_t x = is_signed ? -s : 0; x <= s; ++x) {
      pt.coords[dim] = static_cast<std::int32_t>(x);
      self(self, dim + 1, used + static_cast<std::uint64_t>(x * x));
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

std::vector<std::uint64_t> shell_counts(unsigned p, bool is_signed, std::uint64_t r2) {
  check_dimension(p);
  if (r2 > (std::uint64_t{1} << 34)) throw RangeError("shell_counts: radius too large for a histogram");
  std::vector<std::uint64_t> hist(r2 + 1, 0);
  if (p == 1) {
    for (std::uint64_t x = 0; x * x <= r2; ++x) hist[x * x] += (is_signed && x > 0) ? 2 : 1;
    return hist;
  }
  // Enumerate all but the last coordinate; the last one contributes x^2 for x = 0..s.
  const unsigned head = p - 1;
  LatticePoint pt;
  auto rec = [&](auto&& self, unsigned dim, std::uint64_t used, std::uint64_t mult) -> void {
    const std::uint64_t s = isqrt(r2 - used);
    if (dim == head) {
      for (std::uint64_t x = 0; x <= s; ++x) hist[used + x * x] += mult * ((is_signed && x > 0) ? 2 : 1);
      return;
    }
    for (std::uint64_t x = 0; x <= s; ++x) {
      self(self, dim + 1, used + x * x, mult * ((is_signed && x > 0) ? 2 : 1));
    }
  };
  (void)pt;
  rec(rec, 0, 0, 1);
  return hist;
}

std::vector<LatticePoint> enumerate_by_norm(unsigned p, bool is_signed, std::uint64_t limit_count) {
  check_dimension(p);
  if (limit_count == 0) return {};
  if (limit_count > (std::uint64_t{1} << 28)) throw RangeError("enumerate_by_norm: limit exceeds the memory budget");
  const std::uint64_t r2 = radius_sq_for_count(p, is_signed, limit_count);
  const auto hist = shell_counts(p, is_signed, r2);
  std::vector<std::uint64_t> offset(hist.size() + 1, 0);
  for (std::size_t n = 0; n < hist.size(); ++n) offset[n + 1] = offset[n] + hist[n];
  std::vector<LatticePoint> all(offset.back());
  visit_lex(p, is_signed, r2, [&](const LatticePoint& pt) { all[offset[pt.norm_sq]++] = pt; });
  all.resize(limit_count);
  return all;
}

void for_each_by_norm(unsigned p, bool is_signed, std::uint64_t limit_count,
                      const std::function<void(const LatticePoint&)>& visit) {
  for (const auto& pt : enumerate_by_norm(p, is_signed, limit_count)) visit(pt);
}

std::vector<double> zeta_partial_sums(unsigned p, const std::vector<std::uint64_t>& checkpoints, bool is_signed) {
  check_dimension(p);
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw ConfigurationError("zeta_partial_sums: checkpoints must be increasing");
  }
  std::vector<double> out;
  if (checkpoints.empty()) return out;
  if (p == 1) {
    // Shell j holds 1 point (j = 0 or unsigned) or 2 points, all of weight (1 + j^2)^{-1/2}.
    CompensatedSum acc;
    std::uint64_t taken = 0;
    std::uint64_t j = 0;
    std::uint64_t used_in_shell = 0;
    for (std::uint64_t n : checkpoints) {
      while (taken < n) {
        const std::uint64_t size = (is_signed && j > 0) ? 2 : 1;
        const std::uint64_t use = std::min(size - used_in_shell, n - taken);
        const double jj = static_cast<double>(j);
        acc.add(static_cast<double>(use) / std::sqrt(1.0 + jj * jj));
        taken += use;
        used_in_shell += use;
        if (used_in_shell == size) {
          ++j;
          used_in_shell = 0;
        }
      }
      out.push_back(acc.value());
    }
    return out;
  }
  const std::uint64_t r2 = radius_sq_for_count(p, is_signed, checkpoints.back());
  const auto hist = shell_counts(p, is_signed, r2);
  const std::vector<double> weights(hist.begin(), hist.end());
  auto weight = [&](std::uint64_t n) {
    const double base = 1.0 + static_cast<double>(n);
    return std::pow(base, -0.5 * p);
  };
  constexpr std::size_t kShellChunk = 4096;
  for (std::uint64_t n : checkpoints) {
    // Find the shell N* where the n-th point falls.
    std::uint64_t seen = 0;
    std::size_t shell = 0;
    while (shell < hist.size() && seen + hist[shell] <= n) seen += hist[shell++];
    CompensatedSum acc;
    for (std::size_t lo = 0; lo < shell; lo += kShellChunk) {
      const std::size_t len = std::min(kShellChunk, shell - lo);
      acc.add(kernels::sum_shell_weights(weights.data() + lo, len, static_cast<double>(lo), static_cast<int>(p)));
    }
    if (seen < n) acc.add(static_cast<double>(n - seen) * weight(shell));
    out.push_back(acc.value());
  }
  return out;
}

double zeta_partial_sum(unsigned p, std::uint64_t n, bool is_signed) {
  return zeta_partial_sums(p, {n}, is_signed).front();
}

}  // namespace fubini::lattice
