#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace fubini::lattice {

inline constexpr unsigned kMaxDimension = 4;

struct LatticePoint {
  std::array<std::int32_t, kMaxDimension> coords{};
  unsigned p = 0;
  std::uint64_t norm_sq = 0;
};

// Lattice points of Z_+^p (unsigned) or Z^p (signed) with sum of squares <= m^2.
std::uint64_t count_ball(unsigned p, double m, bool is_signed);
// Same, with the bound given directly as an integer r2 = floor(m^2).
std::uint64_t count_ball_sq(unsigned p, std::uint64_t r2, bool is_signed);

// Smallest r2 such that count_ball_sq(p, r2, signed) >= count.
std::uint64_t radius_sq_for_count(unsigned p, bool is_signed, std::uint64_t count);

// The first `limit_count` points in order of nondecreasing norm_sq, ties broken
// by ascending lexicographic order of the coordinates.
std::vector<LatticePoint> enumerate_by_norm(unsigned p, bool is_signed, std::uint64_t limit_count);
void for_each_by_norm(unsigned p, bool is_signed, std::uint64_t limit_count,
                      const std::function<void(const LatticePoint&)>& visit);

// Number of lattice points with norm_sq == N for N = 0..r2.
std::vector<std::uint64_t> shell_counts(unsigned p, bool is_signed, std::uint64_t r2);

// Sum over the first n norm-ordered points of (1 + norm_sq)^{-p/2}.
double zeta_partial_sum(unsigned p, std::uint64_t n, bool is_signed);
// The same at several increasing checkpoints, sharing one shell histogram.
std::vector<double> zeta_partial_sums(unsigned p, const std::vector<std::uint64_t>& checkpoints, bool is_signed);

// 2^{-p} pi^{p/2} / Gamma(1 + p/2) for unsigned, pi^{p/2} / Gamma(1 + p/2) for signed.
double ball_volume_constant(unsigned p, bool is_signed);

}  // namespace fubini::lattice
