#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include "doctest.h"
#include "fubini/errors.hpp"
#include "fubini/lattice.hpp"

using namespace fubini::lattice;

namespace {

std::uint64_t brute_count(unsigned p, std::uint64_t r2, bool is_signed) {
  const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r2))) + 1;
  const std::int64_t lo = is_signed ? -r : 0;
  std::uint64_t n = 0;
  std::array<std::int64_t, 4> c{};
  auto rec = [&](auto&& self, unsigned d, std::uint64_t acc) -> void {
    if (acc > r2) return;
    if (d == p) {
      ++n;
      return;
    }
    for (c[d] = lo; c[d] <= r; ++c[d]) self(self, d + 1, acc + static_cast<std::uint64_t>(c[d] * c[d]));
  };
  rec(rec, 0, 0);
  return n;
}

}  // namespace

TEST_CASE("ball counts") {
  CHECK(count_ball(1, 5, false) == 6);
  CHECK(count_ball(2, 1, false) == 3);
  const double m = 100;
  CHECK(std::abs(static_cast<double>(count_ball(2, m, false)) - std::numbers::pi * m * m / 4) <= 3 * m);
  for (unsigned p = 1; p <= 4; ++p) {
    for (bool s : {false, true}) {
      for (std::uint64_t r2 : {0ull, 1ull, 2ull, 7ull, 25ull, 50ull, 101ull}) CHECK(count_ball_sq(p, r2, s) == brute_count(p, r2, s));
    }
  }
}

TEST_CASE("ball counts are monotone and respect sign inclusion") {
  std::uint64_t prev = 0;
  for (double m = 0; m < 60; m += 0.37) {
    const auto u = count_ball(2, m, false);
    CHECK(u >= prev);
    prev = u;
    if (m >= 2) {
      const auto s = count_ball(2, m, true);
      CHECK(4 * u >= s);
      CHECK(s >= count_ball(2, m - std::sqrt(2.0), false));
    }
  }
}

TEST_CASE("ball volume constants") {
  CHECK(ball_volume_constant(1, true) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ball_volume_constant(2, true) == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(ball_volume_constant(2, false) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(ball_volume_constant(3, true) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));
  for (unsigned p = 1; p <= 4; ++p) {
    const double m = p <= 2 ? 400.0 : 40.0;
    const double ratio = static_cast<double>(count_ball(p, m, true)) / (ball_volume_constant(p, true) * std::pow(m, p));
    CHECK(std::abs(ratio - 1) <= 3.0 * p / m);
  }
}

TEST_CASE("norm ordered enumeration") {
  const auto e = enumerate_by_norm(2, false, 3);
  REQUIRE(e.size() == 3);
  CHECK((e[0].coords[0] == 0 && e[0].coords[1] == 0));
  CHECK((e[1].coords[0] == 0 && e[1].coords[1] == 1));
  CHECK((e[2].coords[0] == 1 && e[2].coords[1] == 0));
  const auto line = enumerate_by_norm(1, false, 4);
  for (int i = 0; i < 4; ++i) CHECK(line[i].coords[0] == i);

  for (unsigned p = 1; p <= 3; ++p) {
    for (bool s : {false, true}) {
      const auto pts = enumerate_by_norm(p, s, 3000);
      REQUIRE(pts.size() == 3000);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        CHECK(std::tie(a.norm_sq, a.coords) < std::tie(b.norm_sq, b.coords));
      }
      for (const auto& pt : pts) {
        std::uint64_t n = 0;
        for (unsigned d = 0; d < p; ++d) n += static_cast<std::uint64_t>(pt.coords[d]) * pt.coords[d];
        CHECK(pt.norm_sq == n);
      }
      const auto r2 = pts.back().norm_sq;
      const auto inside = static_cast<std::uint64_t>(std::count_if(pts.begin(), pts.end(), [&](const LatticePoint& q) { return q.norm_sq < r2; }));
      CHECK(inside == count_ball_sq(p, r2 - 1, s));
    }
  }
}

TEST_CASE("norm of the m-th planar point grows like 4m/pi") {
  const std::uint64_t m = 100000;
  const auto r2 = radius_sq_for_count(2, false, m);
  CHECK(std::abs(static_cast<double>(r2) / (4.0 / std::numbers::pi * m) - 1) <= 0.05);
  CHECK(count_ball_sq(2, r2, false) >= m);
  CHECK(count_ball_sq(2, r2 - 1, false) < m);
  std::uint64_t last = 0;
  for_each_by_norm(2, false, m, [&](const LatticePoint& pt) { last = pt.norm_sq; });
  CHECK(last == r2);
}

TEST_CASE("shell counts sum to ball counts") {
  for (unsigned p = 1; p <= 4; ++p) {
    const auto shells = shell_counts(p, true, 200);
    std::uint64_t acc = 0;
    for (std::uint64_t n = 0; n <= 200; ++n) {
      acc += shells[n];
      if (n % 17 == 0) CHECK(acc == count_ball_sq(p, n, true));
    }
  }
}

TEST_CASE("zeta partial sums") {
  CHECK(zeta_partial_sum(1, 1, false) == 1.0);
  double direct = 0;
  for (const auto& pt : enumerate_by_norm(2, true, 5000)) direct += 1.0 / (1.0 + static_cast<double>(pt.norm_sq));
  CHECK(zeta_partial_sum(2, 5000, true) == doctest::Approx(direct).epsilon(1e-13));
  const std::uint64_t n = 1000000;
  CHECK(std::abs(zeta_partial_sum(1, n, true) / std::log(n + 1.0) / 2.0 - 1) <= 0.05);
  const double slope = (zeta_partial_sum(2, n, true) - zeta_partial_sum(2, n / 100, true)) / std::log(100.0);
  CHECK(std::abs(slope / std::numbers::pi - 1) <= 0.05);
  CHECK(zeta_partial_sum(1, 2, true) == doctest::Approx(1 + 1 / std::sqrt(2.0)).epsilon(1e-15));
  const auto pieces = zeta_partial_sums(1, {1, 2, 3, 4, 5, 1001}, true);
  for (std::uint64_t k : {1u, 2u, 3u, 4u, 5u, 1001u}) {
    double ref = 0;
    for (const auto& pt : enumerate_by_norm(1, true, k)) ref += 1.0 / std::sqrt(1.0 + static_cast<double>(pt.norm_sq));
    CHECK(zeta_partial_sum(1, k, true) == doctest::Approx(ref).epsilon(1e-14));
  }
  CHECK(pieces[5] == doctest::Approx(zeta_partial_sum(1, 1001, true)).epsilon(1e-15));
}

TEST_CASE("zeta remainders stay bounded over dyadic checkpoints") {
  std::vector<std::uint64_t> cps;
  for (int j = 10; j <= 22; ++j) cps.push_back(std::uint64_t{1} << j);
  for (unsigned p : {1u, 2u}) {
    const auto sums = zeta_partial_sums(p, cps, true);
    const double c = ball_volume_constant(p, true);
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const double r = sums[i] - c * std::log(static_cast<double>(cps[i]) + 1);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(hi - lo <= 0.5);
    CHECK(sums[0] == doctest::Approx(zeta_partial_sum(p, cps[0], true)).epsilon(1e-13));
  }
}

TEST_CASE("lattice range errors") {
  CHECK_THROWS_AS(count_ball(5, 3, false), fubini::RangeError);
  CHECK_THROWS_AS(count_ball(4, 1e6, true), fubini::RangeError);
  CHECK_THROWS_AS(count_ball(2, -1, true), fubini::RangeError);
  CHECK_THROWS_AS(zeta_partial_sums(1, {8, 4}, true), fubini::ConfigurationError);
}
