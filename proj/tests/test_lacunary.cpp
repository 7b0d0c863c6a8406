#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fubini/lacunary.hpp"
#include "fubini/errors.hpp"

using namespace fubini;
using namespace fubini::lacunary;
using sequences::IntervalList;

namespace {

double naive_delta(const IntervalList& blocks, std::uint64_t n) {
  long double h = 0, a = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    if (!blocks.contains(static_cast<long double>(k))) continue;
    h += 1.0L / (k + 1);
    if (k * k <= n) a += atanl(sqrtl(static_cast<long double>(n) / (static_cast<long double>(k) * k + 1))) / (k + 1);
  }
  return static_cast<double>(std::numbers::pi_v<long double> / 4 * h - a);
}

}  // namespace

TEST_CASE("harmonic numbers") {
  CHECK(harmonic_number(0) == 0);
  CHECK(harmonic_number(4) == doctest::Approx(25.0 / 12).epsilon(1e-18));
  long double acc = 0;
  for (int k = 1; k <= 3000000; ++k) acc += 1.0L / k;
  CHECK(std::abs(static_cast<double>(harmonic_number(3000000) - acc)) <= 1e-14);
  const long double big = std::ldexp(1.0L, 200);
  CHECK(static_cast<double>(harmonic_number(big) - logl(big)) == doctest::Approx(0.5772156649015329).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic_number(2.5L), RangeError);
}

TEST_CASE("arctan weight derivatives") {
  for (long double n : {4.0L, 1e6L, 1e30L}) {
    for (long double t : {1.0L, 3.5L, 100.0L, 1e5L}) {
      const long double h = t * 1e-5L;
      const auto fd1 = (arctan_weight(n, t + h) - arctan_weight(n, t - h)) / (2 * h);
      const auto fd2 = (arctan_weight_d1(n, t + h) - arctan_weight_d1(n, t - h)) / (2 * h);
      CHECK(std::abs(static_cast<double>(arctan_weight_d1(n, t) - fd1)) <= 1e-7 * std::abs(static_cast<double>(fd1)) + 1e-300);
      CHECK(std::abs(static_cast<double>(arctan_weight_d2(n, t) - fd2)) <= 1e-6 * std::abs(static_cast<double>(fd2)) + 1e-300);
    }
  }
}

TEST_CASE("second derivative bound holds on a sampled grid") {
  double worst = 0;
  for (long double n = 2; n < 1e40L; n *= 1.7L) {
    for (long double t = 1; t < 1e22L; t *= 1.13L) {
      worst = std::max(worst, static_cast<double>(std::abs(arctan_weight_d2(n, t)) * t * t * t));
    }
  }
  CHECK(worst <= kSecondDerivativeBound);
}

TEST_CASE("delta against the naive sum") {
  const IntervalList blocks({{3, 40}, {500, 9000}, {20000, 50000}});
  for (std::uint64_t n : {2ull, 17ull, 1000ull, 123456ull}) {
    const double ref = naive_delta(blocks, n);
    for (auto mode : {Mode::Direct, Mode::BlockAnalytic}) {
      const auto d = arctan_discrepancy(blocks, static_cast<long double>(n), mode);
      CHECK(std::abs(d.delta - ref) <= 1e-12 + d.error);
      CHECK(d.ratio == doctest::Approx(d.delta / std::log(double(n))));
    }
  }
  const auto full = IntervalList::everything();
  const double ref = naive_delta(full, 1000000);
  CHECK(std::abs(arctan_discrepancy(full, 1e6L, Mode::BlockAnalytic).delta - ref) <= 1e-6 * std::log(1e6));
}

TEST_CASE("zero sequence gives zero") {
  const auto d = arctan_discrepancy(IntervalList(), 1e30L, Mode::BlockAnalytic);
  CHECK(d.delta == 0.0);
  CHECK(d.harmonic_part == 0.0);
}

TEST_CASE("lacunary indicator is not o(log n)") {
  const auto s = sequences::lacunary_schedule(5);
  const long double n4 = s.n(4);
  const auto d = arctan_discrepancy(s.blocks(), n4 * n4, Mode::BlockAnalytic);
  CHECK(d.ratio >= 0.3);
  CHECK(d.error <= 1e-6 * d.log_n);
  const auto control = arctan_discrepancy(IntervalList::everything(), 1e8L, Mode::BlockAnalytic);
  CHECK(std::abs(control.ratio) <= 0.05);
}

TEST_CASE("delta range errors") {
  const auto full = IntervalList::everything();
  CHECK_THROWS_AS(arctan_discrepancy(full, 1, Mode::BlockAnalytic), RangeError);
  CHECK_THROWS_AS(arctan_discrepancy(full, 10.5L, Mode::BlockAnalytic), RangeError);
  CHECK_THROWS_AS(arctan_discrepancy(full, 1e15L, Mode::Direct), RangeError);
}
