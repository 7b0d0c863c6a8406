#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fubini/counterexamples.hpp"
#include "fubini/errors.hpp"

using namespace fubini;
using namespace fubini::counterexamples;
using sequences::RationalAngle;

namespace {

std::complex<double> naive_sum(const RationalAngle& theta, std::int64_t p, std::int64_t q, std::uint64_t M) {
  std::complex<double> acc = 0;
  for (std::uint64_t k = 1; k <= M; ++k) {
    const auto a = sequences::eval_phase(theta, p, k);
    for (std::uint64_t l = 1; l <= M; ++l) acc += a * sequences::eval_phase(theta, q, l) / (double(k) * k + double(l) * l);
  }
  return acc;
}

double naive_block(std::uint64_t M, unsigned b, bool dilated, unsigned m1, unsigned m2) {
  auto range = [&](unsigned m) {
    const std::uint64_t lo = std::max<std::uint64_t>(1, std::uint64_t{1} << (b * m));
    const std::uint64_t hi = std::min<std::uint64_t>(M + 1, std::uint64_t{1} << (b * (m + 1)));
    return std::pair{lo, hi};
  };
  auto d = [&](std::uint64_t k) { return double(dilated ? sequences::eval_dilated(b, k) : k); };
  const auto [klo, khi] = range(m1);
  const auto [llo, lhi] = range(m2);
  double acc = 0;
  for (std::uint64_t k = klo; k < khi; ++k)
    for (std::uint64_t l = llo; l < lhi; ++l) acc += 1.0 / (d(k) * d(k) + d(l) * d(l));
  return acc;
}

}  // namespace

TEST_CASE("Xi values against high precision quadrature") {
  const double xi_ref[] = {0.231306573386407749, 0.189822628570481170, 0.115403053503805159, 0.0612062679695281856};
  for (int m = 0; m < 4; ++m) {
    const auto v = xi(XiVariant::Xi, m);
    CHECK(std::abs(v.value - xi_ref[m]) <= std::max(v.error, 1e-13));
    CHECK(v.error <= 1e-12);
    CHECK(xi(XiVariant::Xi, -m).value == v.value);
  }
  const double xi0_ref[] = {5.80524502174668473, 0.900401735294928451, 0.00769085354396638};
  for (int m = 0; m < 3; ++m) CHECK(std::abs(xi(XiVariant::Xi0, m).value - xi0_ref[m]) <= 1e-12 * std::max(1.0, xi0_ref[m]));
  CHECK(xi(XiVariant::Xi0, 0).value > 7 * std::log(2.0) - 1);
}

TEST_CASE("Xi entries respect their bounds") {
  for (auto v : {XiVariant::Xi, XiVariant::Xi0}) {
    for (std::uint64_t m = 0; m < 60; ++m) {
      const auto x = xi(v, static_cast<std::int64_t>(m));
      CHECK(x.value > 0);
      CHECK(x.value <= xi_upper_bound(v, m) * (1 + 1e-12));
    }
    const auto table = xi_table(v, 30);
    double tail = 0;
    for (std::int64_t m = 11; m <= 30; ++m) tail += table.at(m);
    CHECK(tail <= xi_tail_bound(v, 10));
    CHECK(table.at(-3) == table.at(3));
    CHECK_THROWS_AS(table.at(31), RangeError);
  }
}

TEST_CASE("Fourier sums") {
  const auto f0 = fourier_F(RationalAngle(0, 1));
  CHECK(std::abs(f0.value - 1.08879304515180106) <= f0.total_error() + 1e-13);
  const auto f7 = fourier_F(RationalAngle(1, 7));
  CHECK(std::abs(f7.value - 0.261725232913638185) <= f7.total_error() + 1e-13);
  const auto f5 = fourier_F(RationalAngle(1, 5));
  CHECK(std::abs(f5.value - 0.110111349862246382) <= f5.total_error() + 1e-13);
  for (const auto& a : {RationalAngle(1, 2), RationalAngle(1, 3), RationalAngle(2, 9), RationalAngle(5, 11)}) {
    const auto hi = fourier_F(a, 40);
    CHECK(std::abs(fourier_F(a, 20).value - hi.value) <= std::ldexp(1.0, -19));
    CHECK(std::abs(hi.value) <= f0.value);
  }
  CHECK_THROWS_AS(fourier_F(RationalAngle(1, 3), 8), ConfigurationError);
}

TEST_CASE("choosing the angle") {
  const auto c = choose_theta(default_theta_candidates());
  double best = 0;
  for (const auto& [a, f] : c.candidates) best = std::max(best, std::abs(f.value));
  CHECK(std::abs(c.F.value) == best);
  CHECK(c.theta == RationalAngle(1, 7));
  CHECK(choose_theta({RationalAngle(1, 7), RationalAngle(8, 7)}).theta == RationalAngle(1, 7));
  CHECK(choose_theta({RationalAngle(8, 7), RationalAngle(1, 7)}).theta == RationalAngle(8, 7));
  CHECK_THROWS_AS(choose_theta({RationalAngle(1, 3)}, 40, 1e12), SelectionError);
  CHECK_THROWS_AS(choose_theta({}), ConfigurationError);
  CHECK_THROWS_AS(choose_theta({RationalAngle(2, 1)}), ConfigurationError);
}

TEST_CASE("hard example sums against the naive double sum") {
  const RationalAngle theta(1, 7);
  for (auto [p, q] : {std::pair{0, 0}, {1, 1}, {1, -1}, {2, 3}}) {
    const auto ref = naive_sum(theta, p, q, 300);
    CHECK(std::abs(hard_example_sum(theta, p, q, 300, BlockMode::Direct) - ref) <= 1e-12);
    CHECK(std::abs(hard_example_sum(theta, p, q, 300, BlockMode::BlockAnalytic) - ref) <= 1e-9);
  }
  CHECK(hard_example_sum(theta, 0, 0, 100, BlockMode::Direct).imag() == 0.0);
  const auto a = hard_example_sum(theta, 2, -1, 1024, BlockMode::Direct);
  const auto b = hard_example_sum(theta, -2, 1, 1024, BlockMode::Direct);
  CHECK(std::abs(a - std::conj(b)) <= 1e-13);
  CHECK(std::abs(a - hard_example_sum(theta, 2, -1, 1024, BlockMode::BlockAnalytic)) <= 1e-9);
  CHECK_THROWS_AS(hard_example_sum(theta, 1, 1, kDirectMaxM + 1, BlockMode::Direct), RangeError);
}

TEST_CASE("block matrices") {
  for (bool dilated : {false, true}) {
    for (unsigned b : {1u, 3u}) {
      const std::uint64_t M = 700;
      const auto direct = block_matrix(M, b, dilated, BlockMode::Direct);
      const auto analytic = block_matrix(M, b, dilated, BlockMode::BlockAnalytic);
      REQUIRE(direct.levels == analytic.levels);
      for (unsigned i = 0; i < direct.levels; ++i) {
        for (unsigned j = 0; j < direct.levels; ++j) {
          const double ref = naive_block(M, b, dilated, i, j);
          CHECK(std::abs(direct.at(i, j) - ref) <= 1e-12 * ref);
          CHECK(std::abs(analytic.at(i, j) - ref) <= analytic.error_at(i, j) + 1e-12 * ref);
        }
      }
    }
  }
}

TEST_CASE("dyadic blocks approach the continuous integrals") {
  const auto B = block_matrix((std::uint64_t{1} << 41) - 1, 1, false, BlockMode::BlockAnalytic);
  for (unsigned m1 = 2; m1 <= 12; ++m1) {
    for (unsigned m2 = 2; m2 <= 12; ++m2) {
      const double target = xi(XiVariant::Xi, std::int64_t(m2) - std::int64_t(m1)).value;
      CHECK(std::abs(B.at(m1, m2) - target) <= 8 * std::ldexp(1.0, -int(std::min(m1, m2))));
    }
  }
}

TEST_CASE("hard example series") {
  const RationalAngle theta(1, 7);
  const auto resonant = hard_example_series(theta, 1, -1, 6, 13, BlockMode::Direct);
  CHECK(resonant.predicted_slope == doctest::Approx(0.261725232913638185).epsilon(1e-10));
  CHECK(resonant.remainder_sup <= 10);
  const auto other = hard_example_series(theta, 1, 1, 6, 13, BlockMode::Direct);
  CHECK(other.predicted_slope == 0.0);
  for (const auto& s : other.sums) CHECK(std::abs(s) <= 10);
  const auto far = hard_example_series(theta, 1, -1, 6, 40, BlockMode::BlockAnalytic);
  for (std::size_t i = 0; i < resonant.sums.size(); ++i) CHECK(std::abs(far.sums[i] - resonant.sums[i]) <= 1e-8);
  CHECK(far.remainder_sup <= 10);
  CHECK_THROWS_AS(hard_example_series(theta, 1, -1, 6, 53, BlockMode::BlockAnalytic), RangeError);
}

TEST_CASE("product traces fail to factor") {
  const auto r = hard_example_product_traces(RationalAngle(1, 7), 1);
  CHECK(r.product.c.real() == doctest::Approx(r.product_target).epsilon(0.1));
  CHECK(std::abs(r.factor.c) <= 0.02);
  CHECK(std::abs(r.factor_inverse.c) <= 0.02);
  CHECK(r.fubini_fails);
}

TEST_CASE("second example") {
  const auto r = second_example_traces();
  CHECK(r.xi0_zero.value > 3.85);
  CHECK(r.xi0_even_sum - r.xi0_even_sum_error > 7 * std::numbers::pi / 4 * std::log(2.0));
  CHECK(r.one_dim_target == 0.50390625);
  CHECK(r.one_dim.c.real() == doctest::Approx(r.one_dim_target).epsilon(0.02));
  CHECK(r.two_dim.c.real() == doctest::Approx(r.two_dim_target).epsilon(0.05));
  CHECK(r.inequality_holds);
  CHECK(r.margin > 5 * r.combined_error);
}
