#include <cmath>

#include "doctest.h"
#include "fubini/block2d.hpp"
#include "fubini/errors.hpp"
#include "fubini/quadrature.hpp"
#include "fubini/summation.hpp"

using namespace fubini;
using summation::Family;
using summation::Method;
using summation::Weight;

namespace {

long double naive(const Weight& w, std::uint64_t a, std::uint64_t b) {
  long double acc = 0;
  for (std::uint64_t k = b; k-- > a;) {
    const long double t = k;
    switch (w.family) {
      case Family::InverseLinear: acc += 1.0L / (w.s + w.c * t); break;
      case Family::InverseSqrtQuadratic: acc += 1.0L / std::sqrt(w.s + (long double)w.c * w.c * t * t); break;
      case Family::InverseQuadratic: acc += 1.0L / (w.s + (long double)w.c * w.c * t * t); break;
    }
  }
  return acc;
}

const Weight kWeights[] = {
    {Family::InverseLinear, 1.0, 1.0},         {Family::InverseLinear, 3.5, 0.25},
    {Family::InverseSqrtQuadratic, 1.0, 1.0},  {Family::InverseSqrtQuadratic, 7.0, 128.0},
    {Family::InverseQuadratic, 1.0, 1.0},      {Family::InverseQuadratic, 400.0, 3.0},
};

}  // namespace

TEST_CASE("closed-form integrals match adaptive quadrature") {
  for (const auto& w : kWeights) {
    for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{3.0, 1000.0}, std::pair{50.0, 1e6}}) {
      const auto ref = quadrature::gauss_kronrod([&](double t) { return w(t); }, a, b, 1e-13);
      CHECK(w.integral(a, b) == doctest::Approx(ref.value).epsilon(1e-11));
    }
  }
}

TEST_CASE("odd derivatives match central differences") {
  for (const auto& w : kWeights) {
    for (double t : {2.0, 17.0, 300.0}) {
      double d1, d3, d5;
      w.odd_derivatives(t, d1, d3, d5);
      const double h = 1e-3 * t;
      const double fd1 = (w(t + h) - w(t - h)) / (2 * h);
      CHECK(d1 == doctest::Approx(fd1).epsilon(1e-5));
      const double H = 0.05 * t;
      const double fd3 = (w(t + 2 * H) - 2 * w(t + H) + 2 * w(t - H) - w(t - 2 * H)) / (2 * H * H * H);
      CHECK(d3 == doctest::Approx(fd3).epsilon(2e-2));
    }
  }
}

TEST_CASE("Euler-Maclaurin error bounds are honest against a long double reference") {
  for (const auto& w : kWeights) {
    for (auto [a, b] : {std::pair{300ull, 5000ull}, std::pair{1000ull, 200000ull}, std::pair{7ull, 20000ull}}) {
      const auto em = summation::euler_maclaurin(w, static_cast<double>(a), static_cast<double>(b));
      const double ref = static_cast<double>(naive(w, a, b));
      CHECK(std::abs(em.value - ref) <= em.error + 1e-15 * std::abs(ref));
      CHECK(em.error <= 1e-6 * std::abs(ref));
    }
  }
}

TEST_CASE("analytic and direct range sums agree") {
  for (const auto& w : kWeights) {
    for (auto [a, b] : {std::pair{0.0L, 100.0L}, std::pair{0.0L, 1e6L}, std::pair{12345.0L, 3e6L}}) {
      const auto d = summation::range_sum(w, a, b, Method::Direct);
      const auto an = summation::range_sum(w, a, b, Method::Analytic);
      CHECK(std::abs(d.value - an.value) <= an.error + d.error + 1e-14 * std::abs(d.value));
    }
  }
}

TEST_CASE("range sums reject malformed ranges") {
  const Weight w{Family::InverseLinear, 1.0, 1.0};
  CHECK_THROWS_AS(summation::range_sum(w, 5.0L, 2.0L), RangeError);
  CHECK_THROWS_AS(summation::range_sum(w, 0.5L, 2.0L), RangeError);
  CHECK_THROWS_AS(summation::euler_maclaurin(w, 0.0, 5.0), RangeError);
  CHECK_THROWS_AS(summation::direct_sum(w, 0, std::uint64_t{1} << 60), RangeError);
  CHECK(summation::range_sum(w, 4.0L, 4.0L).value == 0.0);
}

TEST_CASE("analytic ranges reach far beyond 2^53") {
  const Weight w{Family::InverseLinear, 1.0, 1.0};
  const long double a = std::ldexp(1.0L, 70), b = std::ldexp(1.0L, 90);
  const auto r = summation::range_sum(w, a, b);
  CHECK(r.value == doctest::Approx(20.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("rectangle sums: analytic agrees with direct") {
  const summation::Rect rects[] = {{1, 200, 1, 300}, {0, 9000, 0, 5000}, {4096, 12000, 1, 20000}, {1, 16384, 1, 16384}};
  for (const auto& r : rects) {
    for (auto [s, c1, c2] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{0.0, 1.0, 1.0}, std::tuple{1.0, 128.0, 1.0}}) {
      if (s == 0.0 && (r.k_lo == 0 || r.l_lo == 0)) continue;
      const auto d = summation::rect_sum(s, c1, c2, r, Method::Direct);
      const auto a = summation::rect_sum(s, c1, c2, r, Method::Analytic);
      CHECK(std::abs(d.value - a.value) <= a.error + d.error + 1e-13 * std::abs(d.value));
      CHECK(a.error <= 1e-9);
    }
  }
}

TEST_CASE("square-window sum of 1/(k^2+l^2) over dyadic blocks is scale invariant") {
  // Blocks [2^m, 2^(m+1))^2 approach int_1^2 int_1^2 dt ds / (t^2 + s^2).
  const double limit = 0.23130657338640775;
  for (int m : {8, 12, 20, 30}) {
    const long double lo = std::ldexp(1.0L, m), hi = std::ldexp(1.0L, m + 1);
    const auto r = summation::rect_sum(0.0, 1.0, 1.0, {lo, hi, lo, hi}, Method::Analytic);
    CHECK(std::abs(r.value - limit) <= 8.0 * std::ldexp(1.0, -m));
  }
}

TEST_CASE("adaptive Simpson and log-panel integrals") {
  const auto s = quadrature::adaptive_simpson([](double x) { return std::exp(-x * x); }, 0.0, 3.0, 1e-13);
  CHECK(s.value == doctest::Approx(0.5 * std::sqrt(M_PI) * std::erf(3.0)).epsilon(1e-12));
  const auto lp = quadrature::log_panel_integral<long double>([](long double t) { return 1.0L / (t * t + 1.0L); }, 1.0L, 1e30L);
  CHECK(static_cast<double>(lp.value) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
  const auto gk = quadrature::gauss_kronrod([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(gk.value == doctest::Approx(2.0 / 3.0).epsilon(1e-11));
  CHECK(gk.error < 1e-8);
}
