#include "fubini/counterexamples.hpp"

#include <algorithm>
#include <array>
#include <tuple>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fubini/block2d.hpp"
#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/parallel.hpp"
#include "fubini/quadrature.hpp"
#include "fubini/summation.hpp"

namespace fubini::counterexamples {

using sequences::DiagonalSequence;
using sequences::RationalAngle;

namespace {

constexpr double kEps = 2.220446049250313e-16;

unsigned base_bits(XiVariant v) { return v == XiVariant::Xi ? 1u : 7u; }

// e^{i k theta} for theta = 2 pi num / den.
std::complex<double> phase_power(const RationalAngle& theta, std::int64_t k) {
  const std::int64_t d = theta.denominator();
  const __int128 r = (static_cast<__int128>(k % d) * theta.numerator()) % d;
  const std::int64_t e = static_cast<std::int64_t>((r + d) % d);
  return sequences::root_of_unity(e, d);
}

std::vector<double> squared_window_checkpoints(int j_lo, int j_hi) {
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double side = std::ldexp(1.0, j) - 1.0;
    out.push_back(side * side);
  }
  return out;
}

std::vector<double> power_checkpoints(int base_bits, int j_lo, int j_hi) {
  std::vector<double> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(std::ldexp(1.0, base_bits * j));
  return out;
}

}  // namespace

std::string xi_variant_name(XiVariant v) { return v == XiVariant::Xi ? "Xi" : "Xi0"; }

XiValue xi(XiVariant variant, std::int64_t m) {
  const std::uint64_t am = static_cast<std::uint64_t>(m < 0 ? -m : m);
  const unsigned b = base_bits(variant);
  if (am * b > 900) return {0.0, xi_upper_bound(variant, am)};
  const double width = std::ldexp(1.0, static_cast<int>(b)) - 1.0;
  const double a = std::ldexp(1.0, static_cast<int>(am * b));
  const double ratio = std::ldexp(1.0, static_cast<int>(b));
  // inner integral over t in [a, 2^b a]: (1/s) atan(s (2^b - 1) a / (s^2 + 2^b a^2))
  auto inner = [&](double s) {
    const double arg = s * width / (s * s / a + ratio * a);
    return std::atan(arg) / s;
  };
  const auto est = quadrature::gauss_kronrod(inner, 1.0, ratio, 1e-14);
  return {est.value, est.error + 8.0 * kEps * std::abs(est.value)};
}

double xi_upper_bound(XiVariant variant, std::uint64_t m) {
  if (variant == XiVariant::Xi) return std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(m, 2000)));
  return 127.0 * 127.0 * std::ldexp(1.0, -static_cast<int>(std::min<std::uint64_t>(7 * m, 2000)));
}

double xi_tail_bound(XiVariant variant, std::uint64_t M) {
  if (variant == XiVariant::Xi) return xi_upper_bound(variant, M);
  return xi_upper_bound(variant, M + 1) / (1.0 - 1.0 / 128.0);
}

double XiTable::at(std::int64_t m) const {
  const auto am = static_cast<std::size_t>(m < 0 ? -m : m);
  if (am >= values.size()) throw RangeError("XiTable: index beyond the table");
  return values[am];
}

XiTable xi_table(XiVariant variant, unsigned M) {
  XiTable t;
  t.variant = variant;
  const auto parts = parallel_map<XiValue>(M + 1, [&](std::size_t m) { return xi(variant, static_cast<std::int64_t>(m)); });
  for (const auto& v : parts) {
    t.values.push_back(v.value);
    t.error_bounds.push_back(v.error);
  }
  return t;
}

FourierValue fourier_F(const RationalAngle& theta, unsigned M_cut, XiVariant variant) {
  if (M_cut < 16) throw ConfigurationError("fourier_F: M_cut must be at least 16");
  const XiTable table = xi_table(variant, M_cut);
  CompensatedSum acc;
  FourierValue out;
  acc.add(table.values[0]);
  out.quadrature_error = table.error_bounds[0];
  for (unsigned m = M_cut; m >= 1; --m) {
    acc.add(2.0 * table.values[m] * phase_power(theta, m).real());
    out.quadrature_error += 2.0 * table.error_bounds[m];
  }
  out.value = acc.value();
  out.tail_bound = 2.0 * xi_tail_bound(variant, M_cut);
  return out;
}

std::vector<RationalAngle> default_theta_candidates() {
  return {RationalAngle(1, 3), RationalAngle(1, 5), RationalAngle(1, 7), RationalAngle(1, 2)};
}

ThetaChoice choose_theta(const std::vector<RationalAngle>& candidates, unsigned M_cut, double margin) {
  if (candidates.empty()) throw ConfigurationError("choose_theta: empty candidate list");
  ThetaChoice out;
  std::optional<std::size_t> best;
  for (const auto& c : candidates) {
    if (c.is_multiple_of_2pi()) throw ConfigurationError("choose_theta: candidate 2pi*" + c.to_string() + " lies in 2piZ");
    const FourierValue F = fourier_F(c, M_cut);
    out.candidates.emplace_back(c, F);
    const bool clears = std::abs(F.value) > margin * F.total_error();
    if (clears && (!best || std::abs(F.value) > std::abs(out.candidates[*best].second.value))) {
      best = out.candidates.size() - 1;
    }
  }
  if (!best) {
    std::ostringstream msg;
    msg << "choose_theta: no candidate has |F| above " << margin << "x its error budget;";
    for (const auto& [c, F] : out.candidates) msg << " 2pi*" << c.to_string() << ": |F|=" << std::abs(F.value) << " bound=" << margin * F.total_error() << ";";
    throw SelectionError(msg.str());
  }
  out.theta = out.candidates[*best].first;
  out.F = out.candidates[*best].second;
  return out;
}

std::string block_mode_name(BlockMode m) { return m == BlockMode::Direct ? "direct" : "block_analytic"; }

BlockMatrix block_matrix(std::uint64_t M, unsigned base_exponent, bool dilated, BlockMode mode) {
  if (M < 1) throw RangeError("block_matrix: M must be at least 1");
  if (base_exponent == 0 || base_exponent > 32) throw ConfigurationError("block_matrix: base exponent must be in 1..32");
  if (mode == BlockMode::Direct && M > kDirectMaxM) throw RangeError("block_matrix: direct mode needs M <= 2^14");
  if (mode == BlockMode::BlockAnalytic && static_cast<long double>(M) > summation::kMaxDirectIndex) {
    throw RangeError("block_matrix: M beyond 2^53");
  }
  BlockMatrix B;
  B.base_exponent = base_exponent;
  B.dilated = dilated;
  std::vector<long double> lo, hi;
  std::vector<double> scale;
  for (unsigned m = 0;; ++m) {
    const long double start = std::ldexp(1.0L, static_cast<int>(m * base_exponent));
    if (start > static_cast<long double>(M)) break;
    lo.push_back(std::max<long double>(1.0L, start));
    hi.push_back(std::min<long double>(std::ldexp(1.0L, static_cast<int>((m + 1) * base_exponent)), static_cast<long double>(M) + 1));
    scale.push_back(dilated && (m % 2 == 1) ? std::ldexp(1.0, static_cast<int>(base_exponent)) : 1.0);
  }
  const unsigned L = static_cast<unsigned>(lo.size());
  B.levels = L;
  B.values.assign(L * L, 0.0);
  B.errors.assign(L * L, 0.0);

  if (mode == BlockMode::Direct) {
    constexpr std::uint64_t kStripe = 64;
    const std::size_t stripes = static_cast<std::size_t>((M + kStripe - 1) / kStripe);
    struct Part {
      std::vector<CompensatedSum> cells;
    };
    const auto parts = parallel_map<Part>(stripes, [&](std::size_t i) {
      Part part;
      part.cells.resize(L * L);
      const std::uint64_t k0 = 1 + i * kStripe;
      const std::uint64_t k1 = std::min<std::uint64_t>(M + 1, k0 + kStripe);
      for (std::uint64_t k = k0; k < k1; ++k) {
        const unsigned m1 = static_cast<unsigned>(sequences::dyadic_level(k) / base_exponent);
        const double dk = scale[m1] * static_cast<double>(k);
        for (unsigned m2 = 0; m2 < L; ++m2) {
          const summation::Weight w{summation::Family::InverseQuadratic, dk * dk, scale[m2]};
          part.cells[m1 * L + m2].add(summation::range_sum(w, lo[m2], hi[m2], summation::Method::Direct).value);
        }
      }
      return part;
    });
    std::vector<CompensatedSum> cells(L * L);
    for (const auto& part : parts) {
      for (unsigned c = 0; c < L * L; ++c) cells[c].add(part.cells[c]);
    }
    for (unsigned c = 0; c < L * L; ++c) {
      B.values[c] = cells[c].value();
      B.errors[c] = 8.0 * kEps * std::abs(B.values[c]);
    }
    return B;
  }

  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned m1 = 0; m1 < L; ++m1) {
    for (unsigned m2 = m1; m2 < L; ++m2) pairs.emplace_back(m1, m2);
  }
  const auto sums = parallel_map<summation::RangeSum>(pairs.size(), [&](std::size_t i) {
    const auto [m1, m2] = pairs[i];
    const summation::Rect r{lo[m1], hi[m1], lo[m2], hi[m2]};
    return summation::rect_sum(0.0, scale[m1], scale[m2], r, summation::Method::Analytic);
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [m1, m2] = pairs[i];
    B.values[m1 * L + m2] = B.values[m2 * L + m1] = sums[i].value;
    B.errors[m1 * L + m2] = B.errors[m2 * L + m1] = sums[i].error;
  }
  return B;
}

namespace {

std::complex<double> phased_total(const BlockMatrix& B, const RationalAngle& theta, std::int64_t p, std::int64_t q,
                                  unsigned levels) {
  ComplexCompensatedSum acc;
  for (unsigned m1 = 0; m1 < levels; ++m1) {
    for (unsigned m2 = 0; m2 < levels; ++m2) {
      acc.add(phase_power(theta, p * m1 + q * m2) * B.at(m1, m2));
    }
  }
  return acc.value();
}

}  // namespace

std::complex<double> hard_example_sum(const RationalAngle& theta, std::int64_t p, std::int64_t q, std::uint64_t M,
                                      BlockMode mode) {
  const BlockMatrix B = block_matrix(M, 1, false, mode);
  return phased_total(B, theta, p, q, B.levels);
}

BlockSumReport hard_example_series(const RationalAngle& theta, std::int64_t p, std::int64_t q, int n_lo, int n_hi,
                                   BlockMode mode, unsigned M_cut) {
  if (n_lo < 0 || n_hi < n_lo || n_hi > 52) throw RangeError("hard_example_series: need 0 <= n_lo <= n_hi <= 52");
  BlockSumReport r;
  r.theta = theta;
  r.p = p;
  r.q = q;
  const bool resonant = theta.scaled(p + q).is_multiple_of_2pi();
  r.predicted_slope = resonant ? fourier_F(theta.scaled(p), M_cut).value : 0.0;
  const std::uint64_t M = (std::uint64_t{1} << (n_hi + 1)) - 1;
  const BlockMatrix B = block_matrix(M, 1, false, mode);
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::complex<double> S = phased_total(B, theta, p, q, static_cast<unsigned>(n + 1));
    const double rem = std::abs(S - static_cast<double>(n) * r.predicted_slope);
    r.levels.push_back(n);
    r.M_checkpoints.push_back(std::ldexp(1.0, n + 1) - 1.0);
    r.sums.push_back(S);
    r.remainders.push_back(rem);
    r.remainder_sup = std::max(r.remainder_sup, rem);
  }
  return r;
}

namespace {

traces::LogLinearFit factor_fit(const RationalAngle& theta, std::int64_t p, const ProductTraceConfig& cfg) {
  sequences::WeightedSequence seq;
  if (p != 0) seq.numerator = DiagonalSequence::phase_block(theta, p);
  seq.weight = DiagonalSequence::zeta_weight(1);
  const auto series = traces::index_partial_sums(seq, traces::dyadic_checkpoints(cfg.factor_j_lo, cfg.factor_j_hi),
                                                 traces::SumMode::BlockAnalytic);
  return traces::measurability_fit(series);
}

traces::LogLinearFit product_fit(const RationalAngle& theta, std::int64_t p, std::int64_t q,
                                 const ProductTraceConfig& cfg) {
  traces::SeparableWeight w;
  if (p != 0) w.a = DiagonalSequence::phase_block(theta, p);
  if (q != 0) w.b = DiagonalSequence::phase_block(theta, q);
  w.shift = 1.0;
  const auto series = traces::square_window_sums(
      w, squared_window_checkpoints(cfg.product_j_lo, cfg.product_j_hi), cfg.product_mode);
  return traces::measurability_fit(series);
}

}  // namespace

FubiniReport hard_example_product_traces(const RationalAngle& theta, std::int64_t p, const ProductTraceConfig& config) {
  FubiniReport r;
  r.theta = theta;
  r.p = p;
  r.F = fourier_F(theta.scaled(p));
  r.product_target = r.F.value / (2.0 * std::numbers::ln2);
  r.product = product_fit(theta, p, -p, config);
  r.factor = factor_fit(theta, p, config);
  r.factor_inverse = factor_fit(theta, -p, config);
  constexpr double q4 = std::numbers::pi / 4.0;
  r.fubini_prediction = q4 * r.factor.c * r.factor_inverse.c;
  r.discrepancy = std::abs(r.product.c - r.fubini_prediction);
  const double s1 = r.factor.slope_stderr;
  const double s2 = r.factor_inverse.slope_stderr;
  r.combined_error = r.product.slope_stderr + q4 * (std::abs(r.factor.c) * s2 + std::abs(r.factor_inverse.c) * s1 + s1 * s2);
  r.fubini_fails = r.discrepancy > 5.0 * r.combined_error;
  return r;
}

PositiveElementReport positive_element_traces(const RationalAngle& theta, const ProductTraceConfig& config) {
  const std::array<std::pair<std::int64_t, double>, 3> terms{{{1, 1.0}, {-1, 1.0}, {0, 2.0}}};
  std::vector<std::tuple<std::int64_t, std::int64_t, double>> jobs;
  for (const auto& [a, ca] : terms) {
    for (const auto& [b, cb] : terms) jobs.emplace_back(a, b, ca * cb);
  }
  PositiveElementReport r;
  for (const auto& [a, b, coef] : jobs) {
    const auto fit = product_fit(theta, a, b, config);
    r.c_product += coef * fit.c.real();
    r.c_product_error += coef * fit.slope_stderr;
  }
  for (const auto& [a, coef] : terms) {
    const auto fit = factor_fit(theta, a, config);
    r.c_factor += coef * fit.c.real();
    r.c_factor_error += coef * fit.slope_stderr;
  }
  r.fubini_value = std::numbers::pi / 4.0 * r.c_factor * r.c_factor;
  r.gap_prediction = fourier_F(theta).value / std::numbers::ln2;
  return r;
}

SecondExampleReport second_example_traces(const SecondExampleConfig& config) {
  SecondExampleReport r;
  const XiTable table = xi_table(XiVariant::Xi0, 2 * config.xi_terms);
  r.xi0_zero = {table.values[0], table.error_bounds[0]};
  CompensatedSum acc;
  r.xi0_even_sum_error = table.error_bounds[0];
  for (unsigned m = config.xi_terms; m >= 1; --m) {
    acc.add(2.0 * table.values[2 * m]);
    r.xi0_even_sum_error += 2.0 * table.error_bounds[2 * m];
  }
  acc.add(table.values[0]);
  r.xi0_even_sum = acc.value();
  r.xi0_even_sum_error += 2.0 * xi_tail_bound(XiVariant::Xi0, 2 * config.xi_terms);

  const double half = (1.0 + 1.0 / 128.0) / 2.0;
  r.one_dim_target = half;
  r.two_dim_target = half * half * r.xi0_even_sum / (7.0 * std::numbers::ln2);

  sequences::WeightedSequence seq;
  seq.weight = DiagonalSequence::zeta_weight(1, 7);
  r.one_dim = traces::measurability_fit(traces::index_partial_sums(
      seq, power_checkpoints(1, config.one_dim_j_lo, config.one_dim_j_hi), traces::SumMode::BlockAnalytic));

  traces::SeparableWeight w;
  w.dilation_exponent = 7;
  w.shift = 1.0;
  r.two_dim = traces::measurability_fit(traces::square_window_sums(
      w, power_checkpoints(2, config.two_dim_j_lo, config.two_dim_j_hi), traces::SumMode::BlockAnalytic));

  constexpr double q4 = std::numbers::pi / 4.0;
  const double c1 = r.one_dim.c.real();
  const double s1 = r.one_dim.slope_stderr;
  r.fubini_value = q4 * c1 * c1;
  r.margin = r.two_dim.c.real() - r.fubini_value;
  r.combined_error = r.two_dim.slope_stderr + q4 * (2.0 * std::abs(c1) * s1 + s1 * s1);
  r.inequality_holds = r.margin > 5.0 * r.combined_error;
  return r;
}

}  // namespace fubini::counterexamples
