#include "fubini/traces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fubini/block2d.hpp"
#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/parallel.hpp"

namespace fubini::traces {

using sequences::DiagonalSequence;
using sequences::WeightedSequence;
using summation::Method;
using summation::RangeSum;

std::string_view surrogate_name(Surrogate s) {
  switch (s) {
    case Surrogate::EigenvalueOrdered: return "eigenvalue_ordered";
    case Surrogate::IndexOrdered: return "index_ordered";
    case Surrogate::SquareWindow: return "square_window";
    case Surrogate::Synthetic: return "synthetic";
  }
  return "?";
}

std::string_view sum_mode_name(SumMode m) {
  switch (m) {
    case SumMode::Auto: return "auto";
    case SumMode::Direct: return "direct";
    case SumMode::BlockAnalytic: return "block_analytic";
  }
  return "?";
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::UniversallyMeasurableEvidence: return "UniversallyMeasurableEvidence";
    case Verdict::TauberianOnlyEvidence: return "TauberianOnlyEvidence";
    case Verdict::NotTauberianEvidence: return "NotTauberianEvidence";
  }
  return "?";
}

namespace {

void check_checkpoints(const std::vector<double>& checkpoints) {
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    const double n = checkpoints[i];
    if (!(n >= 0.0) || !std::isfinite(n) || n != std::floor(n)) {
      throw ConfigurationError("checkpoints must be nonnegative integers");
    }
    if (i > 0 && !(n > checkpoints[i - 1])) throw ConfigurationError("checkpoints must be strictly increasing");
  }
}

constexpr double kTwo64 = 18446744073709551616.0;

void check_envelope(const WeightedSequence& seq, double envelope, double max_checkpoint) {
  std::vector<std::uint64_t> sample;
  for (std::uint64_t k = 0; k < 64; ++k) sample.push_back(k);
  for (int j = 6; j < 64; ++j) {
    const std::uint64_t p = std::uint64_t{1} << j;
    if (static_cast<double>(p) > max_checkpoint + 1.0) break;
    sample.insert(sample.end(), {p - 1, p, p + 1});
  }
  for (std::uint64_t k : sample) {
    const double bound = envelope / (static_cast<double>(k) + 1.0);
    if (std::abs(seq(k)) > bound * (1.0 + 1e-12)) {
      throw ContractError("envelope |x(k)| <= C/(k+1) violated at k = " + std::to_string(k) + " for " + seq.describe());
    }
  }
}

struct SeriesBuilder {
  PartialSumSeries series;
  ComplexCompensatedSum acc;
  double error = 0.0;

  void add(std::complex<double> v, double err) {
    acc.add(v);
    error += err;
  }
  void record(double n) {
    series.checkpoints.push_back(n);
    series.values.push_back(acc.value());
    series.error_bounds.push_back(error);
  }
};

// Sum of x(k) for k in [lo, hi), evaluating entries one by one.
std::complex<double> generic_range(const WeightedSequence& seq, std::uint64_t lo, std::uint64_t hi) {
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  if (hi <= lo) return {};
  const std::size_t chunks = static_cast<std::size_t>((hi - lo + kChunk - 1) / kChunk);
  const auto parts = parallel_map<ComplexCompensatedSum>(chunks, [&](std::size_t c) {
    ComplexCompensatedSum s;
    const std::uint64_t a = lo + c * kChunk;
    const std::uint64_t b = std::min(hi, a + kChunk);
    for (std::uint64_t k = a; k < b; ++k) s.add(seq(k));
    return s;
  });
  ComplexCompensatedSum total;
  for (const auto& p : parts) total.add(p);
  return total.value();
}

}  // namespace

void PartialSumSeries::validate() const {
  if (values.size() != checkpoints.size() || error_bounds.size() != checkpoints.size()) {
    throw ConfigurationError("PartialSumSeries: mismatched lengths");
  }
  check_checkpoints(checkpoints);
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DiagnosticError("PartialSumSeries: non-finite value");
  }
}

std::vector<double> dyadic_checkpoints(int lo, int hi, int step) {
  if (step <= 0 || hi < lo) throw ConfigurationError("dyadic_checkpoints: need lo <= hi and step > 0");
  std::vector<double> out;
  for (int j = lo; j <= hi; j += step) out.push_back(std::ldexp(1.0, j));
  return out;
}

PartialSumSeries eigen_partial_sums(const WeightedSequence& seq, const std::vector<double>& checkpoints, double slack) {
  check_checkpoints(checkpoints);
  const auto env = seq.envelope_constant();
  if (!env) throw ContractError("eigen_partial_sums: " + seq.describe() + " declares no envelope");
  if (!(slack > 0.0)) throw ConfigurationError("eigen_partial_sums: slack must be positive");
  PartialSumSeries out;
  out.surrogate = Surrogate::EigenvalueOrdered;
  if (checkpoints.empty()) return out;
  const double max_n = checkpoints.back();
  if (max_n > 2.0e8) throw RangeError("eigen_partial_sums: checkpoint beyond the enumeration budget");
  const auto keep = static_cast<std::size_t>(max_n) + 1;
  const auto scan = static_cast<std::size_t>(std::ceil(static_cast<double>(keep) * (1.0 + slack)));

  std::vector<std::complex<double>> values(scan);
  std::vector<double> moduli(scan);
  constexpr std::size_t kChunk = std::size_t{1} << 16;
  parallel_for((scan + kChunk - 1) / kChunk, [&](std::size_t c) {
    const std::size_t hi = std::min(scan, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < hi; ++k) {
      values[k] = seq(k);
      moduli[k] = std::abs(values[k]);
    }
  });
  std::vector<std::uint32_t> order(scan);
  std::iota(order.begin(), order.end(), 0u);
  auto before = [&](std::uint32_t i, std::uint32_t j) { return moduli[i] > moduli[j] || (moduli[i] == moduli[j] && i < j); };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep - 1), order.end(), before);
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), before);

  const double outside = *env / (static_cast<double>(scan) + 1.0);
  if (!(moduli[order[keep - 1]] > outside)) {
    throw DiagnosticError("eigen_partial_sums: ordering not determinable within slack window for " + seq.describe());
  }
  ComplexCompensatedSum acc;
  std::size_t next = 0;
  for (double n : checkpoints) {
    const auto upto = static_cast<std::size_t>(n) + 1;
    for (; next < upto; ++next) acc.add(values[order[next]]);
    out.checkpoints.push_back(n);
    out.values.push_back(acc.value());
    out.error_bounds.push_back(0.0);
  }
  return out;
}

PartialSumSeries eigen_partial_sums(const std::vector<std::complex<double>>& entries, double tail_bound,
                                    const std::vector<double>& checkpoints) {
  check_checkpoints(checkpoints);
  PartialSumSeries out;
  out.surrogate = Surrogate::EigenvalueOrdered;
  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> moduli(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) moduli[i] = std::abs(entries[i]);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return moduli[i] > moduli[j]; });
  ComplexCompensatedSum acc;
  std::size_t next = 0;
  for (double n : checkpoints) {
    const auto upto = static_cast<std::size_t>(n) + 1;
    if (upto > entries.size() && tail_bound > 0.0) {
      throw DiagnosticError("eigen_partial_sums: checkpoint beyond the supplied entries");
    }
    const std::size_t stop = std::min(upto, entries.size());
    if (stop > 0 && stop < entries.size() && tail_bound > 0.0 && !(moduli[order[stop - 1]] > tail_bound)) {
      throw DiagnosticError("eigen_partial_sums: ordering not determinable against the tail bound");
    }
    for (; next < stop; ++next) acc.add(entries[order[next]]);
    out.checkpoints.push_back(n);
    out.values.push_back(acc.value());
    out.error_bounds.push_back(0.0);
  }
  return out;
}

PartialSumSeries index_partial_sums(const WeightedSequence& seq, const std::vector<double>& checkpoints, SumMode mode) {
  check_checkpoints(checkpoints);
  const auto env = seq.envelope_constant();
  if (!env) throw ContractError("index_partial_sums: " + seq.describe() + " declares no envelope");
  SeriesBuilder b;
  b.series.surrogate = Surrogate::IndexOrdered;
  if (checkpoints.empty()) return b.series;
  check_envelope(seq, *env, checkpoints.back());

  if (mode == SumMode::Auto) mode = seq.has_segments() ? SumMode::BlockAnalytic : SumMode::Direct;
  if (mode == SumMode::BlockAnalytic && !seq.has_segments()) {
    throw ConfigurationError("index_partial_sums: block-analytic mode needs closed-form blocks: " + seq.describe());
  }
  long double prev = 0;
  for (double n : checkpoints) {
    const long double hi = static_cast<long double>(n) + 1;
    if (seq.has_segments()) {
      const Method method = mode == SumMode::Direct ? Method::Direct : Method::Analytic;
      for (const auto& seg : seq.segments(prev, hi)) {
        const RangeSum r = summation::range_sum(seg.weight, seg.lo, seg.hi, method);
        b.add(seg.coefficient * r.value, std::abs(seg.coefficient) * r.error);
      }
    } else {
      if (static_cast<double>(hi) > 1.0e12) throw RangeError("index_partial_sums: direct range too long");
      b.add(generic_range(seq, static_cast<std::uint64_t>(prev), static_cast<std::uint64_t>(hi)), 0.0);
    }
    prev = hi;
    b.record(n);
  }
  return b.series;
}

std::complex<double> SeparableWeight::operator()(std::uint64_t k, std::uint64_t l) const {
  std::complex<double> num = 1.0;
  if (a) num *= (*a)(k);
  if (b) num *= (*b)(l);
  double dk = static_cast<double>(k);
  double dl = static_cast<double>(l);
  if (dilation_exponent) {
    dk = static_cast<double>(sequences::eval_dilated(dilation_exponent, k));
    dl = static_cast<double>(sequences::eval_dilated(dilation_exponent, l));
  }
  return num / (shift + dk * dk + dl * dl);
}

std::string SeparableWeight::describe() const {
  std::string s = "(";
  s += a ? a->describe() : "1";
  s += ") x (";
  s += b ? b->describe() : "1";
  s += ") / (" + std::to_string(shift) + " + d(k)^2 + d(l)^2)";
  if (dilation_exponent) s += ", dilation 2^" + std::to_string(dilation_exponent);
  return s;
}

long double window_side(double n) {
  if (n < kTwo64) {
    const auto v = static_cast<std::uint64_t>(n);
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(v)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > v) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= v) ++r;
    return static_cast<long double>(r);
  }
  return std::floor(std::sqrt(static_cast<long double>(n)));
}

namespace {

struct AxisPiece {
  long double lo, hi;
  std::complex<double> value;
  double scale;
};

std::vector<AxisPiece> axis_pieces(const std::optional<DiagonalSequence>& num, unsigned dilation, long double lo,
                                   long double hi) {
  std::vector<long double> cuts{lo, hi};
  if (num) {
    const auto b = sequences::breakpoints(*num, lo, hi);
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  if (dilation) {
    const auto b = sequences::breakpoints(DiagonalSequence::dilated(dilation), lo, hi);
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<AxisPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const std::complex<double> v = num ? sequences::block_value(*num, cuts[i]) : std::complex<double>(1.0);
    if (v == std::complex<double>(0.0)) continue;
    const double scale = dilation ? sequences::dilation_scale(dilation, cuts[i]) : 1.0;
    out.push_back({cuts[i], cuts[i + 1], v, scale});
  }
  return out;
}

}  // namespace

PartialSumSeries square_window_sums(const SeparableWeight& weight, const std::vector<double>& checkpoints,
                                    SumMode mode) {
  check_checkpoints(checkpoints);
  if (!(weight.shift > 0.0)) throw ConfigurationError("square_window_sums: shift must be positive");
  for (const auto* part : {&weight.a, &weight.b}) {
    if (*part && (*part)->kind() != sequences::Kind::PhaseBlock && (*part)->kind() != sequences::Kind::Indicator) {
      throw ConfigurationError("square_window_sums: numerators must be phase blocks or indicators");
    }
  }
  const Method method = mode == SumMode::Direct ? Method::Direct : Method::Analytic;
  SeriesBuilder b;
  b.series.surrogate = Surrogate::SquareWindow;
  auto add_rect = [&](long double k_lo, long double k_hi, long double l_lo, long double l_hi) {
    if (k_hi <= k_lo || l_hi <= l_lo) return;
    const auto ks = axis_pieces(weight.a, weight.dilation_exponent, k_lo, k_hi);
    const auto ls = axis_pieces(weight.b, weight.dilation_exponent, l_lo, l_hi);
    for (const auto& kp : ks) {
      for (const auto& lp : ls) {
        const RangeSum r =
            summation::rect_sum(weight.shift, kp.scale, lp.scale, {kp.lo, kp.hi, lp.lo, lp.hi}, method);
        b.add(kp.value * lp.value * r.value, r.error);
      }
    }
  };
  long double prev = 0;  // window [0, prev) x [0, prev) already summed
  for (double n : checkpoints) {
    const long double side = window_side(n) + 1;
    if (method == Method::Direct && side > 131072) throw RangeError("square_window_sums: direct window too large");
    add_rect(prev, side, 0, prev);
    add_rect(0, side, prev, side);
    prev = std::max(prev, side);
    b.record(n);
  }
  return b.series;
}

PartialSumSeries square_window_sums(const WindowWeight& weight, const std::vector<double>& checkpoints) {
  check_checkpoints(checkpoints);
  SeriesBuilder b;
  b.series.surrogate = Surrogate::SquareWindow;
  auto term = [&](std::uint64_t k, std::uint64_t l) {
    const std::complex<double> v = weight.f(k, l);
    const double kk = static_cast<double>(k);
    const double ll = static_cast<double>(l);
    if (std::abs(v) > weight.envelope / (1.0 + kk * kk + ll * ll) * (1.0 + 1e-12)) {
      throw ContractError("square_window_sums: envelope violated at (" + std::to_string(k) + ", " +
                          std::to_string(l) + ")");
    }
    return v;
  };
  std::uint64_t prev = 0;
  for (double n : checkpoints) {
    const auto side = static_cast<std::uint64_t>(window_side(n)) + 1;
    if (side > 16385) throw RangeError("square_window_sums: generic window too large");
    for (std::uint64_t k = prev; k < side; ++k) {
      ComplexCompensatedSum shell;
      for (std::uint64_t l = 0; l < k; ++l) {
        shell.add(term(k, l));
        shell.add(term(l, k));
      }
      shell.add(term(k, k));
      b.add(shell.value(), 0.0);
    }
    prev = std::max(prev, side);
    b.record(n);
  }
  return b.series;
}

std::vector<std::complex<double>> dixmier_estimate(const PartialSumSeries& series) {
  if (series.size() == 0) throw ConfigurationError("dixmier_estimate: empty series");
  std::vector<std::complex<double>> out;
  out.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) out.push_back(series.values[i] / std::log(series.checkpoints[i] + 2.0));
  return out;
}

namespace {

struct LineFit {
  std::complex<double> slope, intercept;
  double sxx = 0.0, xbar = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<std::complex<double>>& y, std::size_t lo, std::size_t hi) {
  const double n = static_cast<double>(hi - lo);
  double xbar = 0.0;
  std::complex<double> ybar = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    xbar += x[i];
    ybar += y[i];
  }
  xbar /= n;
  ybar /= n;
  double sxx = 0.0;
  std::complex<double> sxy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = ybar - f.slope * xbar;
  f.sxx = sxx;
  f.xbar = xbar;
  return f;
}

}  // namespace

LogLinearFit measurability_fit(const PartialSumSeries& series, std::optional<FitWindow> window,
                               const VerdictThresholds& thresholds) {
  series.validate();
  const FitWindow w = window.value_or(FitWindow{0, series.size() == 0 ? 0 : series.size() - 1});
  if (w.last >= series.size() || w.last < w.first || w.last - w.first + 1 < 6) {
    throw ConfigurationError("measurability_fit: window needs at least 6 checkpoints");
  }
  std::vector<double> x;
  std::vector<std::complex<double>> y;
  LogLinearFit fit;
  for (std::size_t i = w.first; i <= w.last; ++i) {
    x.push_back(std::log(series.checkpoints[i] + 1.0));
    y.push_back(series.values[i]);
    fit.checkpoints.push_back(series.checkpoints[i]);
  }
  const std::size_t n = x.size();
  const LineFit all = fit_line(x, y, 0, n);
  fit.c = all.slope;
  fit.intercept = all.intercept;
  double sq = 0.0;
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::complex<double> r = y[i] - fit.c * x[i];
    fit.remainders.push_back(r);
    fit.remainder_sup = std::max(fit.remainder_sup, std::abs(r));
    const double e = std::abs(r - fit.intercept);
    sq += e * e;
    abs_sum += e;
  }
  fit.mean_residual = abs_sum / static_cast<double>(n);
  fit.slope_stderr = std::sqrt(sq / static_cast<double>(n - 2) / all.sxx);
  const std::size_t half = n / 2;
  const LineFit early = fit_line(x, y, 0, half);
  const LineFit late = fit_line(x, y, half, n);
  fit.drift = std::abs(late.slope - early.slope) * (x.back() - x.front());
  fit.tail_ratio = std::abs(fit.remainders.back()) / x.back();

  const double trend_allowance = std::max(thresholds.trend_floor, thresholds.trend_factor * fit.mean_residual);
  if (fit.remainder_sup <= thresholds.remainder_max && fit.drift <= trend_allowance) {
    fit.verdict = Verdict::UniversallyMeasurableEvidence;
  } else if (fit.tail_ratio < thresholds.tauberian_ratio) {
    fit.verdict = Verdict::TauberianOnlyEvidence;
  } else {
    fit.verdict = Verdict::NotTauberianEvidence;
  }
  return fit;
}

}  // namespace fubini::traces
