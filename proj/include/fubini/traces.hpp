#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "fubini/sequences.hpp"

namespace fubini::traces {

enum class Surrogate { EigenvalueOrdered, IndexOrdered, SquareWindow, Synthetic };
std::string_view surrogate_name(Surrogate s);

enum class SumMode { Auto, Direct, BlockAnalytic };
std::string_view sum_mode_name(SumMode m);

struct PartialSumSeries {
  std::vector<double> checkpoints;  // increasing nonnegative integers; may exceed 2^64
  std::vector<std::complex<double>> values;
  std::vector<double> error_bounds;  // truncation/quadrature bound per checkpoint
  Surrogate surrogate = Surrogate::Synthetic;

  std::size_t size() const { return checkpoints.size(); }
  void validate() const;
};

// 2^lo, 2^(lo+step), ..., up to 2^hi.
std::vector<double> dyadic_checkpoints(int lo, int hi, int step = 1);

// Partial sums over the first n+1 entries in order of decreasing modulus
// (ties by ascending index). Entries are scanned up to (max checkpoint + 1)(1 + slack).
PartialSumSeries eigen_partial_sums(const sequences::WeightedSequence& seq, const std::vector<double>& checkpoints,
                                    double slack = 1.0);
// Explicit finite entry list; entries past the list have modulus <= tail_bound.
PartialSumSeries eigen_partial_sums(const std::vector<std::complex<double>>& entries, double tail_bound,
                                    const std::vector<double>& checkpoints);

// S(n) = sum_{k=0}^{n} x(k).
PartialSumSeries index_partial_sums(const sequences::WeightedSequence& seq, const std::vector<double>& checkpoints,
                                    SumMode mode = SumMode::Auto);

// x(k, l) = a(k) b(l) / (shift + d(k)^2 + d(l)^2) with a, b piecewise constant
// (phase blocks or indicators, missing means 1) and d the optional dilation.
struct SeparableWeight {
  std::optional<sequences::DiagonalSequence> a;
  std::optional<sequences::DiagonalSequence> b;
  unsigned dilation_exponent = 0;
  double shift = 1.0;

  std::complex<double> operator()(std::uint64_t k, std::uint64_t l) const;
  std::string describe() const;
};

// Generic weight with a declared envelope |x(k,l)| <= C / (1 + k^2 + l^2).
struct WindowWeight {
  std::function<std::complex<double>(std::uint64_t, std::uint64_t)> f;
  double envelope = 1.0;
};

// S(n) = sum over k, l <= floor(sqrt(n)).
PartialSumSeries square_window_sums(const SeparableWeight& weight, const std::vector<double>& checkpoints,
                                    SumMode mode = SumMode::Auto);
PartialSumSeries square_window_sums(const WindowWeight& weight, const std::vector<double>& checkpoints);

// floor(sqrt(n)) for a nonnegative integer n held in a double.
long double window_side(double n);

// S(n) / log(n + 2).
std::vector<std::complex<double>> dixmier_estimate(const PartialSumSeries& series);

enum class Verdict { UniversallyMeasurableEvidence, TauberianOnlyEvidence, NotTauberianEvidence };
std::string_view verdict_name(Verdict v);

struct VerdictThresholds {
  double remainder_max = 50.0;   // R_max
  double trend_floor = 2.0;      // drift allowed regardless of noise
  double trend_factor = 2.0;     // drift allowed per unit of mean residual
  double tauberian_ratio = 0.02; // |r(n_last)| / log(n_last + 1)
};

struct FitWindow {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

struct LogLinearFit {
  std::complex<double> c;
  std::complex<double> intercept;
  std::vector<double> checkpoints;                // window checkpoints
  std::vector<std::complex<double>> remainders;   // S(n) - c log(n+1)
  double remainder_sup = 0.0;
  double slope_stderr = 0.0;   // least-squares standard error of c
  double mean_residual = 0.0;  // mean |S - c x - intercept|
  double drift = 0.0;          // |c_late - c_early| * (x_last - x_first)
  double tail_ratio = 0.0;     // |r(n_last)| / log(n_last + 1)
  Verdict verdict = Verdict::NotTauberianEvidence;
};

// Least-squares fit of S against log(n+1) over window (whole series by default).
LogLinearFit measurability_fit(const PartialSumSeries& series, std::optional<FitWindow> window = std::nullopt,
                               const VerdictThresholds& thresholds = {});

}  // namespace fubini::traces
