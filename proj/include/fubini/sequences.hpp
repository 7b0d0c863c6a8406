#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fubini/summation.hpp"

namespace fubini::sequences {

// theta = 2 pi * numerator / denominator, kept in lowest terms.
class RationalAngle {
 public:
  RationalAngle() = default;
  RationalAngle(std::int64_t numerator, std::int64_t denominator);

  // Parses "p/q" (or "p" for q = 1).
  static RationalAngle parse(std::string_view text);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  bool is_multiple_of_2pi() const { return num_ % den_ == 0; }
  RationalAngle scaled(std::int64_t factor) const;
  double radians() const;
  std::string to_string() const;

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// e^{2 pi i r / d} for 0 <= r < d, exact at quarter turns.
std::complex<double> root_of_unity(std::int64_t r, std::int64_t d);

// floor(log2 k) for k >= 1.
int dyadic_level(std::uint64_t k);

std::complex<double> eval_phase(const RationalAngle& angle, std::int64_t power, std::uint64_t k);
std::uint64_t eval_dilated(unsigned base_exponent, std::uint64_t k);

// Half-open [lo, hi) with integer endpoints; long double holds 2^1024 exactly.
struct Interval {
  long double lo = 0;
  long double hi = 0;
};

class IntervalList {
 public:
  IntervalList() = default;
  // Throws ConfigurationError unless sorted, disjoint, nonempty, integral.
  explicit IntervalList(std::vector<Interval> intervals);
  static IntervalList everything();

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool contains(long double k) const;
  bool empty() const { return intervals_.empty(); }

 private:
  std::vector<Interval> intervals_;
};

int eval_indicator(const IntervalList& blocks, std::uint64_t k);

// n_m = 2^(4^m) for m = 1..m_max, blocks [n_{2m}, n_{2m+1}).
struct Schedule {
  std::vector<std::uint64_t> exponents;  // exponents[m-1] = 4^m
  std::uint64_t exponent(unsigned m) const { return exponents.at(m - 1); }
  // 2^(4^m) as long double; RangeError past the long double range.
  long double n(unsigned m) const;
  IntervalList blocks() const;
};

Schedule lacunary_schedule(unsigned m_max);

enum class Kind { Harmonic, PhaseBlock, Dilated, ZetaWeight, Indicator, Custom };

std::string_view kind_name(Kind kind);

class DiagonalSequence {
 public:
  static DiagonalSequence harmonic();
  static DiagonalSequence phase_block(RationalAngle angle, std::int64_t power = 1);
  static DiagonalSequence dilated(unsigned base_exponent = 7);
  // (1 + d(k)^2)^{-p/2}; dilation_exponent = 0 means d(k) = k.
  static DiagonalSequence zeta_weight(unsigned p, unsigned dilation_exponent = 0);
  static DiagonalSequence indicator(IntervalList blocks);
  // Arbitrary entries with a declared envelope C (|x(k)| <= C/(k+1)); C <= 0 declares none.
  static DiagonalSequence custom(std::function<std::complex<double>(std::uint64_t)> f, double envelope,
                                 std::string name);

  Kind kind() const { return kind_; }
  std::complex<double> operator()(std::uint64_t k) const;
  // Declared C with |x(k)| <= C/(k+1), if any.
  std::optional<double> envelope_constant() const;
  // sup_k |x(k)|, if finite.
  std::optional<double> sup_modulus() const;
  std::string describe() const;

  const RationalAngle& angle() const { return angle_; }
  std::int64_t power() const { return power_; }
  unsigned base_exponent() const { return base_exponent_; }
  unsigned zeta_p() const { return zeta_p_; }
  const IntervalList& blocks() const { return blocks_; }

 private:
  Kind kind_ = Kind::Harmonic;
  RationalAngle angle_;
  std::int64_t power_ = 1;
  unsigned base_exponent_ = 0;
  unsigned zeta_p_ = 1;
  IntervalList blocks_;
  std::function<std::complex<double>(std::uint64_t)> custom_;
  double custom_envelope_ = 0.0;
  std::string name_;
};

// A piece [lo, hi) on which the entry is coefficient * weight(k).
struct Segment {
  long double lo = 0;
  long double hi = 0;
  std::complex<double> coefficient;
  summation::Weight weight;
};

// x(k) = numerator(k) * weight(k); a missing numerator means 1.
struct WeightedSequence {
  std::optional<DiagonalSequence> numerator;
  DiagonalSequence weight = DiagonalSequence::harmonic();

  std::complex<double> operator()(std::uint64_t k) const;
  std::optional<double> envelope_constant() const;
  // Piecewise description over [lo, hi) when both parts have closed-form block structure.
  bool has_segments() const;
  std::vector<Segment> segments(long double lo, long double hi) const;
  std::string describe() const;
};

// Breakpoints of the piecewise-constant structure of a numerator or dilation within (lo, hi).
std::vector<long double> breakpoints(const DiagonalSequence& seq, long double lo, long double hi);
// Value of a piecewise-constant numerator on the block containing k (k may exceed 2^64).
std::complex<double> block_value(const DiagonalSequence& seq, long double k);
// Scale factor d(k)/k on the block containing k >= 1.
double dilation_scale(unsigned base_exponent, long double k);

}  // namespace fubini::sequences
