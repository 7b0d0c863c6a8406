#include "fubini/sequences.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fubini/errors.hpp"

namespace fubini::sequences {

RationalAngle::RationalAngle(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw ConfigurationError("RationalAngle: zero denominator");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  const std::int64_t g = std::gcd(numerator, denominator);
  num_ = numerator / g;
  den_ = denominator / g;
}

RationalAngle RationalAngle::parse(std::string_view text) {
  auto parse_int = [&](std::string_view part) {
    std::int64_t v = 0;
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    if (!part.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
      throw ConfigurationError("cannot parse angle fraction: " + std::string(text));
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return {parse_int(text), 1};
  return {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
}

RationalAngle RationalAngle::scaled(std::int64_t factor) const {
  const __int128 n = static_cast<__int128>(num_) * factor;
  return {static_cast<std::int64_t>(n % den_), den_};
}

double RationalAngle::radians() const {
  const std::int64_t r = ((num_ % den_) + den_) % den_;
  return 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(den_);
}

std::string RationalAngle::to_string() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::complex<double> root_of_unity(std::int64_t r, std::int64_t d) {
  r = ((r % d) + d) % d;
  if ((4 * static_cast<__int128>(r)) % d == 0) {
    switch (static_cast<int>(4 * static_cast<__int128>(r) / d)) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double x = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(d);
  return {std::cos(x), std::sin(x)};
}

int dyadic_level(std::uint64_t k) { return static_cast<int>(std::bit_width(k)) - 1; }

std::complex<double> eval_phase(const RationalAngle& angle, std::int64_t power, std::uint64_t k) {
  if (k == 0) return {1.0, 0.0};
  const __int128 n = dyadic_level(k);
  const __int128 e = (n * power % angle.denominator()) * angle.numerator() % angle.denominator();
  return root_of_unity(static_cast<std::int64_t>(e), angle.denominator());
}

std::uint64_t eval_dilated(unsigned base_exponent, std::uint64_t k) {
  if (base_exponent == 0 || base_exponent >= 64) throw RangeError("eval_dilated: base exponent must be in 1..63");
  if (k == 0) return 0;
  const unsigned level = static_cast<unsigned>(dyadic_level(k)) / base_exponent;
  if (level % 2 == 0) return k;
  if (k > (~std::uint64_t{0} >> base_exponent)) throw RangeError("eval_dilated: d(k) exceeds 64 bits");
  return k << base_exponent;
}

IntervalList::IntervalList(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lo >= 0) || !(iv.hi > iv.lo) || iv.lo != std::floor(iv.lo) || (std::isfinite(iv.hi) && iv.hi != std::floor(iv.hi))) {
      throw ConfigurationError("IntervalList: each interval must be a nonempty integer range [lo, hi)");
    }
    if (i > 0 && iv.lo < intervals_[i - 1].hi) {
      throw ConfigurationError("IntervalList: intervals must be sorted and disjoint");
    }
  }
}

IntervalList IntervalList::everything() {
  return IntervalList({{0.0L, std::numeric_limits<long double>::infinity()}});
}

bool IntervalList::contains(long double k) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), k,
                             [](long double v, const Interval& iv) { return v < iv.hi; });
  return it != intervals_.end() && it->lo <= k;
}

int eval_indicator(const IntervalList& blocks, std::uint64_t k) {
  return blocks.contains(static_cast<long double>(k)) ? 1 : 0;
}

long double Schedule::n(unsigned m) const {
  const std::uint64_t e = exponent(m);
  if (e >= static_cast<std::uint64_t>(std::numeric_limits<long double>::max_exponent)) {
    throw RangeError("Schedule: 2^" + std::to_string(e) + " exceeds the long double range");
  }
  return std::ldexp(1.0L, static_cast<int>(e));
}

IntervalList Schedule::blocks() const {
  std::vector<Interval> out;
  for (unsigned m = 1; 2 * m + 1 <= exponents.size(); ++m) out.push_back({n(2 * m), n(2 * m + 1)});
  return IntervalList(std::move(out));
}

Schedule lacunary_schedule(unsigned m_max) {
  if (m_max < 2) throw ConfigurationError("lacunary_schedule: m_max must be at least 2");
  if (m_max >= 32) throw RangeError("lacunary_schedule: 4^m overflows the 64-bit exponent for m >= 32");
  Schedule s;
  std::uint64_t e = 1;
  for (unsigned m = 1; m <= m_max; ++m) {
    e *= 4;
    s.exponents.push_back(e);
  }
  return s;
}

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::Harmonic: return "harmonic";
    case Kind::PhaseBlock: return "phase_block";
    case Kind::Dilated: return "dilated";
    case Kind::ZetaWeight: return "zeta_weight";
    case Kind::Indicator: return "indicator";
    case Kind::Custom: return "custom";
  }
  return "?";
}

DiagonalSequence DiagonalSequence::harmonic() { return {}; }

DiagonalSequence DiagonalSequence::phase_block(RationalAngle angle, std::int64_t power) {
  DiagonalSequence s;
  s.kind_ = Kind::PhaseBlock;
  s.angle_ = angle;
  s.power_ = power;
  return s;
}

DiagonalSequence DiagonalSequence::dilated(unsigned base_exponent) {
  if (base_exponent == 0 || base_exponent >= 64) throw ConfigurationError("dilated: base exponent must be in 1..63");
  DiagonalSequence s;
  s.kind_ = Kind::Dilated;
  s.base_exponent_ = base_exponent;
  return s;
}

DiagonalSequence DiagonalSequence::zeta_weight(unsigned p, unsigned dilation_exponent) {
  if (p == 0) throw ConfigurationError("zeta_weight: p must be positive");
  if (dilation_exponent >= 64) throw ConfigurationError("zeta_weight: dilation exponent must be below 64");
  DiagonalSequence s;
  s.kind_ = Kind::ZetaWeight;
  s.zeta_p_ = p;
  s.base_exponent_ = dilation_exponent;
  return s;
}

DiagonalSequence DiagonalSequence::indicator(IntervalList blocks) {
  DiagonalSequence s;
  s.kind_ = Kind::Indicator;
  s.blocks_ = std::move(blocks);
  return s;
}

DiagonalSequence DiagonalSequence::custom(std::function<std::complex<double>(std::uint64_t)> f, double envelope,
                                          std::string name) {
  DiagonalSequence s;
  s.kind_ = Kind::Custom;
  s.custom_ = std::move(f);
  s.custom_envelope_ = envelope;
  s.name_ = std::move(name);
  return s;
}

std::complex<double> DiagonalSequence::operator()(std::uint64_t k) const {
  switch (kind_) {
    case Kind::Harmonic: return 1.0 / (static_cast<double>(k) + 1.0);
    case Kind::PhaseBlock: return eval_phase(angle_, power_, k);
    case Kind::Dilated: return static_cast<double>(eval_dilated(base_exponent_, k));
    case Kind::ZetaWeight: {
      const double d = base_exponent_ == 0 ? static_cast<double>(k)
                                           : static_cast<double>(k) * dilation_scale(base_exponent_, static_cast<long double>(k));
      const double q = 1.0 + d * d;
      switch (zeta_p_) {
        case 1: return 1.0 / std::sqrt(q);
        case 2: return 1.0 / q;
        default: return std::pow(q, -0.5 * zeta_p_);
      }
    }
    case Kind::Indicator: return static_cast<double>(eval_indicator(blocks_, k));
    case Kind::Custom: return custom_(k);
  }
  return 0.0;
}

std::optional<double> DiagonalSequence::envelope_constant() const {
  switch (kind_) {
    case Kind::Harmonic: return 1.0;
    // (k+1)(1+k^2)^{-1/2} <= sqrt(2), and d(k) >= k.
    case Kind::ZetaWeight: return std::numbers::sqrt2;
    case Kind::Custom:
      if (custom_envelope_ > 0.0) return custom_envelope_;
      return std::nullopt;
    default: return std::nullopt;
  }
}

std::optional<double> DiagonalSequence::sup_modulus() const {
  switch (kind_) {
    case Kind::Harmonic:
    case Kind::PhaseBlock:
    case Kind::ZetaWeight: return 1.0;
    case Kind::Indicator: return blocks_.empty() ? 0.0 : 1.0;
    case Kind::Dilated: return std::nullopt;
    case Kind::Custom: return envelope_constant();
  }
  return std::nullopt;
}

std::string DiagonalSequence::describe() const {
  switch (kind_) {
    case Kind::Harmonic: return "harmonic";
    case Kind::PhaseBlock:
      return "phase_block(theta=2pi*" + angle_.to_string() + ", power=" + std::to_string(power_) + ")";
    case Kind::Dilated: return "dilated(base=2^" + std::to_string(base_exponent_) + ")";
    case Kind::ZetaWeight:
      return "zeta_weight(p=" + std::to_string(zeta_p_) +
             (base_exponent_ ? ", dilation=2^" + std::to_string(base_exponent_) : std::string()) + ")";
    case Kind::Indicator: return "indicator(" + std::to_string(blocks_.intervals().size()) + " blocks)";
    case Kind::Custom: return name_.empty() ? "custom" : name_;
  }
  return "?";
}

double dilation_scale(unsigned base_exponent, long double k) {
  if (k < 1) return 1.0;
  const int level = std::ilogb(k) / static_cast<int>(base_exponent);
  return level % 2 == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(base_exponent));
}

std::complex<double> block_value(const DiagonalSequence& seq, long double k) {
  switch (seq.kind()) {
    case Kind::PhaseBlock: {
      if (k < 1) return {1.0, 0.0};
      const __int128 n = std::ilogb(k);
      const auto& a = seq.angle();
      const __int128 e = (n * seq.power() % a.denominator()) * a.numerator() % a.denominator();
      return root_of_unity(static_cast<std::int64_t>(e), a.denominator());
    }
    case Kind::Indicator: return seq.blocks().contains(k) ? 1.0 : 0.0;
    default: throw ConfigurationError("block_value: sequence is not piecewise constant: " + seq.describe());
  }
}

std::vector<long double> breakpoints(const DiagonalSequence& seq, long double lo, long double hi) {
  std::vector<long double> out;
  auto powers = [&](unsigned step) {
    for (int e = 0; e < std::numeric_limits<long double>::max_exponent - 1; e += static_cast<int>(step)) {
      const long double v = std::ldexp(1.0L, e);
      if (v >= hi) break;
      if (v > lo) out.push_back(v);
    }
  };
  switch (seq.kind()) {
    case Kind::PhaseBlock: powers(1); break;
    case Kind::Dilated: powers(seq.base_exponent()); break;
    case Kind::ZetaWeight:
      if (seq.base_exponent() != 0) powers(seq.base_exponent());
      break;
    case Kind::Indicator:
      for (const auto& iv : seq.blocks().intervals()) {
        if (iv.lo > lo && iv.lo < hi) out.push_back(iv.lo);
        if (iv.hi > lo && iv.hi < hi) out.push_back(iv.hi);
      }
      break;
    default: break;
  }
  return out;
}

std::complex<double> WeightedSequence::operator()(std::uint64_t k) const {
  const std::complex<double> w = weight(k);
  return numerator ? (*numerator)(k) * w : w;
}

std::optional<double> WeightedSequence::envelope_constant() const {
  std::optional<double> best;
  auto consider = [&](std::optional<double> env, std::optional<double> sup) {
    if (env && sup && (!best || *env * *sup < *best)) best = *env * *sup;
  };
  consider(weight.envelope_constant(), numerator ? numerator->sup_modulus() : std::optional<double>(1.0));
  if (numerator) consider(numerator->envelope_constant(), weight.sup_modulus());
  return best;
}

bool WeightedSequence::has_segments() const {
  if (numerator && numerator->kind() != Kind::PhaseBlock && numerator->kind() != Kind::Indicator) return false;
  if (weight.kind() == Kind::Harmonic) return true;
  return weight.kind() == Kind::ZetaWeight && (weight.zeta_p() == 1 || weight.zeta_p() == 2);
}

std::vector<Segment> WeightedSequence::segments(long double lo, long double hi) const {
  if (!has_segments()) throw ConfigurationError("no closed-form block structure for " + describe());
  std::vector<long double> cuts{lo, hi};
  if (numerator) {
    const auto b = breakpoints(*numerator, lo, hi);
    cuts.insert(cuts.end(), b.begin(), b.end());
  }
  const auto wb = breakpoints(weight, lo, hi);
  cuts.insert(cuts.end(), wb.begin(), wb.end());
  if (weight.kind() == Kind::ZetaWeight && weight.base_exponent() != 0 && lo < 1 && hi > 1) cuts.push_back(1);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const long double a = cuts[i];
    const long double b = cuts[i + 1];
    const std::complex<double> coef = numerator ? block_value(*numerator, a) : std::complex<double>(1.0);
    if (coef == std::complex<double>(0.0)) continue;
    summation::Weight w;
    if (weight.kind() == Kind::Harmonic) {
      w = {summation::Family::InverseLinear, 1.0, 1.0};
    } else {
      const double c = weight.base_exponent() ? dilation_scale(weight.base_exponent(), a) : 1.0;
      w = {weight.zeta_p() == 1 ? summation::Family::InverseSqrtQuadratic : summation::Family::InverseQuadratic, 1.0, c};
    }
    out.push_back({a, b, coef, w});
  }
  return out;
}

std::string WeightedSequence::describe() const {
  return numerator ? numerator->describe() + " * " + weight.describe() : weight.describe();
}

}  // namespace fubini::sequences
