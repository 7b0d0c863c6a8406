#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "fubini/sequences.hpp"
#include "fubini/traces.hpp"

namespace fubini::counterexamples {

// Xi(m): integral of 1/(t^2+s^2) over [1,2] x [2^m, 2^{m+1}].
// Xi0(m): the same over [1,2^7] x [2^{7m}, 2^{7(m+1)}].
enum class XiVariant { Xi, Xi0 };
std::string xi_variant_name(XiVariant v);

struct XiValue {
  double value = 0.0;
  double error = 0.0;
};

// Negative m is read as |m|.
XiValue xi(XiVariant variant, std::int64_t m);
// 2^{-m} for Xi, (2^7-1)^2 2^{-7m} for Xi0.
double xi_upper_bound(XiVariant variant, std::uint64_t m);
// Bound on sum_{m > M} of the entries.
double xi_tail_bound(XiVariant variant, std::uint64_t M);

struct XiTable {
  XiVariant variant = XiVariant::Xi;
  std::vector<double> values;        // m = 0..M
  std::vector<double> error_bounds;
  double at(std::int64_t m) const;
};

XiTable xi_table(XiVariant variant, unsigned M);

struct FourierValue {
  double value = 0.0;
  double tail_bound = 0.0;
  double quadrature_error = 0.0;
  double total_error() const { return tail_bound + quadrature_error; }
};

// F(theta) = sum over m in Z of Xi(|m|) e^{i m theta}, truncated at |m| <= M_cut.
FourierValue fourier_F(const sequences::RationalAngle& theta, unsigned M_cut = 40, XiVariant variant = XiVariant::Xi);

struct ThetaChoice {
  sequences::RationalAngle theta;
  FourierValue F;
  std::vector<std::pair<sequences::RationalAngle, FourierValue>> candidates;
};

std::vector<sequences::RationalAngle> default_theta_candidates();
// Candidate with the largest |F| among those with |F| > margin * total error; ties keep list order.
ThetaChoice choose_theta(const std::vector<sequences::RationalAngle>& candidates, unsigned M_cut = 40,
                         double margin = 10.0);

enum class BlockMode { Direct, BlockAnalytic };
std::string block_mode_name(BlockMode m);

// Direct mode handles M up to this bound.
inline constexpr std::uint64_t kDirectMaxM = std::uint64_t{1} << 14;

// B(m1, m2) = sum over k in [2^{b m1}, 2^{b(m1+1)}) and l in [2^{b m2}, 2^{b(m2+1)}),
// both clipped to [1, M], of 1/(d(k)^2 + d(l)^2), with b = base_exponent and
// d(k) = k, or d(k) = 2^b k on odd levels when dilated.
struct BlockMatrix {
  unsigned levels = 0;
  unsigned base_exponent = 1;
  bool dilated = false;
  std::vector<double> values;  // row-major levels x levels
  std::vector<double> errors;
  double at(unsigned m1, unsigned m2) const { return values[m1 * levels + m2]; }
  double error_at(unsigned m1, unsigned m2) const { return errors[m1 * levels + m2]; }
};

BlockMatrix block_matrix(std::uint64_t M, unsigned base_exponent, bool dilated, BlockMode mode);

// sum_{k,l=1}^{M} x_theta^p(k) x_theta^q(l) / (k^2 + l^2).
std::complex<double> hard_example_sum(const sequences::RationalAngle& theta, std::int64_t p, std::int64_t q,
                                      std::uint64_t M, BlockMode mode);

struct BlockSumReport {
  sequences::RationalAngle theta;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::vector<int> levels;                // n, with M = 2^{n+1} - 1
  std::vector<double> M_checkpoints;
  std::vector<std::complex<double>> sums;
  std::vector<double> remainders;         // |S(M) - n * predicted_slope|
  double predicted_slope = 0.0;
  double remainder_sup = 0.0;
};

// Evaluates S(2^{n+1} - 1) for n in [n_lo, n_hi] from one block matrix. The
// predicted slope is F(p theta) when (p + q) theta is in 2 pi Z and 0 otherwise.
BlockSumReport hard_example_series(const sequences::RationalAngle& theta, std::int64_t p, std::int64_t q, int n_lo,
                                   int n_hi, BlockMode mode, unsigned M_cut = 40);

struct FubiniReport {
  sequences::RationalAngle theta;
  std::int64_t p = 1;
  FourierValue F;
  double product_target = 0.0;  // F(p theta) / (2 log 2)
  traces::LogLinearFit product;  // x^p(k) x^{-p}(l) / (1 + k^2 + l^2)
  traces::LogLinearFit factor;   // x^p(k) / (1 + k^2)^{1/2}
  traces::LogLinearFit factor_inverse;
  std::complex<double> fubini_prediction;  // (pi/4) c_factor c_factor_inverse
  double discrepancy = 0.0;
  double combined_error = 0.0;
  bool fubini_fails = false;
};

struct ProductTraceConfig {
  int product_j_lo = 4;
  int product_j_hi = 13;   // n = (2^j - 1)^2
  traces::SumMode product_mode = traces::SumMode::Direct;
  int factor_j_lo = 8;
  int factor_j_hi = 62;    // n = 2^j
};

FubiniReport hard_example_product_traces(const sequences::RationalAngle& theta, std::int64_t p,
                                         const ProductTraceConfig& config = {});

// T = U + U^{-1} + 2: c(T (x) T) from the nine separable square-window fits
// against (pi/4) c(T)^2 from the three index fits.
struct PositiveElementReport {
  double c_product = 0.0;
  double c_product_error = 0.0;
  double c_factor = 0.0;
  double c_factor_error = 0.0;
  double fubini_value = 0.0;  // (pi/4) c_factor^2
  double gap_prediction = 0.0;  // F(theta) / log 2
};

PositiveElementReport positive_element_traces(const sequences::RationalAngle& theta,
                                              const ProductTraceConfig& config = {});

struct SecondExampleConfig {
  int one_dim_j_lo = 7;
  int one_dim_j_hi = 63;   // n = 2^j
  int two_dim_j_lo = 7;
  int two_dim_j_hi = 63;   // n = 4^j
  unsigned xi_terms = 8;   // Xi0(2m) for m <= xi_terms
};

struct SecondExampleReport {
  XiValue xi0_zero;
  double xi0_even_sum = 0.0;      // sum over m in Z of Xi0(2m)
  double xi0_even_sum_error = 0.0;
  double one_dim_target = 0.0;    // (1 + 2^-7) / 2
  double two_dim_target = 0.0;
  traces::LogLinearFit one_dim;
  traces::LogLinearFit two_dim;
  double fubini_value = 0.0;      // (pi/4) c_1^2
  double margin = 0.0;            // c_2 - (pi/4) c_1^2
  double combined_error = 0.0;
  bool inequality_holds = false;  // margin > 5 * combined_error
};

SecondExampleReport second_example_traces(const SecondExampleConfig& config = {});

}  // namespace fubini::counterexamples
