// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include <cmath>

#include "fubini/compensated.hpp"
#include "fubini/kernels.hpp"

namespace fubini::kernels {
namespace {

struct Lanes {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d bp = _mm256_sub_pd(t, s);
    const __m256d e = _mm256_add_pd(_mm256_sub_pd(s, _mm256_sub_pd(t, bp)), _mm256_sub_pd(x, bp));
    s = t;
    c = _mm256_add_pd(c, e);
  }

  // Fixed merge order: lane sums 0..3, then lane compensations 0..3.
  CompensatedSum reduce() const {
    alignas(32) double ss[4];
    alignas(32) double cc[4];
    _mm256_store_pd(ss, s);
    _mm256_store_pd(cc, c);
    CompensatedSum acc;
    for (double v : ss) acc.add(v);
    for (double v : cc) acc.add(v);
    return acc;
  }
};

inline __m256d index_vector(double k0) { return _mm256_setr_pd(k0, k0 + 1.0, k0 + 2.0, k0 + 3.0); }

double sum_avx2(const double* x, std::size_t n) {
  Lanes lanes;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) lanes.add(_mm256_loadu_pd(x + i));
  CompensatedSum acc = lanes.reduce();
  for (; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double inverse_linear_avx2(double k0, std::uint64_t n, double a, double b) {
  Lanes lanes;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d k = index_vector(k0);
  std::uint64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lanes.add(_mm256_div_pd(one, _mm256_add_pd(va, _mm256_mul_pd(vb, k))));
    k = _mm256_add_pd(k, four);
  }
  CompensatedSum acc = lanes.reduce();
  for (; i < n; ++i) acc.add(1.0 / (a + b * (k0 + static_cast<double>(i))));
  return acc.value();
}

double inverse_sqrt_quadratic_avx2(double k0, std::uint64_t n, double a, double b) {
  Lanes lanes;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d k = index_vector(k0);
  std::uint64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_add_pd(va, _mm256_mul_pd(vb, _mm256_mul_pd(k, k)));
    lanes.add(_mm256_div_pd(one, _mm256_sqrt_pd(q)));
    k = _mm256_add_pd(k, four);
  }
  CompensatedSum acc = lanes.reduce();
  for (; i < n; ++i) {
    const double kk = k0 + static_cast<double>(i);
    acc.add(1.0 / std::sqrt(a + b * (kk * kk)));
  }
  return acc.value();
}

double inverse_quadratic_avx2(double k0, std::uint64_t n, double a, double b) {
  Lanes lanes;
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d k = index_vector(k0);
  std::uint64_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d q = _mm256_add_pd(va, _mm256_mul_pd(vb, _mm256_mul_pd(k, k)));
    lanes.add(_mm256_div_pd(one, q));
    k = _mm256_add_pd(k, four);
  }
  CompensatedSum acc = lanes.reduce();
  for (; i < n; ++i) {
    const double kk = k0 + static_cast<double>(i);
    acc.add(1.0 / (a + b * (kk * kk)));
  }
  return acc.value();
}

inline __m256d shell_weight(__m256d base, int q) {
  const __m256d one = _mm256_set1_pd(1.0);
  switch (q) {
    case 1: return _mm256_div_pd(one, _mm256_sqrt_pd(base));
    case 2: return _mm256_div_pd(one, base);
    case 3: return _mm256_div_pd(one, _mm256_mul_pd(base, _mm256_sqrt_pd(base)));
    default: return _mm256_div_pd(one, _mm256_mul_pd(base, base));
  }
}

double shell_weight_scalar(double base, int q) {
  switch (q) {
    case 1: return 1.0 / std::sqrt(base);
    case 2: return 1.0 / base;
    case 3: return 1.0 / (base * std::sqrt(base));
    default: return 1.0 / (base * base);
  }
}

double shell_weights_avx2(const double* w, std::size_t n, double n0, int q) {
  Lanes lanes;
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d base = index_vector(1.0 + n0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lanes.add(_mm256_mul_pd(_mm256_loadu_pd(w + i), shell_weight(base, q)));
    base = _mm256_add_pd(base, four);
  }
  CompensatedSum acc = lanes.reduce();
  for (; i < n; ++i) {
    if (w[i] == 0.0) continue;
    acc.add(w[i] * shell_weight_scalar(1.0 + n0 + static_cast<double>(i), q));
  }
  return acc.value();
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{sum_avx2, inverse_linear_avx2, inverse_sqrt_quadratic_avx2,
                                 inverse_quadratic_avx2, shell_weights_avx2};
  return table;
}

}  // namespace fubini::kernels
