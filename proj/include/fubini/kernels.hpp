#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Compensated summation kernels with a scalar reference and an AVX2 variant.
// The active variant is chosen once at first use from CPUID; setting
// FUBINI_FORCE_SCALAR=1 in the environment pins the scalar path.
namespace fubini::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
// Overrides the runtime choice; throws ConfigurationError if unavailable.
void set_isa(Isa isa);

struct KernelTable {
  // sum of x[0..n)
  double (*sum)(const double* x, std::size_t n);
  // sum_{i<n} 1/(a + b*(k0+i))
  double (*inverse_linear)(double k0, std::uint64_t n, double a, double b);
  // sum_{i<n} 1/sqrt(a + b*(k0+i)^2)
  double (*inverse_sqrt_quadratic)(double k0, std::uint64_t n, double a, double b);
  // sum_{i<n} 1/(a + b*(k0+i)^2)
  double (*inverse_quadratic)(double k0, std::uint64_t n, double a, double b);
  // sum_{i<n} w[i] * (1 + n0 + i)^(-q/2), q in 1..4
  double (*shell_weights)(const double* w, std::size_t n, double n0, int q);
};

const KernelTable& scalar_table();
#if defined(FUBINI_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
const KernelTable& table_for(Isa isa);
const KernelTable& active();

inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sum_inverse_linear(double k0, std::uint64_t n, double a, double b) {
  return active().inverse_linear(k0, n, a, b);
}
inline double sum_inverse_sqrt_quadratic(double k0, std::uint64_t n, double a, double b) {
  return active().inverse_sqrt_quadratic(k0, n, a, b);
}
inline double sum_inverse_quadratic(double k0, std::uint64_t n, double a, double b) {
  return active().inverse_quadratic(k0, n, a, b);
}
inline double sum_shell_weights(const double* w, std::size_t n, double n0, int q) {
  return active().shell_weights(w, n, n0, q);
}

}  // namespace fubini::kernels
