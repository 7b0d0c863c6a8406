#include <cmath>

#include "fubini/compensated.hpp"
#include "fubini/kernels.hpp"

namespace fubini::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) acc.add(x[i]);
  return acc.value();
}

double inverse_linear_scalar(double k0, std::uint64_t n, double a, double b) {
  CompensatedSum acc;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double k = k0 + static_cast<double>(i);
    acc.add(1.0 / (a + b * k));
  }
  return acc.value();
}

double inverse_sqrt_quadratic_scalar(double k0, std::uint64_t n, double a, double b) {
  CompensatedSum acc;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double k = k0 + static_cast<double>(i);
    acc.add(1.0 / std::sqrt(a + b * (k * k)));
  }
  return acc.value();
}

double inverse_quadratic_scalar(double k0, std::uint64_t n, double a, double b) {
  CompensatedSum acc;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double k = k0 + static_cast<double>(i);
    acc.add(1.0 / (a + b * (k * k)));
  }
  return acc.value();
}

double shell_weight(double base, int q) {
  switch (q) {
    case 1: return 1.0 / std::sqrt(base);
    case 2: return 1.0 / base;
    case 3: return 1.0 / (base * std::sqrt(base));
    default: return 1.0 / (base * base);
  }
}

double shell_weights_scalar(const double* w, std::size_t n, double n0, int q) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] == 0.0) continue;
    acc.add(w[i] * shell_weight(1.0 + n0 + static_cast<double>(i), q));
  }
  return acc.value();
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{sum_scalar, inverse_linear_scalar, inverse_sqrt_quadratic_scalar,
                                 inverse_quadratic_scalar, shell_weights_scalar};
  return table;
}

}  // namespace fubini::kernels
