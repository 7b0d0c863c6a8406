#pragma once

#include <complex>

namespace fubini {

// Error-free transformation: a + b = s + e exactly.
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bp = s - a;
  e = (a - (s - bp)) + (b - bp);
}

class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double v) : sum_(v) {}

  void add(double x) {
    double s, e;
    two_sum(sum_, x, s, e);
    sum_ = s;
    comp_ += e;
  }
  void add(const CompensatedSum& o) {
    add(o.sum_);
    add(o.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(const ComplexCompensatedSum& o) {
    re_.add(o.re_);
    im_.add(o.im_);
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace fubini
