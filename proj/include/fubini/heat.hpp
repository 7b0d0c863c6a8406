#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fubini/sequences.hpp"

namespace fubini::heat {

enum class ThetaKind { Plain, Abs, Square };

struct HeatSample {
  double t = 0.0;
  double value = 0.0;
  double tail_bound = 0.0;
};

// sum over l in Z of |l|^j e^{-l^2 t^2} (j = 0, 1, 2), truncated once the
// certified Gaussian tail drops below 1e-16 of the partial sum.
HeatSample theta_sum_sample(ThetaKind kind, double t);
double theta_sum(ThetaKind kind, double t);
// The same sum truncated at |l| <= cutoff, with the tail bound for that cutoff.
HeatSample theta_sum_truncated(ThetaKind kind, double t, long cutoff);

HeatSample heat_trace_torus_sample(unsigned p, double tau, double t);
double heat_trace_torus(unsigned p, double tau, double t);
HeatSample heat_trace_sphere_sample(double t);
double heat_trace_sphere(double t);
// sum over l in Z_+/2 of (2l+1)^2 e^{-4 l^2 t^2}
HeatSample heat_trace_suq2_sample(double t);
double heat_trace_suq2(double t);

enum class Model { ThetaPlain, ThetaAbs, ThetaSquare, TorusP, Sphere, SUq2, ProductOfCurves, Sampled };
std::string model_name(Model m);

struct HeatTraceCurve {
  Model model = Model::Sampled;
  unsigned torus_p = 0;
  double tau = 0.0;
  std::vector<HeatSample> samples;  // t strictly decreasing
  std::string label;
};

// points log-uniform values from t_max down to t_min.
std::vector<double> log_grid(double t_min, double t_max, unsigned points);
HeatTraceCurve make_curve(Model model, const std::vector<double>& grid, unsigned torus_p = 1, double tau = 1.0);
HeatTraceCurve sampled_curve(const std::vector<double>& grid, const std::function<double(double)>& value,
                             std::string label);

struct AsymptoticExtract {
  double p = 0.0;
  double c = 0.0;
  double slope = 0.0;          // linear coefficient b of t^p value ~ c + b t
  double epsilon_fit = 0.0;    // +inf when the residual is at roundoff level
  std::vector<double> residual_log_slopes;
  double quartile_spread = 0.0;
};

AsymptoticExtract extract_c(const HeatTraceCurve& curve, double p);
HeatTraceCurve product_curve(const HeatTraceCurve& a, const HeatTraceCurve& b);

// Phi(s) = (1/Gamma(1+p/2)) int_s^inf exp(-t^{2/p}) dt.
double phi_cutoff(double p, double s);

// Phi tabulated on a uniform grid with cubic Hermite interpolation using the
// exact derivative -exp(-s^{2/p})/Gamma(1+p/2).
class PhiTable {
 public:
  explicit PhiTable(double p, double step = 1.0 / 256.0);
  double operator()(double s) const;
  // Beyond this argument Phi < 1e-16.
  double support() const { return support_; }

 private:
  double density(double s) const;
  double p_;
  double step_;
  double support_;
  double norm_;
  std::vector<double> values_;
};

struct SmoothedSharp {
  double n = 0.0;
  double smoothed = 0.0;
  double sharp = 0.0;
  double delta = 0.0;
};

// Delta(n) = sum_k A(k) V(k) Phi(1/(n V(k))) - sum_{V(k) >= 1/n} A(k) V(k).
// A missing A means A = 1.
std::vector<SmoothedSharp> smoothed_vs_sharp(const sequences::DiagonalSequence& V,
                                             const std::optional<sequences::DiagonalSequence>& A, double p,
                                             const std::vector<double>& n_grid);

// (1/log T) int_1^T f(s) ds/s by the trapezoidal rule in log s; samples must
// start at s = 1, end at s = T and be log-uniform.
double log_cesaro_mean(const std::vector<std::pair<double, double>>& samples, double T);
double log_cesaro_mean(const std::function<double(double)>& f, double T, unsigned points = 256);

}  // namespace fubini::heat
