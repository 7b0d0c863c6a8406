#include "fubini/heat.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fubini/compensated.hpp"
#include "fubini/errors.hpp"
#include "fubini/parallel.hpp"
#include "fubini/quadrature.hpp"

namespace fubini::heat {
namespace {

constexpr double kTMin = 1e-4;
constexpr double kTMax = 10.0;
constexpr double kRelTail = 1e-16;

void check_t(double t) {
  if (!(t >= kTMin && t <= kTMax)) throw RangeError("heat: t must lie in [1e-4, 10]");
}

int theta_power(ThetaKind kind) {
  switch (kind) {
    case ThetaKind::Plain: return 0;
    case ThetaKind::Abs: return 1;
    case ThetaKind::Square: return 2;
  }
  return 0;
}

// int_L^inf x^j exp(-t^2 x^2) dx, an upper bound for sum_{l > L} l^j exp(-t^2 l^2)
// once the summand is decreasing on [L, inf).
double gaussian_tail(int j, double t, double L) {
  const double tl = t * L;
  const double g = std::exp(-tl * tl);
  switch (j) {
    case 0: return std::sqrt(std::numbers::pi) / (2.0 * t) * std::erfc(tl);
    case 1: return g / (2.0 * t * t);
    default: return L * g / (2.0 * t * t) + std::sqrt(std::numbers::pi) / (4.0 * t * t * t) * std::erfc(tl);
  }
}

double one_sided(int j, double t, long L) {
  CompensatedSum acc;
  for (long l = L; l >= 1; --l) {
    const double x = static_cast<double>(l);
    const double g = std::exp(-(x * t) * (x * t));
    acc.add(j == 0 ? g : (j == 1 ? x * g : x * x * g));
  }
  return acc.value();
}

long initial_cutoff(int j, double t) {
  const double decreasing_from = std::sqrt(0.5 * j + 1.0) / t;
  return static_cast<long>(std::ceil(std::max(decreasing_from, 6.0 / t)));
}

}  // namespace

HeatSample theta_sum_truncated(ThetaKind kind, double t, long cutoff) {
  check_t(t);
  const int j = theta_power(kind);
  const long L = std::max(cutoff, static_cast<long>(std::ceil(std::sqrt(0.5 * j + 1.0) / t)));
  HeatSample s;
  s.t = t;
  s.value = (j == 0 ? 1.0 : 0.0) + 2.0 * one_sided(j, t, L);
  s.tail_bound = 2.0 * gaussian_tail(j, t, static_cast<double>(L));
  return s;
}

HeatSample theta_sum_sample(ThetaKind kind, double t) {
  check_t(t);
  const int j = theta_power(kind);
  long L = initial_cutoff(j, t);
  HeatSample s = theta_sum_truncated(kind, t, L);
  while (s.tail_bound > kRelTail * s.value) {
    L += L / 4 + 1;
    s = theta_sum_truncated(kind, t, L);
  }
  return s;
}

double theta_sum(ThetaKind kind, double t) { return theta_sum_sample(kind, t).value; }

HeatSample heat_trace_torus_sample(unsigned p, double tau, double t) {
  if (p == 0 || p > 4) throw RangeError("heat_trace_torus: p must be in 1..4");
  const HeatSample th = theta_sum_sample(ThetaKind::Plain, t);
  const double m = std::ldexp(1.0, static_cast<int>(p / 2));
  HeatSample s;
  s.t = t;
  s.value = m * tau * std::pow(th.value, static_cast<double>(p));
  s.tail_bound = m * std::abs(tau) * (std::pow(th.value + th.tail_bound, static_cast<double>(p)) - std::pow(th.value, static_cast<double>(p)));
  return s;
}

double heat_trace_torus(unsigned p, double tau, double t) { return heat_trace_torus_sample(p, tau, t).value; }

HeatSample heat_trace_sphere_sample(double t) { return theta_sum_sample(ThetaKind::Abs, t); }
double heat_trace_sphere(double t) { return heat_trace_sphere_sample(t).value; }

HeatSample heat_trace_suq2_sample(double t) {
  check_t(t);
  // j = 2l runs over Z_+: (j+1)^2 exp(-j^2 t^2).
  auto tail = [&](long J) {
    const double x = static_cast<double>(J);
    return gaussian_tail(2, t, x) + 2.0 * gaussian_tail(1, t, x) + gaussian_tail(0, t, x);
  };
  auto sum_to = [&](long J) {
    CompensatedSum acc;
    for (long j = J; j >= 0; --j) {
      const double x = static_cast<double>(j);
      acc.add((x + 1.0) * (x + 1.0) * std::exp(-(x * t) * (x * t)));
    }
    return acc.value();
  };
  long J = static_cast<long>(std::ceil(std::max(2.0 / t, 6.0 / t)));
  double value = sum_to(J);
  while (tail(J) > kRelTail * value) {
    J += J / 4 + 1;
    value = sum_to(J);
  }
  return {t, value, tail(J)};
}

double heat_trace_suq2(double t) { return heat_trace_suq2_sample(t).value; }

std::string model_name(Model m) {
  switch (m) {
    case Model::ThetaPlain: return "theta_plain";
    case Model::ThetaAbs: return "theta_abs";
    case Model::ThetaSquare: return "theta_square";
    case Model::TorusP: return "torus";
    case Model::Sphere: return "sphere";
    case Model::SUq2: return "suq2";
    case Model::ProductOfCurves: return "product";
    case Model::Sampled: return "sampled";
  }
  return "?";
}

std::vector<double> log_grid(double t_min, double t_max, unsigned points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) throw ConfigurationError("log_grid: need 0 < t_min < t_max, points >= 2");
  std::vector<double> out(points);
  const double a = std::log(t_max);
  const double b = std::log(t_min);
  for (unsigned i = 0; i < points; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / (points - 1));
  out.front() = t_max;
  out.back() = t_min;
  return out;
}

HeatTraceCurve make_curve(Model model, const std::vector<double>& grid, unsigned torus_p, double tau) {
  HeatTraceCurve c;
  c.model = model;
  c.torus_p = torus_p;
  c.tau = tau;
  c.label = model_name(model);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) throw ConfigurationError("make_curve: t-grid must be strictly decreasing");
  }
  for (double t : grid) {
    switch (model) {
      case Model::ThetaPlain: c.samples.push_back(theta_sum_sample(ThetaKind::Plain, t)); break;
      case Model::ThetaAbs: c.samples.push_back(theta_sum_sample(ThetaKind::Abs, t)); break;
      case Model::ThetaSquare: c.samples.push_back(theta_sum_sample(ThetaKind::Square, t)); break;
      case Model::TorusP: c.samples.push_back(heat_trace_torus_sample(torus_p, tau, t)); break;
      case Model::Sphere: c.samples.push_back(heat_trace_sphere_sample(t)); break;
      case Model::SUq2: c.samples.push_back(heat_trace_suq2_sample(t)); break;
      default: throw ConfigurationError("make_curve: model has no generator: " + model_name(model));
    }
  }
  if (model == Model::TorusP) c.label = "torus(p=" + std::to_string(torus_p) + ")";
  return c;
}

HeatTraceCurve sampled_curve(const std::vector<double>& grid, const std::function<double(double)>& value,
                             std::string label) {
  HeatTraceCurve c;
  c.model = Model::Sampled;
  c.label = std::move(label);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] < grid[i - 1])) throw ConfigurationError("sampled_curve: t-grid must be strictly decreasing");
  }
  for (double t : grid) c.samples.push_back({t, value(t), 0.0});
  return c;
}

AsymptoticExtract extract_c(const HeatTraceCurve& curve, double p) {
  const auto& s = curve.samples;
  if (s.size() < 8) throw ConfigurationError("extract_c: need at least 8 samples");
  std::vector<HeatSample> asc(s.rbegin(), s.rend());
  if (!(asc.back().t >= 100.0 * asc.front().t)) throw ConfigurationError("extract_c: grid must span two decades of t");
  const std::size_t half = (asc.size() + 1) / 2;
  const std::size_t quarter = std::max<std::size_t>(2, asc.size() / 4);
  std::vector<double> t(half), y(half);
  for (std::size_t i = 0; i < half; ++i) {
    t[i] = asc[i].t;
    y[i] = std::pow(asc[i].t, p) * asc[i].value;
  }
  AsymptoticExtract out;
  out.p = p;
  {
    double lo = y[0], hi = y[0], mean = 0.0;
    for (std::size_t i = 0; i < quarter; ++i) {
      lo = std::min(lo, y[i]);
      hi = std::max(hi, y[i]);
      mean += y[i];
    }
    mean /= static_cast<double>(quarter);
    out.quartile_spread = hi == lo ? 0.0 : (mean == 0.0 ? std::numeric_limits<double>::infinity() : (hi - lo) / std::abs(mean));
    if (out.quartile_spread > 0.2) {
      throw DiagnosticError("extract_c: t^p value not stabilizing (relative spread " + std::to_string(out.quartile_spread) +
                            " on the smallest-t quartile)");
    }
  }
  // y ~ c + b t + a t^2 on the smallest-t half, in the scaled variable t / t_ref.
  const double t_ref = t.back();
  Eigen::MatrixXd X(half, 3);
  Eigen::VectorXd Y(half);
  for (std::size_t i = 0; i < half; ++i) {
    const double u = t[i] / t_ref;
    X(static_cast<Eigen::Index>(i), 0) = 1.0;
    X(static_cast<Eigen::Index>(i), 1) = u;
    X(static_cast<Eigen::Index>(i), 2) = u * u;
    Y(static_cast<Eigen::Index>(i)) = y[i];
  }
  const Eigen::Vector3d coef = X.colPivHouseholderQr().solve(Y);
  out.c = coef(0);
  out.slope = coef(1) / t_ref;

  std::vector<double> lt, lr;
  const double floor = 256.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < half; ++i) {
    const double r = std::abs(y[i] - out.c);
    if (r > floor * std::max(std::abs(y[i]), std::abs(out.c))) {
      lt.push_back(std::log(t[i]));
      lr.push_back(std::log(r));
    }
  }
  for (std::size_t i = 1; i < lt.size(); ++i) out.residual_log_slopes.push_back((lr[i] - lr[i - 1]) / (lt[i] - lt[i - 1]));
  if (lt.size() < 3) {
    out.epsilon_fit = std::numeric_limits<double>::infinity();
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      mx += lt[i];
      my += lr[i];
    }
    mx /= static_cast<double>(lt.size());
    my /= static_cast<double>(lt.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      sxx += (lt[i] - mx) * (lt[i] - mx);
      sxy += (lt[i] - mx) * (lr[i] - my);
    }
    out.epsilon_fit = sxy / sxx;
  }
  return out;
}

HeatTraceCurve product_curve(const HeatTraceCurve& a, const HeatTraceCurve& b) {
  if (a.samples.size() != b.samples.size()) throw ConfigurationError("product_curve: mismatched grids");
  HeatTraceCurve out;
  out.model = Model::ProductOfCurves;
  out.label = a.label + " x " + b.label;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& x = a.samples[i];
    const auto& y = b.samples[i];
    if (x.t != y.t) throw ConfigurationError("product_curve: mismatched grids");
    out.samples.push_back({x.t, x.value * y.value,
                           std::abs(x.value) * y.tail_bound + std::abs(y.value) * x.tail_bound + x.tail_bound * y.tail_bound});
  }
  return out;
}

double phi_cutoff(double p, double s) {
  if (!(p > 0.0)) throw RangeError("phi_cutoff: p must be positive");
  if (!(s > 0.0)) throw RangeError("phi_cutoff: s must be positive");
  constexpr double kTol = 1e-13;
  const double a = 0.5 * p;
  auto upper_part = [&](double u0) {
    // (1/Gamma(a)) int_{u0}^inf u^{a-1} e^{-u} du, with e^{-u0} factored out.
    const double span = 60.0 + 4.0 * a;
    const auto est = quadrature::adaptive_simpson(
        [&](double v) { return std::pow(u0 + v, a - 1.0) * std::exp(-v); }, 0.0, span, kTol);
    return std::exp(-u0 - std::lgamma(a)) * est.value;
  };
  if (s >= 1.0) return upper_part(std::pow(s, 2.0 / p));
  const double head = quadrature::adaptive_simpson([&](double t) { return std::exp(-std::pow(t, 2.0 / p)); }, s, 1.0, kTol).value;
  return upper_part(1.0) + head / std::tgamma(1.0 + a);
}

PhiTable::PhiTable(double p, double step) : p_(p), step_(step), norm_(std::tgamma(1.0 + 0.5 * p)) {
  if (!(p > 0.0) || !(step > 0.0)) throw ConfigurationError("PhiTable: p and step must be positive");
  double s = 1.0;
  while (phi_cutoff(p, s) > 1e-16) s *= 1.25;
  const auto nodes = static_cast<std::size_t>(std::ceil(s / step_));
  support_ = static_cast<double>(nodes) * step_;
  values_.assign(nodes + 1, 0.0);
  values_[nodes] = phi_cutoff(p, support_);
  using boost::math::quadrature::gauss;
  for (std::size_t i = nodes; i-- > 0;) {
    const double lo = static_cast<double>(i) * step_;
    const double piece = gauss<double, 10>::integrate([&](double t) { return density(t); }, lo, lo + step_);
    values_[i] = values_[i + 1] + piece;
  }
}

double PhiTable::density(double s) const { return std::exp(-std::pow(s, 2.0 / p_)) / norm_; }

double PhiTable::operator()(double s) const {
  if (s <= 0.0) return 1.0;
  if (s >= support_) return 0.0;
  if (s < 1.0) {
    // int_0^s exp(-t^a) dt = sum_j (-1)^j s^{a j + 1} / (j! (a j + 1)), a = 2/p; e^{-t^a} is not smooth at 0 for p > 2.
    const double a = 2.0 / p_;
    const double x = std::pow(s, a);
    double term = s;
    double head = s;
    for (int j = 1; j < 60 && std::abs(term) > 1e-18 * head; ++j) {
      term *= -x / j;
      head += term / (a * j + 1.0);
    }
    return 1.0 - head / norm_;
  }
  const double x = s / step_;
  const auto i = static_cast<std::size_t>(x);
  const double u = x - static_cast<double>(i);
  const double s0 = static_cast<double>(i) * step_;
  const double f0 = values_[i];
  const double f1 = values_[i + 1];
  const double d0 = -density(s0) * step_;
  const double d1 = -density(s0 + step_) * step_;
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * f0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * f1 + (u3 - u2) * d1;
}

std::vector<SmoothedSharp> smoothed_vs_sharp(const sequences::DiagonalSequence& V,
                                             const std::optional<sequences::DiagonalSequence>& A, double p,
                                             const std::vector<double>& n_grid) {
  const auto env = V.envelope_constant();
  if (!env) throw ContractError("smoothed_vs_sharp: V declares no envelope");
  for (std::uint64_t k = 0; k < 4096; ++k) {
    const auto v = V(k);
    const auto w = V(k + 1);
    if (v.imag() != 0.0 || !(v.real() > 0.0) || w.real() > v.real()) {
      throw ContractError("smoothed_vs_sharp: V must be positive and decreasing");
    }
    if (A && (*A)(k).imag() != 0.0) throw ConfigurationError("smoothed_vs_sharp: A must be real");
  }
  const PhiTable phi(p);
  std::vector<SmoothedSharp> out;
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  for (double n : n_grid) {
    if (!(n >= 1.0)) throw ConfigurationError("smoothed_vs_sharp: n must be at least 1");
    // V(k) <= C/(k+1) puts Phi below 1e-16 once k + 1 >= C n support.
    const auto stop = static_cast<std::uint64_t>(std::ceil(*env * n * phi.support()));
    const std::size_t chunks = static_cast<std::size_t>((stop + kChunk - 1) / kChunk);
    struct Part {
      CompensatedSum smooth, sharp;
    };
    const auto parts = parallel_map<Part>(chunks, [&](std::size_t c) {
      Part part;
      const std::uint64_t lo = c * kChunk;
      const std::uint64_t hi = std::min(stop, lo + kChunk);
      for (std::uint64_t k = lo; k < hi; ++k) {
        const double a = A ? (*A)(k).real() : 1.0;
        if (a == 0.0) continue;
        const double v = V(k).real();
        part.smooth.add(a * v * phi(1.0 / (n * v)));
        if (v * n >= 1.0) part.sharp.add(a * v);
      }
      return part;
    });
    CompensatedSum smooth, sharp;
    for (const auto& part : parts) {
      smooth.add(part.smooth);
      sharp.add(part.sharp);
    }
    SmoothedSharp r;
    r.n = n;
    r.smoothed = smooth.value();
    r.sharp = sharp.value();
    r.delta = r.smoothed - r.sharp;
    out.push_back(r);
  }
  return out;
}

double log_cesaro_mean(const std::vector<std::pair<double, double>>& samples, double T) {
  if (!(T > 1.0)) throw RangeError("log_cesaro_mean: T must exceed 1");
  if (samples.size() < 64) throw ConfigurationError("log_cesaro_mean: need at least 64 samples");
  const double logT = std::log(T);
  if (std::abs(samples.front().first - 1.0) > 1e-12 || std::abs(samples.back().first / T - 1.0) > 1e-12) {
    throw ConfigurationError("log_cesaro_mean: samples must start at 1 and end at T");
  }
  const double du = logT / static_cast<double>(samples.size() - 1);
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double step = std::log(samples[i + 1].first) - std::log(samples[i].first);
    if (std::abs(step - du) > 1e-6 * du) throw ConfigurationError("log_cesaro_mean: grid is not log-uniform");
    acc.add(0.5 * (samples[i].second + samples[i + 1].second) * step);
  }
  return acc.value() / logT;
}

double log_cesaro_mean(const std::function<double(double)>& f, double T, unsigned points) {
  if (!(T > 1.0)) throw RangeError("log_cesaro_mean: T must exceed 1");
  std::vector<std::pair<double, double>> samples;
  const double logT = std::log(T);
  for (unsigned i = 0; i < points; ++i) {
    const double s = i + 1 == points ? T : std::exp(logT * i / (points - 1));
    samples.emplace_back(s, f(s));
  }
  return log_cesaro_mean(samples, T);
}

}  // namespace fubini::heat
