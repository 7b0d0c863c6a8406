#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fubini/lacunary.hpp"
#include "fubini/counterexamples.hpp"
#include "fubini/experiments.hpp"
#include "fubini/heat.hpp"
#include "fubini/kernels.hpp"
#include "fubini/lattice.hpp"
#include "fubini/traces.hpp"

using namespace fubini;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!detail.empty()) detail += "; ";
    detail += buf;
    if (!ok) {
      detail += " [violated]";
      passed = false;
    }
  }
};

const double kSqrtPi = std::sqrt(std::numbers::pi);

Outcome theta_sums() {
  Outcome o;
  double worst = 0;
  for (double t : heat::log_grid(1e-3, 1e-1, 16)) worst = std::max(worst, std::abs(t * heat::theta_sum(heat::ThetaKind::Plain, t) - kSqrtPi));
  o.require(worst <= 1, "max |t*S - sqrt(pi)| = %.3g <= 1", worst);
  const double t = 0.01;
  const double abs_dev = std::abs(t * t * heat::theta_sum(heat::ThetaKind::Abs, t) - 1);
  o.require(abs_dev <= 0.02, "|t^2*S_abs - 1| at t=0.01 = %.3g <= 0.02", abs_dev);
  return o;
}

Outcome lattice_counts() {
  Outcome o;
  double worst = 0;
  for (unsigned p : {2u, 3u}) {
    for (double m : {50.0, 100.0, 200.0}) {
      const double count = static_cast<double>(lattice::count_ball(p, m, false));
      const double asym = lattice::ball_volume_constant(p, false) * std::pow(m, p);
      worst = std::max(worst, std::abs(count - asym) / std::pow(m, p - 1.0));
    }
  }
  o.require(worst <= 4, "max |count - V m^p| / m^(p-1) = %.3g <= 4", worst);
  return o;
}

Outcome zeta_traces() {
  Outcome o;
  std::vector<std::uint64_t> counts;
  for (int j = 16; j <= 22; ++j) counts.push_back(std::uint64_t{1} << j);
  for (unsigned p : {1u, 2u}) {
    const auto sums = lattice::zeta_partial_sums(p, counts, true);
    traces::PartialSumSeries s;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      s.checkpoints.push_back(static_cast<double>(counts[i]));
      s.values.push_back(sums[i]);
      s.error_bounds.push_back(0.0);
    }
    const auto fit = traces::measurability_fit(s);
    const double target = p == 1 ? 2.0 : std::numbers::pi;
    const double rel = std::abs(fit.c.real() / target - 1);
    o.require(fit.verdict == traces::Verdict::UniversallyMeasurableEvidence && rel <= 0.05,
              "p=%u: c=%.5f (rel %.2g <= 0.05), verdict %s", p, fit.c.real(), rel,
              std::string(traces::verdict_name(fit.verdict)).c_str());
  }
  return o;
}

Outcome surrogate_gaps() {
  Outcome o;
  const sequences::WeightedSequence x{sequences::DiagonalSequence::phase_block(sequences::RationalAngle(1, 2)),
                                      sequences::DiagonalSequence::zeta_weight(1)};
  std::vector<double> cps;
  for (double n = 0; n <= 1e5; n += 1) cps.push_back(n);
  const auto e = traces::eigen_partial_sums(x, cps);
  const auto i = traces::index_partial_sums(x, cps, traces::SumMode::Direct);
  double gap = 0;
  for (std::size_t k = 0; k < cps.size(); ++k) gap = std::max(gap, std::abs(e.values[k] - i.values[k]));
  o.require(gap <= 5, "max |eigen - index| over n <= 1e5 = %.3g <= 5", gap);
  const auto w = traces::square_window_sums(traces::SeparableWeight{}, {1e4, 1e5});
  for (std::size_t k = 0; k < 2; ++k) {
    double eig = 0;
    lattice::for_each_by_norm(2, false, static_cast<std::uint64_t>(w.checkpoints[k]) + 1,
                              [&](const lattice::LatticePoint& p) { eig += 1.0 / (1.0 + static_cast<double>(p.norm_sq)); });
    const double d = std::abs(w.values[k].real() - eig);
    o.require(d <= 5, "n=%.0f: |eigen - window| = %.3g <= 5", w.checkpoints[k], d);
  }
  return o;
}

Outcome smoothing() {
  Outcome o;
  std::vector<double> grid;
  for (int j = 4; j <= 20; ++j) grid.push_back(std::ldexp(1.0, j));
  double worst = 0;
  for (const auto& r : heat::smoothed_vs_sharp(sequences::DiagonalSequence::harmonic(), std::nullopt, 2, grid)) worst = std::max(worst, std::abs(r.delta));
  o.require(worst <= 5, "max |Delta(n)| over n = 2^4..2^20 = %.4g <= 5", worst);
  return o;
}

Outcome torus_fubini() {
  Outcome o;
  const auto grid = heat::log_grid(1e-3, 1, 32);
  const auto a = heat::make_curve(heat::Model::TorusP, grid, 1, 1);
  const auto b = heat::make_curve(heat::Model::TorusP, grid, 1, 1);
  const double ca = heat::extract_c(a, 1).c;
  const double cb = heat::extract_c(b, 1).c;
  const double cab = heat::extract_c(heat::product_curve(a, b), 2).c;
  const double factor = std::max(std::abs(ca / kSqrtPi - 1), std::abs(cb / kSqrtPi - 1));
  const double product = std::abs(cab / (ca * cb) - 1);
  o.require(factor <= 0.01, "factor c rel dev from sqrt(pi) = %.3g <= 0.01", factor);
  o.require(product <= 0.03, "product c vs c1*c2 rel dev = %.3g <= 0.03", product);
  return o;
}

Outcome hard_example() {
  Outcome o;
  const auto choice = counterexamples::choose_theta(counterexamples::default_theta_candidates());
  const auto theta = choice.theta;
  const auto res = counterexamples::hard_example_series(theta, 1, -1, 6, 13, counterexamples::BlockMode::Direct);
  o.require(res.remainder_sup <= 10, "theta=2pi*%s, sup |S - n F| = %.4g <= 10", theta.to_string().c_str(), res.remainder_sup);
  const auto non = counterexamples::hard_example_series(theta, 1, 1, 6, 13, counterexamples::BlockMode::Direct);
  double sup = 0;
  for (const auto& s : non.sums) sup = std::max(sup, std::abs(s));
  o.require(sup <= 10, "(1,1): sup |S| = %.4g <= 10", sup);
  const auto f = counterexamples::hard_example_product_traces(theta, 1);
  const double rel = std::abs(f.product.c.real() / f.product_target - 1);
  o.require(rel <= 0.1, "product c = %.5f vs F/(2 log 2) = %.5f (rel %.3g <= 0.1)", f.product.c.real(), f.product_target, rel);
  const double fac = std::max(std::abs(f.factor.c), std::abs(f.factor_inverse.c));
  o.require(fac <= 0.02, "factor |c| = %.3g <= 0.02", fac);

  experiments::ExperimentConfig cfg;
  cfg.experiment = "hard-example";
  const auto r = experiments::run_experiment(cfg);
  const bool emitted = std::find(r.conclusions.begin(), r.conclusions.end(), "Fubini fails: product trace ≠ 0, factor traces = 0") != r.conclusions.end();
  o.require(emitted, "conclusion line %s", emitted ? "emitted" : "missing");
  return o;
}

Outcome second_example() {
  Outcome o;
  const auto r = counterexamples::second_example_traces();
  o.require(r.xi0_zero.value > 3.85, "Xi0(0) = %.6f > 3.85", r.xi0_zero.value);
  const double lower = r.xi0_even_sum - r.xi0_even_sum_error;
  const double bound = 7 * std::numbers::pi / 4 * std::log(2.0);
  o.require(lower > bound, "sum Xi0(2m) >= %.6f > %.4f", lower, bound);
  const double one = std::abs(r.one_dim.c.real() / 0.50390625 - 1);
  o.require(one <= 0.02, "one-dim c = %.6f (rel %.3g <= 0.02)", r.one_dim.c.real(), one);
  const double two = std::abs(r.two_dim.c.real() / r.two_dim_target - 1);
  o.require(two <= 0.05, "two-dim c = %.6f vs %.6f (rel %.3g <= 0.05)", r.two_dim.c.real(), r.two_dim_target, two);
  o.require(r.inequality_holds && r.margin > 5 * r.combined_error, "margin %.4g > 5 x %.3g", r.margin, r.combined_error);
  return o;
}

Outcome lacunary_indicator() {
  Outcome o;
  const auto s = sequences::lacunary_schedule(5);
  const long double n4 = s.n(4);
  const auto d = lacunary::arctan_discrepancy(s.blocks(), n4 * n4, lacunary::Mode::BlockAnalytic);
  o.require(d.ratio >= 0.3, "Delta/log n at n_4^2 = %.6f >= 0.3", d.ratio);
  const auto control = lacunary::arctan_discrepancy(sequences::IntervalList::everything(), 1e8L, lacunary::Mode::BlockAnalytic);
  o.require(std::abs(control.ratio) <= 0.05, "full indicator |Delta/log n| at 1e8 = %.4g <= 0.05", std::abs(control.ratio));
  const sequences::IntervalList blocks({{16, 256}, {4096, 65536}, {300000, 700000}});
  double worst = 0;
  for (const auto& iv : {blocks, sequences::IntervalList::everything()}) {
    const auto a = lacunary::arctan_discrepancy(iv, 1e6L, lacunary::Mode::BlockAnalytic);
    const auto b = lacunary::arctan_discrepancy(iv, 1e6L, lacunary::Mode::Direct);
    worst = std::max(worst, std::abs(a.delta - b.delta) / std::max(std::abs(b.delta), std::log(1e6)));
  }
  o.require(worst <= 1e-6, "block vs direct at 1e6, rel = %.3g <= 1e-6", worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  experiments::ExperimentConfig cfg;
  cfg.experiment = "suite";
  const auto first = experiments::render(cfg, experiments::run_suite(cfg));
  const auto second = experiments::render(cfg, experiments::run_suite(cfg));
  o.require(first == second, "suite reports of %zu bytes %s", first.size(), first == second ? "identical" : "differ");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "theta sums", 1, theta_sums},
      {2, "lattice counts", 10, lattice_counts},
      {3, "zeta traces", 60, zeta_traces},
      {4, "eigenvalue surrogates", 60, surrogate_gaps},
      {5, "smoothed cutoff", 30, smoothing},
      {6, "torus product", 5, torus_fubini},
      {7, "hard example", 600, hard_example},
      {8, "second example", 600, second_example},
      {9, "lacunary indicator", 300, lacunary_indicator},
      {10, "determinism", 3600, determinism},
  };
  std::printf("kernel: %s\n", std::string(kernels::isa_name(kernels::active_isa())).c_str());
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("error: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool ok = o.passed && in_time;
    failed += !ok;
    std::printf("%s  criterion %d (%s): %s; runtime %.2f s < %.0f s%s\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_s, in_time ? "" : " [violated]");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
