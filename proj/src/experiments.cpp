#include "fubini/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "fubini/lacunary.hpp"
#include "fubini/counterexamples.hpp"
#include "fubini/errors.hpp"
#include "fubini/heat.hpp"
#include "fubini/lattice.hpp"
#include "fubini/traces.hpp"

namespace fubini::experiments {

using report::Check;
using report::ExperimentResult;
using report::Json;
using report::make_check;
using sequences::DiagonalSequence;
using sequences::RationalAngle;

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

double tol(const ExperimentConfig& c, const std::string& key, double fallback) {
  const auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : it->second;
}

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

Json fit_json(const traces::LogLinearFit& f) {
  Json j;
  j["c"] = complex_json(f.c);
  j["intercept"] = complex_json(f.intercept);
  j["remainder_sup"] = f.remainder_sup;
  j["slope_stderr"] = f.slope_stderr;
  j["mean_residual"] = f.mean_residual;
  j["drift"] = f.drift;
  j["tail_ratio"] = f.tail_ratio;
  j["verdict"] = std::string(traces::verdict_name(f.verdict));
  j["checkpoints"] = f.checkpoints;
  Json rem = Json::array();
  for (const auto& r : f.remainders) rem.push_back(complex_json(r));
  j["remainders"] = rem;
  return j;
}

double rel_err(double value, double target) { return std::abs(value / target - 1.0); }

double is_verdict(const traces::LogLinearFit& f, traces::Verdict v) { return f.verdict == v ? 1.0 : 0.0; }

std::vector<double> grid_or(const ExperimentConfig& c, double t_min, double t_max, unsigned points) {
  return heat::log_grid(c.t_min.value_or(t_min), c.t_max.value_or(t_max), c.t_points.value_or(points));
}

// theta-sum -----------------------------------------------------------------

ExperimentResult theta_sum(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto grid = grid_or(c, 1e-3, 1e-1, 16);
  double dev_plain = 0.0, dev_square = 0.0, tail_ratio = 0.0;
  r.table.columns = {"t", "value", "tail_bound"};
  Json abs_rows = Json::array();
  for (double t : grid) {
    const auto plain = heat::theta_sum_sample(heat::ThetaKind::Plain, t);
    const auto square = heat::theta_sum_sample(heat::ThetaKind::Square, t);
    dev_plain = std::max(dev_plain, std::abs(t * plain.value - kSqrtPi));
    dev_square = std::max(dev_square, std::abs(t * t * t * square.value - kSqrtPi / 2.0));
    tail_ratio = std::max(tail_ratio, plain.tail_bound / plain.value);
    r.table.rows.push_back({t, plain.value, plain.tail_bound});
  }
  const auto at01 = heat::theta_sum_sample(heat::ThetaKind::Abs, 0.01);
  r.checks.push_back(make_check("max |t*sum exp(-l^2 t^2) - sqrt(pi)|", "theta.plain", dev_plain, "<=",
                                tol(c, "theta.plain", 1.0), "Gaussian sum asymptotic sqrt(pi)/t"));
  r.checks.push_back(make_check("|t^2*sum |l| exp(-l^2 t^2) - 1| at t=0.01", "theta.abs",
                                std::abs(1e-4 * at01.value - 1.0), "<=", tol(c, "theta.abs", 0.02),
                                "Gaussian sum asymptotic 1/t^2"));
  r.checks.push_back(make_check("max |t^3*sum l^2 exp(-l^2 t^2) - sqrt(pi)/2|", "theta.square", dev_square, "<=",
                                tol(c, "theta.square", 1.0), "Gaussian sum asymptotic sqrt(pi)/(2 t^3)"));
  r.checks.push_back(make_check("max tail_bound / value", "theta.tail", tail_ratio, "<=", tol(c, "theta.tail", 1e-16),
                                "truncation contract of theta_sum"));
  r.data["abs_sum_at_0.01"] = at01.value;
  return r;
}

// lattice-count ---------------------------------------------------------------

ExperimentResult lattice_count(const ExperimentConfig& c) {
  ExperimentResult r;
  std::vector<unsigned> ps = c.p ? std::vector<unsigned>{*c.p} : std::vector<unsigned>{2, 3};
  std::vector<double> ms = c.max_n ? std::vector<double>{static_cast<double>(*c.max_n)} : std::vector<double>{50, 100, 200};
  const double factor = tol(c, "lattice.residual", 4.0);
  r.table.columns = {"p", "m", "count", "asymptotic", "residual", "bound"};
  for (unsigned p : ps) {
    for (double m : ms) {
      const auto count = lattice::count_ball(p, m, false);
      const double asym = lattice::ball_volume_constant(p, false) * std::pow(m, static_cast<double>(p));
      const double residual = std::abs(static_cast<double>(count) - asym);
      const double scale = std::pow(m, static_cast<double>(p) - 1.0);
      r.table.rows.push_back({static_cast<long long>(p), m, static_cast<long long>(count), asym, residual, factor * scale});
      std::ostringstream name;
      name << "p=" << p << " m=" << m << ": |count - V_p m^p| / m^(p-1)";
      r.checks.push_back(make_check(name.str(), "lattice.residual", residual / scale, "<=", factor,
                                    "ball volume asymptotic with boundary layer O(m^(p-1))"));
    }
  }
  return r;
}

// zeta-trace ------------------------------------------------------------------

ExperimentResult zeta_trace(const ExperimentConfig& c) {
  ExperimentResult r;
  const int hi = c.max_m_exp.value_or(22);
  if (hi < 18 || hi > 26) throw RangeError("zeta-trace: max-m-exp must be in 18..26");
  std::vector<unsigned> ps = c.p ? std::vector<unsigned>{*c.p} : std::vector<unsigned>{1, 2};
  const double ctol = tol(c, "zeta.c_rel", 0.05);
  r.table.columns = {"p", "n", "partial_sum"};
  for (unsigned p : ps) {
    if (p < 1 || p > 2) throw RangeError("zeta-trace: p must be 1 or 2");
    std::vector<std::uint64_t> counts;
    traces::PartialSumSeries series;
    series.surrogate = traces::Surrogate::EigenvalueOrdered;
    for (int j = 16; j <= hi; ++j) counts.push_back(std::uint64_t{1} << j);
    const auto sums = lattice::zeta_partial_sums(p, counts, true);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      series.checkpoints.push_back(static_cast<double>(counts[i] - 1));
      series.values.push_back(sums[i]);
      series.error_bounds.push_back(0.0);
      r.table.rows.push_back({static_cast<long long>(p), static_cast<long long>(counts[i]), sums[i]});
    }
    const auto fit = traces::measurability_fit(series);
    const double target = p == 1 ? 2.0 : std::numbers::pi;
    const std::string tag = "p=" + std::to_string(p);
    r.checks.push_back(make_check(tag + ": verdict is universally measurable", "", is_verdict(fit, traces::Verdict::UniversallyMeasurableEvidence),
                                  "==", 1.0, "measurability_fit on signed lattice zeta sums"));
    r.checks.push_back(make_check(tag + ": |c / target - 1|", "zeta.c_rel", rel_err(fit.c.real(), target), "<=", ctol,
                                  p == 1 ? "surface measure of S^0 = 2" : "surface measure of S^1 / 2 = pi"));
    r.data[tag] = fit_json(fit);
  }
  return r;
}

// dixmier ---------------------------------------------------------------------

ExperimentResult dixmier(const ExperimentConfig& c) {
  ExperimentResult r;
  const double top = static_cast<double>(c.max_n.value_or(100000));
  if (top < 100 || top > 1e6) throw RangeError("dixmier: max-n must be in [100, 1e6]");
  const double bound1 = tol(c, "dixmier.index_gap", 5.0);
  const double bound2 = tol(c, "dixmier.window_gap", 5.0);

  sequences::WeightedSequence seq;
  seq.numerator = DiagonalSequence::phase_block(RationalAngle(1, 2));
  seq.weight = DiagonalSequence::zeta_weight(1);
  std::vector<double> cps;
  for (double n = 10; n <= top; n *= std::sqrt(10.0)) cps.push_back(std::round(n));
  if (cps.back() != top) cps.push_back(top);
  const auto eig = traces::eigen_partial_sums(seq, cps);
  const auto idx = traces::index_partial_sums(seq, cps, traces::SumMode::Direct);
  double dev1 = 0.0;
  r.table.columns = {"case", "n", "eigenvalue_sum", "surrogate_sum", "difference"};
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const double d = std::abs(eig.values[i] - idx.values[i]);
    dev1 = std::max(dev1, d);
    r.table.rows.push_back({std::string("phase(pi)/sqrt(1+k^2)"), cps[i], eig.values[i].real(), idx.values[i].real(), d});
  }
  r.checks.push_back(make_check("max |eigen - index| for x_pi(k)/(1+k^2)^(1/2)", "dixmier.index_gap", dev1, "<=", bound1,
                                "eigenvalue-ordering surrogate bound O(1)"));

  std::vector<double> wcps = {1e4, top};
  if (top <= 1e4) wcps = {top};
  const double radius = std::sqrt(4.0 * wcps.back() / std::numbers::pi);
  const auto side = static_cast<std::uint64_t>(std::ceil(1.5 * radius)) + 8;
  std::vector<std::complex<double>> entries;
  entries.reserve(static_cast<std::size_t>((side + 1) * (side + 1)));
  for (std::uint64_t k = 0; k <= side; ++k) {
    for (std::uint64_t l = 0; l <= side; ++l) {
      entries.emplace_back(1.0 / (1.0 + static_cast<double>(k * k + l * l)), 0.0);
    }
  }
  const double tail = 1.0 / (1.0 + static_cast<double>((side + 1) * (side + 1)));
  const auto eig2 = traces::eigen_partial_sums(entries, tail, wcps);
  const auto win = traces::square_window_sums(traces::SeparableWeight{}, wcps, traces::SumMode::Direct);
  double dev2 = 0.0;
  for (std::size_t i = 0; i < wcps.size(); ++i) {
    const double d = std::abs(eig2.values[i] - win.values[i]);
    dev2 = std::max(dev2, d);
    r.table.rows.push_back({std::string("1/(1+k^2+l^2)"), wcps[i], eig2.values[i].real(), win.values[i].real(), d});
  }
  r.checks.push_back(make_check("max |eigen - square window| for 1/(1+k^2+l^2)", "dixmier.window_gap", dev2, "<=", bound2,
                                "two-dimensional eigenvalue-ordering surrogate bound O(1)"));
  return r;
}

// measurability ---------------------------------------------------------------

traces::PartialSumSeries synthetic(const std::function<double(double)>& S, int lo, int hi, int step) {
  traces::PartialSumSeries s;
  s.checkpoints = traces::dyadic_checkpoints(lo, hi, step);
  for (double n : s.checkpoints) {
    s.values.emplace_back(S(std::log(n + 1.0)), 0.0);
    s.error_bounds.push_back(0.0);
  }
  return s;
}

ExperimentResult measurability(const ExperimentConfig& c) {
  ExperimentResult r;
  struct Case {
    std::string name;
    std::function<double(double)> S;
    traces::Verdict expected;
  };
  const std::vector<Case> cases = {
      {"3 x + sin x", [](double x) { return 3.0 * x + std::sin(x); }, traces::Verdict::UniversallyMeasurableEvidence},
      {"2 x + x / log x", [](double x) { return 2.0 * x + x / std::log(x); }, traces::Verdict::TauberianOnlyEvidence},
      {"x (1 + sin(log x) / 2)", [](double x) { return x * (1.0 + 0.5 * std::sin(std::log(x))); },
       traces::Verdict::NotTauberianEvidence},
  };
  r.table.columns = {"series", "c", "remainder_sup", "drift", "tail_ratio", "verdict"};
  for (const auto& k : cases) {
    const auto fit = traces::measurability_fit(synthetic(k.S, 8, 1000, 8));
    r.table.rows.push_back({k.name, fit.c.real(), fit.remainder_sup, fit.drift, fit.tail_ratio,
                            std::string(traces::verdict_name(fit.verdict))});
    r.checks.push_back(make_check("S = " + k.name + ": verdict is " + std::string(traces::verdict_name(k.expected)), "",
                                  is_verdict(fit, k.expected), "==", 1.0, "synthetic series with known asymptotics"));
    r.data[k.name] = fit_json(fit);
  }
  sequences::WeightedSequence seq;
  seq.weight = DiagonalSequence::zeta_weight(1);
  const int hi = c.max_m_exp.value_or(62);
  if (hi < 20 || hi > 62) throw RangeError("measurability: max-m-exp must be in 20..62");
  const auto fit = traces::measurability_fit(
      traces::index_partial_sums(seq, traces::dyadic_checkpoints(8, hi), traces::SumMode::BlockAnalytic));
  r.table.rows.push_back({std::string("sum (1+k^2)^(-1/2)"), fit.c.real(), fit.remainder_sup, fit.drift, fit.tail_ratio,
                          std::string(traces::verdict_name(fit.verdict))});
  r.checks.push_back(make_check("sum (1+k^2)^(-1/2): verdict is universally measurable", "",
                                is_verdict(fit, traces::Verdict::UniversallyMeasurableEvidence), "==", 1.0,
                                "harmonic asymptotic log n + const"));
  r.checks.push_back(make_check("sum (1+k^2)^(-1/2): |c - 1|", "measurability.c_abs", std::abs(fit.c.real() - 1.0), "<=",
                                tol(c, "measurability.c_abs", 0.01), "harmonic asymptotic log n + const"));
  r.data["zeta_weight_1"] = fit_json(fit);
  return r;
}

// heat-fit --------------------------------------------------------------------

ExperimentResult heat_fit(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto grid = grid_or(c, 1e-3, 1.0, 32);
  const double rel = tol(c, "heat.c_rel", 1e-5);
  struct Case {
    std::string name;
    heat::Model model;
    unsigned torus_p;
    double p;
    double target;
    std::string provenance;
  };
  const std::vector<Case> cases = {
      {"theta_plain", heat::Model::ThetaPlain, 1, 1.0, kSqrtPi, "Gaussian sum asymptotic sqrt(pi)/t"},
      {"torus p=2", heat::Model::TorusP, 2, 2.0, 2.0 * std::numbers::pi, "2 theta(t)^2 ~ 2 pi / t^2"},
      {"sphere", heat::Model::Sphere, 1, 2.0, 1.0, "sum |l| exp(-l^2 t^2) ~ 1/t^2"},
      {"suq2", heat::Model::SUq2, 1, 3.0, kSqrtPi / 4.0, "sum (j+1)^2 exp(-j^2 t^2) ~ sqrt(pi)/(4 t^3)"},
  };
  r.table.columns = {"model", "p", "c", "target", "epsilon_fit", "quartile_spread"};
  for (const auto& k : cases) {
    const auto curve = heat::make_curve(k.model, grid, k.torus_p, 1.0);
    const auto e = heat::extract_c(curve, k.p);
    r.table.rows.push_back({k.name, k.p, e.c, k.target, e.epsilon_fit, e.quartile_spread});
    r.checks.push_back(make_check(k.name + ": |c / target - 1|", "heat.c_rel", rel_err(e.c, k.target), "<=", rel, k.provenance));
    r.checks.push_back(make_check(k.name + ": epsilon_fit", "heat.epsilon", e.epsilon_fit, ">=", tol(c, "heat.epsilon", 1.0),
                                  "regular heat expansion c t^-p (1 + O(t^eps))"));
  }
  return r;
}

// phi-smoothing ---------------------------------------------------------------

ExperimentResult phi_smoothing(const ExperimentConfig& c) {
  ExperimentResult r;
  const int hi = c.max_m_exp.value_or(20);
  if (hi < 4 || hi > 24) throw RangeError("phi-smoothing: max-m-exp must be in 4..24");
  const double p = c.p.value_or(2);
  std::vector<double> ns;
  for (int j = 4; j <= hi; ++j) ns.push_back(std::ldexp(1.0, j));
  const auto rows = heat::smoothed_vs_sharp(DiagonalSequence::harmonic(), std::nullopt, p, ns);
  double worst = 0.0;
  r.table.columns = {"n", "smoothed", "sharp", "delta"};
  for (const auto& x : rows) {
    worst = std::max(worst, std::abs(x.delta));
    r.table.rows.push_back({x.n, x.smoothed, x.sharp, x.delta});
  }
  r.checks.push_back(make_check("max |smoothed - sharp| over n = 2^4..2^" + std::to_string(hi), "phi.delta", worst, "<=",
                                tol(c, "phi.delta", 5.0), "smoothed and sharp cutoffs differ by O(1)"));
  r.data["delta_last"] = rows.back().delta;
  return r;
}

// fubini-torus ----------------------------------------------------------------

ExperimentResult fubini_torus(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto grid = grid_or(c, 1e-3, 1.0, 32);
  const auto a = heat::make_curve(heat::Model::TorusP, grid, 1, 1.0);
  const auto b = heat::make_curve(heat::Model::TorusP, grid, 1, 1.0);
  const auto ea = heat::extract_c(a, 1.0);
  const auto eb = heat::extract_c(b, 1.0);
  const auto ep = heat::extract_c(heat::product_curve(a, b), 2.0);
  const double frel = tol(c, "torus.factor_rel", 0.01);
  r.checks.push_back(make_check("factor 1: |c / sqrt(pi) - 1|", "torus.factor_rel", rel_err(ea.c, kSqrtPi), "<=", frel,
                                "theta(t) ~ sqrt(pi)/t"));
  r.checks.push_back(make_check("factor 2: |c / sqrt(pi) - 1|", "torus.factor_rel", rel_err(eb.c, kSqrtPi), "<=", frel,
                                "theta(t) ~ sqrt(pi)/t"));
  r.checks.push_back(make_check("|c(product) / (c1 c2) - 1|", "torus.product_rel", rel_err(ep.c, ea.c * eb.c), "<=",
                                tol(c, "torus.product_rel", 0.03), "heat traces multiply under tensor products"));
  r.table.columns = {"curve", "p", "c", "epsilon_fit"};
  r.table.rows.push_back({std::string("torus p=1 (1)"), 1.0, ea.c, ea.epsilon_fit});
  r.table.rows.push_back({std::string("torus p=1 (2)"), 1.0, eb.c, eb.epsilon_fit});
  r.table.rows.push_back({std::string("product"), 2.0, ep.c, ep.epsilon_fit});
  if (r.passed()) r.conclusions.push_back("Fubini holds: c(product) = c(factor 1) * c(factor 2)");
  return r;
}

// hard-example ----------------------------------------------------------------

Json fourier_json(const counterexamples::FourierValue& F) {
  Json j;
  j["value"] = F.value;
  j["tail_bound"] = F.tail_bound;
  j["quadrature_error"] = F.quadrature_error;
  return j;
}

Json block_report_json(const counterexamples::BlockSumReport& b) {
  Json j;
  j["p"] = b.p;
  j["q"] = b.q;
  j["levels"] = b.levels;
  j["M_checkpoints"] = b.M_checkpoints;
  Json sums = Json::array();
  for (const auto& s : b.sums) sums.push_back(complex_json(s));
  j["sums"] = sums;
  j["remainders"] = b.remainders;
  j["predicted_slope"] = b.predicted_slope;
  j["remainder_sup"] = b.remainder_sup;
  return j;
}

counterexamples::BlockMode block_mode(const ExperimentConfig& c) {
  if (!c.mode || *c.mode == "direct") return counterexamples::BlockMode::Direct;
  return counterexamples::BlockMode::BlockAnalytic;
}

ExperimentResult hard_example(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto choice = counterexamples::choose_theta(c.theta ? std::vector<RationalAngle>{*c.theta}
                                                            : counterexamples::default_theta_candidates());
  const RationalAngle theta = choice.theta;
  const auto mode = block_mode(c);
  const int n_hi = c.max_m_exp.value_or(13);
  if (n_hi < 7 || n_hi > (mode == counterexamples::BlockMode::Direct ? 13 : 50)) {
    throw RangeError("hard-example: max-m-exp must be in 7..13 (direct) or 7..50 (block_analytic)");
  }
  const auto key = counterexamples::hard_example_series(theta, 1, -1, 6, n_hi, mode);
  const auto free = counterexamples::hard_example_series(theta, 1, 1, 6, n_hi, mode);
  const auto traces = counterexamples::hard_example_product_traces(theta, 1);
  const auto pos = counterexamples::positive_element_traces(theta);
  const auto base128 = counterexamples::fourier_F(RationalAngle(1, 2), 40, counterexamples::XiVariant::Xi0);

  r.checks.push_back(make_check("|F(theta)| / error budget", "hard.F_margin", std::abs(choice.F.value) / choice.F.total_error(),
                                ">", tol(c, "hard.F_margin", 10.0), "fourier_F quadrature plus geometric tail"));
  r.checks.push_back(make_check("sup_n |S(2^(n+1)-1) - n F(theta)|, p=1, q=-1", "hard.remainder", key.remainder_sup, "<=",
                                tol(c, "hard.remainder", 10.0), "dyadic block sum slope F(p theta) per level"));
  r.checks.push_back(make_check("sup_n |S(2^(n+1)-1)|, p=1, q=1", "hard.nonresonant", free.remainder_sup, "<=",
                                tol(c, "hard.nonresonant", 10.0), "bounded block sums when (p+q) theta is not in 2 pi Z"));
  r.checks.push_back(make_check("product side |c / (F(theta) / (2 log 2)) - 1|", "hard.product_rel",
                                rel_err(traces.product.c.real(), traces.product_target), "<=", tol(c, "hard.product_rel", 0.10),
                                "fourier_F oracle: F(theta) / (2 log 2)"));
  r.checks.push_back(make_check("factor side |c(U)|", "hard.factor_abs", std::abs(traces.factor.c), "<=",
                                tol(c, "hard.factor_abs", 0.02), "vanishing trace of the phase-weighted factor"));
  r.checks.push_back(make_check("factor side |c(U^-1)|", "hard.factor_abs", std::abs(traces.factor_inverse.c), "<=",
                                tol(c, "hard.factor_abs", 0.02), "vanishing trace of the phase-weighted factor"));
  r.checks.push_back(make_check("|c(product) - (pi/4) c(U) c(U^-1)| / combined error", "hard.fubini_sigma",
                                traces.discrepancy / traces.combined_error, ">", tol(c, "hard.fubini_sigma", 5.0),
                                "least-squares slope errors of the three fits"));
  r.checks.push_back(make_check("|F(pi)| / error budget for the base-2^7 blocks", "hard.base128_margin",
                                std::abs(base128.value) / base128.total_error(), ">", tol(c, "hard.base128_margin", 10.0),
                                "fourier_F over Xi0 quadrature plus geometric tail"));

  Json cands = Json::array();
  for (const auto& [angle, F] : choice.candidates) {
    Json e;
    e["theta_over_2pi"] = angle.to_string();
    e["F"] = fourier_json(F);
    cands.push_back(e);
  }
  r.data["theta_over_2pi"] = theta.to_string();
  r.data["candidates"] = cands;
  r.data["F"] = fourier_json(choice.F);
  r.data["mode"] = counterexamples::block_mode_name(mode);
  r.data["key_series"] = block_report_json(key);
  r.data["nonresonant_series"] = block_report_json(free);
  Json t;
  t["product_target"] = traces.product_target;
  t["product"] = fit_json(traces.product);
  t["factor"] = fit_json(traces.factor);
  t["factor_inverse"] = fit_json(traces.factor_inverse);
  t["fubini_prediction"] = complex_json(traces.fubini_prediction);
  t["discrepancy"] = traces.discrepancy;
  t["combined_error"] = traces.combined_error;
  r.data["traces"] = t;
  Json pj;
  pj["c_product"] = pos.c_product;
  pj["c_product_error"] = pos.c_product_error;
  pj["c_factor"] = pos.c_factor;
  pj["c_factor_error"] = pos.c_factor_error;
  pj["fubini_value"] = pos.fubini_value;
  pj["gap"] = pos.c_product - pos.fubini_value;
  pj["gap_prediction"] = pos.gap_prediction;
  r.data["positive_element"] = pj;
  r.data["base128_F_pi"] = fourier_json(base128);

  r.table.columns = {"n", "M", "S_re", "S_im", "remainder"};
  for (std::size_t i = 0; i < key.levels.size(); ++i) {
    r.table.rows.push_back({static_cast<long long>(key.levels[i]), key.M_checkpoints[i], key.sums[i].real(),
                            key.sums[i].imag(), key.remainders[i]});
  }
  if (r.passed()) r.conclusions.push_back("Fubini fails: product trace ≠ 0, factor traces = 0");
  return r;
}

// second-example --------------------------------------------------------------

ExperimentResult second_example(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto s = counterexamples::second_example_traces();
  const double bound = 7.0 * std::numbers::pi / 4.0 * std::numbers::ln2;
  r.checks.push_back(make_check("Xi0(0)", "second.xi0_zero", s.xi0_zero.value - s.xi0_zero.error, ">",
                                tol(c, "second.xi0_zero", 3.85), "lower bound 7 log 2 - 1"));
  r.checks.push_back(make_check("sum_m Xi0(2m) minus error budget", "second.xi0_sum", s.xi0_even_sum - s.xi0_even_sum_error, ">",
                                tol(c, "second.xi0_sum", bound), "threshold (7 pi / 4) log 2"));
  r.checks.push_back(make_check("one-dimensional |c / 0.50390625 - 1|", "second.one_dim_rel", rel_err(s.one_dim.c.real(), s.one_dim_target),
                                "<=", tol(c, "second.one_dim_rel", 0.02), "closed form (1 + 2^-7) / 2"));
  r.checks.push_back(make_check("two-dimensional |c / target - 1|", "second.two_dim_rel", rel_err(s.two_dim.c.real(), s.two_dim_target),
                                "<=", tol(c, "second.two_dim_rel", 0.05),
                                "Xi0 quadrature oracle: ((1 + 2^-7)/2)^2 sum Xi0(2m) / (7 log 2)"));
  r.checks.push_back(make_check("(c2 - (pi/4) c1^2) / combined error", "second.margin_sigma", s.margin / s.combined_error, ">",
                                tol(c, "second.margin_sigma", 5.0), "least-squares slope errors of both fits"));
  Json x;
  x["xi0_zero"] = s.xi0_zero.value;
  x["xi0_zero_error"] = s.xi0_zero.error;
  x["xi0_even_sum"] = s.xi0_even_sum;
  x["xi0_even_sum_error"] = s.xi0_even_sum_error;
  x["one_dim_target"] = s.one_dim_target;
  x["two_dim_target"] = s.two_dim_target;
  x["one_dim"] = fit_json(s.one_dim);
  x["two_dim"] = fit_json(s.two_dim);
  x["fubini_value"] = s.fubini_value;
  x["margin"] = s.margin;
  x["combined_error"] = s.combined_error;
  r.data = x;
  r.table.columns = {"quantity", "value", "target"};
  r.table.rows.push_back({std::string("c one-dimensional"), s.one_dim.c.real(), s.one_dim_target});
  r.table.rows.push_back({std::string("c two-dimensional"), s.two_dim.c.real(), s.two_dim_target});
  r.table.rows.push_back({std::string("(pi/4) c1^2"), s.fubini_value, s.two_dim.c.real()});
  if (r.passed()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Fubini fails: c(2D) = %.6f > (pi/4) c(1D)^2 = %.6f", s.two_dim.c.real(), s.fubini_value);
    r.conclusions.push_back(buf);
  }
  return r;
}

// appendix-b ------------------------------------------------------------------

Json delta_json(const lacunary::Delta& d) {
  Json j;
  j["log2_n"] = static_cast<double>(std::log2(d.n));
  j["harmonic_part"] = d.harmonic_part;
  j["arctan_part"] = d.arctan_part;
  j["delta"] = d.delta;
  j["error"] = d.error;
  j["ratio"] = d.ratio;
  return j;
}

ExperimentResult lacunary_indicator(const ExperimentConfig& c) {
  ExperimentResult r;
  const auto blocks = sequences::lacunary_schedule(5).blocks();
  const auto all = sequences::IntervalList::everything();
  using lacunary::Mode;
  r.table.columns = {"case", "log2_n", "delta", "error", "delta_over_log_n"};
  auto row = [&](const std::string& name, const lacunary::Delta& d) {
    r.table.rows.push_back({name, static_cast<double>(std::log2(d.n)), d.delta, d.error, d.ratio});
  };
  const auto early = lacunary::arctan_discrepancy(blocks, std::ldexp(1.0L, 32), Mode::BlockAnalytic);
  const auto main = lacunary::arctan_discrepancy(blocks, std::ldexp(1.0L, 512), Mode::BlockAnalytic);
  const auto control = lacunary::arctan_discrepancy(all, 1e8L, Mode::BlockAnalytic);
  row("schedule, n = (2^16)^2", early);
  row("schedule, n = (2^256)^2", main);
  row("full indicator, n = 1e8", control);
  r.checks.push_back(make_check("schedule indicator at n = 2^512: delta / log n", "lacunary.ratio", main.ratio, ">=",
                                tol(c, "lacunary.ratio", 0.3), "block-analytic evaluation; limit pi/8 along n = n_{2m}^2"));
  r.checks.push_back(make_check("full indicator at n = 1e8: |delta| / log n", "lacunary.control", std::abs(control.ratio), "<=",
                                tol(c, "lacunary.control", 0.05), "both sums grow like (pi/4) log n"));
  r.checks.push_back(make_check("error bound / log n at n = 2^512", "lacunary.error", main.error / main.log_n, "<=",
                                tol(c, "lacunary.error", 1e-6), "Euler-Maclaurin remainder plus panel quadrature error"));
  double worst = 0.0;
  for (const auto* list : {&blocks, &all}) {
    const auto d = lacunary::arctan_discrepancy(*list, 1e6L, Mode::Direct);
    const auto b = lacunary::arctan_discrepancy(*list, 1e6L, Mode::BlockAnalytic);
    worst = std::max(worst, std::abs(d.delta - b.delta) / (1.0 + std::abs(d.delta)));
    row(std::string(list == &blocks ? "schedule" : "full indicator") + ", n = 1e6, direct", d);
    row(std::string(list == &blocks ? "schedule" : "full indicator") + ", n = 1e6, block", b);
  }
  r.checks.push_back(make_check("block vs direct at n = 1e6: |difference| / (1 + |direct|)", "lacunary.agreement", worst, "<=",
                                tol(c, "lacunary.agreement", 1e-6), "term-by-term oracle"));
  r.data["schedule_2^32"] = delta_json(early);
  r.data["schedule_2^512"] = delta_json(main);
  r.data["full_1e8"] = delta_json(control);
  if (r.passed()) r.conclusions.push_back("Delta(n) / log n stays away from 0 along n = n_{2m}^2: the limits disagree");
  return r;
}

using Runner = ExperimentResult (*)(const ExperimentConfig&);

struct Entry {
  ExperimentInfo info;
  Runner run;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {{"theta-sum", "Gaussian theta sums against sqrt(pi)/t, 1/t^2, sqrt(pi)/(2t^3)",
        {"theta.plain", "theta.abs", "theta.square", "theta.tail"}}, theta_sum},
      {{"lattice-count", "lattice points in a ball against the volume asymptotic", {"lattice.residual"}}, lattice_count},
      {{"zeta-trace", "signed lattice zeta sums are universally measurable", {"zeta.c_rel"}}, zeta_trace},
      {{"dixmier", "eigenvalue partial sums against index and square-window surrogates",
        {"dixmier.index_gap", "dixmier.window_gap"}}, dixmier},
      {{"measurability", "verdicts on synthetic and closed-form series", {"measurability.c_abs"}}, measurability},
      {{"heat-fit", "heat-trace asymptotic coefficients", {"heat.c_rel", "heat.epsilon"}}, heat_fit},
      {{"phi-smoothing", "smoothed against sharp spectral cutoff", {"phi.delta"}}, phi_smoothing},
      {{"fubini-torus", "heat coefficients multiply on a product of tori", {"torus.factor_rel", "torus.product_rel"}},
       fubini_torus},
      {{"hard-example", "phase-block counterexample: product trace nonzero, factor traces zero",
        {"hard.F_margin", "hard.remainder", "hard.nonresonant", "hard.product_rel", "hard.factor_abs", "hard.fubini_sigma",
         "hard.base128_margin"}}, hard_example},
      {{"second-example", "dilated counterexample: strict inequality of traces",
        {"second.xi0_zero", "second.xi0_sum", "second.one_dim_rel", "second.two_dim_rel", "second.margin_sigma"}},
       second_example},
      {{"appendix-b", "arctangent-weighted sums disagree along a lacunary schedule",
        {"lacunary.ratio", "lacunary.control", "lacunary.error", "lacunary.agreement"}}, lacunary_indicator},
  };
  return list;
}

}  // namespace

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> infos = [] {
    std::vector<ExperimentInfo> out;
    std::vector<std::string> all_keys;
    for (const auto& e : entries()) {
      out.push_back(e.info);
      all_keys.insert(all_keys.end(), e.info.tolerance_keys.begin(), e.info.tolerance_keys.end());
    }
    out.push_back({"suite", "every experiment above, sequentially", all_keys});
    return out;
  }();
  return infos;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : registry()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["experiment"] = experiment;
  if (max_n) j["max_n"] = *max_n;
  if (max_m_exp) j["max_m_exp"] = *max_m_exp;
  if (p) j["p"] = *p;
  if (t_min) j["t_min"] = *t_min;
  if (t_max) j["t_max"] = *t_max;
  if (t_points) j["t_points"] = *t_points;
  if (theta) j["theta"] = theta->to_string();
  if (mode) j["mode"] = *mode;
  j["format"] = format;
  Json t = Json::object();
  for (const auto& [k, v] : tolerances) t[k] = v;
  j["tolerance"] = t;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigurationError("config: expected a JSON object");
  ExperimentConfig c;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& k = it.key();
      const Json& v = it.value();
      if (k == "experiment") c.experiment = v.get<std::string>();
      else if (k == "max_n") c.max_n = v.get<long long>();
      else if (k == "max_m_exp") c.max_m_exp = v.get<int>();
      else if (k == "p") c.p = v.get<unsigned>();
      else if (k == "t_min") c.t_min = v.get<double>();
      else if (k == "t_max") c.t_max = v.get<double>();
      else if (k == "t_points") c.t_points = v.get<unsigned>();
      else if (k == "theta") c.theta = RationalAngle::parse(v.get<std::string>());
      else if (k == "mode") c.mode = v.get<std::string>();
      else if (k == "output") c.output = v.get<std::string>();
      else if (k == "format") c.format = v.get<std::string>();
      else if (k == "tolerance") {
        for (auto t = v.begin(); t != v.end(); ++t) c.tolerances[t.key()] = t.value().get<double>();
      } else {
        throw ConfigurationError("config: unknown key '" + k + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigurationError(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig ExperimentConfig::overridden_by(const ExperimentConfig& f) const {
  ExperimentConfig c = *this;
  if (!f.experiment.empty()) c.experiment = f.experiment;
  if (f.max_n) c.max_n = f.max_n;
  if (f.max_m_exp) c.max_m_exp = f.max_m_exp;
  if (f.p) c.p = f.p;
  if (f.t_min) c.t_min = f.t_min;
  if (f.t_max) c.t_max = f.t_max;
  if (f.t_points) c.t_points = f.t_points;
  if (f.theta) c.theta = f.theta;
  if (f.mode) c.mode = f.mode;
  if (f.output) c.output = f.output;
  if (!f.format.empty()) c.format = f.format;
  for (const auto& [k, v] : f.tolerances) c.tolerances[k] = v;
  return c;
}

void validate(const ExperimentConfig& c) {
  const ExperimentInfo* info = find_experiment(c.experiment);
  if (!info) throw ConfigurationError("unknown experiment '" + c.experiment + "'");
  if (c.format != "json" && c.format != "csv") throw ConfigurationError("format must be json or csv");
  if (c.mode && *c.mode != "direct" && *c.mode != "block_analytic") {
    throw ConfigurationError("mode must be direct or block_analytic");
  }
  for (const auto& [k, v] : c.tolerances) {
    if (std::find(info->tolerance_keys.begin(), info->tolerance_keys.end(), k) == info->tolerance_keys.end()) {
      throw ConfigurationError("tolerance key '" + k + "' does not apply to " + c.experiment);
    }
    if (!std::isfinite(v)) throw ConfigurationError("tolerance '" + k + "' must be finite");
  }
  if (c.theta && c.theta->is_multiple_of_2pi()) throw ConfigurationError("theta must not lie in 2 pi Z");
  if (c.max_n && *c.max_n < 1) throw RangeError("max-n must be positive");
  if (c.p && (*c.p < 1 || *c.p > 4)) throw RangeError("p must be in 1..4");
  if (c.t_min && !(*c.t_min >= 1e-4)) throw RangeError("t-min must be at least 1e-4");
  if (c.t_max && !(*c.t_max <= 10.0)) throw RangeError("t-max must be at most 10");
  if (c.t_points && (*c.t_points < 8 || *c.t_points > 4096)) throw RangeError("t-points must be in 8..4096");
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  if (config.experiment == "suite") throw ConfigurationError("run_experiment: use run_suite for the suite");
  for (const auto& e : entries()) {
    if (e.info.name == config.experiment) {
      ExperimentResult r = e.run(config);
      r.experiment = config.experiment;
      r.config = config.to_json();
      return r;
    }
  }
  throw ConfigurationError("unknown experiment '" + config.experiment + "'");
}

std::vector<ExperimentResult> run_suite(const ExperimentConfig& config) {
  validate(config);
  std::vector<ExperimentResult> out;
  for (const auto& e : entries()) {
    ExperimentConfig c;
    c.experiment = e.info.name;
    c.format = config.format;
    for (const auto& [k, v] : config.tolerances) {
      if (std::find(e.info.tolerance_keys.begin(), e.info.tolerance_keys.end(), k) != e.info.tolerance_keys.end()) {
        c.tolerances[k] = v;
      }
    }
    out.push_back(run_experiment(c));
  }
  return out;
}

std::string render(const ExperimentConfig& config, const std::vector<ExperimentResult>& results) {
  const bool suite = config.experiment == "suite";
  if (config.format == "csv") {
    if (suite || results.empty()) return report::to_csv(report::check_table(results));
    const auto& t = results.front().table;
    return report::to_csv(t.columns.empty() ? report::check_table(results) : t);
  }
  if (!suite && results.size() == 1) return report::dump_json(report::result_json(results.front()));
  Json j;
  j["experiment"] = config.experiment;
  j["config"] = config.to_json();
  bool all = true;
  for (const auto& r : results) all = all && r.passed();
  j["passed"] = all;
  Json rs = Json::array();
  for (const auto& r : results) rs.push_back(report::result_json(r));
  j["results"] = rs;
  return report::dump_json(j);
}

std::string check_summary(const std::vector<ExperimentResult>& results) {
  std::ostringstream out;
  for (const auto& r : results) {
    for (const auto& c : r.checks) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g %s %.6g", c.value, c.relation.c_str(), c.bound);
      out << (c.passed ? "PASS" : "FAIL") << "  " << r.experiment << "  " << c.name << "  [" << buf << "]\n";
    }
    for (const auto& line : r.conclusions) out << r.experiment << ": " << line << "\n";
  }
  return out.str();
}

}  // namespace fubini::experiments
