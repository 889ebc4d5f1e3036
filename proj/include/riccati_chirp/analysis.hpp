#pragma once

// Classification by periodicity and boundedness, and the invariant audit:
// one InvariantReport per checked property over a TimeGrid.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hypergeometric.hpp"
#include "modes.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "profiles.hpp"
#include "riccati.hpp"

namespace chirp {

inline constexpr double kIntegerMatchTol = 1e-9;

/// Periodic for s/w0 = 2m - 1, antiperiodic for s/w0 = 2m with m != 0,
/// bounded quasiperiodic for any other real Omega_S = w0 + s, unbounded
/// when Re S != 0 makes Omega_S complex. s = 0 is bounded, not
/// antiperiodic: the antiperiodic family excludes m = 0.
inline Classification classify(const OscillatorParams& p) {
  const double period = p.period();
  if (!p.purely_imaginary_shift()) return {Verdict::Unbounded, std::nullopt, period};
  const double r = p.s() / p.omega0();
  const double n = std::round(r);
  constexpr double kMaxWitness = 9.0e18;
  if (std::abs(n) > kMaxWitness || std::abs(r - n) > kIntegerMatchTol)
    return {Verdict::QuasiperiodicBounded, std::nullopt, period};
  const auto k = static_cast<long>(n);
  if (k % 2 != 0) return {Verdict::Periodic, (k + 1) / 2, period};
  if (k != 0) return {Verdict::Antiperiodic, k / 2, period};
  return {Verdict::QuasiperiodicBounded, std::nullopt, period};
}

struct InvariantReport {
  std::string name;
  double max_abs_deviation = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string grid;
  double worst_t = std::numeric_limits<double>::quiet_NaN();
  /// Reversed sense: the property holds when the deviation exceeds the
  /// threshold (used for "must not be constant").
  bool expect_above = false;
};

namespace detail {

// Running maximum that remembers where it occurred. NaN deviations count
// as infinite so that they can never pass.
struct MaxTracker {
  double value = 0.0;
  double where = std::numeric_limits<double>::quiet_NaN();
  void add(double dev, double t) {
    if (std::isnan(dev)) dev = std::numeric_limits<double>::infinity();
    if (dev > value || std::isnan(where)) {
      value = std::max(value, dev);
      where = t;
    }
  }
};

inline InvariantReport finish(std::string name, const MaxTracker& m, double threshold,
                              const TimeGrid& grid, bool expect_above = false) {
  InvariantReport r;
  r.name = std::move(name);
  r.max_abs_deviation = m.value;
  r.threshold = threshold;
  r.passed = expect_above ? m.value > threshold : m.value < threshold;
  r.grid = grid.describe();
  r.worst_t = m.where;
  r.expect_above = expect_above;
  return r;
}

inline void require_nonempty(const TimeGrid& grid) {
  if (grid.empty()) throw config_error("report needs a non-empty grid");
}

inline bool is_shifted(ModeKind k) {
  return k == ModeKind::U1 || k == ModeKind::U2 || k == ModeKind::V1 || k == ModeKind::V2;
}

}  // namespace detail

/// True when U1's series parameter c = 2 - iS/w0 is a pole of 2F1, i.e.
/// S = i s with s/w0 in {-2, -3, ...}; U1 is undefined there.
inline bool u1_undefined(const OscillatorParams& p) {
  const complex c = 2.0 - I * p.shift() / p.omega0();
  return detail::nonpositive_integer(c).has_value();
}

/// |y'' + Omega^2 y| / (1 + |Omega^2 y|) with y'' from the five-point
/// stencil.
inline double scaled_ode_residual(ModeKind kind, const OscillatorParams& p, double t,
                                  double step = kOperatorStep,
                                  const ModeOptions& opts = {}) {
  fd::require_stencil(p, t, step);
  const auto f = [&](double x) { return mode(kind, p, x, opts); };
  const complex y = f(t);
  const complex w2 = freq_sq(governing_profile(kind), p, t);
  const complex d2 = fd::second_derivative(f, t, step);
  return std::abs(d2 + w2 * y) / (1.0 + std::abs(w2 * y));
}

inline constexpr double kRiccatiThreshold = 1e-6;
inline constexpr double kOdeResidualThreshold = 1e-5;
inline constexpr double kFactorizationThreshold = 1e-6;
inline constexpr double kProductThreshold = 1e-9;
inline constexpr double kProductVariationThreshold = 1.01;
inline constexpr double kPeriodicityThreshold = 1e-8;
inline constexpr double kPeriodicityU1Threshold = 1e-6;
inline constexpr double kFloquetThreshold = 1e-10;
inline constexpr double kPtThreshold = 1e-10;
inline constexpr double kWronskianThreshold = 1e-8;
inline constexpr double kGaugeThreshold = 1e-6;
inline constexpr double kAppendixThreshold = 1e-8;
inline constexpr double kTransformThreshold = 1e-9;
inline constexpr double kUlpThreshold = 8.0;
inline constexpr double kIntegratorThreshold = 1e-6;

inline InvariantReport riccati_report(RiccatiVariant v, const OscillatorParams& p,
                                      const TimeGrid& grid,
                                      double threshold = kRiccatiThreshold) {
  detail::require_nonempty(grid);
  const RiccatiForm form = RiccatiForm::harmonic(v, p);
  detail::MaxTracker m;
  for (double t : grid.points()) m.add(scaled_riccati_residual(form, p, t), t);
  return detail::finish(std::string("riccati:") + to_string(v), m, threshold, grid);
}

inline InvariantReport ode_residual_report(ModeKind kind, const OscillatorParams& p,
                                           const TimeGrid& grid,
                                           double threshold = kOdeResidualThreshold,
                                           const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  detail::MaxTracker m;
  for (double t : grid.points())
    m.add(scaled_ode_residual(kind, p, t, kOperatorStep, opts), t);
  return detail::finish(std::string("ode_residual:") + to_string(kind), m, threshold, grid);
}

/// Factor operators built from R_S = R + S for the U/V families and from
/// R itself (S = 0) for u/v; PlusMinus for u and U, MinusPlus for v and V.
inline InvariantReport factorization_report(ModeKind kind, const OscillatorParams& p,
                                            const TimeGrid& grid,
                                            double threshold = kFactorizationThreshold,
                                            const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  const bool shifted = detail::is_shifted(kind);
  const OscillatorParams q = shifted ? p : p.with_shift(0.0);
  const bool u_family = governing_profile(kind) == ProfileKind::ConstantOmega0Sq ||
                        governing_profile(kind) == ProfileKind::ShiftedU;
  const FactorOrder order = u_family ? FactorOrder::PlusMinus : FactorOrder::MinusPlus;
  const auto f = [&](double x) { return mode(kind, q, x, opts); };
  detail::MaxTracker m;
  for (double t : grid.points()) m.add(scaled_factorization_residual(order, q, f, t), t);
  return detail::finish(std::string("factorization:") + to_string(order) + ":" +
                            to_string(kind),
                        m, threshold, grid);
}

/// max |W(t) - W(t0)| / (1 + |W(t0)|) over the grid.
inline InvariantReport wronskian_drift_report(ModeKind f, ModeKind g,
                                              const OscillatorParams& p,
                                              const TimeGrid& grid,
                                              double threshold = kWronskianThreshold,
                                              const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  const auto& pts = grid.points();
  const complex w0 = wronskian(f, g, p, pts.front(), opts);
  detail::MaxTracker m;
  for (double t : pts)
    m.add(std::abs(wronskian(f, g, p, t, opts) - w0) / (1.0 + std::abs(w0)), t);
  return detail::finish(std::string("wronskian:") + to_string(f) + "," + to_string(g), m,
                        threshold, grid);
}

/// Relative spread max |p(t) - p(t0)| / |p(t0)| of the product of two
/// modes; the (u1, v1) pair additionally has to equal w0.
inline InvariantReport product_invariant_report(std::pair<ModeKind, ModeKind> pair,
                                                const OscillatorParams& p,
                                                const TimeGrid& grid,
                                                double threshold = kProductThreshold,
                                                const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  const auto prod = [&](double t) {
    return mode(pair.first, p, t, opts) * mode(pair.second, p, t, opts);
  };
  const auto& pts = grid.points();
  const complex p0 = prod(pts.front());
  detail::MaxTracker m;
  if (pair == std::pair{ModeKind::u1, ModeKind::v1} ||
      pair == std::pair{ModeKind::v1, ModeKind::u1})
    m.add(std::abs(p0 - p.omega0()) / p.omega0(), pts.front());
  for (double t : pts) m.add(std::abs(prod(t) - p0) / std::abs(p0), t);
  return detail::finish(std::string("product:") + to_string(pair.first) + "*" +
                            to_string(pair.second),
                        m, threshold, grid);
}

/// max |p| / min |p| of a product over the grid.
inline double product_variation_ratio(std::pair<ModeKind, ModeKind> pair,
                                      const OscillatorParams& p, const TimeGrid& grid,
                                      const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double t : grid.points()) {
    const double a = std::abs(mode(pair.first, p, t, opts) * mode(pair.second, p, t, opts));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

/// Passes when the product is demonstrably not constant.
inline InvariantReport product_variation_report(std::pair<ModeKind, ModeKind> pair,
                                                const OscillatorParams& p,
                                                const TimeGrid& grid,
                                                double threshold = kProductVariationThreshold) {
  detail::MaxTracker m;
  m.add(product_variation_ratio(pair, p, grid), grid.points().front());
  return detail::finish(std::string("product_nonconstant:") + to_string(pair.first) + "*" +
                            to_string(pair.second),
                        m, threshold, grid, true);
}

/// max |mode(t + T) - sigma mode(t)| / (1 + |mode(t)|), T = pi / w0,
/// sigma = +1 (Periodic) or -1 (Antiperiodic) from classify.
inline InvariantReport verify_periodicity(const OscillatorParams& p, ModeKind kind,
                                          const TimeGrid& grid,
                                          std::optional<double> threshold = std::nullopt,
                                          const ModeOptions& opts = {}) {
  detail::require_nonempty(grid);
  if (!detail::is_shifted(kind))
    throw config_error("periodicity is verified for the shifted modes U1, U2, V1, V2");
  const Classification c = classify(p);
  const auto sigma = c.translation_sign();
  if (!sigma)
    throw config_error(std::string("periodicity check needs a Periodic or Antiperiodic "
                                   "configuration, got ") +
                       to_string(c.verdict));
  const double thr = threshold.value_or(kind == ModeKind::U1 ? kPeriodicityU1Threshold
                                                             : kPeriodicityThreshold);
  detail::MaxTracker m;
  for (double t : grid.points()) {
    const complex a = mode(kind, p, t, opts);
    const complex b = mode(kind, p, t + c.reference_period, opts);
    m.add(std::abs(b - static_cast<double>(*sigma) * a) / (1.0 + std::abs(a)), t);
  }
  return detail::finish(std::string("periodicity:") + to_string(kind), m, thr, grid);
}

/// U2(t + T) = -e^{i s pi / w0} U2(t) for S = i s, relative to |U2(t)|
/// (plus one, to stay finite at the zeros of cos).
inline InvariantReport floquet_report(const OscillatorParams& p, const TimeGrid& grid,
                                      double threshold = kFloquetThreshold) {
  detail::require_nonempty(grid);
  require_imaginary_shift(p, "Floquet-Bloch check");
  const double T = p.period();
  const complex factor = -std::exp(I * p.s() * T);
  detail::MaxTracker m;
  for (double t : grid.points()) {
    const complex a = mode(ModeKind::U2, p, t);
    const complex b = mode(ModeKind::U2, p, t + T);
    m.add(std::abs(b - factor * a) / (1.0 + std::abs(a)), t);
  }
  return detail::finish("floquet:U2", m, threshold, grid);
}

/// e^{i Omega_S t} (2 cos^2 - i sin 2wt) against 2 U2, in ulps. The ulp
/// scale carries the conditioning of the trigonometric and exponential
/// arguments (a rounding of w t shifts cos by up to eps w |t|), otherwise
/// large |t| alone would exceed any fixed ulp budget.
inline InvariantReport elementary_form_report(const OscillatorParams& p,
                                              const TimeGrid& grid,
                                              double threshold = kUlpThreshold) {
  detail::require_nonempty(grid);
  const double w = p.omega0();
  constexpr double eps = std::numeric_limits<double>::epsilon();
  detail::MaxTracker m;
  for (double t : grid.points()) {
    const double c = std::cos(w * t);
    const complex ph = std::exp(I * p.quasi_frequency() * t);
    const complex bracket(2.0 * c * c, -std::sin(2.0 * w * t));
    const complex lhs = ph * bracket;
    const complex rhs = 2.0 * mode(ModeKind::U2, p, t);
    const double cond = 1.0 + std::abs(p.quasi_frequency() * t) + std::abs(p.shift() * t);
    const double scale =
        std::abs(ph) * ((2.0 * c * c + std::abs(bracket.imag())) * cond + 4.0 * w * std::abs(t));
    m.add(std::abs(lhs - rhs) / (eps * scale), t);
  }
  return detail::finish("elementary_form:U2", m, threshold, grid);
}

/// max |Omega^2(-t) - conj(Omega^2(t))| for a tan-based profile with a
/// purely imaginary shift, on a grid symmetric about 0.
inline InvariantReport pt_symmetry_report(ProfileKind kind, const OscillatorParams& p,
                                          const TimeGrid& grid,
                                          double threshold = kPtThreshold) {
  detail::require_nonempty(grid);
  require_imaginary_shift(p, "PT symmetry check");
  if (!grid.symmetric()) throw config_error("PT symmetry check needs a grid symmetric about 0");
  detail::MaxTracker m;
  for (double t : grid.points())
    m.add(std::abs(freq_sq(kind, p, -t) - std::conj(freq_sq(kind, p, t))), t);
  return detail::finish(std::string("pt_symmetry:") + to_string(kind), m, threshold, grid);
}

/// Gauge-shifted equations: u_S = e^{St} cos(w t) solves
/// y'' - 2S y' + (w^2 + S^2) y = 0 and v_S = e^{St} v1 solves the same with
/// w^2 replaced by the partner profile. Residual relative to
/// |y| (1 + |coefficient|), derivatives by five-point stencils.
inline InvariantReport gauge_shift_report(bool partner, const OscillatorParams& p,
                                          const TimeGrid& grid,
                                          double threshold = kGaugeThreshold) {
  detail::require_nonempty(grid);
  const complex S = p.shift();
  const OscillatorParams bare = p.with_shift(0.0);
  const ModeKind base = partner ? ModeKind::v1 : ModeKind::u1;
  const auto y = [&](double x) { return std::exp(S * x) * mode(base, bare, x); };
  detail::MaxTracker m;
  for (double t : grid.points()) {
    fd::require_stencil(p, t, kOperatorStep);
    const complex f = freq_sq(partner ? ProfileKind::PartnerV : ProfileKind::ConstantOmega0Sq,
                              p, t);
    const complex coef = f + S * S;
    const complex v = y(t);
    const complex d1 = fd::first_derivative(y, t, kOperatorStep);
    const complex d2 = fd::second_derivative(y, t, kOperatorStep);
    const complex res = d2 - 2.0 * S * d1 + coef * v;
    m.add(std::abs(res) / (std::abs(v) * (1.0 + std::abs(coef) + std::abs(S))), t);
  }
  return detail::finish(partner ? "gauge_shift:v_S" : "gauge_shift:u_S", m, threshold, grid);
}

/// True when the transformed argument |x| = 1 / (2 |cos w t|) is at most
/// `max_abs_x`.
inline bool transformed_argument_within(const OscillatorParams& p, double t,
                                        double max_abs_x) {
  return 1.0 / (2.0 * std::abs(std::cos(p.omega0() * t))) <= max_abs_x;
}

inline constexpr double kCrossCheckMaxArg = 0.9;

/// Direct series on |z| = 1 against the transformed series, relative, at
/// the grid points where |z/(z-1)| <= 0.9.
inline InvariantReport u1_route_agreement_report(const OscillatorParams& p,
                                                 const TimeGrid& grid,
                                                 double threshold = kTransformThreshold) {
  detail::require_nonempty(grid);
  ModeOptions direct, transformed;
  direct.route = U1Route::Direct;
  transformed.route = U1Route::Transformed;
  detail::MaxTracker m;
  for (double t : grid.points()) {
    if (!transformed_argument_within(p, t, kCrossCheckMaxArg)) continue;
    const complex a = evaluate_U1(p, t, direct, false).value;
    const complex b = evaluate_U1(p, t, transformed, false).value;
    m.add(std::abs(a - b) / std::abs(a), t);
  }
  return detail::finish("appendix:U1_direct_vs_transformed", m, threshold, grid);
}

/// Gamma-ratio series against U1 at the grid points where the former
/// converges (|cos w t| > 1/2).
inline InvariantReport gamma_ratio_report(const OscillatorParams& p, const TimeGrid& grid,
                                          double threshold = kAppendixThreshold) {
  detail::require_nonempty(grid);
  detail::MaxTracker m;
  for (double t : grid.points()) {
    if (!transformed_argument_within(p, t, kCrossCheckMaxArg)) continue;
    const SeriesResult g = gamma_ratio_series_U1(p, t);
    if (!g.converged) continue;
    const complex u = mode(ModeKind::U1, p, t);
    m.add(std::abs(g.value - u) / std::abs(u), t);
  }
  return detail::finish("appendix:gamma_ratio_vs_U1", m, threshold, grid);
}

/// w0^2 (1 + h) against ImagShiftU and s^2 (1 + g) against ImagShiftV, in
/// ulps of the summed term magnitudes.
inline InvariantReport pump_consistency_report(bool use_g, const OscillatorParams& p,
                                               const TimeGrid& grid,
                                               double threshold = kUlpThreshold) {
  detail::require_nonempty(grid);
  require_imaginary_shift(p, "pump consistency check");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double w2 = p.omega0() * p.omega0();
  const double s2 = p.s() * p.s();
  detail::MaxTracker m;
  for (double t : grid.points()) {
    complex a, b;
    double scale;
    if (use_g) {
      const complex g = pump_g(p, t);
      a = s2 * (1.0 + g);
      b = freq_sq(ProfileKind::ImagShiftV, p, t);
      scale = s2 * (1.0 + std::abs(g));
    } else {
      const complex h = pump_h(p, t);
      a = w2 * (1.0 + h);
      b = freq_sq(ProfileKind::ImagShiftU, p, t);
      scale = w2 * (1.0 + std::abs(h));
    }
    m.add(std::abs(a - b) / (eps * scale), t);
  }
  return detail::finish(use_g ? "pump:g" : "pump:h", m, threshold, grid);
}

inline constexpr double kSuiteRelTol = 1e-12;
inline constexpr double kSuiteAbsTol = 1e-13;

/// Integrates from the lower end of the longest grid interval with the
/// closed-form initial data of `kind` and compares against the closed form
/// at every grid point in that interval (relative error).
inline InvariantReport integrator_report(ModeKind kind, const OscillatorParams& p,
                                         const TimeGrid& grid,
                                         double threshold = kIntegratorThreshold,
                                         double rel_tol = kSuiteRelTol,
                                         double abs_tol = kSuiteAbsTol) {
  detail::require_nonempty(grid);
  const auto& ivs = grid.intervals();
  const auto longest = std::max_element(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) {
    return a.length() < b.length();
  });
  std::vector<double> times;
  for (double t : grid.points())
    if (t > longest->lo && t <= longest->hi) times.push_back(t);
  if (times.empty()) throw config_error("integrator check: no grid points to compare");
  const ClosedFormMode ref{kind, p};
  const IVP ivp{governing_profile(kind), p, ref.value(longest->lo),
                ref.derivative(longest->lo), longest->lo, times.back()};
  const Trace tr = integrate(ivp, rel_tol, abs_tol, times);
  detail::MaxTracker m;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const complex exact = ref.value(tr.times[i]);
    m.add(std::abs(tr.values[i] - exact) / std::abs(exact), tr.times[i]);
  }
  return detail::finish(std::string("integrator:") + to_string(kind), m, threshold, grid);
}

/// Named thresholds of the check suite, overridable by name.
class Thresholds {
 public:
  Thresholds()
      : values_{{"riccati", kRiccatiThreshold},
                {"ode_residual", kOdeResidualThreshold},
                {"factorization", kFactorizationThreshold},
                {"wronskian", kWronskianThreshold},
                {"product", kProductThreshold},
                {"product_variation", kProductVariationThreshold},
                {"periodicity", kPeriodicityThreshold},
                {"periodicity_U1", kPeriodicityU1Threshold},
                {"floquet", kFloquetThreshold},
                {"elementary_form_ulps", kUlpThreshold},
                {"pt_symmetry", kPtThreshold},
                {"gauge_shift", kGaugeThreshold},
                {"appendix", kAppendixThreshold},
                {"transform", kTransformThreshold},
                {"pump_ulps", kUlpThreshold},
                {"integrator", kIntegratorThreshold}} {}

  double get(const std::string& name) const { return values_.at(name); }

  void set(const std::string& name, double value) {
    const auto it = values_.find(name);
    if (it == values_.end()) throw config_error("unknown tolerance name '" + name + "'");
    if (!std::isfinite(value) || !(value > 0.0))
      throw config_error("tolerance '" + name + "' must be finite and positive");
    it->second = value;
  }

  const std::map<std::string, double>& all() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

/// One row of the suite: a report, or the reason it was not run.
struct SuiteRow {
  std::string name;
  std::optional<InvariantReport> report;
  std::string skipped;  // non-empty iff report is absent
};

struct SuiteConfig {
  double lo = -2.0 * pi;
  double hi = 2.0 * pi;
  std::size_t points = 400;
  std::optional<double> exclusion_radius;  // default_exclusion_radius(params)
  Thresholds thresholds{};
  unsigned threads = 0;  // 0 = sequential
};

inline bool all_passed(const std::vector<SuiteRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const SuiteRow& r) { return !r.report || r.report->passed; });
}

/// Runs every applicable invariant for `p` and skips, with a reason, the
/// ones whose preconditions the configuration does not meet.
inline std::vector<SuiteRow> run_invariant_suite(const OscillatorParams& p,
                                                 const SuiteConfig& cfg = {}) {
  const double eps = cfg.exclusion_radius.value_or(default_exclusion_radius(p));
  const TimeGrid grid = build_grid(p, cfg.lo, cfg.hi, cfg.points, eps);
  const double half = std::max(std::abs(cfg.lo), std::abs(cfg.hi));
  const TimeGrid sym = build_grid(p, -half, half, cfg.points, eps);
  const Thresholds& th = cfg.thresholds;
  const Classification cls = classify(p);
  const bool imag = p.purely_imaginary_shift();
  const bool u1_ok = !u1_undefined(p);

  struct Task {
    std::string name;
    std::string skip;
    std::function<InvariantReport()> run;
  };
  std::vector<Task> tasks;
  auto add = [&](std::string name, std::string skip, std::function<InvariantReport()> fn) {
    tasks.push_back({std::move(name), std::move(skip), std::move(fn)});
  };
  const std::string no_u1 = "U1 undefined: 2 - iS/omega0 is a pole of 2F1";
  const std::string not_imag = "shift is not purely imaginary";

  for (auto v : {RiccatiVariant::Standard, RiccatiVariant::StandardPartner,
                 RiccatiVariant::NonStandardShiftedU, RiccatiVariant::NonStandardShiftedV})
    add(std::string("riccati:") + to_string(v), "",
        [&, v] { return riccati_report(v, p, grid, th.get("riccati")); });
  for (auto k : kAllModes)
    add(std::string("ode_residual:") + to_string(k),
        k == ModeKind::U1 && !u1_ok ? no_u1 : "",
        [&, k] { return ode_residual_report(k, p, grid, th.get("ode_residual")); });
  for (auto k : kAllModes) {
    if (k == ModeKind::u2 || k == ModeKind::v2) continue;
    add(std::string("factorization:") + to_string(k),
        k == ModeKind::U1 && !u1_ok ? no_u1 : "",
        [&, k] { return factorization_report(k, p, grid, th.get("factorization")); });
  }
  const std::pair<ModeKind, ModeKind> pairs[] = {{ModeKind::u1, ModeKind::u2},
                                                  {ModeKind::v1, ModeKind::v2},
                                                  {ModeKind::U1, ModeKind::U2},
                                                  {ModeKind::V1, ModeKind::V2}};
  for (auto [f, g] : pairs)
    add(std::string("wronskian:") + to_string(f) + "," + to_string(g),
        f == ModeKind::U1 && !u1_ok ? no_u1 : "",
        [&, f, g] { return wronskian_drift_report(f, g, p, grid, th.get("wronskian")); });
  add("product:u1*v1", "", [&] {
    return product_invariant_report({ModeKind::u1, ModeKind::v1}, p, grid, th.get("product"));
  });
  add("product:U2*V1", "", [&] {
    return product_invariant_report({ModeKind::U2, ModeKind::V1}, p, grid, th.get("product"));
  });
  add("product_nonconstant:u2*v2", "", [&] {
    return product_variation_report({ModeKind::u2, ModeKind::v2}, p, grid,
                                    th.get("product_variation"));
  });
  const std::string no_period =
      std::string("classification is ") + to_string(cls.verdict);
  for (auto k : {ModeKind::U1, ModeKind::U2, ModeKind::V1, ModeKind::V2}) {
    std::string skip = cls.translation_sign() ? "" : no_period;
    if (skip.empty() && k == ModeKind::U1 && !u1_ok) skip = no_u1;
    add(std::string("periodicity:") + to_string(k), skip, [&, k] {
      return verify_periodicity(
          p, k, grid, th.get(k == ModeKind::U1 ? "periodicity_U1" : "periodicity"));
    });
  }
  add("floquet:U2", imag ? "" : not_imag,
      [&] { return floquet_report(p, grid, th.get("floquet")); });
  add("elementary_form:U2", "",
      [&] { return elementary_form_report(p, grid, th.get("elementary_form_ulps")); });
  for (auto k : {ProfileKind::ImagShiftU, ProfileKind::ImagShiftV})
    add(std::string("pt_symmetry:") + to_string(k), imag ? "" : not_imag,
        [&, k] { return pt_symmetry_report(k, p, sym, th.get("pt_symmetry")); });
  add("gauge_shift:u_S", "", [&] { return gauge_shift_report(false, p, grid, th.get("gauge_shift")); });
  add("gauge_shift:v_S", "", [&] { return gauge_shift_report(true, p, grid, th.get("gauge_shift")); });
  add("appendix:U1_direct_vs_transformed", u1_ok ? "" : no_u1,
      [&] { return u1_route_agreement_report(p, grid, th.get("transform")); });
  add("appendix:gamma_ratio_vs_U1", u1_ok ? "" : no_u1,
      [&] { return gamma_ratio_report(p, grid, th.get("appendix")); });
  add("pump:h", imag ? "" : not_imag,
      [&] { return pump_consistency_report(false, p, grid, th.get("pump_ulps")); });
  add("pump:g", !imag ? not_imag : p.s() == 0.0 ? "pump g is undefined for s = 0" : "",
      [&] { return pump_consistency_report(true, p, grid, th.get("pump_ulps")); });
  for (auto k : {ModeKind::U2, ModeKind::V1})
    add(std::string("integrator:") + to_string(k), "",
        [&, k] { return integrator_report(k, p, grid, th.get("integrator")); });

  std::vector<SuiteRow> rows(tasks.size());
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t i) {
    rows[i].name = tasks[i].name;
    if (!tasks[i].skip.empty()) {
      rows[i].skipped = tasks[i].skip;
      return;
    }
    rows[i].report = tasks[i].run();
  });
  return rows;
}

}  // namespace chirp
