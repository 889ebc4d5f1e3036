#pragma once

// Independent checks on the closed forms: adaptive integration of
// y'' + Omega^2(t) y = 0, Wronskians, and direct application of the
// first-order factor operators.

#include <array>
#include <concepts>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "core.hpp"
#include "finite_difference.hpp"
#include "modes.hpp"
#include "profiles.hpp"
#include "riccati.hpp"

namespace chirp {

struct IVP {
  ProfileKind profile;
  OscillatorParams params;
  complex y0;
  complex dy0;
  double t0;
  double t1;

  /// Throws config_error unless [t0, t1] avoids every singularity.
  void validate() const {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1))
      throw config_error("IVP: need finite t0 < t1");
    if (!std::isfinite(y0.real()) || !std::isfinite(y0.imag()) ||
        !std::isfinite(dy0.real()) || !std::isfinite(dy0.imag()))
      throw config_error("IVP: initial data must be finite");
    if (requires_imaginary_shift(profile))
      require_imaginary_shift(params, to_string(profile));
    if (involves_tan(profile)) {
      const double guard = default_guard(params);
      if (!singularity_locations(params, t0 - guard, t1 + guard).empty())
        throw config_error("IVP: [t0, t1] contains a singularity of tan(omega0 t)");
    }
  }
};

inline constexpr double kMinIntegratorTol = 1e-13;

/// Integrates the IVP with the Dormand-Prince 5(4) pair under step-size
/// control, landing exactly on each output time (which must be strictly
/// increasing inside (t0, t1]; an empty list means just t1). The complex
/// system is carried as four reals (Re y, Im y, Re y', Im y').
inline Trace integrate(const IVP& ivp, double rel_tol, double abs_tol,
                       std::vector<double> output_times = {}) {
  namespace odeint = boost::numeric::odeint;
  using state = std::array<double, 4>;

  ivp.validate();
  if (!(rel_tol >= kMinIntegratorTol) || !(abs_tol >= kMinIntegratorTol))
    throw config_error("integrator tolerances must be >= 1e-13");
  if (output_times.empty()) output_times.push_back(ivp.t1);
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    const double t = output_times[i];
    if (!(t > ivp.t0) || t > ivp.t1 || (i > 0 && !(t > output_times[i - 1])))
      throw config_error("output times must increase strictly within (t0, t1]");
  }

  const ProfileKind kind = ivp.profile;
  const OscillatorParams& p = ivp.params;
  double last_t = ivp.t0;
  auto rhs = [&](const state& x, state& dx, double t) {
    last_t = t;
    // The controller may probe a little past t1; stay on the regular side.
    const complex w2 = freq_sq(kind, p, t, 0.0);
    const complex y(x[0], x[1]);
    const complex a = -w2 * y;
    dx = {x[2], x[3], a.real(), a.imag()};
  };

  std::vector<double> times;
  times.reserve(output_times.size() + 1);
  times.push_back(ivp.t0);
  times.insert(times.end(), output_times.begin(), output_times.end());

  Trace out;
  out.label = std::string("integrate:") + to_string(kind);
  out.times.reserve(output_times.size());
  out.values.reserve(output_times.size());
  out.derivatives.reserve(output_times.size());
  auto observer = [&](const state& x, double t) {
    if (t == ivp.t0) return;
    out.times.push_back(t);
    out.values.emplace_back(x[0], x[1]);
    out.derivatives.emplace_back(x[2], x[3]);
  };

  state x{ivp.y0.real(), ivp.y0.imag(), ivp.dy0.real(), ivp.dy0.imag()};
  auto stepper = odeint::make_controlled(abs_tol, rel_tol,
                                         odeint::runge_kutta_dopri5<state>());
  const double dt0 = std::min(1e-3 * p.period(), ivp.t1 - ivp.t0);
  try {
    odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), dt0, observer);
  } catch (const singularity_error&) {
    throw numerical_error("integrator reached a singularity near t = " +
                          std::to_string(last_t));
  } catch (const odeint::step_adjustment_error& e) {
    throw numerical_error(std::string("integrator step size underflow near t = ") +
                          std::to_string(last_t) + " (" + e.what() + ")");
  }
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i].real()) || !std::isfinite(out.values[i].imag()))
      throw numerical_error("integrator produced a non-finite value at t = " +
                            std::to_string(out.times[i]));
  }
  return out;
}

/// Anything that provides a value and a time derivative.
template <class F>
concept ModeEvaluator = requires(const F& f, double t) {
  { f.value(t) } -> std::convertible_to<complex>;
  { f.derivative(t) } -> std::convertible_to<complex>;
};

/// Closed-form mode bound to its parameters.
struct ClosedFormMode {
  ModeKind kind;
  OscillatorParams params;
  ModeOptions options{};

  complex value(double t) const { return mode(kind, params, t, options); }
  complex derivative(double t) const { return mode_derivative(kind, params, t, options); }
  complex operator()(double t) const { return value(t); }
};

template <ModeEvaluator F, ModeEvaluator G>
complex wronskian(const F& f, const G& g, double t) {
  return f.value(t) * g.derivative(t) - f.derivative(t) * g.value(t);
}

inline complex wronskian(ModeKind f, ModeKind g, const OscillatorParams& p, double t,
                         const ModeOptions& opts = {}) {
  if (f == ModeKind::U1 || g == ModeKind::U1) {
    // Share one series evaluation for both U1 and U1'.
    const U1Evaluation e = evaluate_U1(p, t, opts);
    const ClosedFormMode other{f == ModeKind::U1 ? g : f, p, opts};
    const complex ov = other.kind == ModeKind::U1 ? e.value : other.value(t);
    const complex od = other.kind == ModeKind::U1 ? e.derivative : other.derivative(t);
    return f == ModeKind::U1 ? e.value * od - e.derivative * ov
                             : ov * e.derivative - od * e.value;
  }
  return wronskian(ClosedFormMode{f, p, opts}, ClosedFormMode{g, p, opts}, t);
}

enum class FactorOrder {
  PlusMinus,  // (d/dt + R_S)(d/dt - R_S), annihilates the U family
  MinusPlus   // (d/dt - R_S)(d/dt + R_S), annihilates the V family
};

inline const char* to_string(FactorOrder o) noexcept {
  return o == FactorOrder::PlusMinus ? "PlusMinus" : "MinusPlus";
}

inline constexpr double kOperatorStep = 1e-4;

/// Applies the two factor operators with R_S = -w tan(w t) + S, every
/// derivative taken by five-point central differences (the inner one
/// nested inside the outer one, so the stencil spans t +- 4 step).
template <std::invocable<double> F>
complex factorization_apply(FactorOrder order, const OscillatorParams& p, const F& f,
                            double t, double step = kOperatorStep) {
  fd::require_stencil(p, t, 2.0 * step);
  const double sign = order == FactorOrder::PlusMinus ? 1.0 : -1.0;
  auto inner = [&](double x) -> complex {
    const complex y = f(x);
    return fd::first_derivative(f, x, step) - sign * riccati_shifted(p, x, 0.0) * y;
  };
  return fd::first_derivative(inner, t, step) + sign * riccati_shifted(p, t, 0.0) * inner(t);
}

/// |residual| / (|f(t)| (1 + |R_S|^2)): the operators multiply f by up to
/// R_S^2, so this is the natural relative measure near the poles.
template <std::invocable<double> F>
double scaled_factorization_residual(FactorOrder order, const OscillatorParams& p,
                                     const F& f, double t, double step = kOperatorStep) {
  const complex r = factorization_apply(order, p, f, t, step);
  const complex rs = riccati_shifted(p, t);
  return std::abs(r) / (std::abs(complex(f(t))) * (1.0 + std::norm(rs)));
}

}  // namespace chirp
