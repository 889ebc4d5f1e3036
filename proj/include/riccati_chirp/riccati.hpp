#pragma once

// Particular Riccati solution of the harmonic oscillator, its constant
// shift, and residuals of the four Riccati forms built from them.

#include "core.hpp"
#include "finite_difference.hpp"

namespace chirp {

/// Which Riccati equation a residual is taken against. With R = -w tan(w t),
/// R_S = R + S and f the constant potential:
///   Standard             R' + R^2 + f
///   StandardPartner      -R' + R^2 + (f + 2R')
///   NonStandardShiftedU  R_S' - 2 S R_S + R_S^2 + (f + S^2)
///   NonStandardShiftedV  -R_S' - 2 S R_S + R_S^2 + (f + 2R' + S^2)
/// The shifted U form is the Riccati equation of u_S = e^{St} u, the shifted
/// V form that of v_S = e^{St} v (v the partner solution 1/u).
enum class RiccatiVariant {
  Standard,
  StandardPartner,
  NonStandardShiftedU,
  NonStandardShiftedV
};

struct RiccatiForm {
  RiccatiVariant variant;
  complex f0;  // constant potential value

  /// The harmonic-oscillator instance, f = omega0^2.
  static RiccatiForm harmonic(RiccatiVariant v, const OscillatorParams& p) {
    return {v, complex(p.omega0() * p.omega0(), 0.0)};
  }
};

/// R_{u1}(t) = u1'/u1 = -omega0 tan(omega0 t) for u1 = cos(omega0 t).
inline complex riccati_u1(const OscillatorParams& p, double t, double guard) {
  require_regular(p, t, guard);
  return {-p.omega0() * std::tan(p.omega0() * t), 0.0};
}

inline complex riccati_u1(const OscillatorParams& p, double t) {
  return riccati_u1(p, t, default_guard(p));
}

/// R_S(t) = -omega0 tan(omega0 t) + S.
inline complex riccati_shifted(const OscillatorParams& p, double t, double guard) {
  return riccati_u1(p, t, guard) + p.shift();
}

inline complex riccati_shifted(const OscillatorParams& p, double t) {
  return riccati_shifted(p, t, default_guard(p));
}

inline constexpr double kRiccatiStep = 1e-5;

/// Left-hand side of the selected Riccati form with R' from a five-point
/// central difference. Vanishes (to O(step^4) plus rounding) for the
/// solutions above.
inline complex riccati_residual(const RiccatiForm& form, const OscillatorParams& p,
                                double t, double step = kRiccatiStep) {
  fd::require_stencil(p, t, step);
  const auto r = [&p](double x) { return riccati_u1(p, x); };
  const complex R = r(t);
  const complex dR = fd::first_derivative(r, t, step);
  const complex S = p.shift();
  const complex f = form.f0;
  switch (form.variant) {
    case RiccatiVariant::Standard:
      return dR + R * R + f;
    case RiccatiVariant::StandardPartner:
      return -dR + R * R + (f + 2.0 * dR);
    case RiccatiVariant::NonStandardShiftedU: {
      const complex RS = R + S;
      return dR - 2.0 * S * RS + RS * RS + (f + S * S);
    }
    case RiccatiVariant::NonStandardShiftedV: {
      const complex RS = R + S;
      return -dR - 2.0 * S * RS + RS * RS + (f + 2.0 * dR + S * S);
    }
  }
  return {};
}

/// Residual divided by (1 + |R|^2): raw residuals grow like tan^2 near the
/// poles even for exact solutions.
inline double scaled_riccati_residual(const RiccatiForm& form,
                                      const OscillatorParams& p, double t,
                                      double step = kRiccatiStep) {
  const complex res = riccati_residual(form, p, t, step);
  const bool shifted = form.variant == RiccatiVariant::NonStandardShiftedU ||
                       form.variant == RiccatiVariant::NonStandardShiftedV;
  const complex R = shifted ? riccati_shifted(p, t) : riccati_u1(p, t);
  return std::abs(res) / (1.0 + std::norm(R));
}

inline const char* to_string(RiccatiVariant v) noexcept {
  switch (v) {
    case RiccatiVariant::Standard: return "Standard";
    case RiccatiVariant::StandardPartner: return "StandardPartner";
    case RiccatiVariant::NonStandardShiftedU: return "NonStandardShiftedU";
    case RiccatiVariant::NonStandardShiftedV: return "NonStandardShiftedV";
  }
  return "?";
}

}  // namespace chirp
