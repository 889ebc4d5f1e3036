#pragma once

// Closed-form oscillator modes and their analytic time derivatives.
//
// Normalization (the modes are only defined up to constant factors):
//   u1 = cos wt                      u2 = sin wt
//   v1 = w / cos wt                  v2 = (wt/2 + sin(2wt)/4) / (w cos wt)
//   U1 = e^{-i Omega_S t} 2F1(1, -iS/w; 2 - iS/w; -e^{-2iwt})
//   U2 = e^{St} cos wt
//   V1 = e^{-St} / cos wt
//   V2 = e^{St} (w^2 / cos wt + 2 S w sin wt + 2 S^2 cos wt)
// with Omega_S = w - iS. Under this convention u1 v1 = w, U2 V1 = 1,
// W(u1,u2) = W(v1,v2) = w, W(U1,U2) = i Omega_S and W(V1,V2) = 4S(S^2+w^2).

#include <optional>
#include <string_view>

#include "core.hpp"
#include "hypergeometric.hpp"
#include "profiles.hpp"

namespace chirp {

enum class ModeKind { u1, u2, v1, v2, U1, U2, V1, V2 };

inline constexpr ModeKind kAllModes[] = {ModeKind::u1, ModeKind::u2, ModeKind::v1,
                                         ModeKind::v2, ModeKind::U1, ModeKind::U2,
                                         ModeKind::V1, ModeKind::V2};

inline const char* to_string(ModeKind k) noexcept {
  switch (k) {
    case ModeKind::u1: return "u1";
    case ModeKind::u2: return "u2";
    case ModeKind::v1: return "v1";
    case ModeKind::v2: return "v2";
    case ModeKind::U1: return "U1";
    case ModeKind::U2: return "U2";
    case ModeKind::V1: return "V1";
    case ModeKind::V2: return "V2";
  }
  return "?";
}

inline std::optional<ModeKind> parse_mode_kind(std::string_view name) {
  for (auto k : kAllModes)
    if (name == to_string(k)) return k;
  return std::nullopt;
}

/// Equation y'' + Omega^2 y = 0 each mode solves.
inline ProfileKind governing_profile(ModeKind k) noexcept {
  switch (k) {
    case ModeKind::u1:
    case ModeKind::u2: return ProfileKind::ConstantOmega0Sq;
    case ModeKind::v1:
    case ModeKind::v2: return ProfileKind::PartnerV;
    case ModeKind::U1:
    case ModeKind::U2: return ProfileKind::ShiftedU;
    case ModeKind::V1:
    case ModeKind::V2: return ProfileKind::ShiftedV;
  }
  return ProfileKind::ConstantOmega0Sq;
}

/// u1, u2 and U2 are entire; the rest have poles (or, for U1, a branch
/// point of the series argument) at the zeros of cos wt.
inline bool singular_at_poles(ModeKind k) noexcept {
  return !(k == ModeKind::u1 || k == ModeKind::u2 || k == ModeKind::U2);
}

/// How U1 is summed. Auto takes the transformed series whenever its
/// argument is at most kTransformedRadius in modulus, the direct series on
/// the unit circle otherwise.
enum class U1Route { Auto, Direct, Transformed };

inline constexpr double kTransformedRadius = 0.75;

struct ModeOptions {
  double series_tol = kSeriesTol;
  std::size_t max_terms = kSeriesMaxTerms;
  U1Route route = U1Route::Auto;
  std::optional<double> guard;  // defaults to default_guard(params)
};

struct U1Evaluation {
  complex value;
  complex derivative;
  SeriesResult series;  // the series whose result determines `value`
};

namespace detail {

inline double guard_of(const OscillatorParams& p, const ModeOptions& o) {
  return o.guard.value_or(default_guard(p));
}

inline void require_converged(const SeriesResult& r, const char* what) {
  if (!r.converged)
    throw numerical_error(std::string(what) + ": series did not converge (estimate " +
                          std::to_string(r.trunc_error_estimate) + " after " +
                          std::to_string(r.terms_used) + " terms)");
}

}  // namespace detail

inline Hyp2F1Args u1_series_args(const OscillatorParams& p, double t) {
  const double w = p.omega0();
  const complex b = -I * p.shift() / w;
  return {1.0, b, 2.0 + b, -std::exp(-2.0 * I * w * t)};
}

/// U1 and U1' in one pass. Derivatives come from the term-wise
/// differentiated series of whichever representation is used; with
/// `with_derivative` false that second series is skipped and `derivative`
/// is left at zero.
inline U1Evaluation evaluate_U1(const OscillatorParams& p, double t,
                                const ModeOptions& opts = {},
                                bool with_derivative = true) {
  require_regular(p, t, detail::guard_of(p, opts));
  const double w = p.omega0();
  const complex omega_s = p.quasi_frequency();
  const complex phase = std::exp(-I * omega_s * t);
  const Hyp2F1Args args = u1_series_args(p, t);
  const complex z = args.z;
  const complex dz_dt = -2.0 * I * w * z;

  bool transformed = opts.route == U1Route::Transformed;
  if (opts.route == U1Route::Auto)
    transformed = std::abs(z / (z - 1.0)) <= kTransformedRadius;

  U1Evaluation out;
  if (!transformed) {
    const SeriesResult f = gauss_2f1(args, opts.series_tol, opts.max_terms);
    detail::require_converged(f, "U1 direct series");
    out.value = phase * f.value;
    out.series = f;
    if (!with_derivative) return out;
    const SeriesResult zf = gauss_2f1_zderiv(args, opts.series_tol, opts.max_terms);
    detail::require_converged(zf, "U1 differentiated series");
    // d/dt F(z(t)) = F'(z) z' = (z F'(z)) (z'/z) = (z F'(z)) (-2 i w)
    out.derivative = -I * omega_s * out.value + phase * zf.value * (dz_dt / z);
    return out;
  }

  const auto [pre, targs] = transform_15_3_4(args);
  SeriesResult g = gauss_2f1(targs, opts.series_tol, opts.max_terms);
  detail::require_converged(g, "U1 transformed series");
  out.value = phase * pre * g.value;
  out.series = g;
  out.series.strategy = SeriesStrategy::Transformed15_3_4;
  out.series.value *= pre;
  out.series.trunc_error_estimate *= std::abs(pre);
  if (!with_derivative) return out;
  const SeriesResult xg = gauss_2f1_zderiv(targs, opts.series_tol, opts.max_terms);
  detail::require_converged(xg, "U1 transformed differentiated series");
  // pre = (1-z)^{-a}: pre'/pre = a z' / (1 - z).
  // x = z/(z-1): x'/x = -z' / (z (z - 1)).
  const complex dlogpre = args.a * dz_dt / (1.0 - z);
  const complex dlogx = -dz_dt / (z * (z - 1.0));
  out.derivative = -I * omega_s * out.value +
                   phase * pre * (g.value * dlogpre + xg.value * dlogx);
  return out;
}

inline complex mode(ModeKind kind, const OscillatorParams& p, double t,
                    const ModeOptions& opts = {}) {
  const double w = p.omega0();
  const complex S = p.shift();
  if (singular_at_poles(kind)) require_regular(p, t, detail::guard_of(p, opts));
  const double c = std::cos(w * t);
  const double sn = std::sin(w * t);
  switch (kind) {
    case ModeKind::u1: return c;
    case ModeKind::u2: return sn;
    case ModeKind::v1: return w / c;
    case ModeKind::v2: return (w * t / 2.0 + std::sin(2.0 * w * t) / 4.0) / (w * c);
    case ModeKind::U1: return evaluate_U1(p, t, opts, false).value;
    case ModeKind::U2: return std::exp(S * t) * c;
    case ModeKind::V1: return std::exp(-S * t) / c;
    case ModeKind::V2:
      return std::exp(S * t) * (w * w / c + 2.0 * S * w * sn + 2.0 * S * S * c);
  }
  return {};
}

inline complex mode_derivative(ModeKind kind, const OscillatorParams& p, double t,
                               const ModeOptions& opts = {}) {
  const double w = p.omega0();
  const complex S = p.shift();
  if (singular_at_poles(kind)) require_regular(p, t, detail::guard_of(p, opts));
  const double c = std::cos(w * t);
  const double sn = std::sin(w * t);
  switch (kind) {
    case ModeKind::u1: return -w * sn;
    case ModeKind::u2: return w * c;
    case ModeKind::v1: return w * w * sn / (c * c);
    case ModeKind::v2: {
      const double a = w * t / 2.0 + std::sin(2.0 * w * t) / 4.0;
      return c + a * sn / (c * c);
    }
    case ModeKind::U1: return evaluate_U1(p, t, opts).derivative;
    case ModeKind::U2: return std::exp(S * t) * (S * c - w * sn);
    case ModeKind::V1: return std::exp(-S * t) * (-S / c + w * sn / (c * c));
    case ModeKind::V2: {
      const complex b = w * w / c + 2.0 * S * w * sn + 2.0 * S * S * c;
      const complex db = w * w * w * sn / (c * c) + 2.0 * S * w * w * c -
                         2.0 * S * S * w * sn;
      return std::exp(S * t) * (S * b + db);
    }
  }
  return {};
}

}  // namespace chirp
