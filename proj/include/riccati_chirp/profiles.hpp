#pragma once

// Time-dependent frequency-squared profiles Omega^2(t) of the oscillators
// y'' + Omega^2(t) y = 0 generated by the (shifted) factorizations, and the
// parametric pump functions of the imaginary-shift rewriting.

#include <optional>
#include <string_view>

#include "core.hpp"

namespace chirp {

enum class ProfileKind {
  ConstantOmega0Sq,  // w^2
  PartnerV,          // -w^2 (1 + 2 tan^2)
  ShiftedU,          // w^2 [1 - S^2/w^2 + 2 (S/w) tan]
  ShiftedV,          // -w^2 [1 + S^2/w^2 - 2 (S/w) tan + 2 tan^2]
  ImagShiftU,        // w^2 [1 + s^2/w^2 + 2 i (s/w) tan],   S = i s
  ImagShiftV         // w^2 [-1 + s^2/w^2 - 2 tan^2 + 2 i (s/w) tan]
};

inline constexpr ProfileKind kAllProfiles[] = {
    ProfileKind::ConstantOmega0Sq, ProfileKind::PartnerV,
    ProfileKind::ShiftedU,         ProfileKind::ShiftedV,
    ProfileKind::ImagShiftU,       ProfileKind::ImagShiftV};

inline const char* to_string(ProfileKind k) noexcept {
  switch (k) {
    case ProfileKind::ConstantOmega0Sq: return "ConstantOmega0Sq";
    case ProfileKind::PartnerV: return "PartnerV";
    case ProfileKind::ShiftedU: return "ShiftedU";
    case ProfileKind::ShiftedV: return "ShiftedV";
    case ProfileKind::ImagShiftU: return "ImagShiftU";
    case ProfileKind::ImagShiftV: return "ImagShiftV";
  }
  return "?";
}

inline std::optional<ProfileKind> parse_profile_kind(std::string_view name) {
  for (auto k : kAllProfiles)
    if (name == to_string(k)) return k;
  return std::nullopt;
}

inline bool involves_tan(ProfileKind k) noexcept {
  return k != ProfileKind::ConstantOmega0Sq;
}

inline bool requires_imaginary_shift(ProfileKind k) noexcept {
  return k == ProfileKind::ImagShiftU || k == ProfileKind::ImagShiftV;
}

inline void require_imaginary_shift(const OscillatorParams& p, const char* what) {
  if (!p.purely_imaginary_shift())
    throw config_error(std::string(what) + " requires a purely imaginary shift");
}

inline complex freq_sq(ProfileKind kind, const OscillatorParams& p, double t,
                       double guard) {
  const double w = p.omega0();
  const double w2 = w * w;
  if (kind == ProfileKind::ConstantOmega0Sq) return {w2, 0.0};
  if (requires_imaginary_shift(kind)) require_imaginary_shift(p, to_string(kind));
  require_regular(p, t, guard);
  const double tn = std::tan(w * t);
  const complex S = p.shift();
  const double s = p.s();
  switch (kind) {
    case ProfileKind::PartnerV:
      return {-w2 * (1.0 + 2.0 * tn * tn), 0.0};
    case ProfileKind::ShiftedU:
      return w2 * (1.0 - S * S / w2 + 2.0 * (S / w) * tn);
    case ProfileKind::ShiftedV:
      return -w2 * (1.0 + S * S / w2 - 2.0 * (S / w) * tn + 2.0 * tn * tn);
    case ProfileKind::ImagShiftU:
      return w2 * complex(1.0 + s * s / w2, 2.0 * (s / w) * tn);
    case ProfileKind::ImagShiftV:
      return w2 * complex(-1.0 + s * s / w2 - 2.0 * tn * tn, 2.0 * (s / w) * tn);
    default:
      break;
  }
  return {};
}

inline complex freq_sq(ProfileKind kind, const OscillatorParams& p, double t) {
  return freq_sq(kind, p, t, default_guard(p));
}

/// Pump h(t) of U'' + w^2 U = -w^2 h(t) U, so that Omega_U^2 = w^2 (1 + h):
/// h = sigma^2 + 2 i sigma tan(w t), sigma = s / w.
inline complex pump_h(const OscillatorParams& p, double t, double guard) {
  require_imaginary_shift(p, "pump h");
  require_regular(p, t, guard);
  const double sigma = p.s() / p.omega0();
  const double tn = std::tan(p.omega0() * t);
  return {sigma * sigma, 2.0 * sigma * tn};
}

inline complex pump_h(const OscillatorParams& p, double t) {
  return pump_h(p, t, default_guard(p));
}

/// Pump g(t) of V'' + s^2 V = -s^2 g(t) V, so that Omega_V^2 = s^2 (1 + g):
/// g = 2 i tan / sigma - 2 tan^2 / sigma^2 - 1 / sigma^2.
inline complex pump_g(const OscillatorParams& p, double t, double guard) {
  require_imaginary_shift(p, "pump g");
  if (p.s() == 0.0) throw config_error("pump g is undefined for s = 0");
  require_regular(p, t, guard);
  const double sigma = p.s() / p.omega0();
  const double tn = std::tan(p.omega0() * t);
  const double inv = 1.0 / sigma;
  return {-2.0 * inv * inv * tn * tn - inv * inv, 2.0 * inv * tn};
}

inline complex pump_g(const OscillatorParams& p, double t) {
  return pump_g(p, t, default_guard(p));
}

}  // namespace chirp
