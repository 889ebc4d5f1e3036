#pragma once

// Central-difference stencils with one Richardson level (h and 2h combined),
// i.e. the standard fourth-order five-point formulas.

#include "core.hpp"

namespace chirp::fd {

template <class F>
auto first_derivative(F&& f, double t, double h) {
  return (8.0 * (f(t + h) - f(t - h)) - (f(t + 2.0 * h) - f(t - 2.0 * h))) /
         (12.0 * h);
}

template <class F>
auto second_derivative(F&& f, double t, double h) {
  const auto c = f(t);
  return (16.0 * (f(t + h) + f(t - h)) - (f(t + 2.0 * h) + f(t - 2.0 * h)) -
          30.0 * c) /
         (12.0 * h * h);
}

/// The stencil reaches t +- 2h; refuse if that crosses a singularity.
inline void require_stencil(const OscillatorParams& p, double t, double h) {
  if (!(h > 0.0)) throw config_error("finite-difference step must be positive");
  if (distance_to_singularity(p, t) <= 2.0 * h + default_guard(p))
    throw singularity_error("finite-difference stencil crosses a singularity");
}

}  // namespace chirp::fd
