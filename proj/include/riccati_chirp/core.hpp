#pragma once

// Shared domain types: oscillator parameters, singularity geometry of
// tan(omega0 t), time grids that keep clear of those singularities.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chirp {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr complex I{0.0, 1.0};

/// Invalid user-supplied parameters or grid requests.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested too close to a pole of tan(omega0 t).
class singularity_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure: divergent series, step-size underflow, overflow.
class numerical_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural frequency omega0 > 0 and constant complex shift S of the
/// Riccati solution.
class OscillatorParams {
 public:
  explicit OscillatorParams(double omega0, complex shift = {})
      : omega0_(omega0), shift_(shift) {
    if (!std::isfinite(omega0) || !(omega0 > 0.0))
      throw config_error("omega0 must be finite and strictly positive");
    if (!std::isfinite(shift.real()) || !std::isfinite(shift.imag()))
      throw config_error("shift must be finite");
  }

  double omega0() const noexcept { return omega0_; }
  complex shift() const noexcept { return shift_; }

  /// s = Im S, the real parameter of a purely imaginary shift S = i s.
  double s() const noexcept { return shift_.imag(); }
  bool purely_imaginary_shift() const noexcept { return shift_.real() == 0.0; }

  /// T = pi / omega0, the period of every tan-based profile.
  double period() const noexcept { return pi / omega0_; }

  /// Omega_S = (1 - i S / omega0) omega0 = omega0 - i S.
  complex quasi_frequency() const noexcept { return omega0_ - I * shift_; }

  OscillatorParams with_shift(complex shift) const {
    return OscillatorParams(omega0_, shift);
  }

 private:
  double omega0_;
  complex shift_;
};

/// Smallest distance below which pointwise evaluators refuse to work.
inline double default_guard(const OscillatorParams& p) noexcept {
  return 1e-9 * p.period();
}

/// Exclusion radius used for grids when the caller does not supply one.
inline double default_exclusion_radius(const OscillatorParams& p) noexcept {
  return 1e-2 * p.period();
}

/// k-th pole of tan(omega0 t): (k + 1/2) pi / omega0. Symmetric in k:
/// singularity_at(p, -k-1) == -singularity_at(p, k) exactly.
inline double singularity_at(const OscillatorParams& p, long k) noexcept {
  return (static_cast<double>(k) + 0.5) * pi / p.omega0();
}

inline double distance_to_singularity(const OscillatorParams& p, double t) {
  const double x = t * p.omega0() / pi - 0.5;
  const long k = std::lround(x);
  double d = std::abs(t - singularity_at(p, k));
  d = std::min(d, std::abs(t - singularity_at(p, k - 1)));
  d = std::min(d, std::abs(t - singularity_at(p, k + 1)));
  return d;
}

inline void require_regular(const OscillatorParams& p, double t, double guard) {
  if (!std::isfinite(t)) throw config_error("time must be finite");
  const double d = distance_to_singularity(p, t);
  if (d < guard || d == 0.0)
    throw singularity_error("t = " + std::to_string(t) + " lies within " +
                            std::to_string(guard) +
                            " of a singularity of tan(omega0 t)");
}

/// All singularities t* = (k + 1/2) pi / omega0 with lo <= t* <= hi,
/// ascending.
inline std::vector<double> singularity_locations(const OscillatorParams& p,
                                                 double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw config_error("invalid window: need finite lo < hi");
  const double scale = p.omega0() / pi;
  long k = static_cast<long>(std::floor(lo * scale - 0.5)) - 1;
  const long k_end = static_cast<long>(std::ceil(hi * scale - 0.5)) + 1;
  std::vector<double> out;
  for (; k <= k_end; ++k) {
    const double t = singularity_at(p, k);
    if (t >= lo && t <= hi) out.push_back(t);
  }
  return out;
}

/// Sub-interval of a grid window. An end is closed when it sits exactly at
/// the exclusion radius from a singularity and open when it is a window edge.
struct Interval {
  double lo;
  double hi;
  bool lo_closed = false;
  bool hi_closed = false;

  double length() const noexcept { return hi - lo; }
  bool contains(double t) const noexcept {
    const bool above = lo_closed ? t >= lo : t > lo;
    const bool below = hi_closed ? t <= hi : t < hi;
    return above && below;
  }
};

/// Strictly increasing sample times, each at least exclusion_radius away
/// from every singularity of tan(omega0 t).
class TimeGrid {
 public:
  TimeGrid(const OscillatorParams& p, std::vector<Interval> intervals,
           std::vector<double> points, double exclusion_radius)
      : intervals_(std::move(intervals)),
        points_(std::move(points)),
        exclusion_radius_(exclusion_radius) {
    if (!(exclusion_radius_ > 0.0))
      throw config_error("exclusion radius must be positive");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double t = points_[i];
      if (i > 0 && !(t > points_[i - 1]))
        throw config_error("grid points must be strictly increasing");
      const bool inside =
          std::any_of(intervals_.begin(), intervals_.end(),
                      [t](const Interval& iv) { return iv.contains(t); });
      if (!inside) throw config_error("grid point outside every interval");
      if (distance_to_singularity(p, t) < exclusion_radius_)
        throw config_error("grid point inside an exclusion ball");
    }
  }

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }
  const std::vector<double>& points() const noexcept { return points_; }
  double exclusion_radius() const noexcept { return exclusion_radius_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// True when the point set is invariant under t -> -t.
  bool symmetric(double tol = 1e-12) const {
    const std::size_t n = points_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double a = points_[i];
      const double b = points_[n - 1 - i];
      if (std::abs(a + b) > tol * (1.0 + std::abs(a))) return false;
    }
    return true;
  }

  std::string describe() const {
    std::string out = "n=" + std::to_string(points_.size());
    if (!points_.empty()) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " span=[%.6g,%.6g] eps=%.3g",
                    points_.front(), points_.back(), exclusion_radius_);
      out += buf;
    }
    return out;
  }

 private:
  std::vector<Interval> intervals_;
  std::vector<double> points_;
  double exclusion_radius_;
};

namespace detail {

inline std::vector<double> fill_interval(const Interval& iv, std::size_t k) {
  std::vector<double> pts;
  pts.reserve(k);
  if (k == 0) return pts;
  const double len = iv.length();
  if (iv.lo_closed && iv.hi_closed) {
    if (k == 1) {
      pts.push_back(0.5 * (iv.lo + iv.hi));
      return pts;
    }
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(iv.lo + len * static_cast<double>(j) /
                                static_cast<double>(k - 1));
    pts.back() = iv.hi;
  } else if (iv.lo_closed) {
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(iv.lo + len * static_cast<double>(j) /
                                static_cast<double>(k));
  } else if (iv.hi_closed) {
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(iv.hi - len * static_cast<double>(k - 1 - j) /
                                static_cast<double>(k));
  } else {
    for (std::size_t j = 0; j < k; ++j)
      pts.push_back(iv.lo + len * static_cast<double>(j + 1) /
                                static_cast<double>(k + 1));
  }
  return pts;
}

// Largest-remainder apportionment of n points over interval lengths.
inline std::vector<std::size_t> apportion(const std::vector<double>& lengths,
                                          std::size_t n) {
  double total = 0.0;
  for (double l : lengths) total += l;
  std::vector<std::size_t> counts(lengths.size(), 0);
  std::vector<std::pair<double, std::size_t>> frac;
  std::size_t used = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const double q = static_cast<double>(n) * lengths[i] / total;
    counts[i] = static_cast<std::size_t>(std::floor(q));
    used += counts[i];
    frac.emplace_back(q - std::floor(q), i);
  }
  std::stable_sort(frac.begin(), frac.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; used < n; ++j, ++used) ++counts[frac[j % frac.size()].second];
  return counts;
}

// Mirror-symmetric apportionment: mirrored intervals get equal counts and
// the self-symmetric central interval absorbs the remainder.
inline std::optional<std::vector<std::size_t>> apportion_symmetric(
    const std::vector<double>& lengths, std::size_t n) {
  const std::size_t m = lengths.size();
  if (m % 2 == 0) return std::nullopt;
  double total = 0.0;
  for (double l : lengths) total += l;
  std::vector<std::size_t> counts(m, 0);
  std::size_t paired = 0;
  for (std::size_t i = 0; i < m / 2; ++i) {
    const double q = static_cast<double>(n) * lengths[i] / total;
    counts[i] = counts[m - 1 - i] = static_cast<std::size_t>(std::llround(q));
    paired += 2 * counts[i];
  }
  if (paired > n) return std::nullopt;
  counts[m / 2] = n - paired;
  return counts;
}

}  // namespace detail

/// Uniform grid over (lo, hi) minus closed exclusion balls around each
/// singularity. Points are apportioned to the surviving sub-intervals in
/// proportion to their length; sub-interval ends that abut an exclusion ball
/// carry a sample exactly at the exclusion radius. A window symmetric about
/// zero yields an exactly mirror-symmetric point set.
inline TimeGrid build_grid(const OscillatorParams& p, double lo, double hi,
                           std::size_t n_points, double exclusion_radius) {
  if (n_points == 0) throw config_error("n_points must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw config_error("invalid window: need finite lo < hi");
  if (!std::isfinite(exclusion_radius) || !(exclusion_radius > 0.0))
    throw config_error("exclusion radius must be positive");
  if (exclusion_radius >= 0.5 * p.period())
    throw config_error(
        "exclusion radius too large: must be below half the singularity gap");

  const double eps = exclusion_radius;
  const auto sing = singularity_locations(p, lo - eps, hi + eps);

  std::vector<Interval> intervals;
  Interval cur{lo, hi, false, false};
  for (double ts : sing) {
    const double left = ts - eps;
    if (left > cur.lo) {
      Interval iv = cur;
      iv.hi = left;
      iv.hi_closed = true;
      if (iv.hi > iv.lo || (iv.hi == iv.lo && iv.lo_closed))
        intervals.push_back(iv);
    }
    cur.lo = std::max(cur.lo, ts + eps);
    cur.lo_closed = ts + eps >= lo;
  }
  if (cur.lo < hi) {
    cur.hi = hi;
    cur.hi_closed = false;
    intervals.push_back(cur);
  }
  std::erase_if(intervals, [](const Interval& iv) { return !(iv.length() > 0.0); });
  if (intervals.empty())
    throw config_error("exclusion radius too large: no grid points survive");

  std::vector<double> lengths;
  for (const auto& iv : intervals) lengths.push_back(iv.length());

  const bool symmetric_window = (lo == -hi);
  std::vector<std::size_t> counts;
  if (symmetric_window) {
    if (auto c = detail::apportion_symmetric(lengths, n_points)) counts = *c;
  }
  if (counts.empty()) counts = detail::apportion(lengths, n_points);

  std::vector<double> pts;
  pts.reserve(n_points);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    auto part = detail::fill_interval(intervals[i], counts[i]);
    pts.insert(pts.end(), part.begin(), part.end());
  }

  // Rounding can leave a boundary sample an ulp inside an exclusion ball.
  for (double& t : pts) {
    for (int guard = 0; guard < 64 && distance_to_singularity(p, t) < eps; ++guard) {
      const double k = std::round(t * p.omega0() / pi - 0.5);
      const double ts = (k + 0.5) * pi / p.omega0();
      t = std::nextafter(t, t > ts ? INFINITY : -INFINITY);
    }
  }

  if (symmetric_window && pts.size() > 1) {
    const std::size_t n = pts.size();
    bool mirrored = true;
    for (std::size_t i = 0; i < n / 2; ++i)
      if (std::abs(pts[i] + pts[n - 1 - i]) > 1e-9 * (1.0 + std::abs(pts[i])))
        mirrored = false;
    if (mirrored) {
      for (std::size_t i = 0; i < n / 2; ++i) pts[n - 1 - i] = -pts[i];
      if (n % 2 == 1) pts[n / 2] = 0.0;
    }
  }

  if (pts.empty())
    throw config_error("exclusion radius too large: no grid points survive");
  return TimeGrid(p, std::move(intervals), std::move(pts), eps);
}

inline TimeGrid build_grid(const OscillatorParams& p, double lo, double hi,
                           std::size_t n_points) {
  return build_grid(p, lo, hi, n_points, default_exclusion_radius(p));
}

/// Sampled complex signal, optionally with its time derivative.
struct Trace {
  std::string label;
  std::vector<double> times;
  std::vector<complex> values;
  std::vector<complex> derivatives;  // empty, or one per time

  void validate() const {
    if (times.size() != values.size())
      throw config_error("trace times and values differ in length");
    if (!derivatives.empty() && derivatives.size() != times.size())
      throw config_error("trace derivatives differ in length");
    for (std::size_t i = 1; i < times.size(); ++i)
      if (!(times[i] > times[i - 1]))
        throw config_error("trace times must be strictly increasing");
  }
};

enum class Verdict { Periodic, Antiperiodic, QuasiperiodicBounded, Unbounded };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Periodic: return "Periodic";
    case Verdict::Antiperiodic: return "Antiperiodic";
    case Verdict::QuasiperiodicBounded: return "QuasiperiodicBounded";
    case Verdict::Unbounded: return "Unbounded";
  }
  return "?";
}

struct Classification {
  Verdict verdict;
  std::optional<long> witness_m;  // present iff Periodic or Antiperiodic
  double reference_period;       // pi / omega0

  /// +1 for periodic, -1 for antiperiodic; nullopt otherwise.
  std::optional<int> translation_sign() const noexcept {
    if (verdict == Verdict::Periodic) return 1;
    if (verdict == Verdict::Antiperiodic) return -1;
    return std::nullopt;
  }
};

}  // namespace chirp
