#pragma once

// Complex Gauss hypergeometric series 2F1(a, b; c; z) for |z| <= 1.
//
// Inside the disk the series is summed directly with a ratio-based tail
// bound. Near and on the unit circle, where the terms decay only like
// n^{Re(a+b-c)-1}, the partial sum up to N is completed with the
// Euler-Abel (summation by parts) expansion of the tail,
//
//   sum_{n>=N} c_n z^n = z^N / (1 - z) * sum_k q^k Delta^k c_N,
//   q = z / (1 - z),
//
// whose forward differences are formed in closed form from the Pochhammer
// structure of c_n, so no cancellation between neighbouring coefficients
// ever occurs. The expansion is asymptotic with ratio ~ |q| k / N, which
// fixes how far the direct part has to run before the tail is accurate.

#include <array>
#include <limits>

#include "core.hpp"

namespace chirp {

struct Hyp2F1Args {
  complex a;
  complex b;
  complex c;
  complex z;
};

enum class SeriesStrategy { DirectSeries, Transformed15_3_4, GammaRatioSeries };

inline const char* to_string(SeriesStrategy s) noexcept {
  switch (s) {
    case SeriesStrategy::DirectSeries: return "DirectSeries";
    case SeriesStrategy::Transformed15_3_4: return "Transformed_15_3_4";
    case SeriesStrategy::GammaRatioSeries: return "GammaRatioSeries";
  }
  return "?";
}

/// Outcome of a series evaluation. An unconverged result is returned as
/// data (converged == false) carrying the best partial value.
struct SeriesResult {
  complex value;
  std::size_t terms_used = 0;
  double trunc_error_estimate = 0.0;  // >= |last added term|
  SeriesStrategy strategy = SeriesStrategy::DirectSeries;
  bool converged = false;
};

inline constexpr double kSeriesTol = 1e-12;
inline constexpr std::size_t kSeriesMaxTerms = 100000;

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();
inline constexpr double kPlainRadius = 0.9;
inline constexpr double kCircleSlack = 1e-12;

// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(complex x) noexcept {
    add_part(re_, cre_, x.real());
    add_part(im_, cim_, x.imag());
    abs_ += std::abs(x);
  }
  complex value() const noexcept { return {re_ + cre_, im_ + cim_}; }
  double abs_sum() const noexcept { return abs_; }

 private:
  static void add_part(double& s, double& c, double x) noexcept {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double re_ = 0.0, im_ = 0.0, cre_ = 0.0, cim_ = 0.0, abs_ = 0.0;
};

inline std::optional<long> nonpositive_integer(complex x) {
  if (std::abs(x.imag()) > 1e-13) return std::nullopt;
  const double r = std::round(x.real());
  if (r > 0.0 || std::abs(x.real() - r) > 1e-13 * std::max(1.0, std::abs(r)))
    return std::nullopt;
  return static_cast<long>(-r);
}

struct Tail {
  complex value;
  double truncation;  // magnitude of the last included correction
  double rounding;
  std::size_t terms;
};

// Euler-Abel tail sum_{n>=N} t_n given t_N = c_N z^N. The coefficient is
// split as c_n = g_n f_n with g_n = (a)_n / n! and f_n = (b)_n / (c)_n,
// whose differences are
//   Delta^j g_n = g_n prod_{i<j} (a-1-i)/(n+1+i),
//   Delta^i f_n = f_n prod_{l<i} (b-c-l)/(c+n+l),
// combined by the Leibniz rule Delta^k(gf)_n = sum_j C(k,j) Delta^j g_n
// Delta^{k-j} f_{n+j}. Everything is carried pre-multiplied by powers of q.
inline Tail abel_tail(complex a, complex b, complex c, complex z, std::size_t N,
                      complex tN, double target) {
  constexpr std::size_t kMax = 96;
  const complex one_minus_z = 1.0 - z;
  const complex q = z / one_minus_z;
  const complex base = tN / one_minus_z;
  const double n = static_cast<double>(N);

  std::vector<complex> G{1.0};          // q^j Delta^j g_N / g_N
  std::vector<complex> fr{1.0};         // f_{N+j} / f_N
  std::vector<complex> F{1.0};          // F[j] = q^{k-j} Delta^{k-j} f_{N+j} / f_N
  std::vector<double> binom{1.0};

  CompensatedSum tail;
  double rounding = 0.0;
  double last = std::abs(base);
  double truncation = last;
  double prev_u = std::numeric_limits<double>::infinity();
  double prev_prev_u = std::numeric_limits<double>::infinity();
  tail.add(base);
  rounding += std::abs(base);
  std::size_t k = 0;
  for (k = 1; k < kMax; ++k) {
    const double kd = static_cast<double>(k);
    G.push_back(G.back() * q * (a - kd) / (n + kd));
    fr.push_back(fr.back() * (b + n + (kd - 1.0)) / (c + n + (kd - 1.0)));
    // Advance F[j] from order k-1-j to k-j for j < k, then seed j = k.
    for (std::size_t j = 0; j < k; ++j) {
      const double i = static_cast<double>(k - 1 - j);
      const double jd = static_cast<double>(j);
      F[j] *= q * (b - c - i) / (c + n + jd + i);
    }
    F.push_back(fr.back());
    binom.push_back(1.0);
    for (std::size_t j = k - 1; j > 0; --j) binom[j] += binom[j - 1];

    complex u = 0.0;
    double uabs = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const complex part = binom[j] * G[j] * F[j];
      u += part;
      uabs += std::abs(part);
    }
    // A single correction can be accidentally tiny through cancellation
    // inside the Leibniz sum, so both stopping tests look at two in a row.
    const double mag = std::abs(u);
    if (k >= 3 && mag > prev_u && prev_u > prev_prev_u) break;  // turned around
    const complex contrib = base * u;
    tail.add(contrib);
    rounding += std::abs(base) * uabs;
    const double cur = std::abs(contrib);
    const double pair = std::max(last, cur);
    last = cur;
    truncation = pair;
    prev_prev_u = prev_u;
    prev_u = mag;
    if (pair <= target) break;
  }
  return {tail.value(), truncation, 8.0 * kEps * rounding, k + 1};
}

// Core summation shared by the public entry points. `strict` applies the
// Re(a+b-c) < 0 condition on the unit circle; otherwise only decay of the
// terms (Re(a+b-c) < 1) is required.
inline SeriesResult sum_2f1(complex a, complex b, complex c, complex z, double tol,
                            std::size_t max_terms, bool strict) {
  if (!(tol > 0.0)) throw config_error("series tolerance must be positive");
  if (max_terms == 0) throw config_error("max_terms must be positive");

  const auto ma = nonpositive_integer(a);
  const auto mb = nonpositive_integer(b);
  std::optional<long> terminate;
  if (ma) terminate = *ma;
  if (mb) terminate = terminate ? std::min(*terminate, *mb) : *mb;
  if (const auto mc = nonpositive_integer(c)) {
    if (!terminate || *terminate > *mc)
      throw config_error("2F1: c is a pole (zero or negative integer)");
  }

  SeriesResult res;
  res.strategy = SeriesStrategy::DirectSeries;
  if (z == complex(0.0, 0.0)) {
    res.value = 1.0;
    res.terms_used = 1;
    res.converged = true;
    return res;
  }

  CompensatedSum sum;
  complex term = 1.0;
  auto ratio = [&](double k) { return (a + k) * (b + k) / ((c + k) * (k + 1.0)); };

  if (terminate) {
    const auto m = static_cast<std::size_t>(*terminate);
    sum.add(term);
    for (std::size_t k = 0; k < m; ++k) {
      term *= ratio(static_cast<double>(k)) * z;
      sum.add(term);
    }
    res.value = sum.value();
    res.terms_used = m + 1;
    res.trunc_error_estimate = 4.0 * kEps * sum.abs_sum() * static_cast<double>(m + 1);
    res.converged = true;
    return res;
  }

  const double absz = std::abs(z);
  if (absz > 1.0 + kCircleSlack)
    throw numerical_error("2F1 series diverges for |z| > 1");
  const double re_p = (a + b - c).real();
  const bool on_circle = absz >= 1.0 - kCircleSlack;
  if (on_circle && strict && re_p >= 0.0)
    throw numerical_error("2F1 series diverges on |z| = 1 unless Re(a+b-c) < 0");
  if (on_circle && re_p >= 1.0)
    throw numerical_error("2F1 series terms do not decay on |z| = 1");
  if (std::abs(1.0 - z) < 1e-12)
    throw numerical_error("2F1 at z = 1 is outside the supported evaluations");

  const auto n_min = static_cast<std::size_t>(
      std::ceil(std::abs(a) + std::abs(b) + std::abs(c))) + 2;

  // Summation runs until the tail bound drops three orders below the
  // requested tolerance (or to rounding level); `converged` reports whether
  // the requested tolerance itself is met.
  if (absz <= kPlainRadius) {
    sum.add(term);
    double est = std::abs(term);
    for (std::size_t k = 0; k + 1 < max_terms; ++k) {
      term *= ratio(static_cast<double>(k)) * z;
      sum.add(term);
      res.terms_used = k + 2;
      if (k + 1 < n_min) continue;
      const double r = std::abs(ratio(static_cast<double>(k + 1)) * z);
      const double rb = std::max(r, absz);
      const double tail = rb < 1.0 ? std::abs(term) * rb / (1.0 - rb)
                                   : std::numeric_limits<double>::infinity();
      const double trunc = std::max(tail, std::abs(term));
      const double scale = std::max(1.0, std::abs(sum.value()));
      est = trunc + 4.0 * kEps * sum.abs_sum();
      if (trunc <= 1e-3 * tol * scale || trunc <= kEps * scale) break;
    }
    res.value = sum.value();
    res.trunc_error_estimate = est;
    res.converged = est <= tol * std::max(1.0, std::abs(res.value));
    return res;
  }

  // Euler-Abel route. Put the parameter closer to 1 in the g_n slot so the
  // Leibniz sum collapses (a == 1 leaves a single term).
  complex ga = a, fb = b;
  if (std::abs(b - 1.0) < std::abs(a - 1.0)) std::swap(ga, fb);

  std::size_t checkpoint = std::max<std::size_t>(16, n_min);
  std::size_t n = 0;
  while (true) {
    if (n == checkpoint || n == max_terms) {
      const double scale = std::max(1.0, std::abs(sum.value()));
      const Tail t = abel_tail(ga, fb, c, z, n, term, 1e-3 * tol * scale);
      res.value = sum.value() + t.value;
      res.terms_used = n + t.terms;
      res.trunc_error_estimate = t.truncation + t.rounding + 4.0 * kEps * sum.abs_sum();
      const double vscale = std::max(1.0, std::abs(res.value));
      res.converged = res.trunc_error_estimate <= tol * vscale;
      if (t.truncation <= 1e-3 * tol * vscale) return res;
      if (n == max_terms) return res;
      checkpoint = std::min(max_terms, 2 * checkpoint);
    }
    sum.add(term);
    term *= ratio(static_cast<double>(n)) * z;
    ++n;
  }
}

}  // namespace detail

/// 2F1(a, b; c; z) for |z| < 1, or |z| = 1 with Re(a + b - c) < 0.
inline SeriesResult gauss_2f1(const Hyp2F1Args& args, double tol = kSeriesTol,
                              std::size_t max_terms = kSeriesMaxTerms) {
  return detail::sum_2f1(args.a, args.b, args.c, args.z, tol, max_terms, true);
}

/// z d/dz 2F1(a, b; c; z), the term-wise differentiated series
/// sum n c_n z^n = (ab/c) z 2F1(a+1, b+1; c+1; z). Same domain as gauss_2f1;
/// on |z| = 1 the differentiated terms decay like n^{Re(a+b-c)}.
inline SeriesResult gauss_2f1_zderiv(const Hyp2F1Args& args, double tol = kSeriesTol,
                                     std::size_t max_terms = kSeriesMaxTerms) {
  const auto& [a, b, c, z] = args;
  if (detail::nonpositive_integer(c))
    throw config_error("2F1: c is a pole (zero or negative integer)");
  SeriesResult r;
  if (a == complex(0.0) || b == complex(0.0) || z == complex(0.0)) {
    r.value = 0.0;
    r.terms_used = 1;
    r.converged = true;
    return r;
  }
  if (std::abs(z) >= 1.0 - detail::kCircleSlack && (a + b - c).real() >= 0.0)
    throw numerical_error("2F1 series diverges on |z| = 1 unless Re(a+b-c) < 0");
  const complex pre = a * b / c * z;
  // Tolerance is relative to the derivative itself.
  r = detail::sum_2f1(a + 1.0, b + 1.0, c + 1.0, z,
                      tol / std::max(1.0, std::abs(pre)), max_terms, false);
  r.value *= pre;
  r.trunc_error_estimate *= std::abs(pre);
  return r;
}

/// Linear transformation F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1)),
/// principal branch for the power.
struct Transformed2F1 {
  complex prefactor;
  Hyp2F1Args args;
};

inline Transformed2F1 transform_15_3_4(const Hyp2F1Args& args) {
  if (args.z == complex(1.0, 0.0))
    throw config_error("linear transformation undefined at z = 1");
  const complex one_minus_z = 1.0 - args.z;
  const complex pre =
      args.a == complex(1.0, 0.0) ? 1.0 / one_minus_z : std::pow(one_minus_z, -args.a);
  return {pre, {args.a, args.c - args.b, args.c, args.z / (args.z - 1.0)}};
}

/// Appendix series for U1 written with Gamma ratios,
///   U1(t) = e^{-St} / (2 cos w t) sum_n [Gamma(c) (n+1)! / Gamma(n+c)] x^n,
///   c = 2 - iS/w, x = 1 / (1 + e^{2iwt}),
/// the Gamma ratio being 1 / prod_{k<n} (c + k). Converges for |x| < 1,
/// i.e. |cos w t| > 1/2.
inline SeriesResult gamma_ratio_series_U1(const OscillatorParams& p, double t,
                                          double tol = kSeriesTol,
                                          std::size_t max_terms = kSeriesMaxTerms) {
  if (!(tol > 0.0)) throw config_error("series tolerance must be positive");
  if (max_terms == 0) throw config_error("max_terms must be positive");
  require_regular(p, t, default_guard(p));
  const double w = p.omega0();
  const complex c = 2.0 - I * p.shift() / w;
  if (detail::nonpositive_integer(c))
    throw config_error("Gamma-ratio series: 2 - iS/omega0 is a pole");
  const complex x = 1.0 / (1.0 + std::exp(2.0 * I * w * t));
  const double absx = std::abs(x);
  if (absx >= 1.0)
    throw numerical_error("Gamma-ratio series diverges: |1 + e^{2i w t}| <= 1");

  detail::CompensatedSum sum;
  complex term = 1.0;
  sum.add(term);
  SeriesResult res;
  res.strategy = SeriesStrategy::GammaRatioSeries;
  res.terms_used = 1;
  double est = 1.0;
  const auto n_min = static_cast<std::size_t>(std::ceil(std::abs(c))) + 2;
  for (std::size_t n = 0; n + 1 < max_terms; ++n) {
    const double nd = static_cast<double>(n);
    term *= (nd + 2.0) / (c + nd) * x;
    sum.add(term);
    res.terms_used = n + 2;
    if (n + 1 < n_min) continue;
    const double r = std::abs((nd + 3.0) / (c + nd + 1.0) * x);
    const double rb = std::max(r, absx);
    const double tail = rb < 1.0 ? std::abs(term) * rb / (1.0 - rb)
                                 : std::numeric_limits<double>::infinity();
    const double trunc = std::max(tail, std::abs(term));
    const double scale = std::max(1.0, std::abs(sum.value()));
    est = trunc + 4.0 * detail::kEps * sum.abs_sum();
    if (trunc <= 1e-3 * tol * scale || trunc <= detail::kEps * scale) break;
  }
  res.converged = est <= tol * std::max(1.0, std::abs(sum.value()));
  const complex pre = std::exp(-p.shift() * t) / (2.0 * std::cos(w * t));
  res.value = pre * sum.value();
  res.trunc_error_estimate = std::abs(pre) * est;
  return res;
}

}  // namespace chirp
