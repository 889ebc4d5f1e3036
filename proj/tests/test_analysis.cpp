#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "riccati_chirp/analysis.hpp"

using namespace chirp;

namespace {

const OscillatorParams kS5(1.0, complex(0.0, 5.0));
const OscillatorParams kS6(1.0, complex(0.0, 6.0));

TimeGrid two_periods(const OscillatorParams& p, std::size_t n) {
  return build_grid(p, -p.period(), p.period(), n);
}

}  // namespace

TEST(Classify, Examples) {
  auto c = classify(kS5);
  EXPECT_EQ(c.verdict, Verdict::Periodic);
  EXPECT_EQ(c.witness_m, 3);
  c = classify(kS6);
  EXPECT_EQ(c.verdict, Verdict::Antiperiodic);
  EXPECT_EQ(c.witness_m, 3);
  c = classify(OscillatorParams(1.0, complex(0.5, 0.0)));
  EXPECT_EQ(c.verdict, Verdict::Unbounded);
  EXPECT_FALSE(c.witness_m);
  c = classify(OscillatorParams(2.0, complex(0.0, 2.0)));
  EXPECT_EQ(c.verdict, Verdict::Periodic);
  EXPECT_EQ(c.witness_m, 1);
  EXPECT_DOUBLE_EQ(c.reference_period, pi / 2);
}

TEST(Classify, Families) {
  for (double w : {0.5, 1.0, 2.0}) {
    for (long m : {-2L, -1L, 1L, 2L, 3L}) {
      const auto per = classify(OscillatorParams(w, complex(0.0, (2.0 * m - 1.0) * w)));
      EXPECT_EQ(per.verdict, Verdict::Periodic) << "w=" << w << " m=" << m;
      EXPECT_EQ(per.witness_m, m);
      const auto anti = classify(OscillatorParams(w, complex(0.0, 2.0 * m * w)));
      EXPECT_EQ(anti.verdict, Verdict::Antiperiodic) << "w=" << w << " m=" << m;
      EXPECT_EQ(anti.witness_m, m);
    }
  }
}

TEST(Classify, EdgeCases) {
  EXPECT_EQ(classify(OscillatorParams(1.0)).verdict, Verdict::QuasiperiodicBounded);
  const auto neg = classify(OscillatorParams(1.0, complex(0.0, -1.0)));
  EXPECT_EQ(neg.verdict, Verdict::Periodic);
  EXPECT_EQ(neg.witness_m, 0);
  EXPECT_EQ(classify(OscillatorParams(1.0, complex(0.0, 1.5))).verdict, Verdict::QuasiperiodicBounded);
  EXPECT_EQ(classify(OscillatorParams(1.0, complex(0.0, 5.0 + 1e-10))).verdict, Verdict::Periodic);
  EXPECT_EQ(classify(OscillatorParams(1.0, complex(0.0, 5.0 + 1e-7))).verdict,
            Verdict::QuasiperiodicBounded);
  EXPECT_EQ(classify(OscillatorParams(1.0, complex(1e-300, 5.0))).verdict, Verdict::Unbounded);
  EXPECT_EQ(classify(OscillatorParams(1.0, complex(0.0, 1e300))).verdict,
            Verdict::QuasiperiodicBounded);
}

TEST(Classify, ScaleInvariant) {
  for (double s : {-4.0, -3.0, 0.5, 1.0, 2.0, 5.0, 6.0, 7.25}) {
    const auto base = classify(OscillatorParams(1.0, complex(0.0, s)));
    for (double lam : {0.25, 3.0, 8.0}) {
      const auto scaled = classify(OscillatorParams(lam, complex(0.0, lam * s)));
      EXPECT_EQ(scaled.verdict, base.verdict) << "s=" << s << " lambda=" << lam;
      EXPECT_EQ(scaled.witness_m, base.witness_m);
    }
  }
}

TEST(Periodicity, Examples) {
  const TimeGrid g = two_periods(kS5, 200);
  auto r = verify_periodicity(kS5, ModeKind::U2, g, 1e-10);
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
  r = verify_periodicity(kS6, ModeKind::U2, two_periods(kS6, 200), 1e-10);
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
  r = verify_periodicity(kS5, ModeKind::V1, g);
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
}

TEST(Periodicity, AllShiftedModesForPeriodicFamilies) {
  for (double w : {0.5, 1.0, 2.0}) {
    for (double ratio : {1.0, 3.0, 5.0, 2.0, 4.0, 6.0, -1.0}) {
      const OscillatorParams p(w, complex(0.0, ratio * w));
      const TimeGrid g = build_grid(p, -2 * p.period(), 2 * p.period(), 200);
      for (auto k : {ModeKind::U1, ModeKind::U2, ModeKind::V1, ModeKind::V2}) {
        const auto r = verify_periodicity(p, k, g);
        EXPECT_TRUE(r.passed) << to_string(k) << " w=" << w << " ratio=" << ratio << " dev="
                              << r.max_abs_deviation << " at " << r.worst_t;
      }
    }
  }
}

TEST(Periodicity, Preconditions) {
  const TimeGrid g = two_periods(kS5, 50);
  EXPECT_THROW(verify_periodicity(kS5, ModeKind::u1, g), config_error);
  const OscillatorParams q(1.0, complex(0.0, 1.5));
  EXPECT_THROW(verify_periodicity(q, ModeKind::U2, two_periods(q, 50)), config_error);
}

TEST(Periodicity, WrongSignIsCaught) {
  // S = 5.5i: forcing the check with a doctored classification is not
  // possible through the API, so check the raw translate instead.
  const OscillatorParams p(1.0, complex(0.0, 5.5));
  const double dev = std::abs(mode(ModeKind::U2, p, 0.3 + pi) - mode(ModeKind::U2, p, 0.3));
  EXPECT_GT(dev, 0.1);
}

TEST(Floquet, U2) {
  for (double s : {5.0, 6.0, 1.5, 0.3, -2.7}) {
    const OscillatorParams p(1.0, complex(0.0, s));
    const auto r = floquet_report(p, build_grid(p, -2 * pi, 2 * pi, 300));
    EXPECT_TRUE(r.passed) << "s=" << s << " dev=" << r.max_abs_deviation;
  }
  EXPECT_THROW(floquet_report(OscillatorParams(1.0, 0.3), build_grid(kS5, -1, 1, 10)), config_error);
}

TEST(PtSymmetry, Examples) {
  const TimeGrid g5 = build_grid(kS5, -2 * pi, 2 * pi, 400);
  auto r = pt_symmetry_report(ProfileKind::ImagShiftU, kS5, g5);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_abs_deviation, 1e-12);
  r = pt_symmetry_report(ProfileKind::ImagShiftV, kS6, build_grid(kS6, -2 * pi, 2 * pi, 400));
  EXPECT_TRUE(r.passed);
  const OscillatorParams real_shift(1.0, 0.5);
  EXPECT_THROW(pt_symmetry_report(ProfileKind::ShiftedU, real_shift,
                                  build_grid(real_shift, -2 * pi, 2 * pi, 400)),
               config_error);
  EXPECT_THROW(pt_symmetry_report(ProfileKind::ImagShiftU, kS5, build_grid(kS5, -1.0, 2.0, 100)),
               config_error);
}

TEST(Products, Examples) {
  const OscillatorParams p3(3.0);
  auto r = product_invariant_report({ModeKind::u1, ModeKind::v1}, p3, two_periods(p3, 400));
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
  r = product_invariant_report({ModeKind::U2, ModeKind::V1}, kS5, two_periods(kS5, 400));
  EXPECT_TRUE(r.passed) << r.max_abs_deviation;
  EXPECT_EQ(mode(ModeKind::U2, kS5, 0.4) * mode(ModeKind::V1, kS5, 0.4), complex(1.0));
  const TimeGrid g = build_grid(OscillatorParams(1.0), 0.0, pi, 400);
  r = product_variation_report({ModeKind::u2, ModeKind::v2}, OscillatorParams(1.0), g);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.expect_above);
  EXPECT_GT(product_variation_ratio({ModeKind::u2, ModeKind::v2}, OscillatorParams(1.0), g), 1.01);
  EXPECT_LT(product_variation_ratio({ModeKind::u1, ModeKind::v1}, OscillatorParams(1.0), g), 1.0 + 1e-12);
}

TEST(GaugeShift, UAndPartner) {
  for (complex S : {complex(0.0, 5.0), complex(0.3, 0.0), complex(0.2, 1.3)}) {
    const OscillatorParams p(1.0, S);
    const TimeGrid g = build_grid(p, -2 * pi, 2 * pi, 300);
    EXPECT_TRUE(gauge_shift_report(false, p, g).passed) << S;
    EXPECT_TRUE(gauge_shift_report(true, p, g).passed) << S;
  }
}

TEST(Appendix, RoutesAndGammaRatio) {
  for (const auto& p : {kS5, kS6, OscillatorParams(1.0, complex(0.0, 1.5))}) {
    const TimeGrid g = two_periods(p, 100);
    const auto a = u1_route_agreement_report(p, g);
    EXPECT_TRUE(a.passed) << a.max_abs_deviation;
    const auto c = gamma_ratio_report(p, g);
    EXPECT_TRUE(c.passed) << c.max_abs_deviation;
  }
}

TEST(Pumps, ConsistencyReports) {
  for (double s : {5.0, 6.0, 1.5}) {
    const OscillatorParams p(1.0, complex(0.0, s));
    const TimeGrid g = build_grid(p, -2 * pi, 2 * pi, 200);
    EXPECT_TRUE(pump_consistency_report(false, p, g).passed);
    EXPECT_TRUE(pump_consistency_report(true, p, g).passed);
  }
}

TEST(IntegratorReport, TracksClosedForms) {
  for (const auto& p : {kS5, kS6, OscillatorParams(1.0, 0.3)}) {
    const TimeGrid g = build_grid(p, -2 * pi, 2 * pi, 400);
    for (auto k : {ModeKind::U2, ModeKind::V1}) {
      const auto r = integrator_report(k, p, g);
      EXPECT_TRUE(r.passed) << to_string(k) << " " << r.max_abs_deviation;
    }
  }
}

TEST(WronskianDrift, AllPairs) {
  const TimeGrid g = build_grid(kS5, -pi / 2, pi / 2, 200);
  for (auto [f, h] : {std::pair{ModeKind::u1, ModeKind::u2}, std::pair{ModeKind::v1, ModeKind::v2},
                      std::pair{ModeKind::U1, ModeKind::U2}, std::pair{ModeKind::V1, ModeKind::V2}}) {
    const auto r = wronskian_drift_report(f, h, kS5, g);
    EXPECT_TRUE(r.passed) << r.name << " " << r.max_abs_deviation;
  }
}

TEST(Reports, NanNeverPasses) {
  detail::MaxTracker m;
  m.add(0.1, 1.0);
  m.add(NAN, 2.0);
  const auto r = detail::finish("x", m, 1.0, build_grid(kS5, 0.0, 1.0, 3));
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.worst_t, 2.0);
}

TEST(Thresholds, NamedOverrides) {
  Thresholds th;
  EXPECT_EQ(th.get("riccati"), 1e-6);
  th.set("riccati", 1e-3);
  EXPECT_EQ(th.get("riccati"), 1e-3);
  EXPECT_THROW(th.set("nonsense", 1.0), config_error);
  EXPECT_THROW(th.set("riccati", -1.0), config_error);
}

TEST(Suite, FlagshipAllPass) {
  for (const auto& p : {kS5, kS6}) {
    const auto rows = run_invariant_suite(p);
    for (const auto& row : rows) {
      EXPECT_TRUE(row.skipped.empty()) << row.name << ": " << row.skipped;
      if (row.report) {
        EXPECT_TRUE(row.report->passed) << row.name << " " << row.report->max_abs_deviation;
      }
    }
    EXPECT_TRUE(all_passed(rows));
  }
}

TEST(Suite, GatingSkipsPeriodicityRows) {
  for (complex S : {complex(0.3, 0.0), complex(0.0, 1.5)}) {
    const auto rows = run_invariant_suite(OscillatorParams(1.0, S));
    EXPECT_TRUE(all_passed(rows));
    for (const auto& row : rows) {
      if (row.name.rfind("periodicity:", 0) == 0) {
        EXPECT_FALSE(row.report) << row.name;
      }
      if (row.name.rfind("ode_residual:", 0) == 0 || row.name.rfind("riccati:", 0) == 0) {
        ASSERT_TRUE(row.report) << row.name;
        EXPECT_TRUE(row.report->passed) << row.name;
      }
    }
  }
}

TEST(Suite, UndefinedU1IsSkipped) {
  const auto rows = run_invariant_suite(OscillatorParams(1.0, complex(0.0, -2.0)));
  EXPECT_TRUE(all_passed(rows));
  for (const auto& row : rows)
    if (row.name.find("U1") != std::string::npos) {
      EXPECT_FALSE(row.report) << row.name;
    }
}

TEST(Suite, TightThresholdFails) {
  SuiteConfig cfg;
  cfg.thresholds.set("riccati", 1e-30);
  const auto rows = run_invariant_suite(kS5, cfg);
  EXPECT_FALSE(all_passed(rows));
}

TEST(Suite, ThreadCountDoesNotChangeResults) {
  SuiteConfig a, b;
  a.threads = 0;
  b.threads = 4;
  const auto ra = run_invariant_suite(kS5, a), rb = run_invariant_suite(kS5, b);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 0; i < ra.size(); ++i) {
    EXPECT_EQ(ra[i].name, rb[i].name);
    ASSERT_EQ(ra[i].report.has_value(), rb[i].report.has_value());
    if (ra[i].report) {
      EXPECT_EQ(ra[i].report->max_abs_deviation, rb[i].report->max_abs_deviation);
    }
  }
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw numerical_error("boom");
               }),
               numerical_error);
}

TEST(Parallel, ThreadCountFromEnv) {
  ::setenv("RICCATI_CHIRP_THREADS", "0", 1);
  EXPECT_EQ(thread_count_from_env(), 0u);
  ::setenv("RICCATI_CHIRP_THREADS", "3", 1);
  EXPECT_GE(thread_count_from_env(), 1u);
  EXPECT_LE(thread_count_from_env(), 3u);
  ::setenv("RICCATI_CHIRP_THREADS", "x", 1);
  EXPECT_THROW(thread_count_from_env(), config_error);
  ::setenv("RICCATI_CHIRP_THREADS", "2", 1);
}
