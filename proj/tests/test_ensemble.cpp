#include "momentlab/ensemble.hpp"
#include "momentlab/moments.hpp"
#include "momentlab/rng.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <sstream>

using namespace momentlab;

namespace {

EnsembleConfig config(long n, EntryLaw law, std::uint64_t seed = 11) {
  EnsembleConfig c;
  c.n = n;
  c.law = law;
  c.seed = seed;
  return c;
}

// MC mean of (1/n) Tr A^{2s} agrees with the exact walk sum within 4 standard errors.
void expect_mc_matches(const EnsembleConfig& cfg, const MomentSpec& spec, int s, long reps) {
  SampleStats st = run_replicates(cfg, reps, {s});
  MeanCI m = st.normalized_trace_mean(0, cfg.n);
  double exact = static_cast<double>(exact_trace_moment(cfg.n, s, spec).total / cfg.n);
  EXPECT_LE(std::fabs(m.mean - exact), 4 * m.se + 1e-12) << spec.descriptor << " s=" << s << " mc=" << m.mean
                                                         << " exact=" << exact;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32(0)(C{0, 0, 0, 0}), (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32(~std::uint64_t{0})(C{~0u, ~0u, ~0u, ~0u}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32(0x299f31d0a4093822ull)(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
  EXPECT_GT(open_unit(0, 0), 0.0);
  EXPECT_LT(open_unit(~0u, ~0u), 1.0);
  EXPECT_EQ(open_unit(~0u, ~0u), 1.0 - 0x1.0p-53);
}

TEST(Sampling, RademacherSignPatternsAreUniform) {
  EnsembleConfig cfg = config(2, EntryLaw::rademacher(0.5), 2024);
  const long reps = 100000;
  long counts[8] = {};
  for (long r = 0; r < reps; ++r) {
    Eigen::MatrixXd a = sample_matrix(cfg, r);
    ASSERT_DOUBLE_EQ(std::fabs(a(0, 1)), 0.5 / std::sqrt(2.0));
    ASSERT_EQ(a(0, 1), a(1, 0));
    ++counts[(a(0, 0) > 0) | (a(0, 1) > 0) << 1 | (a(1, 1) > 0) << 2];
  }
  double chi2 = 0, expect = reps / 8.0;
  for (long c : counts) chi2 += (c - expect) * (c - expect) / expect;
  double p = 1 - boost::math::cdf(boost::math::chi_squared(7), chi2);
  EXPECT_GT(p, 0.001) << chi2;
}

TEST(Sampling, FullConcentrationMatchesWigner) {
  EnsembleConfig w = config(12, EntryLaw::gaussian(1.0));
  EnsembleConfig d = w;
  d.c = 12.0;
  for (long r = 0; r < 5; ++r) EXPECT_EQ(sample_matrix(w, r), sample_matrix(d, r));
}

TEST(Sampling, DilutionKeepsAboutCOverNEntries) {
  EnsembleConfig d = config(200, EntryLaw::rademacher(1.0));
  d.c = 10.0;
  long nonzero = 0, total = 0;
  for (long r = 0; r < 20; ++r) {
    Eigen::MatrixXd a = sample_matrix(d, r);
    for (long i = 0; i < d.n; ++i)
      for (long j = i; j < d.n; ++j) {
        ++total;
        if (a(i, j) != 0) {
          ++nonzero;
          EXPECT_DOUBLE_EQ(std::fabs(a(i, j)), 1 / std::sqrt(10.0));
        }
      }
  }
  Proportion p = wilson(nonzero, total, 0.999);
  EXPECT_LE(p.lo, 0.05);
  EXPECT_GE(p.hi, 0.05);
}

TEST(Sampling, TruncationZeroesLargeEntries) {
  EnsembleConfig cfg = config(2, EntryLaw::power_tail(1.0, 15.0));
  cfg.trunc_delta = 0.01;
  EnsembleConfig raw = cfg;
  raw.trunc_delta.reset();
  const double U = static_cast<double>(cfg.truncation_level());
  long cut = 0;
  for (long r = 0; r < 2000; ++r)
    for (long i = 0; i < cfg.n; ++i)
      for (long j = i; j < cfg.n; ++j) {
        double a = draw_entry(cfg, r, i, j), b = draw_entry(raw, r, i, j);
        ASSERT_LE(std::fabs(a), U);
        if (std::fabs(b) > U) {
          ASSERT_EQ(a, 0.0);
          ++cut;
        } else {
          ASSERT_EQ(a, b);
        }
      }
  EXPECT_GT(cut, 0);
}

TEST(Sampling, ValidationRejectsBadConfigs) {
  EnsembleConfig c = config(10, EntryLaw::rademacher(1.0));
  EXPECT_NO_THROW(c.validate());
  c.c = 20.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.c.reset();
  c.goe = true;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.goe = false;
  c.trunc_delta = 0.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.trunc_delta.reset();
  c.n = 70000;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Spectral, SmallMatricesAndTraceCrossCheck) {
  Eigen::MatrixXd d = Eigen::Vector3d(1.0, -3.0, 2.0).asDiagonal();
  SpectralRow r = spectral_stats(d, {1, 2}, true);
  EXPECT_TRUE(r.ok);
  EXPECT_DOUBLE_EQ(r.lambda_max, 3.0);
  EXPECT_NEAR(static_cast<double>(r.traces[0]), 14.0, 1e-12);
  EXPECT_NEAR(static_cast<double>(r.traces[1]), 1 + 81 + 16, 1e-12);
  Eigen::Matrix2d off;
  off << 0, 0.7, 0.7, 0;
  r = spectral_stats(off, {3});
  EXPECT_NEAR(r.lambda_max, 0.7, 1e-15);
  EXPECT_NEAR(static_cast<double>(r.traces[0]), 2 * std::pow(0.7, 6), 1e-14);
  for (long n = 1; n <= 8; ++n) {
    Eigen::MatrixXd a = sample_matrix(config(n, EntryLaw::gaussian(1.0)), 3);
    SpectralRow row = spectral_stats(a, {1, 2, 3, 4}, true);
    ASSERT_TRUE(row.ok);
    EXPECT_LE(row.residual, 1e-10);
    for (int s = 1; s <= 4; ++s) {
      long double direct = trace_power_direct(a, s);
      EXPECT_NEAR(static_cast<double>(row.traces[s - 1] / direct), 1.0, 1e-8) << n << "," << s;
    }
  }
}

TEST(Replicates, IndependentOfThreadCount) {
  EnsembleConfig one = config(20, EntryLaw::gaussian(1.0), 99);
  EnsembleConfig three = one;
  three.threads = 3;
  SampleStats a = run_replicates(one, 50, {1, 2}), b = run_replicates(three, 50, {1, 2});
  EXPECT_EQ(a.lambda_max, b.lambda_max);
  EXPECT_EQ(a.traces, b.traces);
  std::ostringstream sa, sb;
  write_samples_csv(sa, a);
  write_samples_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(one.fingerprint(), three.fingerprint());
  EnsembleConfig other = one;
  other.seed = 100;
  EXPECT_NE(run_replicates(other, 50, {1}).lambda_max, a.lambda_max);
  EXPECT_NE(other.fingerprint(), one.fingerprint());
  // A later block continues the same replicate sequence.
  SampleStats tail = run_replicates(one, 10, {1}, 40);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(tail.lambda_max[i], a.lambda_max[40 + i]);
}

TEST(Stats, KnownIntervals) {
  MeanCI m = mean_ci({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(m.mean, 3.0);
  EXPECT_DOUBLE_EQ(m.variance, 2.5);
  EXPECT_NEAR(m.lo, 3 - 1.959963984540054 * std::sqrt(0.5), 1e-12);
  Proportion p = wilson(5, 10);
  EXPECT_NEAR(p.lo, 0.2366, 1e-4);
  EXPECT_NEAR(p.hi, 0.7634, 1e-4);
  Proportion zero = wilson(0, 2000);
  EXPECT_NEAR(zero.lo, 0.0, 1e-15);
  EXPECT_NEAR(zero.hi, 0.00192, 1e-5);
  EXPECT_NEAR(z_for(0.99), 2.5758293035489, 1e-9);
}

TEST(Stats, Sha256) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex("abc", 16), "ba7816bf8f01cfea");
}

TEST(Tail, CurveShape) {
  EnsembleConfig cfg = config(40, EntryLaw::rademacher(0.5));
  TailCurve tc = tail_curve(cfg, {-3, 0, 2, 40}, TailScale::Wigner, 400, 2);
  EXPECT_TRUE(tc.nonincreasing());
  EXPECT_EQ(tc.points.back().exceed.hits, 0);
  EXPECT_GT(tc.points.front().exceed.p, 0.9);
  ASSERT_TRUE(tc.points[1].chebyshev);
  EXPECT_GT(*tc.points[1].chebyshev, 0.0);
  EXPECT_THROW(tail_curve(cfg, {0}, TailScale::Wigner, 99), std::invalid_argument);
  EXPECT_THROW(tail_curve(cfg, {0}, TailScale::Dilute, 200), std::invalid_argument);
}

TEST(Universality, FourthMomentGapMatchesExact) {
  const long n = 30;
  EnsembleConfig a = config(n, EntryLaw::rademacher(0.5), 5), b = config(n, EntryLaw::gaussian(0.5), 6);
  UniversalityReport u = universality_compare(a, b, 2, 4000);
  double exact = (1.0 / 16 - 3.0 / 16) / n;
  EXPECT_LE(std::fabs(u.diff - exact), 4 * u.se);
  EXPECT_FALSE(u.agree);
  // Same law, different seeds.
  UniversalityReport same = universality_compare(b, config(n, EntryLaw::gaussian(0.5), 7), 3, 2000);
  EXPECT_LE(std::fabs(same.z), 4.0);
}

TEST(Truncation, BoundedLawNeverExceeds) {
  EnsembleConfig cfg = config(100, EntryLaw::rademacher(1.0));
  cfg.trunc_delta = 0.01;
  TruncationReport t = truncation_event_rate(cfg, 200, 13);
  EXPECT_EQ(t.rate.hits, 0);
  EXPECT_TRUE(t.within);
  EXPECT_NEAR(t.U, std::pow(100.0, 1.0 / 6 - 0.01), 1e-9);
}

TEST(MonteCarlo, AgreesWithExactMoments) {
  const long n = 30;
  EnsembleConfig goe = config(n, EntryLaw::gaussian(1.0), 31);
  goe.goe = true;
  expect_mc_matches(goe, goe_spec(1.0, 3), 2, 3000);
  expect_mc_matches(goe, goe_spec(1.0, 3), 3, 3000);
  EnsembleConfig dil = config(n, EntryLaw::rademacher(1.0), 32);
  dil.c = 5.0;
  expect_mc_matches(dil, dilute_spec(EntryLaw::rademacher(1.0), 5.0, 3), 2, 3000);
  expect_mc_matches(dil, dilute_spec(EntryLaw::rademacher(1.0), 5.0, 3), 3, 3000);
  EnsembleConfig tr = config(n, EntryLaw::power_tail(1.0, 15.0), 33);
  tr.trunc_delta = 0.01;
  MomentSpec ts = truncated_spec(tr.law, tr.truncation_level(), 3);
  expect_mc_matches(tr, ts, 2, 3000);
  expect_mc_matches(tr, ts, 3, 3000);
}

TEST(Json, ReportsCarryFields) {
  auto j = to_json(wilson(3, 10));
  EXPECT_EQ(j.at("hits").get<long>(), 3);
  EXPECT_EQ(j.at("count").get<long>(), 10);
  auto m = to_json(mean_ci({1.0, 2.0}));
  EXPECT_DOUBLE_EQ(m.at("mean").get<double>(), 1.5);
}
