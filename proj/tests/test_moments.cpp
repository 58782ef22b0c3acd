#include "momentlab/moments.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <map>
#include <random>

using namespace momentlab;

namespace {

// E Tr A^{2s} summed over every index tuple (i_0, ..., i_{2s-1}) in [n]^{2s}.
// Edge moments come straight from the entry law, not from MomentSpec.
Rational tuple_oracle(long n, int s, const EntryLaw& law, bool goe, std::optional<long> c = std::nullopt) {
  int L = 2 * s;
  std::vector<long> idx(L, 0);
  Rational total = 0;
  Rational scale = c ? Rational(*c) : Rational(n);
  for (;;) {
    std::map<std::pair<long, long>, int> passes;
    for (int t = 0; t < L; ++t) {
      long a = idx[t], b = idx[(t + 1) % L];
      ++passes[{std::min(a, b), std::max(a, b)}];
    }
    Rational w = 1;
    for (const auto& [e, M] : passes) {
      Rational m = *law.exact_moment(M);
      if (goe && e.first == e.second) m *= rpow(Rational(2), M / 2);
      m /= rpow(scale, M / 2);
      if (M % 2) m = 0;
      if (c) m *= Rational(*c) / Rational(n);
      w *= m;
    }
    total += w;
    int k = 0;
    while (k < L && ++idx[k] == n) idx[k++] = 0;
    if (k == L) break;
  }
  return total;
}

}  // namespace

TEST(Moments, TupleOracleWigner) {
  for (const auto& law : {EntryLaw::rademacher(0.5), EntryLaw::gaussian(1.0), EntryLaw::gaussian(0.5)})
    for (long n = 1; n <= 3; ++n)
      for (int s = 1; s <= 3; ++s) {
        MomentResult r = exact_trace_moment(n, s, wigner_spec(law, s));
        ASSERT_TRUE(r.total_exact);
        EXPECT_EQ(*r.total_exact, tuple_oracle(n, s, law, false)) << law.name() << " n=" << n << " s=" << s;
        EXPECT_NEAR(static_cast<double>(r.total), r.total_exact->get_d(), 1e-12 * (1 + r.total_exact->get_d()));
      }
}

TEST(Moments, TupleOracleGoeAndDilute) {
  for (long n = 1; n <= 3; ++n)
    for (int s = 1; s <= 3; ++s) {
      MomentResult g = exact_trace_moment(n, s, goe_spec(1.0, s));
      EXPECT_EQ(*g.total_exact, tuple_oracle(n, s, EntryLaw::gaussian(1.0), true)) << n << "," << s;
      for (long c = 1; c <= n; ++c) {
        MomentResult d = exact_trace_moment(n, s, dilute_spec(EntryLaw::rademacher(1.0), c, s));
        EXPECT_EQ(*d.total_exact, tuple_oracle(n, s, EntryLaw::rademacher(1.0), false, c)) << n << "," << s << "," << c;
      }
    }
}

TEST(Moments, SmallClosedForms) {
  EntryLaw r = EntryLaw::rademacher(0.5);
  EXPECT_EQ(*exact_trace_moment(2, 1, wigner_spec(r, 1)).total_exact, ratio(1, 2));
  EXPECT_EQ(*exact_trace_moment(2, 2, wigner_spec(r, 2)).total_exact, ratio(3, 16));
  // E Tr A^4 = V4 + 2(n-1) v^4 in the 1/sqrt(n) normalization.
  for (const auto& law : {EntryLaw::rademacher(0.5), EntryLaw::gaussian(0.5), EntryLaw::gaussian(2.0)})
    for (long n = 1; n <= 8; ++n) {
      Rational v2 = *law.exact_moment(2), V4 = *law.exact_moment(4);
      EXPECT_EQ(*exact_trace_moment(n, 2, wigner_spec(law, 2)).total_exact, V4 + Rational(2 * (n - 1)) * v2 * v2);
    }
  // n = 1 collapses to the diagonal moment.
  for (int s = 1; s <= 5; ++s)
    EXPECT_EQ(*exact_trace_moment(1, s, wigner_spec(EntryLaw::gaussian(1.0), s)).total_exact,
              *EntryLaw::gaussian(1.0).exact_moment(2 * s));
}

TEST(Semicircle, ValuesAndConvergence) {
  EXPECT_EQ(semicircle_moment(3, 1.0L), 0.0L);
  EXPECT_EQ(semicircle_moment(4, 1.0L), 2.0L);
  EXPECT_EQ(semicircle_moment(6, 0.5L), 5.0L / 64.0L);
  EXPECT_EQ(semicircle_moment_exact(6, ratio(1, 4)), ratio(5, 64));
  EXPECT_THROW(semicircle_moment(2, 0.0L), std::domain_error);
  EntryLaw law = EntryLaw::rademacher(1.0);
  MomentCensus c4 = moment_census(4);
  for (int s = 2; s <= 4; ++s) {
    MomentCensus c = moment_census(s);
    double err1 = 0, err2 = 0;
    for (long n : {100L, 200L}) {
      MomentResult r = exact_trace_moment(n, c, wigner_spec(law, s));
      double e = std::fabs(static_cast<double>(r.total / n - semicircle_moment(2 * s, 1.0L)));
      (n == 100 ? err1 : err2) = e;
    }
    EXPECT_NEAR(err1 / err2, 2.0, 0.1) << s;
  }
  // s = 1 is exact at every n.
  EXPECT_EQ(*exact_trace_moment(37, 1, wigner_spec(law, 1)).total_exact, Rational(37));
}

TEST(ZParts, SumToTotal) {
  for (const auto& law : {EntryLaw::rademacher(0.5), EntryLaw::gaussian(0.5)}) {
    MomentSpec spec = wigner_spec(law, 6);
    double C0 = default_C0(spec);
    for (long n : {10L, 50L})
      for (int s = 1; s <= 5; ++s) {
        MomentResult r = z_decomposition(n, s, spec, C0, 0.1);
        ASSERT_TRUE(r.zparts);
        Rational sum = 0;
        long long walks = 0;
        for (int i = 0; i < 4; ++i) {
          sum += *r.zparts->z_exact[i];
          walks += r.zparts->walks[i];
        }
        EXPECT_EQ(sum, *r.total_exact);
        EXPECT_EQ(walks, moment_census(s).walks);
        // At s = 1 the tree walk is Z1 and the loop walk sits in Z1 or Z4 by the threshold.
        if (s == 1) {
          EXPECT_EQ(*r.zparts->z_exact[0] + *r.zparts->z_exact[3], *r.total_exact);
          EXPECT_EQ(*r.zparts->z_exact[3] != 0, r.zparts->threshold < 1.0);
        }
      }
  }
  EXPECT_NEAR(default_C0(wigner_spec(EntryLaw::rademacher(0.5), 6)),
              M_E * (1 + 8 * kC1 * kC1 * std::pow(0.5, 12)), 1e-12);
  MomentSpec no12 = wigner_spec(EntryLaw::rademacher(1.0), 2);
  if (no12.off.size() <= 6) EXPECT_THROW(default_C0(no12), std::domain_error);
}

TEST(ZParts, NuNormSplitMatchesTotal) {
  MomentResult r = exact_trace_moment(20, 4, wigner_spec(EntryLaw::gaussian(1.0), 4));
  long double sum = 0;
  for (const auto& [k, v] : r.by_nu_norm) sum += v;
  EXPECT_NEAR(static_cast<double>(sum), static_cast<double>(r.total), 1e-12 * static_cast<double>(r.total));
}

TEST(Truncation, ClosedFormsAgreeWithQuadratureAndSampling) {
  for (const auto& law : {EntryLaw::gaussian(1.0), EntryLaw::power_tail(1.0, 15.0)})
    for (long double U : {0.5L, 1.5L, 3.0L})
      for (int M : {2, 4, 6}) {
        long double a = law.truncated_moment(M, U), b = truncated_moment_quadrature(law, M, U);
        EXPECT_NEAR(static_cast<double>(a), static_cast<double>(b), 1e-9 * static_cast<double>(b) + 1e-15)
            << law.name() << " U=" << static_cast<double>(U) << " M=" << M;
      }
  // Gaussian E[a^2; |a| <= U] against the regularized incomplete gamma.
  for (double U : {0.5, 1.0, 2.5})
    EXPECT_NEAR(static_cast<double>(EntryLaw::gaussian(1.0).truncated_moment(2, U)),
                boost::math::gamma_p(1.5, U * U / 2), 1e-12);
  // Monte Carlo with a fixed seed.
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  EntryLaw pt = EntryLaw::power_tail(1.0, 15.0);
  double acc = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    double x = pt.sample(unif(gen) + 1e-300, unif(gen) + 1e-300);
    if (std::fabs(x) <= 1.5) acc += x * x;
  }
  EXPECT_NEAR(acc / N, static_cast<double>(pt.truncated_moment(2, 1.5L)), 0.01);
}

TEST(Truncation, LevelsAndMonotonicity) {
  TruncationSpec t{EntryLaw::rademacher(1.0), 6.0, 0.01};
  EXPECT_NEAR(static_cast<double>(t.level(1000)), std::pow(1000.0, 1.0 / 6 - 0.01), 1e-12);
  auto m = truncated_moments(t, 1000, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(m[k], 1.0L);
  TruncationSpec p{EntryLaw::power_tail(1.0, 15.0), 6.0, 0.01};
  long double prev = 0;
  for (long n : {10L, 100L, 1000L, 100000L}) {
    long double v = truncated_moments(p, n, 2)[2];
    EXPECT_GT(v, prev);
    EXPECT_LT(v, p.base.moment(4));
    prev = v;
  }
}

TEST(WeightBound, HoldsOnEveryWalk) {
  for (const auto& law : {EntryLaw::rademacher(0.5), EntryLaw::gaussian(0.5), EntryLaw::power_tail(0.5, 15.0)})
    for (long double U : {0.6L, 2.0L})
      for (int s = 1; s <= 4; ++s)
        for_each_even_walk(s, WalkFilter{}, [&](const Walk& w) {
          WeightCheck c = weight_bound_check(analyze(w), law, U);
          ASSERT_TRUE(c.pass) << law.name() << " " << w.str();
        });
  for_each_even_walk(4, WalkFilter{false, true}, [&](const Walk& w) {
    WeightCheck c = weight_bound_check(analyze(w), EntryLaw::rademacher(0.5), 1.0L);
    EXPECT_LE(c.weight, std::pow(4.0L, -4) * (1 + 1e-15L));
  });
  EXPECT_TRUE(weight_bound_check(analyze(Walk::parse("1,2,3,4,3,5,2,3,4,3,2,5,3,2,1")), EntryLaw::gaussian(0.5), 3.0L)
                  .pass);
}

TEST(Dilute, FullConcentrationIsWigner) {
  EntryLaw law = EntryLaw::gaussian(1.0);
  for (long n : {3L, 9L})
    for (int s = 1; s <= 4; ++s)
      EXPECT_EQ(*exact_trace_moment(n, s, dilute_spec(law, static_cast<double>(n), s)).total_exact,
                *exact_trace_moment(n, s, wigner_spec(law, s)).total_exact);
  EXPECT_THROW(dilute_spec(law, 0.0, 2), std::invalid_argument);
}

TEST(Dilute, LowerBound) {
  for (const auto& law : {EntryLaw::rademacher(0.5), EntryLaw::gaussian(0.5)}) {
    Rational v2 = *law.exact_moment(2), V4 = *law.exact_moment(4);
    for (long n : {40L, 80L})
      for (double c : {5.0, 10.0, 20.0})
        for (int s = 3; s <= 5; ++s) {
          MomentResult r = exact_trace_moment(n, s, dilute_spec(law, c, s));
          Rational b = dilute_lower_bound_exact(n, s, v2, V4, from_double(c));
          EXPECT_GE(*r.total_exact, b) << law.name() << " " << n << "," << c << "," << s;
          EXPECT_NEAR(static_cast<double>(dilute_lower_bound(n, s, 0.5, V4.get_d(), c)), b.get_d(),
                      1e-9 * std::fabs(b.get_d()));
        }
  }
  // Unit variance, inside c <= sqrt(n).
  for (const auto& law : {EntryLaw::rademacher(1.0), EntryLaw::gaussian(1.0)})
    for (long n : {40L, 80L})
      for (int s = 3; s <= 5; ++s) {
        MomentResult r = exact_trace_moment(n, s, dilute_spec(law, 5.0, s));
        EXPECT_GE(*r.total_exact, dilute_lower_bound_exact(n, s, 1, *law.exact_moment(4), 5)) << law.name();
      }
}

TEST(Moments, JsonCarriesExactTotal) {
  auto j = to_json(exact_trace_moment(2, 2, wigner_spec(EntryLaw::rademacher(0.5), 2)));
  EXPECT_EQ(j.at("total_exact").get<std::string>(), "3/16");
  EXPECT_EQ(j.at("n").get<long>(), 2);
}
