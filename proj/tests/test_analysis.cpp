#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "lrc/analysis.hpp"

using namespace lrc;

namespace {

Rational Q(const char* s) { return Rational::parse(s); }

Rational random_in(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> n(lo * den, hi * den);
  return Rational(n(rng), den);
}

// Measure of ℬ(δ)/z ∩ 𝒦₀(δ) over a generous index range.
Rational brute_measure(const Rational& z, const Rational& delta) {
  IntervalSet bridges;
  for (long k = 0; Rational(k) - delta < z; ++k) bridges = unite(bridges, scale_translate(IntervalSet(bridge(k, delta)), 1 / z, 0));
  return intersect(bridges, IntervalSet(kwai(0, delta))).measure();
}

bool in_kwai(const Rational& x, const Rational& delta) {
  Rational f = x.frac();
  return f >= delta && f <= Rational(1) - delta;
}

}  // namespace

TEST(Measure, Examples) {
  MeasureReport a = k0_measure(5, Q("1/6"));
  EXPECT_EQ(a.measure, Q("4/15"));
  EXPECT_TRUE(a.tight);
  EXPECT_EQ(k0_measure(1, Q("1/4")).measure, 0);
  MeasureReport c = k0_measure(2, Q("1/4"));
  EXPECT_EQ(c.measure, Q("1/4"));
  EXPECT_EQ(c.bound, Q("1/3"));
  EXPECT_FALSE(c.tight);
  EXPECT_THROW(k0_measure(Q("1/2"), Q("1/4")), ParameterError);
}

TEST(Measure, CurveCsv) {
  std::string csv = measure_curve_csv(Q("1/10"), 1, 2, Q("1/2"));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "z,measure,bound");
  EXPECT_EQ(lines[1].substr(0, 2), "1,");
  EXPECT_EQ(lines[3].substr(0, 2), "2,");
  EXPECT_THROW(measure_curve_csv(Q("1/10"), 1, 2, 0), ParameterError);
}

TEST(MeasureProperty, BoundHoldsOnRandomSamples) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<long> den(3, 40);
  for (int i = 0; i < 10000; ++i) {
    long q = den(rng);
    std::uniform_int_distribution<long> num(1, q / 3);
    Rational delta(num(rng), q);
    Rational z = random_in(rng, 1, 50, 97);
    MeasureReport m = k0_measure(z, delta);
    ASSERT_LE(m.measure, m.bound) << "z=" << z << " delta=" << delta;
  }
}

TEST(MeasureProperty, IndexRangeLosesNothing) {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 500; ++i) {
    Rational delta(1, 3 + static_cast<long>(rng() % 10));
    Rational z = random_in(rng, 1, 20, 31);
    EXPECT_EQ(k0_measure(z, delta).measure, brute_measure(z, delta)) << z << " " << delta;
  }
}

TEST(MeasureProperty, TightAtKMinusOne) {
  for (long k = 3; k <= 12; ++k) EXPECT_TRUE(k0_measure(k - 1, Rational(1, k)).tight) << k;
}

TEST(GapBounds, Examples) {
  EXPECT_EQ(gap_bounds(1), std::make_pair(Q("1/3"), Q("1/3")));
  EXPECT_EQ(gap_bounds(4), std::make_pair(Q("1/9"), Q("1/6")));
  EXPECT_EQ(gap_bounds(3), std::make_pair(Q("1/7"), Q("1/5")));
  EXPECT_THROW(gap_bounds(0), ParameterError);
}

TEST(GapBoundsProperty, LowerBoundLeavesResidual) {
  std::mt19937_64 rng(53);
  for (int d = 1; d <= 3; ++d) {
    CoveringConfig config(d, 1, gap_bounds(d).first);
    for (int i = 0; i < 1000; ++i) {
      std::vector<Rational> z;
      for (int j = 0; j < d; ++j) z.push_back(random_in(rng, 1, 10, 53));
      EXPECT_FALSE(membership_residual(z, config).empty()) << d;
    }
  }
}

TEST(Counterexample, Verified) {
  CounterexampleReport r = counterexample_verify({Q("1/1000"), Q("3/1000"), Q("2/1000"), Q("4/1000")});
  EXPECT_TRUE(r.verified);
  EXPECT_TRUE(r.residual_one_round.empty());
  EXPECT_FALSE(r.residual_two_rounds.empty());
  ASSERT_TRUE(r.two_round_witness);
  EXPECT_TRUE(r.residual_two_rounds.contains(*r.two_round_witness));
  EXPECT_EQ(r.z[0], Rational(13, 5) * (1 - Q("1/1000")));
  EXPECT_EQ(r.z[3], Rational(61009, 10285) * (1 - Q("4/1000")));
  // The bridges listed cover 𝒦₀(1/6) left to right.
  ASSERT_FALSE(r.one_round_cover.empty());
  IntervalSet covered;
  for (const auto& b : r.one_round_cover) {
    EXPECT_EQ(b.scaled, Interval::open((Rational(b.k) - Q("1/6")) / r.z[b.coordinate - 1],
                                       (Rational(b.k) + Q("1/6")) / r.z[b.coordinate - 1]));
    covered = unite(covered, IntervalSet(b.scaled));
  }
  EXPECT_TRUE(subtract(IntervalSet(kwai(0, Q("1/6"))), covered).empty());
}

TEST(Counterexample, RejectsBadEpsilons) {
  EXPECT_THROW(counterexample_verify({Q("1/100"), Q("1/100"), Q("1/100"), Q("1/100")}), ParameterError);
  EXPECT_THROW(counterexample_verify({Q("1/1000"), Q("3/1000"), Q("2/1000"), Q("32/3211")}), ParameterError);
  EXPECT_THROW(counterexample_verify({Q("1/1000"), Q("3/1000")}), ParameterError);
}

TEST(CoveringBridges, AbsentWhenResidualIsNonempty) {
  EXPECT_FALSE(covering_bridges({2, 3}, CoveringConfig(2, 1, Q("1/4"))));
}

TEST(Runner, SixRunnerExample) {
  RunnerInstance inst;
  inst.speeds = {10285, 26740, 35319, 46187, 61005};
  inst.delta = Q("1/6");
  inst.horizon = Q("2/10285");
  IntervalSet w = loneliness_windows(inst);
  EXPECT_TRUE(intersect(w, IntervalSet(Interval::open(0, Q("1/10285")))).empty());
  EXPECT_TRUE(w.contains(Q("5/41140")));
  EXPECT_EQ(Q("5/41140"), Rational(5) / (4 * Rational(10285)));
}

TEST(Runner, SingleRunner) {
  RunnerInstance inst;
  inst.speeds = {1};
  EXPECT_EQ(loneliness_windows(inst), IntervalSet::parse("[1/3,2/3]"));
  inst.horizon = 0;
  EXPECT_THROW(loneliness_windows(inst), ParameterError);
}

TEST(Runner, FreeStartBlocker) {
  // The reversed runner from 1/4 is the forward runner from 3/4.
  for (long T : {1L, 5L, 40L}) {
    RunnerInstance inst;
    inst.speeds = {1, 1};
    inst.starts = {Q("1/4"), Q("3/4")};
    inst.horizon = T;
    EXPECT_TRUE(loneliness_windows(inst).empty()) << T;
  }
}

TEST(Runner, StartsMustBeFractions) {
  RunnerInstance inst;
  inst.speeds = {1, 2};
  inst.starts = {Q("1/4"), 1};
  EXPECT_THROW(loneliness_windows(inst), ParameterError);
}

TEST(RoundCheck, Examples) {
  auto t = nd_round_check({1, 2, 3}, 1);
  ASSERT_TRUE(t);
  EXPECT_EQ(*t, Q("1/4"));
  auto windows = loneliness_windows({{1, 2, 3}, {}, Q("1/4"), 1});
  EXPECT_TRUE(windows.contains(Q("3/4")));
  EXPECT_EQ(nd_round_check({1, 1, 1}, 1), Q("1/4"));
  EXPECT_TRUE(loneliness_windows({{1, 1, 1}, {}, Q("1/4"), 1}).contains(Q("1/2")));
  std::vector<Rational> six = {10285, 26740, 35319, 46187, 61005};
  EXPECT_FALSE(nd_round_check(six, 1));
  EXPECT_TRUE(nd_round_check(six, 2));
}

TEST(RoundCheckProperty, AgreesWithMembership) {
  std::mt19937_64 rng(54);
  for (int d = 1; d <= 4; ++d) {
    for (int N = 1; N <= 2; ++N) {
      CoveringConfig config(d, N);
      for (int i = 0; i < 200; ++i) {
        std::vector<Rational> w = {1};
        std::vector<Rational> z;
        for (int j = 0; j < d; ++j) z.push_back(random_in(rng, 1, 8, 29));
        w.insert(w.end(), z.begin(), z.end());
        auto t = nd_round_check(w, N);
        auto lam = membership_witness(z, config);
        ASSERT_EQ(t.has_value(), lam.has_value());
        if (t) {
          EXPECT_EQ(*t, *lam);
          for (const auto& wi : w) EXPECT_TRUE(in_kwai(*t * wi, config.delta));
        }
      }
    }
  }
}

TEST(FractionalGap, Examples) {
  EXPECT_TRUE(fractional_gap_identity_check(0, 1, Q("1/2"), Q("1/3")));
  EXPECT_TRUE(fractional_gap_identity_check(Q("3/7"), Q("12/5"), Q("35/4"), Q("1/4")));
  EXPECT_THROW(fractional_gap_identity_check(0, 1, 0, Q("1/3")), ParameterError);
}

TEST(FractionalGapProperty, IdentityHolds) {
  std::mt19937_64 rng(55);
  for (int i = 0; i < 10000; ++i) {
    Rational v = random_in(rng, 0, 20, 11), vp = random_in(rng, 0, 20, 13);
    Rational t = random_in(rng, 0, 10, 17) + Rational(1, 19);
    Rational delta(1, 3 + static_cast<long>(rng() % 8));
    ASSERT_TRUE(fractional_gap_identity_check(v, vp, t, delta)) << v << " " << vp << " " << t;
  }
}
