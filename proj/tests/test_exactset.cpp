#include <gtest/gtest.h>

#include <random>

#include "lrc/errors.hpp"
#include "lrc/interval_set.hpp"
#include "lrc/rational.hpp"

using namespace lrc;

namespace {

Rational Q(const char* s) { return Rational::parse(s); }
IntervalSet S(const char* s) { return IntervalSet::parse(s); }

Rational random_rational(std::mt19937_64& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> n(lo * den, hi * den);
  return Rational(n(rng), den);
}

// Up to four random parts in [-2,4] with random endpoint kinds.
IntervalSet random_set(std::mt19937_64& rng, bool closed_only = false) {
  std::uniform_int_distribution<int> count(0, 4);
  std::bernoulli_distribution coin(0.5);
  std::vector<Interval> parts;
  for (int i = count(rng); i > 0; --i) {
    Rational a = random_rational(rng, -2, 4, 8);
    Rational b = random_rational(rng, -2, 4, 8);
    if (b < a) std::swap(a, b);
    Interval iv{a, b, closed_only || coin(rng), closed_only || coin(rng)};
    if (a == b) iv.lo_closed = iv.hi_closed = true;
    parts.push_back(iv);
  }
  return IntervalSet(parts);
}

}  // namespace

TEST(Rational, LowestTermsAndParsing) {
  EXPECT_EQ(Q("-6/4"), Rational(-3, 2));
  EXPECT_EQ(Rational(10, -4).str(), "-5/2");
  EXPECT_EQ(Q("7").str(), "7");
  EXPECT_THROW(Q("1/0"), std::domain_error);
  EXPECT_THROW(Q("abc"), std::invalid_argument);
  EXPECT_THROW(Q("1/"), std::invalid_argument);
  EXPECT_THROW(Rational(1) / Rational(0), std::domain_error);
}

TEST(Rational, FloorCeilFrac) {
  EXPECT_EQ(Q("-7/2").floor(), -4);
  EXPECT_EQ(Q("-7/2").ceil(), -3);
  EXPECT_EQ(Q("7/3").frac(), Q("1/3"));
  EXPECT_EQ(Q("-1/3").frac(), Q("2/3"));
}

TEST(IntervalSet, IntersectExamples) {
  EXPECT_EQ(intersect(S("[1/4,3/4]"), S("[1/4,3/4]")), S("[1/4,3/4]"));
  EXPECT_TRUE(intersect(S("[1/4,3/4]"), S("(3/4,5/4)")).empty());
  EXPECT_EQ(intersect(S("[0,1] [2,3]"), S("[1/2,5/2]")), S("[1/2,1] [2,5/2]"));
}

TEST(IntervalSet, SubtractExamples) {
  EXPECT_EQ(subtract(S("[1/4,3/4]"), S("(3/8,5/8)")), S("[1/4,3/8] [5/8,3/4]"));
  EXPECT_EQ(subtract(S("[1/4,3/4]"), S("(-1/4,1/4) (3/4,5/4)")), S("[1/4,3/4]"));
  IntervalSet pts = subtract(S("[0,1]"), S("(0,1)"));
  EXPECT_EQ(pts, S("{0} {1}"));
  EXPECT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts.measure(), 0);
}

TEST(IntervalSet, ScaleTranslateExamples) {
  EXPECT_EQ(scale_translate(S("[1,2]"), Q("1/2"), 0), S("[1/2,1]"));
  EXPECT_EQ(scale_translate(S("[5/4,7/4]"), Q("1/2"), 0), S("[5/8,7/8]"));
  // h + ρ(s, s+2δ) with h=1/3, ρ=1/2, s=1, δ=1/6.
  EXPECT_EQ(scale_translate(S("(1,4/3)"), Q("1/2"), Q("1/3")), S("(5/6,1)"));
  EXPECT_THROW(scale_translate(S("[1,2]"), 0, 0), std::invalid_argument);
  EXPECT_THROW(scale_translate(S("[1,2]"), -1, 0), std::invalid_argument);
}

TEST(IntervalSet, ClosureOfHalfopenTrimExamples) {
  EXPECT_EQ(closure_of_halfopen_trim(S("[1/4,3/4]"), Q("3/2"), Q("1/4"), 1), S("[1/4,1/2]"));
  EXPECT_TRUE(closure_of_halfopen_trim(IntervalSet(), Q("3/2"), Q("1/4"), 1).empty());
  // {3/4} with z slightly above 1: the image (1/4, 3/4]/z of m=0 ends below 3/4,
  // and (5/4, 7/4]/z starts above it.
  Rational z = Q("1001/1000");
  bool inside = false;
  for (long m = 0; m < 3; ++m) {
    Rational lo = (Rational(m) + Q("1/4")) / z, hi = (Rational(m) + Q("3/4")) / z;
    inside = inside || (Q("3/4") > lo && Q("3/4") <= hi);
  }
  EXPECT_EQ(!closure_of_halfopen_trim(S("{3/4}"), z, Q("1/4"), 1).empty(), inside);
  EXPECT_FALSE(inside);
  // A point exactly at a right end (m+1−δ)/z is kept.
  EXPECT_EQ(closure_of_halfopen_trim(S("{1/2}"), Q("3/2"), Q("1/4"), 1), S("{1/2}"));
  // A point exactly at a left end (m+δ)/z is dropped.
  EXPECT_TRUE(closure_of_halfopen_trim(S("{1/6}"), Q("3/2"), Q("1/4"), 1).empty());
}

TEST(IntervalSet, ClosureRejectsBadParameters) {
  EXPECT_THROW(closure_of_halfopen_trim(S("[0,1]"), 1, Q("1/4"), 1), ParameterError);
  EXPECT_THROW(closure_of_halfopen_trim(S("[0,1]"), 2, Q("1/2"), 1), ParameterError);
  EXPECT_THROW(closure_of_halfopen_trim(S("[0,2]"), 2, Q("1/4"), 1), ParameterError);
}

TEST(IntervalSet, TouchingOpenAndClosedEndsStaySeparate) {
  IntervalSet s({Interval::closed(0, 1), Interval::left_open(1, 2)});
  EXPECT_EQ(s.size(), 2u);
  IntervalSet t({Interval::closed(0, 1), Interval::closed(1, 2)});
  EXPECT_EQ(t, S("[0,2]"));
}

TEST(IntervalSet, TextRoundTrip) {
  IntervalSet s = S("[1/4,3/8] (1/2,2) {3} [4,5)");
  EXPECT_EQ(S(s.str().c_str()), s);
  EXPECT_TRUE(S("{}").empty());
  EXPECT_THROW(S("[1,2"), std::invalid_argument);
}

TEST(IntervalSetProperty, CanonicalizationIdempotent) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    IntervalSet s = random_set(rng);
    EXPECT_EQ(IntervalSet(s.parts()), s);
    for (size_t j = 1; j < s.size(); ++j) {
      const Interval& a = s.parts()[j - 1];
      const Interval& b = s.parts()[j];
      EXPECT_TRUE(a.hi < b.lo || (a.hi == b.lo && !(a.hi_closed && b.lo_closed)));
    }
  }
}

TEST(IntervalSetProperty, MeasureAdditivity) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    IntervalSet a = random_set(rng), b = random_set(rng);
    EXPECT_EQ(subtract(a, b).measure() + intersect(a, b).measure(), a.measure());
    EXPECT_LE(intersect(a, b).measure(), std::min(a.measure(), b.measure()));
  }
}

TEST(IntervalSetProperty, SubtractThenUniteRestoresClosedSets) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    IntervalSet a = random_set(rng, true), b = random_set(rng);
    IntervalSet back = unite(subtract(a, b), intersect(a, b));
    for (long n = -2 * 48; n <= 4 * 48; ++n) {
      Rational x(n, 48);
      ASSERT_EQ(back.contains(x), a.contains(x)) << a << " " << b << " at " << x;
      EXPECT_EQ(subtract(a, b).contains(x), a.contains(x) && !b.contains(x));
      EXPECT_EQ(intersect(a, b).contains(x), a.contains(x) && b.contains(x));
    }
  }
}

TEST(IntervalSetProperty, ScaleMultipliesMeasure) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 1000; ++i) {
    IntervalSet a = random_set(rng);
    Rational c = random_rational(rng, 0, 5, 7) + Rational(1, 9);
    Rational s = random_rational(rng, -3, 3, 5);
    IntervalSet img = scale_translate(a, c, s);
    EXPECT_EQ(img.measure(), c * a.measure());
    for (const Interval& p : a.parts()) {
      EXPECT_EQ(img.contains(p.lo * c + s), a.contains(p.lo));
      EXPECT_EQ(img.contains(p.hi * c + s), a.contains(p.hi));
    }
  }
}

TEST(IntervalSetProperty, MeetsAgreesWithClosure) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 2000; ++i) {
    IntervalSet k = intersect(random_set(rng, true), S("[0,3]"));
    Rational z = Rational(1) + random_rational(rng, 0, 4, 13) + Rational(1, 97);
    Rational delta(1, 3 + static_cast<long>(rng() % 6));
    Rational upper(3);
    bool built = !closure_of_halfopen_trim(k, z, delta, upper).empty();
    EXPECT_EQ(meets_halfopen_trim(k, z, delta, upper), built) << k << " z=" << z << " delta=" << delta;
  }
}

TEST(IntervalSetProperty, ClosureMatchesPointOracle) {
  std::mt19937_64 rng(16);
  for (int i = 0; i < 300; ++i) {
    IntervalSet k = intersect(random_set(rng, true), S("[0,2]"));
    Rational z = Rational(1) + random_rational(rng, 0, 3, 11) + Rational(1, 89);
    Rational delta(1, 4);
    IntervalSet got = closure_of_halfopen_trim(k, z, delta, 2);
    // Every interior sample point of k inside some (m+δ, m+1−δ]/z lies in the result.
    for (long n = 0; n <= 2 * 60; ++n) {
      Rational x(n, 60);
      bool in_image = false;
      for (long m = 0; (Rational(m) + delta) / z <= 2; ++m)
        in_image = in_image || (x > (Rational(m) + delta) / z && x <= (Rational(m + 1) - delta) / z);
      if (k.contains(x) && in_image) {
        EXPECT_TRUE(got.contains(x));
      }
      if (!k.contains(x)) {
        EXPECT_FALSE(got.contains(x));
      }
    }
  }
}
