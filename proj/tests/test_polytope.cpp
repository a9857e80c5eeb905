#include <gtest/gtest.h>

#include <random>

#include "lrc/chains.hpp"
#include "lrc/polytope.hpp"

using namespace lrc;

namespace {

// Equal up to a positive factor, same relation.
bool proportional(const LinIneq& a, const LinIneq& b) {
  if (a.rel != b.rel || a.coeffs.size() != b.coeffs.size()) return false;
  if (a.coeffs.empty()) return a.constant.sign() == b.constant.sign();
  const auto& [v0, c0] = *a.coeffs.begin();
  auto it = b.coeffs.find(v0);
  if (it == b.coeffs.end()) return false;
  Rational f = it->second / c0;
  if (f.sign() <= 0) return false;
  for (const auto& [v, c] : a.coeffs) {
    auto jt = b.coeffs.find(v);
    if (jt == b.coeffs.end() || jt->second != c * f) return false;
  }
  return b.constant == a.constant * f;
}

LinSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 6), nr(1, 20), coef(-3, 3), cst(-6, 6);
  std::bernoulli_distribution strict(0.5);
  int vars = nv(rng), rows = nr(rng);
  LinSystem sys;
  for (int v = 0; v < vars; ++v) sys.declare("x" + std::to_string(v));
  for (int r = 0; r < rows; ++r) {
    LinIneq row;
    for (int v = 0; v < vars; ++v) {
      int c = coef(rng);
      if (c != 0) row.coeffs["x" + std::to_string(v)] = c;
    }
    row.constant = cst(rng);
    row.rel = strict(rng) ? Rel::Lt : Rel::Le;
    sys.add(row);
  }
  return sys;
}

}  // namespace

TEST(Polytope, ParseNormalizesRelations) {
  LinIneq a = LinIneq::parse("2*x + 1 > y");
  std::map<std::string, Rational> at = {{"x", 0}, {"y", 0}};
  EXPECT_TRUE(a.holds(at));
  at["y"] = 1;
  EXPECT_FALSE(a.holds(at));
  EXPECT_EQ(a.rel, Rel::Lt);
  EXPECT_EQ(LinIneq::parse("x >= 1/2").rel, Rel::Le);
  EXPECT_THROW(LinIneq::parse("x + 1"), ParameterError);
  EXPECT_THROW(LinIneq::parse("x $ 1"), ParameterError);
}

TEST(Polytope, SystemTextRoundTrip) {
  LinSystem sys = LinSystem::parse("vars: x y\n0 < x  # lower\nx + y <= 3\n");
  EXPECT_EQ(sys.variables, (std::vector<std::string>{"x", "y"}));
  ASSERT_EQ(sys.rows.size(), 2u);
  LinSystem again = LinSystem::parse(sys.str());
  EXPECT_EQ(again.rows, sys.rows);
}

TEST(Polytope, OpenUnitInterval) {
  LinSystem sys = LinSystem::parse("0 < x\nx < 1");
  FeasibilityResult r = feasible(sys);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.witness->at("x"), Rational(1, 2));
  EXPECT_TRUE(verify_certificate(sys, r));
  FeasibilityResult tampered = r;
  (*tampered.witness)["x"] = 2;
  std::string why;
  EXPECT_FALSE(verify_certificate(sys, tampered, &why));
  EXPECT_FALSE(why.empty());
}

TEST(Polytope, EmptyOpenInterval) {
  LinSystem sys = LinSystem::parse("0 < x\nx < 0");
  FeasibilityResult r = feasible(sys);
  ASSERT_FALSE(r.feasible);
  ASSERT_TRUE(r.certificate);
  EXPECT_EQ(r.certificate->size(), 2u);
  EXPECT_TRUE(verify_certificate(sys, r));
  FeasibilityResult bad = r;
  bad.certificate->front().second = -1;
  EXPECT_FALSE(verify_certificate(sys, bad));
  FeasibilityResult missing;
  EXPECT_FALSE(verify_certificate(sys, missing));
}

TEST(Polytope, ClosedSegmentPointIsFeasible) {
  LinSystem sys = LinSystem::parse("0 <= x\nx <= 0\ny < x + 1\ny > x - 1");
  FeasibilityResult r = feasible(sys);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(verify_certificate(sys, r));
  EXPECT_FALSE(feasible(strictified(sys)).feasible);
}

TEST(Polytope, UnboundedSystemGetsFiniteWitness) {
  LinSystem sys = LinSystem::parse("x > 3\ny > x");
  FeasibilityResult r = feasible(sys);
  ASSERT_TRUE(r.feasible);
  EXPECT_TRUE(sys.holds(*r.witness));
}

TEST(Polytope, OneChainWithShiftOneFeasibleShiftThreeNot) {
  for (long a : {1L, 2L, 3L}) {
    WeakChain c = WeakChain::parse("<2434|000" + std::to_string(a) + ">");
    LinSystem sys = weak_chain_system(c);
    FeasibilityResult r = feasible(sys);
    EXPECT_TRUE(verify_certificate(sys, r));
    EXPECT_EQ(r.feasible, a == 1) << "a=" << a;
  }
}

TEST(Polytope, OneChainSystemMatchesPublishedRows) {
  for (long a : {1L, 2L, 3L}) {
    WeakChain c = WeakChain::parse("<2434|000" + std::to_string(a) + ">");
    LinSystem sys = weak_chain_system(c);
    std::vector<LinIneq> rows = {
        LinIneq::parse("0 < 1 - 3*h2"),
        LinIneq::parse("0 < -1 + 3*h4"),
        LinIneq::parse("0 < rho2 + 3*h2 - 3*h4"),
        LinIneq::parse("0 < -rho2 - 3*h2 + 3*h3"),
        LinIneq::parse("0 < rho4 - 3*h3 + 3*h4"),
        LinIneq::parse("0 < rho3 - " + std::to_string(3 * a) + "*rho4 + 3*h3 - 3*h4"),
        LinIneq::parse("0 < 3 - rho3 - 3*h3"),
        LinIneq::parse("0 < -3 + " + std::to_string(3 * a + 1) + "*rho4 + 3*h4"),
    };
    size_t with_h = 0;
    for (const LinIneq& row : sys.rows) {
      bool uses_h = row.coeffs.count("h2") || row.coeffs.count("h3") || row.coeffs.count("h4");
      if (!uses_h) continue;
      ++with_h;
      bool found = false;
      for (const LinIneq& p : rows) found = found || proportional(p, row);
      EXPECT_TRUE(found) << row.str();
    }
    EXPECT_EQ(with_h, rows.size());
  }
}

TEST(PolytopeProperty, CertificatesVerifyOnRandomSystems) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    LinSystem sys = random_system(rng);
    FeasibilityResult r = feasible(sys);
    std::string why;
    EXPECT_TRUE(verify_certificate(sys, r, &why)) << why << "\n" << sys.str();
  }
}

TEST(PolytopeProperty, EliminationOrderIndependence) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    LinSystem sys = random_system(rng);
    FeasibilityOptions fwd, rev, plain;
    fwd.order = sys.variables;
    rev.order = {sys.variables.rbegin(), sys.variables.rend()};
    plain.chernikov = false;
    FeasibilityResult a = feasible(sys), b = feasible(sys, fwd), c = feasible(sys, rev);
    EXPECT_EQ(a.feasible, b.feasible) << sys.str();
    EXPECT_EQ(a.feasible, c.feasible) << sys.str();
    // Without the history bound the row count grows doubly exponentially.
    if (sys.rows.size() <= 8) {
      EXPECT_EQ(a.feasible, feasible(sys, plain).feasible) << sys.str();
    }
    EXPECT_TRUE(verify_certificate(sys, b));
    EXPECT_TRUE(verify_certificate(sys, c));
  }
}

TEST(PolytopeProperty, OuterInnerSplitAgreesWithPlainElimination) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 200; ++i) {
    LinSystem sys = random_system(rng);
    if (sys.variables.size() < 2) continue;
    FeasibilityOptions split;
    split.outer = {sys.variables[0]};
    FeasibilityResult a = feasible(sys), b = feasible(sys, split);
    EXPECT_EQ(a.feasible, b.feasible) << sys.str();
    EXPECT_TRUE(verify_certificate(sys, b));
  }
}

TEST(PolytopeProperty, InfeasibleSystemsHaveNoSampledPoint) {
  std::mt19937_64 rng(34);
  std::uniform_int_distribution<long> num(-200, 200);
  int infeasible = 0;
  for (int i = 0; i < 200; ++i) {
    LinSystem sys = random_system(rng);
    if (feasible(sys).feasible) continue;
    ++infeasible;
    for (int s = 0; s < 10000; ++s) {
      std::map<std::string, Rational> at;
      for (const auto& v : sys.variables) at[v] = Rational(num(rng), 20);
      ASSERT_FALSE(sys.holds(at));
    }
  }
  EXPECT_GT(infeasible, 0);
}
