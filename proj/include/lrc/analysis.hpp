#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lrc/errors.hpp"
#include "lrc/geometry.hpp"
#include "lrc/interval_set.hpp"
#include "lrc/rational.hpp"

namespace lrc {

struct MeasureReport {
  Rational z;
  Rational delta;
  // Measure of ℬ(δ)/z ∩ 𝒦₀(δ).
  Rational measure;
  // 2δ(1−2δ)/(1−δ).
  Rational bound;
  bool tight = false;
};

// Bridge indices k ∈ [max(0, ⌈δ(z−1)⌉−1), ⌊(1−δ)z+δ⌋+1].
MeasureReport k0_measure(const Rational& z, const Rational& delta);
Rational measure_bound(const Rational& delta);
// "z,measure,bound" rows for z = lo, lo+step, …, hi.
std::string measure_curve_csv(const Rational& delta, const Rational& lo, const Rational& hi, const Rational& step);

// (1/(2d+1), 1/(d+2)).
std::pair<Rational, Rational> gap_bounds(int d);

// One bridge ℬ_k/z_i of a chain covering the kwai range.
struct BridgeUse {
  int coordinate;  // 1-based
  long k;
  Interval scaled;
};

// Bridges covering every kwai of the range, left to right, when the residual
// is empty; nullopt otherwise.
std::optional<std::vector<BridgeUse>> covering_bridges(const std::vector<Rational>& z, const CoveringConfig& config);

struct CounterexampleReport {
  std::vector<Rational> z;
  IntervalSet residual_one_round;
  IntervalSet residual_two_rounds;
  // Certificate that one round is covered, and a λ for two rounds.
  std::vector<BridgeUse> one_round_cover;
  std::optional<Rational> two_round_witness;
  bool verified = false;
};

// z_ε = (13(1−ε₁)/5, 3211(1−ε₂)/935, 247(1−ε₃)/55, 61009(1−ε₄)/10285) at
// δ = 1/6. Requires 0 < ε₁ < ε₃ < ε₂ < ε₄ < 32/3211.
std::vector<Rational> counterexample_point(const std::vector<Rational>& eps);
CounterexampleReport counterexample_verify(const std::vector<Rational>& eps);

struct RunnerInstance {
  std::vector<Rational> speeds;
  // Empty means all zero.
  std::vector<Rational> starts;
  Rational delta{1, 3};
  Rational horizon{1};
};

// t ∈ (0, T] with {P_i + t w_i} ∈ [δ, 1−δ] for every i. A runner moving
// backwards from P is the runner moving forwards from 1−P.
IntervalSet loneliness_windows(const RunnerInstance& inst);

// Least t ∈ (0, N/min w] with every {t w_i} ∈ [δ, 1−δ], δ = 1/(m+1) for m
// speeds.
std::optional<Rational> nd_round_check(const std::vector<Rational>& w, int N);

// |{tv} − {tv'}| ∈ [δ,1−δ] agrees with {t|v−v'|} ∈ [δ,1−δ].
bool fractional_gap_identity_check(const Rational& v, const Rational& vp, const Rational& t, const Rational& delta);

}  // namespace lrc
