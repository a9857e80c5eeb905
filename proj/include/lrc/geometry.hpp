#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lrc/errors.hpp"
#include "lrc/interval_set.hpp"
#include "lrc/rational.hpp"

namespace lrc {

struct CoveringConfig {
  int d = 1;
  int N = 1;
  Rational delta;

  // delta defaults to 1/(d+2).
  CoveringConfig(int d, int N);
  CoveringConfig(int d, int N, Rational delta);
};

struct FeatherIndex {
  std::vector<long> k;
  long l = 0;
  friend bool operator==(const FeatherIndex&, const FeatherIndex&) = default;
};

void check_delta(const Rational& delta);

// [k+δ, k+1−δ]
Interval kwai(long k, const Rational& delta);
// (k−δ, k+δ)
Interval bridge(long k, const Rational& delta);
// Union of kwais 0..N−1.
IntervalSet kwai_range(int N, const Rational& delta);
// Union of ℬ_k/z for 0 ≤ k ≤ ⌊z(N−δ)+δ⌋.
IntervalSet scaled_bridges(const Rational& z, int N, const Rational& delta);

bool feather_contains(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta);

IntervalSet membership_residual(const std::vector<Rational>& z, const CoveringConfig& config);
std::optional<Rational> membership_witness(const std::vector<Rational>& z, const CoveringConfig& config);

// First lattice point of the beam, scanning l ascending then k lexicographically.
std::optional<FeatherIndex> beam_lattice_point(const std::vector<Rational>& z, const CoveringConfig& config);
bool beam_contains(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta);

// Brute scan over a box of feather indices, testing feather_contains directly.
std::optional<FeatherIndex> feather_search(const std::vector<Rational>& z, const CoveringConfig& config);

// (i, (k_i+δ)/(l+1−δ)) for i = 1..d.
std::vector<std::pair<int, Rational>> feather_lower_face(const FeatherIndex& f, const Rational& delta);
bool on_lower_face(const std::vector<Rational>& z, const FeatherIndex& f, const Rational& delta);

Rational residual_kwai_guarantee(const Rational& z, const Rational& delta);

}  // namespace lrc
