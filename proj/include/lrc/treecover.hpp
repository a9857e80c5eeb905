#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/geometry.hpp"
#include "lrc/interval_set.hpp"
#include "lrc/polytope.hpp"
#include "lrc/rational.hpp"

namespace lrc {

// Σ coef·Π z_i^e_i REL 0 over z1…z_dim; exponent vectors are the keys.
struct PolyIneq {
  std::map<std::vector<int>, Rational> terms;
  Rel rel = Rel::Le;

  // "z2*z3 + z1*z3 <= 8*z1*z2"; variables are z1…z_dim, powers as z1^2.
  static PolyIneq parse(std::string_view text, int dim);
  Rational eval(const std::vector<Rational>& z) const;
  bool holds(const std::vector<Rational>& z) const;
  std::string str() const;
};

// Points of [1,C]^d whose sorted coordinates satisfy every constraint.
struct CompactRegion {
  int dim = 1;
  Rational box_hi{2};
  std::vector<PolyIneq> constraints;
  // Optional bounds on the i-th smallest coordinate of a member, implied by
  // the constraints; used only to skip subtrees with no checked leaf.
  std::vector<Rational> sorted_hi;

  static CompactRegion box(int dim, Rational hi);
  // 5z₁ ≤ 47, 2z₂ ≤ 5z₁, z₂z₃ + z₁z₃ ≤ 8z₁z₂, z₃z₄ + z₂z₄ ≤ 10z₂z₃, with the
  // cube (1,31/5)⁴ removed (z₄ ≥ 31/5 once sorted); C bounds it in [1,C]⁴.
  static CompactRegion four_speed_region();

  // Sorts a copy of z before testing.
  bool contains(std::vector<Rational> z) const;
  // False when no completion of the partial tuple to dim coordinates in
  // [1,box_hi] can respect sorted_hi.
  bool may_extend(std::vector<Rational> partial) const;
  // Closed intervals, disjoint and ascending, containing every w for which
  // partial + {w} is a member; partial holds dim−1 coordinates. Exact when
  // each constraint has degree at most 1 in every variable, else [1,box_hi].
  std::vector<std::pair<Rational, Rational>> completion_ranges(std::vector<Rational> partial) const;
  std::string str() const;
};

struct CoverNode {
  int depth = 0;
  Rational z{1};
  IntervalSet kset;
  std::vector<Rational> ancestry;
};

CoverNode cover_root(const CoveringConfig& config);

// Children z' = (m+δ)/e⁺ ∈ (1,C] for e⁺ ∈ kset⁺, ascending and deduplicated,
// with kset' = Clos(kset ∩ 𝒦^>(δ)/z'). Throws ParameterError on an empty
// kset or a node already at depth d.
std::vector<CoverNode> children(const CoverNode& node, const CoveringConfig& config, const Rational& C);
// The children's coordinates alone, and one child built from its coordinate.
std::vector<Rational> child_coordinates(const CoverNode& node, const CoveringConfig& config, const Rational& C);
// Only the coordinates lying in one of the closed ranges.
std::vector<Rational> child_coordinates(const CoverNode& node, const CoveringConfig& config, const Rational& C,
                                        const std::vector<std::pair<Rational, Rational>>& ranges);
CoverNode make_child(const CoverNode& node, Rational z, const CoveringConfig& config);

struct CoverOptions {
  int jobs = 1;
  // Fraction of depth-1 subtrees to traverse, drawn with `seed`; 1 means all.
  double sample_fraction = 1.0;
  uint64_t seed = 1;
  // Explicit depth-1 subtree indices; overrides the sample when nonempty.
  std::vector<size_t> subtrees;
  // Failing leaves swept for a nearby uncovered point, at most this many.
  size_t sweep_limit = 16;
  // Completed depth-1 subtrees are appended here and skipped on a rerun.
  std::string checkpoint;
  std::function<void(size_t done, size_t total)> progress;
};

struct CoverReport {
  bool covered = true;
  // δ differs from 1/(d+2): the tree argument is not claimed for it.
  bool heuristic = false;
  size_t subtrees_total = 0;
  size_t subtrees_checked = 0;
  size_t nodes = 0;
  size_t leaves = 0;
  size_t leaves_checked = 0;
  // Inner nodes skipped because no leaf below them lies in the region.
  size_t pruned = 0;
  size_t max_fragments = 0;
  // Ancestries (sorted) of checked leaves with an empty kset.
  std::vector<std::vector<Rational>> failing_leaves;
  // Ancestries of inner nodes whose kset became empty; reported as failures
  // because the subtree argument needs a nonempty kset at every level.
  std::vector<std::vector<Rational>> dead_branches;
  // Uncovered points found by sweeping around failing leaves.
  std::vector<std::vector<Rational>> uncovered_points;
  double seconds = 0;

  std::string to_json(const CompactRegion& region, const CoveringConfig& config) const;
};

CoverReport verify_cover(const CompactRegion& region, const CoveringConfig& config, const CoverOptions& opts = {});

// Searches z_i(1 − e_i/s), e_i ∈ {−3,…,3}, s = 10³…10⁶, for a point that is not covered;
// nullopt means every grid point is covered (a boundary artefact).
std::optional<std::vector<Rational>> sweep_near(const std::vector<Rational>& z, const CoveringConfig& config);

struct SpotReport {
  size_t samples = 0;
  size_t covered = 0;
  std::vector<std::vector<Rational>> uncovered;
};

// Random rational points of the region, each tested with membership_residual.
SpotReport spot_check(const CompactRegion& region, const CoveringConfig& config, size_t samples, uint64_t seed = 1);

}  // namespace lrc
