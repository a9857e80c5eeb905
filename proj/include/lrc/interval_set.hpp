#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lrc/rational.hpp"

namespace lrc {

struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static Interval open(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
  static Interval left_open(Rational a, Rational b) { return {std::move(a), std::move(b), false, true}; }
  static Interval right_open(Rational a, Rational b) { return {std::move(a), std::move(b), true, false}; }
  static Interval point(const Rational& a) { return {a, a, true, true}; }

  bool empty() const { return hi < lo || (lo == hi && !(lo_closed && hi_closed)); }
  bool degenerate() const { return lo == hi; }
  bool contains(const Rational& x) const;
  Rational length() const { return hi - lo; }
  std::string str() const;

  friend bool operator==(const Interval&, const Interval&) = default;
  friend std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.str(); }
};

Interval intersect(const Interval& a, const Interval& b);

// Finite union of rational intervals kept sorted, pairwise disjoint, and with
// overlapping parts merged. Parts that merely abut with at least one open end
// stay separate.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(const Interval& iv);  // NOLINT
  explicit IntervalSet(std::vector<Interval> parts);

  // "[a,b] (c,d) {e}"; "{}" or "" is the empty set.
  static IntervalSet parse(std::string_view text);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  size_t size() const { return parts_.size(); }

  Rational measure() const;
  bool contains(const Rational& x) const;
  std::string str() const;

  // Endpoint sets A⁻ and A⁺ (sorted, deduplicated).
  std::vector<Rational> lower_ends() const;
  std::vector<Rational> upper_ends() const;
  // Every part (a,b] with a<b; degenerate parts vanish.
  IntervalSet halfopen() const;
  IntervalSet closure() const;
  std::optional<Rational> min() const;
  std::optional<Rational> max() const;
  // Length of the longest part that is a closed interval.
  Rational longest_closed_part() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;
  friend std::ostream& operator<<(std::ostream& os, const IntervalSet& s) { return os << s.str(); }

 private:
  void canonicalize();
  std::vector<Interval> parts_;
};

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b);
IntervalSet subtract(const IntervalSet& a, const IntervalSet& b);
IntervalSet unite(const IntervalSet& a, const IntervalSet& b);
IntervalSet scale_translate(const IntervalSet& a, const Rational& num, const Rational& shift);

// Clos(k ∩ ∪_m (m+δ, m+1−δ]/z) over all m ≥ 0 with (m+δ)/z ≤ upper.
IntervalSet closure_of_halfopen_trim(const IntervalSet& k, const Rational& z, const Rational& delta,
                                     const Rational& upper);
// Whether that set is nonempty, without building it.
bool meets_halfopen_trim(const IntervalSet& k, const Rational& z, const Rational& delta, const Rational& upper);

}  // namespace lrc
