#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrc/rational.hpp"

namespace lrc {

enum class Rel { Lt, Le };

// Σ coeffs[v]·v + constant REL 0.
struct LinIneq {
  std::map<std::string, Rational> coeffs;
  Rational constant;
  Rel rel = Rel::Lt;

  // lhs REL rhs with REL among <, <=, >, >=; both sides linear.
  static LinIneq parse(std::string_view text);
  // Builders for lhs REL rhs given as (coeffs, constant) pairs.
  static LinIneq less(const LinIneq& lhs, const LinIneq& rhs, bool strict = true);

  Rational eval(const std::map<std::string, Rational>& at) const;
  bool holds(const std::map<std::string, Rational>& at) const;
  void drop_zeros();
  std::string str(const std::vector<std::string>& order = {}) const;

  friend bool operator==(const LinIneq&, const LinIneq&) = default;
};

// An affine expression, carried as a LinIneq whose relation is ignored.
LinIneq affine(Rational constant, std::initializer_list<std::pair<std::string, Rational>> terms = {});

struct LinSystem {
  std::vector<std::string> variables;
  std::vector<LinIneq> rows;

  void declare(const std::string& v);
  void add(LinIneq row);
  bool holds(const std::map<std::string, Rational>& at) const;

  // One row per line; optional leading "vars: a b c" line; '#' starts a comment.
  static LinSystem parse(std::string_view text);
  std::string str() const;
};

using Certificate = std::vector<std::pair<size_t, Rational>>;

struct FeasibilityResult {
  bool feasible = false;
  std::optional<std::map<std::string, Rational>> witness;
  std::optional<Certificate> certificate;
};

struct FeasibilityOptions {
  // Fixed elimination order; empty means the min(#pos × #neg) rule.
  std::vector<std::string> order;
  bool chernikov = true;
  // When nonempty, the system is decided by alternating between these
  // variables and the rest: a point is chosen for the outer variables, the
  // remaining rows are solved with it fixed, and every failure adds the
  // implied outer-only row read off the inner certificate. Verdicts and
  // certificates refer to the original rows as usual.
  std::vector<std::string> outer;
};

FeasibilityResult feasible(const LinSystem& sys, const FeasibilityOptions& opts = {});

// Recomputes the witness rows or the nonnegative combination from scratch.
bool verify_certificate(const LinSystem& sys, const FeasibilityResult& res, std::string* diagnostic = nullptr);

// Same rows with every relation made strict; feasibility of this system is
// nonemptiness of the open interior.
LinSystem strictified(const LinSystem& sys);

}  // namespace lrc
