#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lrc/errors.hpp"
#include "lrc/polytope.hpp"
#include "lrc/rational.hpp"

namespace lrc {

// (i₁…i_ℓ | k₁…k_ℓ): bridge indices and their integer labels.
struct ChainSpec {
  std::vector<int> indices;
  std::vector<long> ks;
};

// Throws StructuralError when consecutive indices repeat or when a pattern
// i, j, i has j ≥ i.
void validate_chain_spec(const ChainSpec& c, int d);

struct WeakBridge {
  int index;
  long shift;
  friend bool operator==(const WeakBridge&, const WeakBridge&) = default;
};

using Block = std::vector<WeakBridge>;

struct WeakChain {
  std::vector<Block> blocks;
  Rational delta{1, 6};

  // "<342||3424|000||1314>"; '‖', '⟨', '⟩' are accepted too. Shifts of a
  // block may be comma separated when some shift has several digits.
  static WeakChain parse(std::string_view text);
  std::string str() const;

  size_t length() const { return blocks.size(); }
  std::string pattern(size_t r) const;
  std::vector<long> shifts(size_t r) const;
  // Least / greatest shift of index i in block r; nullopt if i is absent.
  std::optional<long> m(size_t r, int i) const;
  std::optional<long> M(size_t r, int i) const;
  // m_{r+1}(i) − M_r(i).
  std::optional<long> jump(size_t r, int i) const;

  friend bool operator==(const WeakChain& a, const WeakChain& b) { return a.blocks == b.blocks; }
};

// Canonical order: block patterns first, then shift sequences.
bool chain_less(const WeakChain& a, const WeakChain& b);

// The 29 admissible block patterns, as strings over {2,3,4}.
const std::vector<std::string>& block_patterns();

// Shift spread limits M_r(i) − m_r(i) and jump limits J_r(i), indexed by i.
long spread_limit(int index);
long jump_limit(int index);

// Throws StructuralError for malformed chains: short blocks, unknown
// patterns, repeated consecutive indices, nonzero first shifts in block 0.
void validate_weak_chain(const WeakChain& c);
// Spread and jump limits; assumes a structurally valid chain.
bool within_shift_limits(const WeakChain& c);

// Variable names used by every weak-chain system.
const std::vector<std::string>& chain_variables();

LinSystem weak_chain_system(const WeakChain& c);
// h₂ > 1/3 + ρ₂/3.
LinIneq h2_offset_row();

struct ChainConstraints {
  bool h2_offset = false;
  // When positive, keep only chains extendable to this many blocks.
  int extendable_to = 0;
  std::vector<LinIneq> extra_rows;
  int jobs = 1;
};

// System of c plus the rows requested by the constraints.
LinSystem constrained_system(const WeakChain& c, const ChainConstraints& k);
bool admissible(const WeakChain& c, const ChainConstraints& k = {});

// Every feasibility decision made by this module is rechecked with
// verify_certificate; these are the process-wide counts.
struct SolverTally {
  size_t results = 0;
  size_t verified = 0;
};
SolverTally solver_tally();

struct EnumerationStats {
  size_t nodes = 0;
  size_t solver_calls = 0;
};

std::vector<WeakChain> enumerate_weak_chains(int L, const ChainConstraints& k = {},
                                             EnumerationStats* stats = nullptr);
// Admissible chains of L blocks whose first blocks are `prefix`.
std::vector<WeakChain> extend_weak_chain(const WeakChain& prefix, int L, const ChainConstraints& k = {},
                                         EnumerationStats* stats = nullptr);
bool extendable(const WeakChain& prefix, int L, const ChainConstraints& k = {});

// Blocks r, r+1 of c with each index's shifts lowered by m_r(i).
WeakChain window(const WeakChain& c, size_t r);
bool contains_subchain(const WeakChain& c, const WeakChain& sub);

std::optional<WeakChain> transfer(const WeakChain& c1, const WeakChain& c2, const ChainConstraints& k = {});

struct ChainFamily {
  std::string label;
  std::vector<WeakChain> members;
};

struct TransferGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<size_t, size_t>> edges;
  std::vector<std::vector<size_t>> reachable;

  std::string edge_list() const;
  std::string adjacency_json() const;
};

// X → Y when some member of X transfers to some member of Y.
TransferGraph transfer_graph(const std::vector<ChainFamily>& families, const ChainConstraints& k = {});
TransferGraph transfer_graph(const std::vector<WeakChain>& chains, const ChainConstraints& k = {});

std::vector<WeakChain> forbidden_subchain_search(const std::vector<WeakChain>& bad, int L,
                                                 const ChainConstraints& k = {});

// True iff every admissible L-chain starting with prefix becomes infeasible
// once `negated` is added.
bool implied_inequality_check(const WeakChain& prefix, const LinIneq& negated, int L,
                              const ChainConstraints& k = {});

// Reference data.
const std::vector<ChainFamily>& labelled_families();
std::vector<WeakChain> excluded_two_chains();
// The published arrow set among the labelled families (63 arrows).
const std::vector<std::pair<std::string, std::string>>& reference_transfer_arrows();

}  // namespace lrc
