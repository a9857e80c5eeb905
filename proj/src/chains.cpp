#include "lrc/chains.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace lrc {

// ---------------------------------------------------------------- chain specs

void validate_chain_spec(const ChainSpec& c, int d) {
  if (c.indices.size() != c.ks.size()) throw StructuralError("indices and labels differ in length");
  for (size_t j = 0; j < c.indices.size(); ++j) {
    int i = c.indices[j];
    if (i < 1 || i > d) throw StructuralError("index " + std::to_string(i) + " outside 1.." + std::to_string(d));
    if (j + 1 < c.indices.size() && c.indices[j + 1] == i)
      throw StructuralError("consecutive indices repeat at position " + std::to_string(j + 1));
    if (d >= 2 && j + 2 < c.indices.size() && c.indices[j + 2] == i && c.indices[j + 1] >= i)
      throw StructuralError("index " + std::to_string(i) + " brackets a larger index at position " +
                            std::to_string(j + 2));
  }
}

// ---------------------------------------------------------------- weak chains

namespace {

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

WeakChain WeakChain::parse(std::string_view text) {
  std::string s = strip(std::string(text));
  s = replace_all(s, "‖", "||");
  s = replace_all(s, "⟨", "<");
  s = replace_all(s, "⟩", ">");
  if (s.size() < 2 || s.front() != '<' || s.back() != '>')
    throw StructuralError("weak chain must be written <pattern|shifts>");
  s = replace_all(s.substr(1, s.size() - 2), "||", ";");
  auto halves = split(s, '|');
  if (halves.size() != 2) throw StructuralError("weak chain needs exactly one '|' between patterns and shifts");
  auto pats = split(halves[0], ';');
  auto shs = split(halves[1], ';');
  if (pats.size() != shs.size()) throw StructuralError("pattern and shift block counts differ");
  WeakChain c;
  for (size_t r = 0; r < pats.size(); ++r) {
    std::string p = strip(pats[r]);
    std::string q = strip(shs[r]);
    std::vector<long> sv;
    if (q.find(',') != std::string::npos) {
      for (const auto& t : split(q, ',')) {
        std::string u = strip(t);
        if (u.empty() || !std::all_of(u.begin(), u.end(), ::isdigit)) throw StructuralError("bad shift '" + u + "'");
        sv.push_back(std::stol(u));
      }
    } else {
      for (char ch : q) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) throw StructuralError("bad shift digit in '" + q + "'");
        sv.push_back(ch - '0');
      }
    }
    if (sv.size() != p.size()) throw StructuralError("block " + std::to_string(r) + " has mismatched lengths");
    Block b;
    for (size_t j = 0; j < p.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(p[j]))) throw StructuralError("bad index in '" + p + "'");
      b.push_back({p[j] - '0', sv[j]});
    }
    c.blocks.push_back(std::move(b));
  }
  return c;
}

std::string WeakChain::str() const {
  bool wide = false;
  for (const auto& b : blocks)
    for (const auto& w : b) wide = wide || w.shift > 9;
  std::string pats, shs;
  for (size_t r = 0; r < blocks.size(); ++r) {
    if (r) {
      pats += "||";
      shs += "||";
    }
    for (size_t j = 0; j < blocks[r].size(); ++j) {
      pats += std::to_string(blocks[r][j].index);
      if (wide && j) shs += ",";
      shs += std::to_string(blocks[r][j].shift);
    }
  }
  return "<" + pats + "|" + shs + ">";
}

std::string WeakChain::pattern(size_t r) const {
  std::string s;
  for (const auto& w : blocks.at(r)) s += std::to_string(w.index);
  return s;
}

std::vector<long> WeakChain::shifts(size_t r) const {
  std::vector<long> v;
  for (const auto& w : blocks.at(r)) v.push_back(w.shift);
  return v;
}

std::optional<long> WeakChain::m(size_t r, int i) const {
  std::optional<long> v;
  for (const auto& w : blocks.at(r))
    if (w.index == i && (!v || w.shift < *v)) v = w.shift;
  return v;
}

std::optional<long> WeakChain::M(size_t r, int i) const {
  std::optional<long> v;
  for (const auto& w : blocks.at(r))
    if (w.index == i && (!v || w.shift > *v)) v = w.shift;
  return v;
}

std::optional<long> WeakChain::jump(size_t r, int i) const {
  if (r + 1 >= blocks.size()) return std::nullopt;
  auto a = m(r + 1, i);
  auto b = M(r, i);
  if (!a || !b) return std::nullopt;
  return *a - *b;
}

bool chain_less(const WeakChain& a, const WeakChain& b) {
  size_t n = std::min(a.length(), b.length());
  for (size_t r = 0; r < n; ++r) {
    auto pa = a.pattern(r), pb = b.pattern(r);
    if (pa != pb) return pa < pb;
  }
  if (a.length() != b.length()) return a.length() < b.length();
  for (size_t r = 0; r < n; ++r) {
    auto sa = a.shifts(r), sb = b.shifts(r);
    if (sa != sb) return sa < sb;
  }
  return false;
}

long spread_limit(int index) {
  switch (index) {
    case 2: return 0;
    case 3: return 4;
    case 4: return 11;
  }
  throw StructuralError("index " + std::to_string(index) + " outside {2,3,4}");
}

long jump_limit(int index) {
  switch (index) {
    case 2: return 4;
    case 3: return 9;
    case 4: return 29;
  }
  throw StructuralError("index " + std::to_string(index) + " outside {2,3,4}");
}

void validate_weak_chain(const WeakChain& c) {
  if (c.blocks.empty()) throw StructuralError("weak chain has no blocks");
  const auto& pats = block_patterns();
  for (size_t r = 0; r < c.blocks.size(); ++r) {
    const Block& b = c.blocks[r];
    if (b.size() < 3) throw StructuralError("block " + std::to_string(r) + " is shorter than 3");
    for (size_t j = 0; j < b.size(); ++j) {
      if (b[j].index < 2 || b[j].index > 4)
        throw StructuralError("index " + std::to_string(b[j].index) + " outside {2,3,4}");
      if (b[j].shift < 0) throw StructuralError("negative shift");
      if (j + 1 < b.size() && b[j + 1].index == b[j].index)
        throw StructuralError("block " + std::to_string(r) + " repeats index " + std::to_string(b[j].index) +
                              " consecutively");
    }
    if (std::find(pats.begin(), pats.end(), c.pattern(r)) == pats.end())
      throw StructuralError("block pattern " + c.pattern(r) + " is not admissible");
  }
  std::set<int> seen;
  for (const auto& w : c.blocks[0]) {
    if (seen.insert(w.index).second && w.shift != 0)
      throw StructuralError("first occurrence of index " + std::to_string(w.index) + " in block 0 has nonzero shift");
  }
}

bool within_shift_limits(const WeakChain& c) {
  for (size_t r = 0; r < c.length(); ++r)
    for (int i = 2; i <= 4; ++i) {
      auto lo = c.m(r, i), hi = c.M(r, i);
      if (lo && *hi - *lo > spread_limit(i)) return false;
      auto j = c.jump(r, i);
      if (j && *j > jump_limit(i)) return false;
    }
  return true;
}

// ---------------------------------------------------------------- systems

const std::vector<std::string>& chain_variables() {
  static const std::vector<std::string> v{"rho2", "rho3", "rho4", "h2", "h3", "h4"};
  return v;
}

namespace {

std::string rho(int i) { return "rho" + std::to_string(i); }
std::string hv(int i) { return "h" + std::to_string(i); }

LinIneq lower_end(const WeakBridge& w) { return affine(0, {{hv(w.index), 1}, {rho(w.index), Rational(w.shift)}}); }

LinIneq upper_end(const WeakBridge& w, const Rational& delta) {
  return affine(0, {{hv(w.index), 1}, {rho(w.index), Rational(w.shift) + 2 * delta}});
}

// Scales to primitive integer coefficients.
void integerize(LinIneq& r) {
  mpz_class l = r.constant.den();
  for (const auto& [v, c] : r.coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
  mpz_class g = (r.constant * Rational(l)).num();
  for (auto& [v, c] : r.coeffs) {
    c *= Rational(l);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.num().get_mpz_t());
  }
  r.constant *= Rational(l);
  if (g != 0 && g != 1) {
    Rational gi(mpz_class(1), abs(g));
    r.constant *= gi;
    for (auto& [v, c] : r.coeffs) c *= gi;
  }
}

// Rows that hold for every point with 0 < ρ₄ < ρ₃ < ρ₂ < 1.
bool trivially_true(const LinIneq& r) {
  if (r.coeffs.empty()) return r.rel == Rel::Lt ? r.constant.sign() < 0 : r.constant.sign() <= 0;
  if (r.coeffs.size() != 1 || r.constant.sign() != 0) return false;
  const auto& [v, c] = *r.coeffs.begin();
  return v.rfind("rho", 0) == 0 && c.sign() < 0;
}

void push_row(std::vector<LinIneq>& rows, LinIneq r, bool keep_trivial = false) {
  r.drop_zeros();
  integerize(r);
  if (!keep_trivial && trivially_true(r)) return;
  if (std::find(rows.begin(), rows.end(), r) != rows.end()) return;
  rows.push_back(std::move(r));
}

void lt(std::vector<LinIneq>& rows, const LinIneq& a, const LinIneq& b, bool keep_trivial = false) {
  push_row(rows, LinIneq::less(a, b), keep_trivial);
}

std::vector<LinIneq> base_rows() {
  std::vector<LinIneq> rows;
  lt(rows, affine(0), affine(0, {{"rho4", 1}}), true);
  lt(rows, affine(0, {{"rho4", 1}}), affine(0, {{"rho3", 1}}));
  lt(rows, affine(0, {{"rho3", 1}}), affine(0, {{"rho2", 1}}));
  lt(rows, affine(0, {{"rho2", 1}}), affine(1));
  // 5ρ₂ > 2, 10ρ₄ > ρ₂+ρ₃, 8ρ₃ > 1+ρ₂
  lt(rows, affine(2), affine(0, {{"rho2", 5}}));
  lt(rows, affine(0, {{"rho2", 1}, {"rho3", 1}}), affine(0, {{"rho4", 10}}));
  lt(rows, affine(1, {{"rho2", 1}}), affine(0, {{"rho3", 8}}));
  return rows;
}

// Rows added when bridge j of block r is appended; every one of them is
// implied by the endpoint order of the finished block.
void bridge_rows(std::vector<LinIneq>& rows, const Block& b, size_t j, long r, const Rational& delta) {
  LinIneq left = affine(Rational(r) + 2 * delta);
  const WeakBridge& w = b[j];
  if (j == 0) {
    lt(rows, lower_end(w), left);
    lt(rows, left, upper_end(w, delta));
    return;
  }
  if (j == 1) lt(rows, left, lower_end(w));
  if (j >= 2) lt(rows, upper_end(b[j - 2], delta), lower_end(w));
  lt(rows, lower_end(w), upper_end(b[j - 1], delta));
  lt(rows, upper_end(b[j - 1], delta), upper_end(w, delta));
}

void closing_rows(std::vector<LinIneq>& rows, const Block& b, long r, const Rational& delta) {
  LinIneq right = affine(Rational(r + 1));
  size_t l = b.size();
  lt(rows, upper_end(b[l - 2], delta), right);
  lt(rows, lower_end(b[l - 1]), right);
  lt(rows, right, upper_end(b[l - 1], delta));
}

LinSystem make_system(const std::vector<LinIneq>& rows) {
  LinSystem s;
  s.variables = chain_variables();
  s.rows = rows;
  return s;
}

}  // namespace

LinIneq h2_offset_row() { return LinIneq::parse("h2 > 1/3 + 1/3*rho2"); }

LinSystem weak_chain_system(const WeakChain& c) {
  validate_weak_chain(c);
  std::vector<LinIneq> rows = base_rows();
  for (size_t r = 0; r < c.length(); ++r) {
    const Block& b = c.blocks[r];
    LinIneq left = affine(Rational(static_cast<long>(r)) + 2 * c.delta);
    LinIneq right = affine(Rational(static_cast<long>(r) + 1));
    size_t l = b.size();
    // lo₁ < left < lo₂ < hi₁ < lo₃ < hi₂ < … < lo_ℓ < hi_{ℓ−1} < right < hi_ℓ
    lt(rows, lower_end(b[0]), left);
    lt(rows, left, lower_end(b[1]));
    for (size_t j = 1; j < l; ++j) {
      lt(rows, lower_end(b[j]), upper_end(b[j - 1], c.delta));
      if (j + 1 < l) lt(rows, upper_end(b[j - 1], c.delta), lower_end(b[j + 1]));
    }
    lt(rows, upper_end(b[l - 2], c.delta), right);
    lt(rows, right, upper_end(b[l - 1], c.delta));
  }
  return make_system(rows);
}

LinSystem constrained_system(const WeakChain& c, const ChainConstraints& k) {
  LinSystem s = weak_chain_system(c);
  if (k.h2_offset) s.add(h2_offset_row());
  for (const auto& r : k.extra_rows) s.add(r);
  return s;
}

namespace {

std::atomic<size_t> results_total{0};
std::atomic<size_t> results_verified{0};

// The h variables form difference constraints once the ρ's are fixed, so the
// ρ's are chosen first and the h rows are solved beneath them.
FeasibilityResult decide(const LinSystem& s) {
  FeasibilityOptions opts;
  opts.outer = {"rho2", "rho3", "rho4"};
  FeasibilityResult res = feasible(s, opts);
  ++results_total;
  if (!verify_certificate(s, res)) throw std::logic_error("unverifiable feasibility result");
  ++results_verified;
  return res;
}

}  // namespace

SolverTally solver_tally() { return {results_total.load(), results_verified.load()}; }

bool admissible(const WeakChain& c, const ChainConstraints& k) {
  validate_weak_chain(c);
  if (!within_shift_limits(c)) return false;
  return decide(constrained_system(c, k)).feasible;
}

// ---------------------------------------------------------------- enumeration

namespace {

struct Trie {
  struct Node {
    std::map<int, int> next;
    bool terminal = false;
  };
  std::vector<Node> nodes{Node{}};

  void insert(const std::string& p) {
    int cur = 0;
    for (char ch : p) {
      int i = ch - '0';
      auto it = nodes[cur].next.find(i);
      if (it == nodes[cur].next.end()) {
        nodes.push_back(Node{});
        int id = static_cast<int>(nodes.size()) - 1;
        nodes[cur].next[i] = id;
        cur = id;
      } else {
        cur = it->second;
      }
    }
    nodes[cur].terminal = true;
  }
};

const Trie& full_trie() {
  static const Trie t = [] {
    Trie t;
    for (const auto& p : block_patterns()) t.insert(p);
    return t;
  }();
  return t;
}

// Pins block `block` to a fixed pattern whose shifts are offsets from the
// least shift per index in block `ref`.
struct BlockTemplate {
  size_t block;
  size_t ref;
  Block offsets;
};

struct Search {
  Search(int L_, const ChainConstraints& k_) : L(L_), k(k_) {}

  int L;
  const ChainConstraints& k;
  Rational delta{1, 6};
  // Per block override of the trie (used to split work and pin templates).
  std::map<size_t, Trie> pinned;
  std::vector<BlockTemplate> templates;
  std::function<bool(const WeakChain&)> emit;  // returns true to stop
  EnumerationStats stats;

  WeakChain chain;
  std::vector<LinIneq> rows;
  std::optional<std::map<std::string, Rational>> witness;

  // Appends rows [mark, end) to the system already known feasible and
  // decides feasibility, reusing the current witness when it still fits.
  bool check(size_t mark) {
    ++stats.nodes;
    if (witness) {
      bool ok = true;
      for (size_t i = mark; i < rows.size() && ok; ++i) ok = rows[i].holds(*witness);
      if (ok) return true;
    }
    ++stats.solver_calls;
    LinSystem s = make_system(rows);
    FeasibilityResult res = decide(s);
    if (res.feasible) witness = std::move(res.witness);
    return res.feasible;
  }

  const Trie& trie_for(size_t r) const {
    auto it = pinned.find(r);
    return it == pinned.end() ? full_trie() : it->second;
  }

  const BlockTemplate* template_for(size_t r) const {
    for (const auto& t : templates)
      if (t.block == r) return &t;
    return nullptr;
  }

  std::vector<long> shift_candidates(size_t r, int i) const {
    const Block& b = chain.blocks[r];
    const size_t j = b.size();
    std::optional<long> first, last;
    for (const auto& w : b)
      if (w.index == i) {
        if (!first) first = w.shift;
        last = w.shift;
      }
    std::vector<long> out;
    if (const BlockTemplate* t = template_for(r)) {
      if (j >= t->offsets.size()) return out;
      const WeakBridge& o = t->offsets[j];
      if (o.index != i) return out;
      bool free = t->ref == r && !first;
      if (!free) {
        auto base = t->ref == r ? first : chain.m(t->ref, i);
        if (!base) return out;
        long s = *base + o.shift;
        if (first && (s <= *last || s > *first + spread_limit(i))) return out;
        if (!first && r > 0) {
          long jmp = s - *chain.M(r - 1, i);
          if (jmp < 0 || jmp > jump_limit(i)) return out;
        }
        if (!first && r == 0 && s != 0) return out;
        out.push_back(s);
        return out;
      }
    }
    if (first) {
      for (long s = *last + 1; s <= *first + spread_limit(i); ++s) out.push_back(s);
    } else if (r == 0) {
      out.push_back(0);
    } else {
      long base = *chain.M(r - 1, i);
      for (long jmp = 0; jmp <= jump_limit(i); ++jmp) out.push_back(base + jmp);
    }
    return out;
  }

  // Returns true when the search must stop.
  bool grow(size_t r, int node) {
    const Trie& t = trie_for(r);
    Block& b = chain.blocks[r];
    if (t.nodes[node].terminal && (!template_for(r) || b.size() == template_for(r)->offsets.size())) {
      size_t mark = rows.size();
      auto saved = witness;
      closing_rows(rows, b, static_cast<long>(r), delta);
      if (check(mark)) {
        if (static_cast<int>(r) + 1 == L) {
          if (emit(chain)) return true;
        } else {
          chain.blocks.emplace_back();
          bool stop = grow(r + 1, 0);
          chain.blocks.pop_back();
          if (stop) return true;
        }
      }
      rows.resize(mark);
      witness = std::move(saved);
    }
    for (const auto& [i, child] : t.nodes[node].next) {
      for (long s : shift_candidates(r, i)) {
        size_t mark = rows.size();
        auto saved = witness;
        chain.blocks[r].push_back({i, s});
        bridge_rows(rows, chain.blocks[r], chain.blocks[r].size() - 1, static_cast<long>(r), delta);
        bool stop = check(mark) && grow(r, child);
        chain.blocks[r].pop_back();
        rows.resize(mark);
        witness = std::move(saved);
        if (stop) return true;
      }
    }
    return false;
  }

  // Loads a complete prefix; false when it is already inadmissible.
  bool load(const WeakChain& prefix) {
    rows = base_rows();
    if (k.h2_offset) push_row(rows, h2_offset_row());
    for (const auto& r : k.extra_rows) push_row(rows, r);
    witness.reset();
    chain = WeakChain{};
    chain.delta = delta;
    for (size_t r = 0; r < prefix.length(); ++r) {
      chain.blocks.emplace_back();
      for (size_t j = 0; j < prefix.blocks[r].size(); ++j) {
        chain.blocks[r].push_back(prefix.blocks[r][j]);
        bridge_rows(rows, chain.blocks[r], j, static_cast<long>(r), delta);
      }
      closing_rows(rows, chain.blocks[r], static_cast<long>(r), delta);
    }
    if (!within_shift_limits(chain)) return false;
    return check(0);
  }

  bool run_from(const WeakChain& prefix) {
    if (!load(prefix)) return false;
    if (static_cast<int>(prefix.length()) == L) return emit(chain);
    chain.blocks.emplace_back();
    return grow(prefix.length(), 0);
  }
};

Trie single_pattern(const std::string& p) {
  Trie t;
  t.insert(p);
  return t;
}

// Runs one search per pattern of the first free block and merges the results.
std::vector<WeakChain> run_split(const WeakChain& prefix, int L, const ChainConstraints& k,
                                 const std::vector<BlockTemplate>& templates, EnumerationStats* stats) {
  size_t r0 = prefix.length();
  std::vector<std::string> tasks;
  bool pinned_first = false;
  for (const auto& t : templates) pinned_first = pinned_first || t.block == r0;
  if (pinned_first || static_cast<int>(r0) >= L)
    tasks.push_back("");
  else
    tasks = block_patterns();

  std::vector<std::vector<WeakChain>> found(tasks.size());
  std::vector<EnumerationStats> st(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t t = next++; t < tasks.size(); t = next++) {
      Search s(L, k);
      s.delta = prefix.delta;
      s.templates = templates;
      for (const auto& tp : templates) s.pinned[tp.block] = single_pattern(
          [&] { std::string p; for (const auto& w : tp.offsets) p += std::to_string(w.index); return p; }());
      if (!tasks[t].empty()) s.pinned[r0] = single_pattern(tasks[t]);
      s.emit = [&found, t](const WeakChain& c) {
        found[t].push_back(c);
        return false;
      };
      s.run_from(prefix);
      st[t] = s.stats;
    }
  };
  int jobs = std::max(1, std::min<int>(k.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<WeakChain> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  std::sort(out.begin(), out.end(), chain_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (stats)
    for (const auto& s : st) {
      stats->nodes += s.nodes;
      stats->solver_calls += s.solver_calls;
    }
  return out;
}

std::vector<WeakChain> filter_extendable(std::vector<WeakChain> v, const ChainConstraints& k) {
  if (k.extendable_to <= 0) return v;
  ChainConstraints plain = k;
  plain.extendable_to = 0;
  std::vector<char> keep(v.size(), 0);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < v.size(); i = next++) keep[i] = extendable(v[i], k.extendable_to, plain);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, k.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::vector<WeakChain> out;
  for (size_t i = 0; i < v.size(); ++i)
    if (keep[i]) out.push_back(std::move(v[i]));
  return out;
}

}  // namespace

std::vector<WeakChain> enumerate_weak_chains(int L, const ChainConstraints& k, EnumerationStats* stats) {
  if (L < 1) throw ParameterError("L must be positive");
  return filter_extendable(run_split(WeakChain{}, L, k, {}, stats), k);
}

std::vector<WeakChain> extend_weak_chain(const WeakChain& prefix, int L, const ChainConstraints& k,
                                         EnumerationStats* stats) {
  validate_weak_chain(prefix);
  if (static_cast<int>(prefix.length()) > L) throw ParameterError("prefix longer than L");
  return filter_extendable(run_split(prefix, L, k, {}, stats), k);
}

bool extendable(const WeakChain& prefix, int L, const ChainConstraints& k) {
  validate_weak_chain(prefix);
  if (static_cast<int>(prefix.length()) > L) return false;
  Search s(L, k);
  s.delta = prefix.delta;
  s.emit = [](const WeakChain&) { return true; };
  return s.run_from(prefix);
}

WeakChain window(const WeakChain& c, size_t r) {
  if (r + 1 >= c.length()) throw StructuralError("window runs past the last block");
  WeakChain w;
  w.delta = c.delta;
  for (size_t q = r; q <= r + 1; ++q) {
    Block b;
    for (const auto& br : c.blocks[q]) {
      auto base = c.m(r, br.index);
      if (!base) throw StructuralError("index " + std::to_string(br.index) + " missing from block " + std::to_string(r));
      b.push_back({br.index, br.shift - *base});
    }
    w.blocks.push_back(std::move(b));
  }
  return w;
}

bool contains_subchain(const WeakChain& c, const WeakChain& sub) {
  if (sub.length() != 2) throw StructuralError("subchains are weak 2-chains");
  for (size_t r = 0; r + 1 < c.length(); ++r)
    if (window(c, r) == sub) return true;
  return false;
}

std::optional<WeakChain> transfer(const WeakChain& c1, const WeakChain& c2, const ChainConstraints& k) {
  if (c1.length() != 2 || c2.length() != 2) throw StructuralError("transfers act on weak 2-chains");
  if (c1.pattern(1) != c2.pattern(0)) return std::nullopt;
  const Block& mid = c1.blocks[1];
  for (size_t j = 0; j < mid.size(); ++j)
    if (c2.blocks[0][j].shift != mid[j].shift - *c1.m(1, mid[j].index)) return std::nullopt;
  WeakChain out = c1;
  Block third;
  for (const auto& w : c2.blocks[1]) {
    auto base = c1.m(1, w.index);
    if (!base) return std::nullopt;
    third.push_back({w.index, *base + w.shift});
  }
  out.blocks.push_back(std::move(third));
  if (!admissible(out, k)) return std::nullopt;
  return out;
}

std::string TransferGraph::edge_list() const {
  std::string s;
  for (const auto& [a, b] : edges) s += nodes[a] + " -> " + nodes[b] + "\n";
  return s;
}

std::string TransferGraph::adjacency_json() const {
  std::string s = "{";
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (i) s += ",";
    s += "\"" + nodes[i] + "\":[";
    bool first = true;
    for (const auto& [a, b] : edges)
      if (a == i) {
        if (!first) s += ",";
        s += "\"" + nodes[b] + "\"";
        first = false;
      }
    s += "]";
  }
  return s + "}";
}

TransferGraph transfer_graph(const std::vector<ChainFamily>& families, const ChainConstraints& k) {
  TransferGraph g;
  const size_t n = families.size();
  for (const auto& f : families) g.nodes.push_back(f.label);
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) pairs.emplace_back(a, b);
  std::vector<char> hit(pairs.size(), 0);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t p = next++; p < pairs.size(); p = next++) {
      const auto& [a, b] = pairs[p];
      for (const auto& x : families[a].members) {
        for (const auto& y : families[b].members)
          if (transfer(x, y, k)) {
            hit[p] = 1;
            break;
          }
        if (hit[p]) break;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, k.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (size_t p = 0; p < pairs.size(); ++p)
    if (hit[p]) g.edges.push_back(pairs[p]);

  g.reachable.assign(n, {});
  for (size_t s = 0; s < n; ++s) {
    std::vector<char> seen(n, 0);
    std::vector<size_t> stack{s};
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      for (const auto& [a, b] : g.edges)
        if (a == u && !seen[b]) {
          seen[b] = 1;
          stack.push_back(b);
        }
    }
    for (size_t v = 0; v < n; ++v)
      if (seen[v]) g.reachable[s].push_back(v);
  }
  return g;
}

TransferGraph transfer_graph(const std::vector<WeakChain>& chains, const ChainConstraints& k) {
  std::vector<ChainFamily> fams;
  for (const auto& c : chains) fams.push_back({c.str(), {c}});
  return transfer_graph(fams, k);
}

std::vector<WeakChain> forbidden_subchain_search(const std::vector<WeakChain>& bad, int L, const ChainConstraints& k) {
  std::vector<WeakChain> out;
  if (L < 2) return out;
  for (const auto& b : bad) {
    if (b.length() != 2) throw StructuralError("forbidden subchains are weak 2-chains");
    for (int r = 0; r + 1 < L; ++r) {
      std::vector<BlockTemplate> tpl{{static_cast<size_t>(r), static_cast<size_t>(r), b.blocks[0]},
                                     {static_cast<size_t>(r + 1), static_cast<size_t>(r), b.blocks[1]}};
      auto found = run_split(WeakChain{}, L, k, tpl, nullptr);
      out.insert(out.end(), found.begin(), found.end());
    }
  }
  std::sort(out.begin(), out.end(), chain_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool implied_inequality_check(const WeakChain& prefix, const LinIneq& negated, int L, const ChainConstraints& k) {
  ChainConstraints with = k;
  with.extendable_to = 0;
  with.extra_rows.push_back(negated);
  return !extendable(prefix, L, with);
}

}  // namespace lrc
