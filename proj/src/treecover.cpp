#include "lrc/treecover.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <thread>

#include <json.hpp>

#include "lrc/errors.hpp"

namespace lrc {

// ---------------------------------------------------------------- polynomials

namespace {

struct PolyParser {
  std::string_view s;
  int dim;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParameterError("bad polynomial '" + std::string(s) + "': " + why);
  }
  long integer() {
    skip();
    size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) fail("expected an integer");
    long v = std::stol(std::string(s.substr(i, j - i)));
    i = j;
    return v;
  }
  // Product of numbers and powers of variables.
  std::pair<std::vector<int>, Rational> monomial() {
    std::vector<int> e(dim, 0);
    Rational coef(1);
    bool any = false;
    do {
      skip();
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        size_t j = i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
        coef *= Rational::parse(s.substr(i, j - i));
        i = j;
      } else if (i < s.size() && s[i] == 'z') {
        ++i;
        long v = integer();
        if (v < 1 || v > dim) fail("variable z" + std::to_string(v) + " out of range");
        long p = 1;
        if (eat('^')) p = integer();
        e[v - 1] += static_cast<int>(p);
      } else {
        fail("expected a number or a variable");
      }
      any = true;
    } while (eat('*'));
    if (!any) fail("empty term");
    return {e, coef};
  }
  std::map<std::vector<int>, Rational> side() {
    std::map<std::vector<int>, Rational> out;
    bool neg = false;
    if (eat('-')) neg = true;
    else eat('+');
    while (true) {
      auto [e, c] = monomial();
      out[e] += neg ? -c : c;
      if (eat('+')) neg = false;
      else if (eat('-')) neg = true;
      else break;
    }
    return out;
  }
};

}  // namespace

PolyIneq PolyIneq::parse(std::string_view text, int dim) {
  PolyParser p{text, dim};
  auto lhs = p.side();
  p.skip();
  std::string rel;
  while (p.i < text.size() && (text[p.i] == '<' || text[p.i] == '>' || text[p.i] == '=')) rel += text[p.i++];
  if (rel != "<" && rel != "<=" && rel != ">" && rel != ">=") p.fail("expected one of < <= > >=");
  auto rhs = p.side();
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  PolyIneq q;
  q.rel = rel.size() == 1 ? Rel::Lt : Rel::Le;
  const bool flip = rel[0] == '>';
  for (const auto& [e, c] : lhs) q.terms[e] += flip ? -c : c;
  for (const auto& [e, c] : rhs) q.terms[e] += flip ? c : -c;
  std::erase_if(q.terms, [](const auto& t) { return t.second.sign() == 0; });
  return q;
}

Rational PolyIneq::eval(const std::vector<Rational>& z) const {
  Rational sum;
  for (const auto& [e, c] : terms) {
    Rational t = c;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= z.at(i);
    sum += t;
  }
  return sum;
}

bool PolyIneq::holds(const std::vector<Rational>& z) const {
  Rational v = eval(z);
  return rel == Rel::Lt ? v.sign() < 0 : v.sign() <= 0;
}

std::string PolyIneq::str() const {
  std::string s;
  for (const auto& [e, c] : terms) {
    std::string mono;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) mono += (mono.empty() ? "" : "*") + std::string("z") + std::to_string(i + 1);
    Rational a = abs(c);
    std::string body = mono.empty() ? a.str() : (a == 1 ? mono : a.str() + "*" + mono);
    if (s.empty()) s = c.sign() < 0 ? "-" + body : body;
    else s += (c.sign() < 0 ? " - " : " + ") + body;
  }
  if (s.empty()) s = "0";
  return s + (rel == Rel::Lt ? " < 0" : " <= 0");
}

// ---------------------------------------------------------------- regions

CompactRegion CompactRegion::box(int dim, Rational hi) {
  if (dim < 1) throw ParameterError("region dimension must be positive");
  if (!(hi > 1)) throw ParameterError("region bound must exceed 1");
  CompactRegion r;
  r.dim = dim;
  r.box_hi = std::move(hi);
  return r;
}

CompactRegion CompactRegion::four_speed_region() {
  // z₃ ≤ 376/7 and z₄ ≤ 3760/23 follow from the first three constraints.
  CompactRegion r = box(4, Rational(3760, 23));
  for (const char* c : {"5*z1 <= 47", "2*z2 <= 5*z1", "z2*z3 + z1*z3 <= 8*z1*z2", "z3*z4 + z2*z4 <= 10*z2*z3",
                        "z4 >= 31/5"})
    r.constraints.push_back(PolyIneq::parse(c, 4));
  r.sorted_hi = {Rational(47, 5), Rational(47, 2), Rational(376, 7), Rational(3760, 23)};
  return r;
}

bool CompactRegion::contains(std::vector<Rational> z) const {
  if (static_cast<int>(z.size()) != dim) throw ParameterError("point dimension differs from region dimension");
  std::sort(z.begin(), z.end());
  if (z.front() < 1 || z.back() > box_hi) return false;
  return std::all_of(constraints.begin(), constraints.end(), [&](const PolyIneq& q) { return q.holds(z); });
}

bool CompactRegion::may_extend(std::vector<Rational> partial) const {
  if (sorted_hi.empty()) return true;
  std::sort(partial.begin(), partial.end());
  // The t-th smallest of the partial tuple is at most the (dim−j+t)-th
  // smallest of any completion.
  const size_t off = static_cast<size_t>(dim) - partial.size();
  for (size_t t = 0; t < partial.size(); ++t)
    if (partial[t] > sorted_hi.at(off + t)) return false;
  return true;
}

std::vector<std::pair<Rational, Rational>> CompactRegion::completion_ranges(std::vector<Rational> partial) const {
  if (static_cast<int>(partial.size()) + 1 != dim) throw ParameterError("completion needs dim-1 coordinates");
  const bool multilinear = std::all_of(constraints.begin(), constraints.end(), [](const PolyIneq& q) {
    return std::all_of(q.terms.begin(), q.terms.end(), [](const auto& t) {
      return std::all_of(t.first.begin(), t.first.end(), [](int e) { return e <= 1; });
    });
  });
  if (!multilinear) return {{Rational(1), box_hi}};
  std::sort(partial.begin(), partial.end());
  std::vector<std::pair<Rational, Rational>> out;
  for (int p = 0; p < dim; ++p) {
    // w becomes the p-th smallest coordinate.
    Rational lo = p > 0 ? partial[p - 1] : Rational(1);
    Rational hi = p + 1 < dim ? partial[p] : box_hi;
    if (hi > box_hi) hi = box_hi;
    bool empty = lo > hi;
    for (const auto& q : constraints) {
      if (empty) break;
      Rational a, b;
      for (const auto& [e, c] : q.terms) {
        Rational t = c;
        for (int i = 0; i < dim; ++i)
          if (i != p && e[i] == 1) t *= partial[i < p ? i : i - 1];
        (e[p] == 1 ? a : b) += t;
      }
      // a·w + b ≤ 0, relaxed to non-strict.
      if (a.sign() > 0) {
        Rational w = -b / a;
        if (w < hi) hi = w;
      } else if (a.sign() < 0) {
        Rational w = -b / a;
        if (w > lo) lo = w;
      } else if (b.sign() > 0) {
        empty = true;
      }
      empty = empty || lo > hi;
    }
    if (!empty) out.emplace_back(lo, hi);
  }
  std::sort(out.begin(), out.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& r : out) {
    if (!merged.empty() && r.first <= merged.back().second) {
      if (r.second > merged.back().second) merged.back().second = r.second;
    } else {
      merged.push_back(std::move(r));
    }
  }
  return merged;
}

std::string CompactRegion::str() const {
  std::string s = "[1," + box_hi.str() + "]^" + std::to_string(dim);
  for (const auto& q : constraints) s += ", " + q.str();
  return s;
}

// ---------------------------------------------------------------- tree

CoverNode cover_root(const CoveringConfig& config) {
  CoverNode n;
  n.kset = kwai_range(config.N, config.delta);
  return n;
}

std::vector<Rational> child_coordinates(const CoverNode& node, const CoveringConfig& config, const Rational& C,
                                        const std::vector<std::pair<Rational, Rational>>& ranges) {
  if (node.kset.empty()) throw ParameterError("children requested for an empty kset");
  if (node.depth >= config.d) throw ParameterError("node is already at depth d");
  const Rational& delta = config.delta;
  const auto ups = node.kset.upper_ends();
  std::vector<Rational> zs;
  for (const auto& e : ups) {
    if (e.sign() <= 0) continue;
    // 1 < (m+δ)/e ≤ C and lo ≤ (m+δ)/e ≤ hi.
    const mpz_class first = std::max<mpz_class>((e - delta).floor() + 1, 0);
    const mpz_class last = (C * e - delta).floor();
    for (const auto& [a, b] : ranges) {
      mpz_class lo = std::max<mpz_class>(first, (a * e - delta).ceil());
      mpz_class hi = std::min<mpz_class>(last, (b * e - delta).floor());
      for (mpz_class m = lo; m <= hi; ++m) zs.push_back((Rational(m) + delta) / e);
    }
  }
  std::sort(zs.begin(), zs.end());
  zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
  return zs;
}

std::vector<Rational> child_coordinates(const CoverNode& node, const CoveringConfig& config, const Rational& C) {
  return child_coordinates(node, config, C, {{Rational(1), C}});
}

CoverNode make_child(const CoverNode& node, Rational z, const CoveringConfig& config) {
  if (node.kset.empty()) throw ParameterError("children requested for an empty kset");
  CoverNode c;
  c.depth = node.depth + 1;
  c.kset = closure_of_halfopen_trim(node.kset, z, config.delta, node.kset.upper_ends().back());
  c.ancestry = node.ancestry;
  c.ancestry.push_back(z);
  c.z = std::move(z);
  return c;
}

std::vector<CoverNode> children(const CoverNode& node, const CoveringConfig& config, const Rational& C) {
  std::vector<CoverNode> out;
  for (auto& z : child_coordinates(node, config, C)) out.push_back(make_child(node, std::move(z), config));
  return out;
}

namespace {

struct SubtreeResult {
  size_t nodes = 0;
  size_t leaves = 0;
  size_t leaves_checked = 0;
  size_t pruned = 0;
  size_t max_fragments = 0;
  std::vector<std::vector<Rational>> failing;
  std::vector<std::vector<Rational>> dead;
};

std::vector<Rational> sorted(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void walk(const CoverNode& n, const CompactRegion& region, const CoveringConfig& config, SubtreeResult& r) {
  ++r.nodes;
  r.max_fragments = std::max(r.max_fragments, n.kset.size());
  if (n.depth == config.d) {
    ++r.leaves;
    ++r.leaves_checked;
    if (n.kset.empty()) r.failing.push_back(sorted(n.ancestry));
    return;
  }
  if (n.kset.empty()) {
    r.dead.push_back(sorted(n.ancestry));
    return;
  }
  const bool last = n.depth + 1 == config.d;
  std::vector<Rational> anc = n.ancestry;
  // At the last level only leaves in the region are generated.
  const auto zs = last ? child_coordinates(n, config, region.box_hi, region.completion_ranges(anc))
                       : child_coordinates(n, config, region.box_hi);
  anc.push_back(Rational());
  const Rational upper = n.kset.upper_ends().back();
  for (const auto& z : zs) {
    anc.back() = z;
    if (last) {
      if (!region.contains(anc)) continue;
      // A leaf only needs the emptiness of its kset.
      ++r.nodes;
      ++r.leaves;
      ++r.leaves_checked;
      if (!meets_halfopen_trim(n.kset, z, config.delta, upper)) r.failing.push_back(sorted(anc));
      continue;
    }
    if (!region.may_extend(anc) || (n.depth + 2 == config.d && region.completion_ranges(anc).empty())) {
      ++r.pruned;
      continue;
    }
    walk(make_child(n, z, config), region, config, r);
  }
}

using nlohmann::json;

json point_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

std::vector<Rational> point_from(const json& a) {
  std::vector<Rational> v;
  for (const auto& x : a) v.push_back(Rational::parse(x.get<std::string>()));
  return v;
}

json subtree_json(size_t index, const SubtreeResult& r) {
  json j;
  j["subtree"] = index;
  j["nodes"] = r.nodes;
  j["leaves"] = r.leaves;
  j["leaves_checked"] = r.leaves_checked;
  j["max_fragments"] = r.max_fragments;
  j["pruned"] = r.pruned;
  j["failing"] = json::array();
  for (const auto& f : r.failing) j["failing"].push_back(point_json(f));
  j["dead"] = json::array();
  for (const auto& f : r.dead) j["dead"].push_back(point_json(f));
  return j;
}

SubtreeResult subtree_from(const json& j) {
  SubtreeResult r;
  r.nodes = j.at("nodes").get<size_t>();
  r.leaves = j.at("leaves").get<size_t>();
  r.leaves_checked = j.at("leaves_checked").get<size_t>();
  r.max_fragments = j.at("max_fragments").get<size_t>();
  r.pruned = j.at("pruned").get<size_t>();
  for (const auto& f : j.at("failing")) r.failing.push_back(point_from(f));
  for (const auto& f : j.at("dead")) r.dead.push_back(point_from(f));
  return r;
}

// Checkpoint lines: one JSON object per finished depth-1 subtree, tagged with
// the run parameters so a stale file is never merged into a different run.
std::string run_tag(const CompactRegion& region, const CoveringConfig& config) {
  return std::to_string(config.d) + "|" + std::to_string(config.N) + "|" + config.delta.str() + "|" + region.str();
}

}  // namespace

CoverReport verify_cover(const CompactRegion& region, const CoveringConfig& config, const CoverOptions& opts) {
  if (region.dim != config.d) throw ParameterError("region dimension differs from d");
  if (!(opts.sample_fraction > 0) || opts.sample_fraction > 1) throw ParameterError("sample fraction must lie in (0,1]");
  const auto t0 = std::chrono::steady_clock::now();
  CoverReport rep;
  rep.heuristic = config.delta != Rational(1, config.d + 2);

  const CoverNode root = cover_root(config);
  SubtreeResult top;
  ++top.nodes;
  top.max_fragments = root.kset.size();
  std::vector<CoverNode> first = root.kset.empty() ? std::vector<CoverNode>{} : children(root, config, region.box_hi);
  if (root.kset.empty()) top.dead.push_back({});
  rep.subtrees_total = first.size();

  std::vector<size_t> picked(first.size());
  for (size_t i = 0; i < picked.size(); ++i) picked[i] = i;
  if (!opts.subtrees.empty()) {
    picked = opts.subtrees;
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    if (picked.back() >= first.size()) throw ParameterError("subtree index out of range");
  } else if (opts.sample_fraction < 1 && !picked.empty()) {
    size_t want = std::max<size_t>(1, static_cast<size_t>(opts.sample_fraction * static_cast<double>(picked.size()) + 0.5));
    std::mt19937_64 rng(opts.seed);
    std::shuffle(picked.begin(), picked.end(), rng);
    picked.resize(std::min(want, picked.size()));
    std::sort(picked.begin(), picked.end());
  }

  const std::string tag = run_tag(region, config);
  std::map<size_t, SubtreeResult> done;
  if (!opts.checkpoint.empty()) {
    std::ifstream in(opts.checkpoint);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto j = json::parse(line, nullptr, false);
      if (j.is_discarded() || j.value("tag", "") != tag) continue;
      done[j.at("subtree").get<size_t>()] = subtree_from(j);
    }
  }

  std::vector<size_t> todo;
  for (size_t i : picked)
    if (!done.count(i)) todo.push_back(i);
  std::mutex mu;
  std::ofstream out;
  if (!opts.checkpoint.empty()) out.open(opts.checkpoint, std::ios::app);
  std::atomic<size_t> next{0};
  size_t finished = picked.size() - todo.size();
  auto worker = [&] {
    for (size_t k = next++; k < todo.size(); k = next++) {
      SubtreeResult r;
      const CoverNode& c = first[todo[k]];
      if (config.d == 1 ? !region.contains(c.ancestry) : !region.may_extend(c.ancestry)) {
        if (config.d > 1) ++r.pruned;
      } else {
        walk(c, region, config, r);
      }
      std::lock_guard<std::mutex> lock(mu);
      if (out.is_open()) {
        json j = subtree_json(todo[k], r);
        j["tag"] = tag;
        out << j.dump() << "\n" << std::flush;
      }
      done[todo[k]] = std::move(r);
      ++finished;
      if (opts.progress) opts.progress(finished, picked.size());
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, opts.jobs); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  auto merge = [&](const SubtreeResult& r) {
    rep.nodes += r.nodes;
    rep.leaves += r.leaves;
    rep.leaves_checked += r.leaves_checked;
    rep.pruned += r.pruned;
    rep.max_fragments = std::max(rep.max_fragments, r.max_fragments);
    rep.failing_leaves.insert(rep.failing_leaves.end(), r.failing.begin(), r.failing.end());
    rep.dead_branches.insert(rep.dead_branches.end(), r.dead.begin(), r.dead.end());
  };
  merge(top);
  for (size_t i : picked) merge(done.at(i));
  rep.subtrees_checked = picked.size();
  std::sort(rep.failing_leaves.begin(), rep.failing_leaves.end());
  rep.failing_leaves.erase(std::unique(rep.failing_leaves.begin(), rep.failing_leaves.end()), rep.failing_leaves.end());
  std::sort(rep.dead_branches.begin(), rep.dead_branches.end());
  rep.covered = rep.failing_leaves.empty() && rep.dead_branches.empty();
  for (size_t i = 0; i < rep.failing_leaves.size() && i < opts.sweep_limit; ++i)
    if (auto p = sweep_near(rep.failing_leaves[i], config)) rep.uncovered_points.push_back(std::move(*p));
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::string CoverReport::to_json(const CompactRegion& region, const CoveringConfig& config) const {
  json j;
  j["config"] = {{"d", config.d}, {"N", config.N}, {"delta", config.delta.str()}};
  j["region"] = {{"dim", region.dim}, {"box_hi", region.box_hi.str()}, {"constraints", json::array()}};
  for (const auto& q : region.constraints) j["region"]["constraints"].push_back(q.str());
  j["premise"] = "points of the ordered cone outside the region are covered with N=" + std::to_string(config.N) +
                 " (asserted, not checked)";
  j["verdict"] = covered ? "covered" : "not covered";
  j["heuristic"] = heuristic;
  j["subtrees_total"] = subtrees_total;
  j["subtrees_checked"] = subtrees_checked;
  j["nodes"] = nodes;
  j["leaves"] = leaves;
  j["leaves_checked"] = leaves_checked;
  j["pruned_subtrees"] = pruned;
  j["max_kset_fragments"] = max_fragments;
  j["failing_leaves"] = json::array();
  for (const auto& f : failing_leaves) j["failing_leaves"].push_back(point_json(f));
  j["dead_branches"] = json::array();
  for (const auto& f : dead_branches) j["dead_branches"].push_back(point_json(f));
  j["uncovered_points"] = json::array();
  for (const auto& f : uncovered_points) j["uncovered_points"].push_back(point_json(f));
  j["seconds"] = seconds;
  return j.dump(2);
}

std::optional<std::vector<Rational>> sweep_near(const std::vector<Rational>& z, const CoveringConfig& config) {
  const size_t d = z.size();
  for (long scale : {1000L, 10000L, 100000L, 1000000L}) {
    std::vector<int> e(d, -3);
    while (true) {
      std::vector<Rational> w(d);
      for (size_t i = 0; i < d; ++i) w[i] = z[i] * (1 - Rational(e[i], scale));
      if (std::all_of(w.begin(), w.end(), [](const Rational& x) { return x >= 1; }) &&
          membership_residual(w, config).empty())
        return w;
      size_t i = 0;
      while (i < d && e[i] == 3) e[i++] = -3;
      if (i == d) break;
      ++e[i];
    }
  }
  return std::nullopt;
}

SpotReport spot_check(const CompactRegion& region, const CoveringConfig& config, size_t samples, uint64_t seed) {
  if (region.dim != config.d) throw ParameterError("region dimension differs from d");
  SpotReport rep;
  std::mt19937_64 rng(seed);
  constexpr long kGrid = 1000000;
  std::uniform_int_distribution<long> pick(0, kGrid);
  const Rational span = region.box_hi - 1;
  size_t attempts = 0;
  while (rep.samples < samples) {
    if (++attempts > 1000 * samples + 1000) throw ParameterError("region too thin for rejection sampling");
    std::vector<Rational> z;
    for (int i = 0; i < region.dim; ++i) z.push_back(1 + span * Rational(pick(rng), kGrid));
    if (!region.contains(z)) continue;
    ++rep.samples;
    if (!membership_residual(z, config).empty())
      ++rep.covered;
    else
      rep.uncovered.push_back(z);
  }
  return rep;
}

}  // namespace lrc
