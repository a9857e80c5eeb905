#include "lrc/polytope.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <unordered_map>

#include "lrc/errors.hpp"

namespace lrc {

// ---------------------------------------------------------------- text format

namespace {

struct Token {
  enum Kind { Num, Ident, Plus, Minus, Star, Relation, End } kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '/')) ++j;
      out.push_back({Token::Num, std::string(s.substr(i, j - i))});
      i = j;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(s.substr(i, j - i))});
      i = j;
    } else if (c == '+') {
      out.push_back({Token::Plus, "+"});
      ++i;
    } else if (c == '-') {
      out.push_back({Token::Minus, "-"});
      ++i;
    } else if (c == '*') {
      out.push_back({Token::Star, "*"});
      ++i;
    } else if (c == '<' || c == '>') {
      bool eq = i + 1 < s.size() && s[i + 1] == '=';
      out.push_back({Token::Relation, std::string(1, c) + (eq ? "=" : "")});
      i += eq ? 2 : 1;
    } else {
      throw ParameterError("unexpected character '" + std::string(1, c) + "' in inequality");
    }
  }
  out.push_back({Token::End, ""});
  return out;
}

// Parses a linear expression into (coeffs, constant), stopping at a relation or end.
LinIneq parse_expr(const std::vector<Token>& toks, size_t& i) {
  LinIneq e;
  bool first = true;
  while (toks[i].kind != Token::Relation && toks[i].kind != Token::End) {
    Rational sign(1);
    if (toks[i].kind == Token::Plus || toks[i].kind == Token::Minus) {
      if (toks[i].kind == Token::Minus) sign = Rational(-1);
      ++i;
    } else if (!first) {
      throw ParameterError("expected '+' or '-' between terms");
    }
    first = false;
    Rational coef(1);
    bool have_num = false;
    if (toks[i].kind == Token::Num) {
      coef = Rational::parse(toks[i].text);
      have_num = true;
      ++i;
      if (toks[i].kind == Token::Star) {
        ++i;
        if (toks[i].kind != Token::Ident) throw ParameterError("expected variable after '*'");
      }
    }
    if (toks[i].kind == Token::Ident) {
      e.coeffs[toks[i].text] += sign * coef;
      ++i;
    } else if (have_num) {
      e.constant += sign * coef;
    } else {
      throw ParameterError("expected a term");
    }
  }
  if (first) throw ParameterError("empty linear expression");
  return e;
}

std::string term_str(const Rational& c, const std::string& v, bool first) {
  std::string s;
  Rational a = c;
  if (first) {
    if (a.sign() < 0) {
      s += "-";
      a = -a;
    }
  } else {
    s += a.sign() < 0 ? " - " : " + ";
    a = abs(a);
  }
  if (v.empty()) return s + a.str();
  if (a != 1) s += a.str() + "*";
  return s + v;
}

}  // namespace

LinIneq affine(Rational constant, std::initializer_list<std::pair<std::string, Rational>> terms) {
  LinIneq e;
  e.constant = std::move(constant);
  for (const auto& [v, c] : terms) e.coeffs[v] += c;
  e.drop_zeros();
  return e;
}

LinIneq LinIneq::less(const LinIneq& lhs, const LinIneq& rhs, bool strict) {
  LinIneq r = lhs;
  r.constant -= rhs.constant;
  for (const auto& [v, c] : rhs.coeffs) r.coeffs[v] -= c;
  r.rel = strict ? Rel::Lt : Rel::Le;
  r.drop_zeros();
  return r;
}

LinIneq LinIneq::parse(std::string_view text) {
  auto toks = tokenize(text);
  size_t i = 0;
  LinIneq lhs = parse_expr(toks, i);
  if (toks[i].kind != Token::Relation) throw ParameterError("missing relation in '" + std::string(text) + "'");
  std::string rel = toks[i].text;
  ++i;
  LinIneq rhs = parse_expr(toks, i);
  if (toks[i].kind != Token::End) throw ParameterError("trailing input in '" + std::string(text) + "'");
  bool strict = rel.size() == 1;
  if (rel[0] == '<') return less(lhs, rhs, strict);
  return less(rhs, lhs, strict);
}

void LinIneq::drop_zeros() {
  std::erase_if(coeffs, [](const auto& kv) { return kv.second.sign() == 0; });
}

Rational LinIneq::eval(const std::map<std::string, Rational>& at) const {
  Rational s = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = at.find(v);
    if (it == at.end()) throw ParameterError("no value for variable " + v);
    s += c * it->second;
  }
  return s;
}

bool LinIneq::holds(const std::map<std::string, Rational>& at) const {
  Rational s = eval(at);
  return rel == Rel::Lt ? s.sign() < 0 : s.sign() <= 0;
}

std::string LinIneq::str(const std::vector<std::string>& order) const {
  std::string s;
  bool first = true;
  if (constant.sign() != 0 || coeffs.empty()) {
    s += term_str(constant, "", true);
    first = false;
  }
  std::vector<std::string> names = order;
  for (const auto& [v, c] : coeffs)
    if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
  for (const auto& v : names) {
    auto it = coeffs.find(v);
    if (it == coeffs.end() || it->second.sign() == 0) continue;
    s += term_str(it->second, v, first);
    first = false;
  }
  return s + (rel == Rel::Lt ? " < 0" : " <= 0");
}

void LinSystem::declare(const std::string& v) {
  if (std::find(variables.begin(), variables.end(), v) == variables.end()) variables.push_back(v);
}

void LinSystem::add(LinIneq row) {
  row.drop_zeros();
  for (const auto& [v, c] : row.coeffs) declare(v);
  rows.push_back(std::move(row));
}

bool LinSystem::holds(const std::map<std::string, Rational>& at) const {
  return std::all_of(rows.begin(), rows.end(), [&](const LinIneq& r) { return r.holds(at); });
}

LinSystem LinSystem::parse(std::string_view text) {
  LinSystem sys;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    line = line.substr(b);
    if (line.rfind("vars:", 0) == 0) {
      std::istringstream vs(line.substr(5));
      std::string v;
      while (vs >> v) sys.declare(v);
      continue;
    }
    sys.add(LinIneq::parse(line));
  }
  return sys;
}

std::string LinSystem::str() const {
  std::string s = "vars:";
  for (const auto& v : variables) s += " " + v;
  s += "\n";
  for (const auto& r : rows) s += r.str(variables) + "\n";
  return s;
}

LinSystem strictified(const LinSystem& sys) {
  LinSystem out = sys;
  for (auto& r : out.rows) r.rel = Rel::Lt;
  return out;
}

// ---------------------------------------------------------------- elimination

namespace {

// Sorted original row indices used by the redundancy rule. A pruned row
// passes the intersection of both histories to the row that replaces it, so
// every combination the rule would keep stays dominated by a kept row.
using History = std::vector<uint32_t>;

History united(const History& x, const History& y) {
  History out;
  out.reserve(x.size() + y.size());
  std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

History common(const History& x, const History& y) {
  History out;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

// a·x + c REL 0 with a primitive integer vector (or zero), c rational.
struct Row {
  std::vector<mpz_class> a;
  mpq_class c;
  bool strict = true;
  // Nonnegative multipliers on the original rows producing this row.
  std::vector<std::pair<size_t, mpq_class>> mult;
  History hist;
};

bool is_zero(const Row& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](const mpz_class& x) { return x == 0; });
}

// Scales the row so that its coefficient vector is primitive.
void normalize(Row& r) {
  mpz_class g = 0;
  for (const auto& x : r.a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0 || g == 1) return;
  for (auto& x : r.a) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  r.c /= g;
  for (auto& [i, m] : r.mult) m /= g;
}

std::vector<std::pair<size_t, mpq_class>> combine(const std::vector<std::pair<size_t, mpq_class>>& p,
                                                  const mpz_class& alpha,
                                                  const std::vector<std::pair<size_t, mpq_class>>& n,
                                                  const mpz_class& beta) {
  std::vector<std::pair<size_t, mpq_class>> out;
  out.reserve(p.size() + n.size());
  size_t i = 0, j = 0;
  while (i < p.size() || j < n.size()) {
    if (j == n.size() || (i < p.size() && p[i].first < n[j].first)) {
      out.emplace_back(p[i].first, p[i].second * alpha);
      ++i;
    } else if (i == p.size() || n[j].first < p[i].first) {
      out.emplace_back(n[j].first, n[j].second * beta);
      ++j;
    } else {
      out.emplace_back(p[i].first, p[i].second * alpha + n[j].second * beta);
      ++i;
      ++j;
    }
  }
  return out;
}

// True when the constant row c REL 0 is false.
bool contradictory(const Row& r) { return r.strict ? sgn(r.c) >= 0 : sgn(r.c) > 0; }

Certificate to_certificate(const Row& r) {
  Certificate cert;
  for (const auto& [i, m] : r.mult)
    if (m != 0) cert.emplace_back(i, Rational(m));
  return cert;
}

struct VecHash {
  size_t operator()(const std::vector<mpz_class>& v) const {
    size_t h = 1469598103934665603ULL;
    for (const auto& x : v) h = (h ^ static_cast<size_t>(mpz_get_si(x.get_mpz_t()))) * 1099511628211ULL;
    return h;
  }
};

// Keeps, for every coefficient vector, only the tightest row.
std::vector<Row> prune(std::vector<Row> rows) {
  std::unordered_map<std::vector<mpz_class>, size_t, VecHash> best;
  std::vector<Row> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    auto it = best.find(r.a);
    if (it == best.end()) {
      best.emplace(r.a, out.size());
      out.push_back(std::move(r));
      continue;
    }
    Row& cur = out[it->second];
    History h = common(cur.hist, r.hist);
    int c = cmp(r.c, cur.c);
    if (c > 0 || (c == 0 && r.strict && !cur.strict)) cur = std::move(r);
    cur.hist = std::move(h);
  }
  return out;
}

struct Stage {
  size_t var;
  std::vector<Row> rows;
};

struct Outcome {
  bool feasible;
  std::vector<mpq_class> point;
  Certificate cert;
};

Outcome eliminate(const std::vector<Row>& input, size_t nvars, const std::vector<size_t>& fixed_order,
                  bool chernikov) {
  std::vector<Row> rows;
  for (const auto& r : input) {
    if (is_zero(r)) {
      if (contradictory(r)) return {false, {}, to_certificate(r)};
      continue;
    }
    rows.push_back(r);
  }
  rows = prune(std::move(rows));

  std::vector<bool> done(nvars, false);
  std::vector<Stage> stages;
  size_t eliminated = 0;
  while (true) {
    // Pick the next variable.
    size_t var = nvars;
    if (!fixed_order.empty()) {
      for (size_t v : fixed_order)
        if (!done[v]) {
          var = v;
          break;
        }
    } else {
      size_t best = 0;
      for (size_t v = 0; v < nvars; ++v) {
        if (done[v]) continue;
        size_t pos = 0, neg = 0;
        for (const auto& r : rows) {
          int s = sgn(r.a[v]);
          pos += s > 0;
          neg += s < 0;
        }
        if (pos + neg == 0) continue;
        size_t cost = pos * neg;
        if (var == nvars || cost < best) {
          var = v;
          best = cost;
        }
      }
    }
    if (var == nvars) break;
    done[var] = true;
    ++eliminated;

    std::vector<Row> pos, neg, rest;
    for (auto& r : rows) {
      int s = sgn(r.a[var]);
      if (s > 0)
        pos.push_back(std::move(r));
      else if (s < 0)
        neg.push_back(std::move(r));
      else
        rest.push_back(std::move(r));
    }
    Stage st{var, {}};
    st.rows.reserve(pos.size() + neg.size());
    for (const auto& p : pos) {
      for (const auto& n : neg) {
        mpz_class alpha = -n.a[var];
        mpz_class beta = p.a[var];
        Row r;
        r.a.resize(nvars);
        for (size_t v = 0; v < nvars; ++v) r.a[v] = alpha * p.a[v] + beta * n.a[v];
        r.c = alpha * p.c + beta * n.c;
        r.strict = p.strict || n.strict;
        r.hist = united(p.hist, n.hist);
        if (chernikov && r.hist.size() > eliminated + 1) continue;
        r.mult = combine(p.mult, alpha, n.mult, beta);
        normalize(r);
        if (is_zero(r)) {
          if (contradictory(r)) return {false, {}, to_certificate(r)};
          continue;
        }
        rest.push_back(std::move(r));
      }
    }
    for (auto& r : pos) st.rows.push_back(std::move(r));
    for (auto& r : neg) st.rows.push_back(std::move(r));
    stages.push_back(std::move(st));
    rows = prune(std::move(rest));
  }

  // Back-substitution, last eliminated first.
  std::vector<mpq_class> x(nvars, 0);
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    size_t v = it->var;
    std::optional<mpq_class> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (const auto& r : it->rows) {
      mpq_class rest = r.c;
      for (size_t u = 0; u < nvars; ++u)
        if (u != v && r.a[u] != 0) rest += r.a[u] * x[u];
      mpq_class bound = -rest / r.a[v];
      if (r.a[v] > 0) {
        if (!hi || bound < *hi || (bound == *hi && r.strict)) {
          if (!hi || bound < *hi) hi_strict = r.strict;
          else hi_strict = hi_strict || r.strict;
          hi = bound;
        }
      } else {
        if (!lo || bound > *lo || (bound == *lo && r.strict)) {
          if (!lo || bound > *lo) lo_strict = r.strict;
          else lo_strict = lo_strict || r.strict;
          lo = bound;
        }
      }
    }
    if (lo && hi)
      x[v] = *lo == *hi ? *lo : mpq_class((*lo + *hi) / 2);
    else if (lo)
      x[v] = *lo + 1;
    else if (hi)
      x[v] = *hi - 1;
    else
      x[v] = 0;
  }
  return {true, std::move(x), {}};
}


// Same elimination on machine integers; any overflow abandons the attempt.
namespace small {

struct Overflow {};

int64_t mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}

int64_t add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}

int64_t gcd(int64_t a, int64_t b) { return std::gcd(a, b); }

struct IRow {
  std::vector<int64_t> a;
  int64_t c = 0;
  bool strict = true;
  // Multipliers num/den on the integer input rows.
  std::vector<std::pair<uint32_t, int64_t>> mult;
  int64_t den = 1;
  int64_t ga = 0;  // gcd of a
  History hist;
};

bool zero(const IRow& r) { return r.ga == 0; }

void normalize(IRow& r) {
  int64_t g = 0;
  for (int64_t x : r.a) g = gcd(g, x);
  r.ga = g;
  int64_t h = gcd(g, r.c);
  if (h > 1) {
    for (auto& x : r.a) x /= h;
    r.c /= h;
    r.ga /= h;
    r.den = mul(r.den, h);
  }
  int64_t m = r.den;
  for (const auto& [i, x] : r.mult) m = gcd(m, x);
  if (m > 1) {
    r.den /= m;
    for (auto& [i, x] : r.mult) x /= m;
  }
}

bool contradictory(const IRow& r) { return r.strict ? r.c >= 0 : r.c > 0; }

struct KeyHash {
  size_t operator()(const std::vector<int64_t>& v) const {
    size_t h = 1469598103934665603ULL;
    for (int64_t x : v) h = (h ^ static_cast<size_t>(x)) * 1099511628211ULL;
    return h;
  }
};

std::vector<int64_t> direction(const IRow& r) {
  std::vector<int64_t> d = r.a;
  for (auto& x : d) x /= r.ga;
  return d;
}

// c₁/g₁ > c₂/g₂, i.e. the first row is tighter along the shared direction.
bool tighter(const IRow& x, const IRow& y) {
  __int128 l = static_cast<__int128>(x.c) * y.ga;
  __int128 r = static_cast<__int128>(y.c) * x.ga;
  if (l != r) return l > r;
  return x.strict && !y.strict;
}

std::vector<IRow> prune(std::vector<IRow> rows) {
  std::unordered_map<std::vector<int64_t>, size_t, KeyHash> best;
  std::vector<IRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    auto key = direction(r);
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), out.size());
      out.push_back(std::move(r));
      continue;
    }
    IRow& cur = out[it->second];
    History h = common(cur.hist, r.hist);
    if (tighter(r, cur)) cur = std::move(r);
    cur.hist = std::move(h);
  }
  return out;
}

Certificate certificate(const IRow& r) {
  Certificate cert;
  for (const auto& [i, x] : r.mult)
    if (x != 0) cert.emplace_back(i, Rational(x, r.den));
  return cert;
}

std::vector<std::pair<uint32_t, int64_t>> combine(const IRow& p, int64_t alpha, const IRow& n, int64_t beta) {
  // alpha·μp/dp + beta·μn/dn over the denominator dp·dn.
  int64_t fp = mul(alpha, n.den), fn = mul(beta, p.den);
  std::vector<std::pair<uint32_t, int64_t>> out;
  out.reserve(p.mult.size() + n.mult.size());
  size_t i = 0, j = 0;
  while (i < p.mult.size() || j < n.mult.size()) {
    if (j == n.mult.size() || (i < p.mult.size() && p.mult[i].first < n.mult[j].first)) {
      out.emplace_back(p.mult[i].first, mul(p.mult[i].second, fp));
      ++i;
    } else if (i == p.mult.size() || n.mult[j].first < p.mult[i].first) {
      out.emplace_back(n.mult[j].first, mul(n.mult[j].second, fn));
      ++j;
    } else {
      out.emplace_back(p.mult[i].first, add(mul(p.mult[i].second, fp), mul(n.mult[j].second, fn)));
      ++i;
      ++j;
    }
  }
  return out;
}

Outcome eliminate(std::vector<IRow> input, size_t nvars, const std::vector<size_t>& fixed_order, bool chernikov) {
  std::vector<IRow> rows;
  for (auto& r : input) {
    normalize(r);
    if (zero(r)) {
      if (contradictory(r)) return {false, {}, certificate(r)};
      continue;
    }
    rows.push_back(std::move(r));
  }
  rows = prune(std::move(rows));

  std::vector<bool> done(nvars, false);
  std::vector<std::pair<size_t, std::vector<IRow>>> stages;
  size_t eliminated = 0;
  while (true) {
    size_t var = nvars;
    if (!fixed_order.empty()) {
      for (size_t v : fixed_order)
        if (!done[v]) {
          var = v;
          break;
        }
    } else {
      size_t best = 0;
      for (size_t v = 0; v < nvars; ++v) {
        if (done[v]) continue;
        size_t pos = 0, neg = 0;
        for (const auto& r : rows) {
          pos += r.a[v] > 0;
          neg += r.a[v] < 0;
        }
        if (pos + neg == 0) continue;
        if (var == nvars || pos * neg < best) {
          var = v;
          best = pos * neg;
        }
      }
    }
    if (var == nvars) break;
    done[var] = true;
    ++eliminated;

    std::vector<IRow> pos, neg, rest;
    for (auto& r : rows) {
      if (r.a[var] > 0)
        pos.push_back(std::move(r));
      else if (r.a[var] < 0)
        neg.push_back(std::move(r));
      else
        rest.push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& n : neg) {
        int64_t alpha = -n.a[var], beta = p.a[var];
        int64_t g = gcd(alpha, beta);
        alpha /= g;
        beta /= g;
        IRow r;
        r.hist = united(p.hist, n.hist);
        if (chernikov && r.hist.size() > eliminated + 1) continue;
        r.mult = combine(p, alpha, n, beta);
        r.den = mul(p.den, n.den);
        r.a.resize(nvars);
        for (size_t v = 0; v < nvars; ++v) r.a[v] = add(mul(alpha, p.a[v]), mul(beta, n.a[v]));
        r.c = add(mul(alpha, p.c), mul(beta, n.c));
        r.strict = p.strict || n.strict;
        normalize(r);
        if (zero(r)) {
          if (contradictory(r)) return {false, {}, certificate(r)};
          continue;
        }
        rest.push_back(std::move(r));
      }
    std::vector<IRow> kept = std::move(pos);
    for (auto& r : neg) kept.push_back(std::move(r));
    stages.emplace_back(var, std::move(kept));
    rows = prune(std::move(rest));
  }

  std::vector<mpq_class> x(nvars, 0);
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    size_t v = it->first;
    std::optional<mpq_class> lo, hi;
    for (const auto& r : it->second) {
      mpq_class rest(static_cast<long>(r.c));
      for (size_t u = 0; u < nvars; ++u)
        if (u != v && r.a[u] != 0) rest += mpq_class(static_cast<long>(r.a[u])) * x[u];
      mpq_class bound = -rest / static_cast<long>(r.a[v]);
      if (r.a[v] > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else if (!lo || bound > *lo) {
        lo = bound;
      }
    }
    if (lo && hi)
      x[v] = *lo == *hi ? *lo : mpq_class((*lo + *hi) / 2);
    else if (lo)
      x[v] = *lo + 1;
    else if (hi)
      x[v] = *hi - 1;
  }
  return {true, std::move(x), {}};
}

std::optional<Outcome> try_eliminate(const std::vector<Row>& raw, size_t nvars, const std::vector<size_t>& order,
                                     bool chernikov) {
  std::vector<IRow> rows;
  rows.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    IRow r;
    r.a.resize(nvars);
    for (size_t v = 0; v < nvars; ++v) {
      if (!raw[i].a[v].fits_slong_p()) return std::nullopt;
      r.a[v] = raw[i].a[v].get_si();
    }
    if (raw[i].c.get_den() != 1 || !raw[i].c.get_num().fits_slong_p()) return std::nullopt;
    r.c = raw[i].c.get_num().get_si();
    r.strict = raw[i].strict;
    r.mult.emplace_back(static_cast<uint32_t>(i), 1);
    r.hist = {static_cast<uint32_t>(i)};
    rows.push_back(std::move(r));
  }
  try {
    return eliminate(std::move(rows), nvars, order, chernikov);
  } catch (const Overflow&) {
    return std::nullopt;
  }
}

}  // namespace small

// Σ m·row over the given original rows; the relation is strict when some
// strict row has a positive multiplier.
LinIneq combination(const LinSystem& sys, const std::map<size_t, Rational>& mult) {
  LinIneq out;
  out.rel = Rel::Le;
  for (const auto& [i, m] : mult) {
    if (m.sign() == 0) continue;
    const LinIneq& r = sys.rows[i];
    for (const auto& [v, c] : r.coeffs) out.coeffs[v] += m * c;
    out.constant += m * r.constant;
    if (r.rel == Rel::Lt) out.rel = Rel::Lt;
  }
  out.drop_zeros();
  return out;
}

FeasibilityResult decompose(const LinSystem& sys, const FeasibilityOptions& opts) {
  std::set<std::string> outer(opts.outer.begin(), opts.outer.end());
  for (const auto& v : outer)
    if (std::find(sys.variables.begin(), sys.variables.end(), v) == sys.variables.end())
      throw ParameterError("unknown outer variable: " + v);
  FeasibilityOptions sub;
  sub.chernikov = opts.chernikov;

  // Outer-only rows, each with its multipliers on the original rows.
  LinSystem master;
  for (const auto& v : sys.variables)
    if (outer.count(v)) master.declare(v);
  std::vector<std::map<size_t, Rational>> origin;
  std::vector<size_t> inner_rows;
  for (size_t i = 0; i < sys.rows.size(); ++i) {
    bool inner = false;
    for (const auto& [v, c] : sys.rows[i].coeffs) inner = inner || (!outer.count(v) && c.sign() != 0);
    if (inner) {
      inner_rows.push_back(i);
    } else {
      master.rows.push_back(sys.rows[i]);
      origin.push_back({{i, Rational(1)}});
    }
  }

  while (true) {
    FeasibilityResult top = feasible(master, sub);
    if (!top.feasible) {
      std::map<size_t, Rational> total;
      for (const auto& [k, m] : *top.certificate)
        for (const auto& [i, y] : origin[k]) total[i] += m * y;
      FeasibilityResult res;
      res.certificate.emplace();
      for (const auto& [i, m] : total)
        if (m.sign() != 0) res.certificate->emplace_back(i, m);
      return res;
    }
    const auto& point = *top.witness;

    LinSystem inner;
    for (const auto& v : sys.variables)
      if (!outer.count(v)) inner.declare(v);
    for (size_t i : inner_rows) {
      LinIneq r;
      r.rel = sys.rows[i].rel;
      r.constant = sys.rows[i].constant;
      for (const auto& [v, c] : sys.rows[i].coeffs) {
        if (outer.count(v))
          r.constant += c * point.at(v);
        else
          r.coeffs[v] = c;
      }
      inner.rows.push_back(std::move(r));
    }
    FeasibilityResult low = feasible(inner, sub);
    if (low.feasible) {
      std::map<std::string, Rational> w = point;
      for (const auto& [v, x] : *low.witness) w[v] = x;
      if (!sys.holds(w)) throw std::logic_error("decomposition produced an invalid point");
      FeasibilityResult res;
      res.feasible = true;
      res.witness = std::move(w);
      return res;
    }
    // The inner multipliers cancel every inner variable, leaving a row on the
    // outer variables that the current point violates.
    std::map<size_t, Rational> mult;
    for (const auto& [k, m] : *low.certificate) mult[inner_rows[k]] += m;
    LinIneq cut = combination(sys, mult);
    for (const auto& [v, c] : cut.coeffs)
      if (!outer.count(v)) throw std::logic_error("inner certificate left variable " + v);
    if (cut.holds(point)) throw std::logic_error("cut does not separate the outer point");
    master.rows.push_back(std::move(cut));
    origin.push_back(std::move(mult));
  }
}

}  // namespace

FeasibilityResult feasible(const LinSystem& sys, const FeasibilityOptions& opts) {
  if (!opts.outer.empty()) return decompose(sys, opts);
  const size_t n = sys.variables.size();
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < n; ++i) index[sys.variables[i]] = i;

  std::vector<Row> rows;
  std::vector<mpq_class> scale;
  rows.reserve(sys.rows.size());
  for (size_t i = 0; i < sys.rows.size(); ++i) {
    const LinIneq& q = sys.rows[i];
    // Clear denominators with a positive factor.
    mpz_class l = q.constant.den();
    for (const auto& [v, c] : q.coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.den().get_mpz_t());
    Row r;
    r.a.assign(n, 0);
    for (const auto& [v, c] : q.coeffs) {
      auto it = index.find(v);
      if (it == index.end()) throw ParameterError("undeclared variable " + v);
      r.a[it->second] = mpz_class(c.raw() * l);
    }
    r.c = q.constant.raw() * l;
    r.strict = q.rel == Rel::Lt;
    r.mult.emplace_back(i, mpq_class(l));
    r.hist = {static_cast<uint32_t>(i)};
    scale.emplace_back(l);
    rows.push_back(std::move(r));
  }

  std::vector<size_t> order;
  for (const auto& v : opts.order) {
    auto it = index.find(v);
    if (it == index.end()) throw ParameterError("unknown variable in elimination order: " + v);
    order.push_back(it->second);
  }
  if (!order.empty())
    for (size_t v = 0; v < n; ++v)
      if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);

  Outcome out;
  if (auto quick = small::try_eliminate(rows, n, order, opts.chernikov)) {
    out = std::move(*quick);
    for (auto& [i, m] : out.cert) m *= Rational(scale[i]);
  } else {
    for (auto& r : rows) normalize(r);
    out = eliminate(rows, n, order, opts.chernikov);
  }
  FeasibilityResult res;
  res.feasible = out.feasible;
  if (out.feasible) {
    std::map<std::string, Rational> w;
    for (size_t i = 0; i < n; ++i) w[sys.variables[i]] = Rational(out.point[i]);
    if (!sys.holds(w)) throw std::logic_error("back-substitution produced an invalid point");
    res.witness = std::move(w);
  } else {
    res.certificate = std::move(out.cert);
  }
  return res;
}

bool verify_certificate(const LinSystem& sys, const FeasibilityResult& res, std::string* diagnostic) {
  auto fail = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
    return false;
  };
  if (res.feasible) {
    if (!res.witness) return fail("feasible verdict without witness");
    for (const auto& v : sys.variables)
      if (!res.witness->count(v)) return fail("witness misses variable " + v);
    for (size_t i = 0; i < sys.rows.size(); ++i)
      if (!sys.rows[i].holds(*res.witness)) return fail("row " + std::to_string(i) + " violated by witness");
    return true;
  }
  if (!res.certificate) return fail("infeasible verdict without certificate");
  std::map<std::string, Rational> sum;
  Rational constant;
  bool strict = false, any = false;
  for (const auto& [i, m] : *res.certificate) {
    if (i >= sys.rows.size()) return fail("certificate references row " + std::to_string(i));
    if (m.sign() < 0) return fail("negative multiplier on row " + std::to_string(i));
    if (m.sign() == 0) continue;
    any = true;
    const LinIneq& r = sys.rows[i];
    for (const auto& [v, c] : r.coeffs) sum[v] += m * c;
    constant += m * r.constant;
    strict = strict || r.rel == Rel::Lt;
  }
  if (!any) return fail("empty combination");
  for (const auto& [v, c] : sum)
    if (c.sign() != 0) return fail("combination leaves variable " + v);
  bool contradiction = strict ? constant.sign() >= 0 : constant.sign() > 0;
  if (!contradiction) return fail("combination is not contradictory");
  return true;
}

}  // namespace lrc
