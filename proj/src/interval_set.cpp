#include "lrc/interval_set.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "lrc/errors.hpp"

namespace lrc {

bool Interval::contains(const Rational& x) const {
  if (x < lo || x > hi) return false;
  if (x == lo && !lo_closed) return false;
  if (x == hi && !hi_closed) return false;
  return true;
}

std::string Interval::str() const {
  if (degenerate()) return "{" + lo.str() + "}";
  return std::string(lo_closed ? "[" : "(") + lo.str() + "," + hi.str() + (hi_closed ? "]" : ")");
}

Interval intersect(const Interval& a, const Interval& b) {
  Interval r;
  if (a.lo == b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  } else {
    const Interval& m = a.lo > b.lo ? a : b;
    r.lo = m.lo;
    r.lo_closed = m.lo_closed;
  }
  if (a.hi == b.hi) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  } else {
    const Interval& m = a.hi < b.hi ? a : b;
    r.hi = m.hi;
    r.hi_closed = m.hi_closed;
  }
  return r;
}

IntervalSet::IntervalSet(const Interval& iv) {
  if (!iv.empty()) parts_.push_back(iv);
}

IntervalSet::IntervalSet(std::vector<Interval> parts) : parts_(std::move(parts)) { canonicalize(); }

void IntervalSet::canonicalize() {
  std::erase_if(parts_, [](const Interval& iv) { return iv.empty(); });
  std::sort(parts_.begin(), parts_.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  std::vector<Interval> out;
  for (auto& p : parts_) {
    if (!out.empty()) {
      Interval& last = out.back();
      bool overlap = p.lo < last.hi || (p.lo == last.hi && p.lo_closed && last.hi_closed);
      if (overlap) {
        if (p.lo == last.lo) last.lo_closed = last.lo_closed || p.lo_closed;
        if (p.hi > last.hi) {
          last.hi = p.hi;
          last.hi_closed = p.hi_closed;
        } else if (p.hi == last.hi) {
          last.hi_closed = last.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    out.push_back(std::move(p));
  }
  parts_ = std::move(out);
}

IntervalSet IntervalSet::parse(std::string_view text) {
  std::vector<Interval> parts;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&] { throw std::invalid_argument("malformed interval set: '" + std::string(text) + "'"); };
  skip();
  while (i < text.size()) {
    char open = text[i];
    char close_a = open == '{' ? '}' : ']';
    char close_b = open == '{' ? '}' : ')';
    if (open != '[' && open != '(' && open != '{') fail();
    size_t j = i + 1;
    while (j < text.size() && text[j] != close_a && text[j] != close_b) ++j;
    if (j == text.size()) fail();
    std::string_view body = text.substr(i + 1, j - i - 1);
    if (open == '{') {
      if (!body.empty()) parts.push_back(Interval::point(Rational::parse(body)));
    } else {
      auto comma = body.find(',');
      if (comma == std::string_view::npos) fail();
      Interval iv{Rational::parse(body.substr(0, comma)), Rational::parse(body.substr(comma + 1)),
                  open == '[', text[j] == ']'};
      if (iv.hi < iv.lo) fail();
      parts.push_back(iv);
    }
    i = j + 1;
    skip();
  }
  return IntervalSet(std::move(parts));
}

Rational IntervalSet::measure() const {
  Rational m;
  for (const auto& p : parts_) m += p.length();
  return m;
}

bool IntervalSet::contains(const Rational& x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  // Candidates are the part starting at or before x; abutting parts may share lo == x.
  for (auto k = it; k != parts_.begin();) {
    --k;
    if (k->contains(x)) return true;
    if (k->hi < x) break;
  }
  return false;
}

std::string IntervalSet::str() const {
  if (parts_.empty()) return "{}";
  std::string s;
  for (const auto& p : parts_) {
    if (!s.empty()) s += ' ';
    s += p.str();
  }
  return s;
}

std::vector<Rational> IntervalSet::lower_ends() const {
  std::vector<Rational> v;
  for (const auto& p : parts_)
    if (v.empty() || v.back() != p.lo) v.push_back(p.lo);
  return v;
}

std::vector<Rational> IntervalSet::upper_ends() const {
  std::vector<Rational> v;
  for (const auto& p : parts_)
    if (v.empty() || v.back() != p.hi) v.push_back(p.hi);
  return v;
}

IntervalSet IntervalSet::halfopen() const {
  std::vector<Interval> v;
  for (const auto& p : parts_)
    if (p.lo < p.hi) v.push_back(Interval::left_open(p.lo, p.hi));
  return IntervalSet(std::move(v));
}

IntervalSet IntervalSet::closure() const {
  std::vector<Interval> v;
  for (const auto& p : parts_) v.push_back(Interval::closed(p.lo, p.hi));
  return IntervalSet(std::move(v));
}

std::optional<Rational> IntervalSet::min() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.front().lo;
}

std::optional<Rational> IntervalSet::max() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.back().hi;
}

Rational IntervalSet::longest_closed_part() const {
  Rational best;
  for (const auto& p : parts_)
    if (p.lo_closed && p.hi_closed && p.length() > best) best = p.length();
  return best;
}

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    Interval r = intersect(pa[i], pb[j]);
    if (!r.empty()) out.push_back(r);
    const Interval& x = pa[i];
    const Interval& y = pb[j];
    if (x.hi < y.hi) {
      ++i;
    } else if (y.hi < x.hi) {
      ++j;
    } else if (x.hi_closed && !y.hi_closed) {
      ++j;
    } else if (y.hi_closed && !x.hi_closed) {
      ++i;
    } else {
      ++i;
      ++j;
    }
  }
  return IntervalSet(std::move(out));
}

IntervalSet subtract(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> out;
  const auto& pb = b.parts();
  size_t start = 0;
  for (const auto& part : a.parts()) {
    Interval cur = part;
    while (start < pb.size() && pb[start].hi < cur.lo) ++start;
    bool alive = true;
    for (size_t j = start; j < pb.size(); ++j) {
      const Interval& cut = pb[j];
      if (intersect(cur, cut).empty()) {
        if (cut.hi <= cur.lo) continue;
        break;
      }
      Interval left{cur.lo, cut.lo, cur.lo_closed, !cut.lo_closed};
      if (!left.empty()) out.push_back(left);
      Interval right{cut.hi, cur.hi, !cut.hi_closed, cur.hi_closed};
      if (right.empty()) {
        alive = false;
        break;
      }
      cur = right;
    }
    if (alive) out.push_back(cur);
  }
  return IntervalSet(std::move(out));
}

IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
  std::vector<Interval> v = a.parts();
  v.insert(v.end(), b.parts().begin(), b.parts().end());
  return IntervalSet(std::move(v));
}

IntervalSet scale_translate(const IntervalSet& a, const Rational& num, const Rational& shift) {
  if (num.sign() <= 0) throw std::invalid_argument("nonpositive scale");
  std::vector<Interval> v;
  v.reserve(a.size());
  for (const auto& p : a.parts())
    v.push_back({p.lo * num + shift, p.hi * num + shift, p.lo_closed, p.hi_closed});
  return IntervalSet(std::move(v));
}

IntervalSet closure_of_halfopen_trim(const IntervalSet& k, const Rational& z, const Rational& delta,
                                     const Rational& upper) {
  if (!(z > 1)) throw ParameterError("closure_of_halfopen_trim: z must exceed 1");
  if (delta.sign() <= 0 || !(delta < Rational(1, 2)))
    throw ParameterError("closure_of_halfopen_trim: delta must lie in (0,1/2)");
  if (k.empty()) return {};
  if (*k.max() > upper) throw ParameterError("closure_of_halfopen_trim: set exceeds upper bound");
  std::vector<Interval> kw;
  // Images ending below min(k) cannot meet k.
  mpz_class first = (z * *k.min()).floor() - 1;
  for (long m = first > 0 ? first.get_si() : 0;; ++m) {
    Rational lo = (Rational(m) + delta) / z;
    if (lo > upper) break;
    kw.push_back(Interval::left_open(lo, (Rational(mpz_class(m + 1)) - delta) / z));
  }
  return intersect(k, IntervalSet(std::move(kw))).closure();
}

bool meets_halfopen_trim(const IntervalSet& k, const Rational& z, const Rational& delta, const Rational& upper) {
  if (!(z > 1)) throw ParameterError("meets_halfopen_trim: z must exceed 1");
  if (delta.sign() <= 0 || !(delta < Rational(1, 2))) throw ParameterError("meets_halfopen_trim: delta must lie in (0,1/2)");
  for (const auto& part : k.parts()) {
    // Images with m below this one end before the part starts; if neither
    // this image nor the next meets the part, later ones start after it.
    mpz_class m = (part.lo * z - 1 + delta).ceil();
    if (m < 0) m = 0;
    for (int step = 0; step < 2; ++step, ++m) {
      Rational lo = (Rational(m) + delta) / z;
      if (lo > upper) break;
      if (!intersect(part, Interval::left_open(lo, (Rational(mpz_class(m + 1)) - delta) / z)).empty()) return true;
    }
  }
  return false;
}

}  // namespace lrc
