#include "lrc/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace lrc {

namespace {

bool is_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

mpz_class parse_int(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!is_digits(s)) throw std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return neg ? mpz_class(-z) : z;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational::Rational(long n, long d) : Rational(mpz_class(n), mpz_class(d)) {}

Rational::Rational(const mpz_class& n, const mpz_class& d) {
  if (d == 0) throw std::domain_error("division by zero");
  q_ = mpq_class(n, d);
  q_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view t = trim(text);
  auto slash = t.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(t));
  std::string_view den = t.substr(slash + 1);
  if (!is_digits(den)) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  return Rational(parse_int(t.substr(0, slash)), mpz_class(std::string(den), 10));
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

mpz_class Rational::floor() const {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

mpz_class Rational::ceil() const {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
  return r;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.q_ == 0) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace lrc
