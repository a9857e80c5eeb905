#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace lrc {

// Exact fraction in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long n) : q_(n) {}  // NOLINT
  Rational(int n) : q_(n) {}   // NOLINT
  Rational(long n, long d);
  explicit Rational(const mpz_class& n) : q_(n) {}
  Rational(const mpz_class& n, const mpz_class& d);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Accepts "p", "-p", "p/q". Throws std::invalid_argument on malformed text
  // and std::domain_error on a zero denominator.
  static Rational parse(std::string_view text);

  const mpq_class& raw() const { return q_; }
  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }

  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  std::string str() const;

  mpz_class floor() const;
  mpz_class ceil() const;
  Rational frac() const { return *this - Rational(floor()); }

  Rational operator-() const { return Rational(mpq_class(-q_)); }
  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

Rational abs(const Rational& r);
Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace lrc

template <>
struct std::hash<lrc::Rational> {
  size_t operator()(const lrc::Rational& r) const noexcept {
    return std::hash<std::string>{}(r.str());
  }
};
