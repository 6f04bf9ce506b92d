#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace knapq {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational with arbitrary-precision integer numerator/denominator.
// Invariants: denominator > 0, gcd(|num|, den) == 1, zero is 0/1.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int64_t v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rational(const BigInt& v) : num_(v), den_(1) {}

  Rational(BigInt num, BigInt den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num < 0 ? BigInt(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    num_ = std::move(num);
    den_ = std::move(den);
  }

  static Rational ratio(int64_t num, int64_t den) { return Rational(BigInt(num), BigInt(den)); }

  // Accepts "n", "n/d", and plain decimals like "0.25" or "-1.5".
  static Rational parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      return Rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      size_t frac_len = text.size() - dot - 1;
      if (frac_len == 0) throw std::invalid_argument("Rational: malformed decimal");
      BigInt d = 1;
      for (size_t i = 0; i < frac_len; ++i) d *= 10;
      return Rational(parse_integer(digits), d);
    }
    return Rational(parse_integer(text), BigInt(1));
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // Largest integer <= value.
  BigInt floor() const {
    BigInt q = num_ / den_;
    if (num_ < 0 && q * den_ != num_) q -= 1;
    return q;
  }
  // Smallest integer >= value.
  BigInt ceil() const {
    BigInt q = num_ / den_;
    if (num_ > 0 && q * den_ != num_) q += 1;
    return q;
  }

  double to_double() const {
    // Scale into the double mantissa range before converting; exactness is not
    // required here (display and log-factor use only).
    return static_cast<double>(boost::multiprecision::cpp_rational(num_, den_));
  }

  std::string str() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

 private:
  // cpp_int's string constructor treats a leading 0 as an octal prefix, so
  // decimal text is validated and stripped of leading zeros by hand.
  static BigInt parse_integer(const std::string& text) {
    size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      negative = (text[pos] == '-');
      ++pos;
    }
    if (pos == text.size()) throw std::invalid_argument("Rational: malformed number");
    for (size_t i = pos; i < text.size(); ++i) {
      if (text[i] < '0' || text[i] > '9') throw std::invalid_argument("Rational: malformed number");
    }
    while (pos + 1 < text.size() && text[pos] == '0') ++pos;
    BigInt value(text.substr(pos));
    return negative ? BigInt(-value) : value;
  }

  BigInt num_;
  BigInt den_;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace knapq
