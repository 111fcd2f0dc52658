#include "transport/rational.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

namespace transport {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

std::int64_t narrow(__int128 v, const char* op) {
  if (v > static_cast<__int128>(kMax) || v < static_cast<__int128>(kMin)) {
    throw OverflowError(std::string("rational overflow in ") + op);
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  return narrow(static_cast<__int128>(a) * b, "multiplication");
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = std::gcd(a, b);
  return checked_mul(a / g, b);
}

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ == 0) throw ValidationError("rational with zero denominator");
  normalize();
}

void Rational::normalize() {
  if (den_ < 0) {
    if (den_ == kMin || num_ == kMin) throw OverflowError("rational overflow in normalization");
    num_ = -num_;
    den_ = -den_;
  }
  std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
  if (num_ == 0) den_ = 1;
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw ValidationError("empty rational literal");
  std::string s(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::size_t p1 = 0, p2 = 0;
    std::int64_t n = std::stoll(s.substr(0, slash), &p1);
    std::int64_t d = std::stoll(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1) {
      throw ValidationError("malformed rational literal '" + s + "'");
    }
    return Rational(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    std::size_t pos = 0;
    std::int64_t n = std::stoll(s, &pos);
    if (pos != s.size()) throw ValidationError("malformed rational literal '" + s + "'");
    return Rational(n);
  }
  // Exact decimal: digits / 10^k.
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (frac_len == 0 || digits.empty()) {
    throw ValidationError("malformed decimal literal '" + s + "'");
  }
  std::size_t pos = 0;
  std::int64_t n = 0;
  try {
    n = std::stoll(digits, &pos);
  } catch (const std::out_of_range&) {
    throw OverflowError("decimal literal out of range: '" + s + "'");
  }
  if (pos != digits.size()) throw ValidationError("malformed decimal literal '" + s + "'");
  std::int64_t d = 1;
  for (std::size_t i = 0; i < frac_len; ++i) d = checked_mul(d, 10);
  return Rational(n, d);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const {
  if (num_ == kMin) throw OverflowError("rational overflow in negation");
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  // Reduce via gcd of denominators before cross-multiplying.
  std::int64_t g = std::gcd(den_, rhs.den_);
  __int128 n = static_cast<__int128>(num_) * (rhs.den_ / g) +
               static_cast<__int128>(rhs.num_) * (den_ / g);
  __int128 d = static_cast<__int128>(den_ / g) * rhs.den_;
  num_ = narrow(n, "addition");
  den_ = narrow(d, "addition");
  normalize();
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += (-rhs); }

Rational& Rational::operator*=(const Rational& rhs) {
  std::int64_t g1 = std::gcd(num_ < 0 ? -num_ : num_, rhs.den_);
  std::int64_t g2 = std::gcd(rhs.num_ < 0 ? -rhs.num_ : rhs.num_, den_);
  num_ = checked_mul(num_ / g1, rhs.num_ / g2);
  den_ = checked_mul(den_ / g2, rhs.den_ / g1);
  normalize();
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw ValidationError("rational division by zero");
  return *this *= Rational(rhs.den_, rhs.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

}  // namespace transport
