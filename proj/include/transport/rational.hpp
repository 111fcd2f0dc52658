#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "transport/errors.hpp"

namespace transport {

/// Exact rational number with a checked 64-bit representation.
///
/// Always stored in lowest terms with a positive denominator. Any operation
/// whose exact result does not fit in 64 bits throws OverflowError; results
/// are never silently wrapped.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den);

  /// Parses "3", "-0.125", "1/7". Decimal strings are converted exactly.
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  void normalize();

  std::int64_t num_;
  std::int64_t den_;
};

/// Least common multiple with overflow checking.
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

/// a*b with overflow checking.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace transport

template <>
struct std::hash<transport::Rational> {
  std::size_t operator()(const transport::Rational& r) const noexcept {
    std::size_t h = std::hash<std::int64_t>()(r.num());
    return h ^ (std::hash<std::int64_t>()(r.den()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
  }
};
