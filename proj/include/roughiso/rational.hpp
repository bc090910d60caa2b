#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace roughiso {

using Int128 = __int128;

/// Exact rational number with 64-bit numerator and denominator.
///
/// Values are kept normalized (gcd 1, positive denominator). Every operation
/// is carried out in 128-bit arithmetic and throws std::overflow_error if the
/// reduced result no longer fits into 64 bits, so a result is either exact or
/// an exception.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  /// Parses "7", "-3/4" or a finite decimal such as "2.5".
  static Rational parse(std::string_view text);

  [[nodiscard]] std::int64_t num() const { return num_; }
  [[nodiscard]] std::int64_t den() const { return den_; }

  [[nodiscard]] std::string str() const;
  [[nodiscard]] double to_double() const;
  [[nodiscard]] long double to_long_double() const;
  [[nodiscard]] std::int64_t floor() const;
  [[nodiscard]] std::int64_t ceil() const;
  [[nodiscard]] bool is_integer() const { return den_ == 1; }
  [[nodiscard]] Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 /// Reduces a 128-bit fraction; throws if the result needs more than 64 bits.
  static Rational from_wide(Int128 num, Int128 den);

 private:

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);

[[noreturn]] void throw_overflow(const char* what);

/// Checked 128-bit multiply; throws std::overflow_error.
inline Int128 checked_mul(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw_overflow("128-bit multiply overflow");
  return r;
}

inline Int128 checked_add(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw_overflow("128-bit add overflow");
  return r;
}

}  // namespace roughiso
