#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace xweb {

/// Fixed-point number with exactly two fractional digits, stored as an
/// integer count of hundredths. Used for every currency value and for all
/// aggregate results so that backends can be compared exactly.
class Decimal {
 public:
  constexpr Decimal() = default;

  static constexpr Decimal from_cents(std::int64_t cents) { return Decimal(cents); }
  static constexpr Decimal from_integer(std::int64_t units) { return Decimal(units * 100); }

  /// Parses "-12", "3.5", "1234.56". More than two fractional digits are
  /// rounded half-up; anything else throws ParseError.
  static Decimal parse(std::string_view text);

  constexpr std::int64_t cents() const { return cents_; }

  /// Canonical rendering: optional sign, integer part, '.', two digits.
  std::string to_string() const;

  /// `*this / divisor` rounded half-up (towards +infinity) to cents.
  Decimal divide_rounded(std::int64_t divisor) const;

  constexpr Decimal operator+(Decimal o) const { return Decimal(cents_ + o.cents_); }
  constexpr Decimal operator-(Decimal o) const { return Decimal(cents_ - o.cents_); }
  constexpr Decimal& operator+=(Decimal o) {
    cents_ += o.cents_;
    return *this;
  }
  constexpr Decimal operator*(std::int64_t k) const { return Decimal(cents_ * k); }

  constexpr auto operator<=>(const Decimal&) const = default;

 private:
  constexpr explicit Decimal(std::int64_t cents) : cents_(cents) {}

  std::int64_t cents_ = 0;
};

}  // namespace xweb
