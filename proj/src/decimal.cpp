#include "xweb/decimal.hpp"

#include <charconv>
#include <cstdlib>

#include "xweb/error.hpp"

namespace xweb {

Decimal Decimal::parse(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw ParseError("empty decimal literal");
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw ParseError("invalid decimal literal '" + original + "'");
  auto all_digits = [](std::string_view s) {
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (!all_digits(whole) || !all_digits(frac))
    throw ParseError("invalid decimal literal '" + original + "'");

  std::int64_t units = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), units);
    if (ec != std::errc{}) throw ParseError("decimal literal out of range '" + original + "'");
  }
  std::int64_t cents = units * 100;
  if (!frac.empty()) cents += (frac[0] - '0') * 10;
  if (frac.size() > 1) cents += frac[1] - '0';
  bool round_up = false;
  if (frac.size() > 2) {
    // Half-up on the magnitude, then the sign is applied; for negatives this
    // still has to round towards +infinity, so the tie goes the other way.
    const bool above_half = frac[2] > '5' || (frac[2] == '5' && frac.find_first_not_of('0', 3) != std::string_view::npos);
    const bool exactly_half = frac[2] == '5' && frac.find_first_not_of('0', 3) == std::string_view::npos;
    round_up = above_half || (exactly_half && !negative);
  }
  if (round_up) cents += 1;
  return Decimal(negative ? -cents : cents);
}

std::string Decimal::to_string() const {
  const bool negative = cents_ < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(cents_ + 1)) + 1 : static_cast<std::uint64_t>(cents_);
  std::string out = negative ? "-" : "";
  out += std::to_string(magnitude / 100);
  out += '.';
  const auto frac = magnitude % 100;
  out += static_cast<char>('0' + frac / 10);
  out += static_cast<char>('0' + frac % 10);
  return out;
}

Decimal Decimal::divide_rounded(std::int64_t divisor) const {
  if (divisor <= 0) throw ParameterError("Decimal::divide_rounded requires a positive divisor");
  // floor((2*c + d) / (2*d)) == round-half-up(c / d)
  const __int128 num = static_cast<__int128>(cents_) * 2 + divisor;
  const __int128 den = static_cast<__int128>(divisor) * 2;
  __int128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return Decimal(static_cast<std::int64_t>(q));
}

}  // namespace xweb
