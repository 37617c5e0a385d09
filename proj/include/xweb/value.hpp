#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "xweb/decimal.hpp"

namespace xweb {

enum class ValueKind { kInteger, kDecimal, kString };

/// A member attribute value or a literal in a restriction.
using Value = std::variant<std::int64_t, Decimal, std::string>;

ValueKind kind_of(const Value& v);
std::string_view kind_name(ValueKind kind);

/// Total order used for grouping, ordering and restrictions. Integers and
/// decimals compare numerically with each other; strings compare bytewise.
/// Comparing a string with a number throws ValidationError.
int compare_values(const Value& a, const Value& b);

/// Plain text rendering (no quoting): 42, 907.00, FRANCE.
std::string to_string(const Value& v);

/// Parses `text` as a value of `kind`; throws ParseError on mismatch.
Value parse_value(std::string_view text, ValueKind kind);

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const { return compare_values(a, b) < 0; }
};

}  // namespace xweb
