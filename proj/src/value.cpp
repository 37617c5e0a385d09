#include "xweb/value.hpp"

#include <charconv>

#include "xweb/error.hpp"

namespace xweb {

ValueKind kind_of(const Value& v) { return static_cast<ValueKind>(v.index()); }

std::string_view kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInteger:
      return "integer";
    case ValueKind::kDecimal:
      return "decimal";
    case ValueKind::kString:
      return "string";
  }
  return "?";
}

namespace {

Decimal as_decimal(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Decimal::from_integer(*i);
  return std::get<Decimal>(v);
}

}  // namespace

int compare_values(const Value& a, const Value& b) {
  const bool a_str = std::holds_alternative<std::string>(a);
  const bool b_str = std::holds_alternative<std::string>(b);
  if (a_str != b_str)
    throw ValidationError("cannot compare " + std::string(kind_name(kind_of(a))) + " with " +
                          std::string(kind_name(kind_of(b))));
  if (a_str) {
    const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return (c > 0) - (c < 0);
  }
  if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
    const auto x = std::get<std::int64_t>(a), y = std::get<std::int64_t>(b);
    return (x > y) - (x < y);
  }
  const auto x = as_decimal(a), y = as_decimal(b);
  return (x > y) - (x < y);
}

std::string to_string(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::kInteger:
      return std::to_string(std::get<std::int64_t>(v));
    case ValueKind::kDecimal:
      return std::get<Decimal>(v).to_string();
    case ValueKind::kString:
      return std::get<std::string>(v);
  }
  return {};
}

Value parse_value(std::string_view text, ValueKind kind) {
  switch (kind) {
    case ValueKind::kInteger: {
      std::int64_t out = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        // Some engines print integral results as decimals ("12.0").
        const Decimal d = Decimal::parse(text);
        if (d.cents() % 100 != 0) throw ParseError("expected integer, got '" + std::string(text) + "'");
        return d.cents() / 100;
      }
      return out;
    }
    case ValueKind::kDecimal:
      return Decimal::parse(text);
    case ValueKind::kString:
      return std::string(text);
  }
  return std::string(text);
}

}  // namespace xweb
