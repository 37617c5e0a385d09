#include "xweb/warehouse.hpp"

namespace xweb {

std::string_view slot_name(Slot slot) { return kSlotNames[static_cast<std::size_t>(slot)]; }

std::optional<Slot> slot_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSlotCount; ++i)
    if (kSlotNames[i] == name) return static_cast<Slot>(i);
  return std::nullopt;
}

std::optional<Decimal> Fact::total_amount() const {
  const auto& v = (*this)[Slot::kTotalAmount];
  if (!v) return std::nullopt;
  return Decimal::from_cents(*v);
}

std::size_t Fact::present_count() const {
  std::size_t n = 0;
  for (const auto& s : slots) n += s.has_value();
  return n;
}

}  // namespace xweb
