#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xweb/decimal.hpp"
#include "xweb/model.hpp"
#include "xweb/taxonomy.hpp"

namespace xweb {

struct Region {
  std::int64_t key = 0;
  std::string name;
  bool operator==(const Region&) const = default;
};

struct Nation {
  std::int64_t key = 0;
  std::string name;
  std::int64_t region = 0;
  bool operator==(const Nation&) const = default;
};

struct Customer {
  std::int64_t custkey = 0;
  std::string name;
  Decimal acctbal;
  std::string mktsegment;
  std::int64_t nation = 0;
  bool operator==(const Customer&) const = default;
};

struct Supplier {
  std::int64_t suppkey = 0;
  std::string name;
  Decimal acctbal;
  std::int64_t nation = 0;
  bool operator==(const Supplier&) const = default;
};

struct Part {
  std::int64_t partkey = 0;
  std::string name;
  std::string brand;
  Decimal retailprice;
  std::int64_t size = 0;
  bool operator==(const Part&) const = default;
};

struct Day {
  std::int64_t datekey = 0;  // yyyymmdd
  std::string dayname;
  std::int64_t month = 0;  // Month::key
  bool operator==(const Day&) const = default;
};

struct Month {
  std::int64_t key = 0;       // yyyymm, the instance identifier
  std::int64_t monthkey = 0;  // 1..12
  std::string monthname;
  std::int64_t year = 0;
  bool operator==(const Month&) const = default;
};

struct Year {
  std::int64_t yearkey = 0;
  bool operator==(const Year&) const = default;
};

/// Member tables of the four dimensions. Customer and supplier geography
/// share one nation/region table.
struct DimensionSet {
  std::vector<Region> regions;
  std::vector<Nation> nations;
  std::vector<Customer> customers;
  std::vector<Supplier> suppliers;
  std::vector<Part> parts;
  std::vector<Day> days;
  std::vector<Month> months;
  std::vector<Year> years;
  bool operator==(const DimensionSet&) const = default;
};

struct CategoryRef {
  std::string name;
  int level = 0;
  bool operator==(const CategoryRef&) const = default;
};

/// Category set of one part, in insertion order, without duplicates.
using CategorySet = std::vector<CategoryRef>;

/// catsets[i] belongs to DimensionSet::parts[i].
struct CategoryAssignment {
  std::vector<CategorySet> catsets;
  bool operator==(const CategoryAssignment&) const = default;
};

enum class Slot : std::uint8_t { kCustomer, kPart, kSupplier, kDate, kQuantity, kTotalAmount };

inline constexpr std::size_t kSlotCount = 6;
inline constexpr std::array<std::string_view, kSlotCount> kSlotNames = {
    "c_custkey", "p_partkey", "s_suppkey", "d_datekey", "f_quantity", "f_totalamount"};
inline constexpr std::array<Slot, kSlotCount> kCanonicalOrder = {
    Slot::kCustomer, Slot::kPart, Slot::kSupplier, Slot::kDate, Slot::kQuantity, Slot::kTotalAmount};

std::string_view slot_name(Slot slot);
std::optional<Slot> slot_from_name(std::string_view name);

/// One sale. Every slot may be missing; f_totalamount is held in cents.
struct Fact {
  std::array<std::optional<std::int64_t>, kSlotCount> slots;
  std::array<Slot, kSlotCount> order = kCanonicalOrder;

  const std::optional<std::int64_t>& operator[](Slot s) const { return slots[static_cast<std::size_t>(s)]; }
  std::optional<std::int64_t>& operator[](Slot s) { return slots[static_cast<std::size_t>(s)]; }

  std::optional<Decimal> total_amount() const;
  std::size_t present_count() const;
  bool reordered() const { return order != kCanonicalOrder; }

  /// Slot values only; element order carries no meaning.
  bool same_content(const Fact& other) const { return slots == other.slots; }
};

/// A complete warehouse in memory: what the generator produces and what the
/// codec reconstructs from the six documents.
struct Warehouse {
  WarehouseModel model;
  DimensionSet dimensions;
  CategoryTaxonomy taxonomy = default_taxonomy();
  CategoryAssignment assignment;
  std::vector<Fact> facts;
};

}  // namespace xweb
