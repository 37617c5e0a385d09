#pragma once

#include <algorithm>
#include <filesystem>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <unistd.h>

#include "xweb/datagen.hpp"
#include "xweb/engine.hpp"
#include "xweb/warehouse.hpp"

namespace xweb::testing {

inline GenParams small_params(std::uint64_t seed, double density = 4e-5, double pm = 0, double po = 0,
                              std::int64_t divisor = 5000) {
  GenParams gp;
  gp.seed = seed;
  gp.density = density;
  gp.p_missing = pm;
  gp.p_reorder = po;
  gp.scale_divisor = divisor;
  return gp;
}

/// 800 parts, so retail prices span both sides of the Q02 and Q04 thresholds.
inline GenParams wide_params(std::uint64_t seed, double density = 2e-8, double pm = 0, double po = 0) {
  return small_params(seed, density, pm, po, 250);
}

inline std::int64_t nation_key(const DimensionSet& dims, const std::string& name) {
  for (const auto& n : dims.nations)
    if (n.name == name) return n.key;
  return -1;
}

inline Fact make_fact(std::int64_t cust, std::int64_t part, std::int64_t supp, std::int64_t date, std::int64_t qty,
                      const DimensionSet& dims) {
  Fact f;
  f[Slot::kCustomer] = cust;
  f[Slot::kPart] = part;
  f[Slot::kSupplier] = supp;
  f[Slot::kDate] = date;
  f[Slot::kQuantity] = qty;
  for (const auto& p : dims.parts)
    if (p.partkey == part) f[Slot::kTotalAmount] = (p.retailprice * qty).cents();
  return f;
}

/// Twenty parts, fifteen customers, one supplier and the full calendar; no
/// facts. Every part sits in {BRASS} unless a test overrides its catset.
inline Warehouse hand_warehouse() {
  Warehouse w;
  w.model = build_default_model();
  GenParams gp;
  gp.scale_divisor = 10000;
  w.dimensions = generate_dimensions(gp);
  w.assignment.catsets.assign(w.dimensions.parts.size(), CategorySet{{"BRASS", 1}});
  return w;
}

/// Fresh, empty directory under the system temp dir, private to this process.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir =
      std::filesystem::temp_directory_path() / ("xweb-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::optional<Decimal> total_of(const QueryResult& r, const std::string& column) {
  const auto it = std::find(r.value_columns.begin(), r.value_columns.end(), column);
  if (it == r.value_columns.end()) return std::nullopt;
  const auto i = static_cast<std::size_t>(it - r.value_columns.begin());
  Decimal sum;
  bool any = false;
  for (const auto& row : r.rows)
    if (row.values[i]) {
      sum += *row.values[i];
      any = true;
    }
  return any ? std::optional<Decimal>(sum) : std::nullopt;
}

}  // namespace xweb::testing
