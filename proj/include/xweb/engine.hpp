#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xweb/decimal.hpp"
#include "xweb/value.hpp"
#include "xweb/warehouse.hpp"
#include "xweb/workload.hpp"

namespace xweb {

struct ResultRow {
  std::vector<Value> keys;
  std::vector<std::optional<Decimal>> values;  // nullopt: no present input
  bool operator==(const ResultRow&) const = default;
};

struct QueryResult {
  std::string query;
  std::vector<std::string> key_columns;
  std::vector<std::string> value_columns;
  std::vector<ResultRow> rows;
  bool operator==(const QueryResult&) const = default;
};

/// Empty result carrying the column layout of `q`.
QueryResult result_template(const QuerySpec& q);

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

/// Category names a part with `catset` contributes under `t_name`, sorted and
/// unique. Depth 0 is the catset itself; depth 1 replaces each category by its
/// level-1 ancestors (level-1 categories stand for themselves).
std::vector<std::string> rollup_categories(const CategorySet& catset, const CategoryTaxonomy& taxonomy, int depth);

/// Key lookups over a warehouse. Keeps a reference; the warehouse must outlive it.
class WarehouseIndex {
 public:
  explicit WarehouseIndex(const Warehouse& warehouse);

  const Warehouse& warehouse() const { return w_; }

  const Customer* customer(std::int64_t key) const { return find(customers_, w_.dimensions.customers, key); }
  const Supplier* supplier(std::int64_t key) const { return find(suppliers_, w_.dimensions.suppliers, key); }
  const Nation* nation(std::int64_t key) const { return find(nations_, w_.dimensions.nations, key); }
  const Region* region(std::int64_t key) const { return find(regions_, w_.dimensions.regions, key); }
  const Day* day(std::int64_t key) const { return find(days_, w_.dimensions.days, key); }
  const Month* month(std::int64_t key) const { return find(months_, w_.dimensions.months, key); }
  const Year* year(std::int64_t key) const { return find(years_, w_.dimensions.years, key); }
  std::optional<std::size_t> part_index(std::int64_t key) const;

  /// rollup_categories() of part `index`, precomputed.
  const std::vector<std::string>& categories(std::size_t index, int depth) const;

 private:
  using Map = std::unordered_map<std::int64_t, std::size_t>;
  template <typename T>
  static const T* find(const Map& m, const std::vector<T>& v, std::int64_t key) {
    auto it = m.find(key);
    return it == m.end() ? nullptr : &v[it->second];
  }

  const Warehouse& w_;
  Map customers_, suppliers_, nations_, regions_, parts_, days_, months_, years_;
  std::vector<std::vector<std::string>> categories_[2];
};

/// Evaluates one query. Throws ValidationError for a query the model cannot
/// answer and TimeoutError once `deadline` has passed.
QueryResult evaluate(const QuerySpec& q, const WarehouseIndex& index, const Deadline& deadline = std::nullopt);
QueryResult evaluate(const QuerySpec& q, const Warehouse& w, const Deadline& deadline = std::nullopt);

// ---- result exchange ---------------------------------------------------------

/// Header line plus one line per row; absent aggregates are empty cells.
std::string to_csv(const QueryResult& r);

/// <result query="Qnn"><row><col>text</col>...</row></result>; absent
/// aggregates are omitted.
std::string to_result_xml(const QueryResult& r);

/// Inverse of to_result_xml, typed by `q`. Throws ParseError.
QueryResult parse_result_xml(std::string_view document, const QuerySpec& q);

/// Rows sorted by keys, for order-insensitive comparison.
QueryResult normalized(QueryResult r);

/// nullopt when equal as row sets; otherwise a description of the first difference.
std::optional<std::string> diff_results(const QueryResult& expected, const QueryResult& actual);

}  // namespace xweb
