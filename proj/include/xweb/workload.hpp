#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xweb/model.hpp"
#include "xweb/value.hpp"

namespace xweb {

/// Workload blocks, in execution order.
enum class QueryGroup { kReporting, kCube1D, kCube2D, kCube3D, kComplexHierarchy };

inline constexpr QueryGroup kAllGroups[] = {QueryGroup::kReporting, QueryGroup::kCube1D, QueryGroup::kCube2D,
                                            QueryGroup::kCube3D, QueryGroup::kComplexHierarchy};

/// "RE", "1D", "2D", "3D", "CH".
std::string_view group_name(QueryGroup g);
std::optional<QueryGroup> group_from_name(std::string_view name);

enum class AggregateFn { kMin, kMax, kSum, kAvg };
std::string_view aggregate_name(AggregateFn fn);  // "min", "max", "sum", "avg"

struct Aggregation {
  AggregateFn fn;
  std::string measure;
  /// Result column name, e.g. "sum_f_quantity".
  std::string column() const;
  bool operator==(const Aggregation&) const = default;
};

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };
std::string_view op_symbol(CompareOp op);

/// Applied to the attribute before comparing.
enum class Transform { kNone, kQuarter };

struct Comparison {
  std::string attribute;
  Transform transform = Transform::kNone;
  CompareOp op = CompareOp::kEq;
  Value literal;
  bool operator==(const Comparison&) const = default;
};

struct OrderKey {
  std::string attribute;
  bool descending = false;
  bool operator==(const OrderKey&) const = default;
};

/// Declarative form of one workload query. The restriction is a conjunction.
struct QuerySpec {
  std::string id;
  QueryGroup group = QueryGroup::kReporting;
  std::vector<Aggregation> aggregations;
  std::vector<std::string> group_by;
  std::vector<Comparison> restriction;
  std::vector<OrderKey> ordering;
  /// t_name resolution: 0 = the part's own categories, 1 = their top-level
  /// (supercategory) ancestors.
  int category_depth = 0;

  bool operator==(const QuerySpec&) const = default;
};

struct WorkloadConfig {
  bool re = true;
  bool d1 = true;
  bool d2 = true;
  bool d3 = true;
  bool ch = true;
  int nrun = 0;
  std::chrono::milliseconds timeout{60'000};

  bool enabled(QueryGroup g) const;
  void validate() const;
};

/// Parses "RE,1D,CH" (case-insensitive) into block flags; others off.
WorkloadConfig with_blocks(WorkloadConfig base, std::string_view blocks);

/// Queries of the enabled blocks, Q01..Q20 order.
std::vector<QuerySpec> build_workload(const WorkloadConfig& wc);
std::vector<QuerySpec> full_workload();
std::optional<QuerySpec> find_query(std::string_view id);

/// ceil(monthkey / 3); throws ParameterError outside 1..12.
int quarter(int monthkey);

// ---- attribute vocabulary -------------------------------------------------------

enum class Role { kCustomer, kPart, kSupplier, kDate };

enum class Attr {
  kCustkey, kCustName, kCustAcctbal, kMktsegment, kCustNation, kCustRegion,
  kSuppkey, kSuppName, kSuppAcctbal, kSuppNation, kSuppRegion,
  kPartkey, kPartName, kBrand, kRetailprice, kSize, kCategory,
  kDatekey, kDayname, kMonthkey, kMonthname, kYearkey,
};

struct AttributeInfo {
  Attr id;
  std::string_view name;       // canonical query name, e.g. "n_name"
  std::string_view qualified;  // level-qualified alias, e.g. "C_Nation.n_name"
  Role role;
  std::string_view dimension;
  std::string_view level;
  std::string_view element;  // member element name in the dimension document
  ValueKind kind;
};

const std::vector<AttributeInfo>& vocabulary();

/// Looks up by canonical or qualified name and checks the model declares the
/// dimension and level. nullptr when unknown.
const AttributeInfo* resolve_attribute(std::string_view name, const WarehouseModel& model);

/// Empty when every attribute, measure, literal and ordering key is valid.
std::vector<std::string> validate_query(const QuerySpec& q, const WarehouseModel& model);

}  // namespace xweb
