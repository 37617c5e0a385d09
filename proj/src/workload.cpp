#include "xweb/workload.hpp"

#include <algorithm>
#include <cctype>

#include "xweb/error.hpp"

namespace xweb {

std::string_view group_name(QueryGroup g) {
  switch (g) {
    case QueryGroup::kReporting:
      return "RE";
    case QueryGroup::kCube1D:
      return "1D";
    case QueryGroup::kCube2D:
      return "2D";
    case QueryGroup::kCube3D:
      return "3D";
    case QueryGroup::kComplexHierarchy:
      return "CH";
  }
  return "?";
}

std::optional<QueryGroup> group_from_name(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (QueryGroup g : kAllGroups)
    if (group_name(g) == upper) return g;
  return std::nullopt;
}

std::string_view aggregate_name(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::kMin:
      return "min";
    case AggregateFn::kMax:
      return "max";
    case AggregateFn::kSum:
      return "sum";
    case AggregateFn::kAvg:
      return "avg";
  }
  return "?";
}

std::string Aggregation::column() const { return std::string(aggregate_name(fn)) + "_" + measure; }

std::string_view op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::kEq:
      return "=";
    case CompareOp::kNe:
      return "!=";
    case CompareOp::kLt:
      return "<";
    case CompareOp::kLe:
      return "<=";
    case CompareOp::kGt:
      return ">";
    case CompareOp::kGe:
      return ">=";
  }
  return "?";
}

bool WorkloadConfig::enabled(QueryGroup g) const {
  switch (g) {
    case QueryGroup::kReporting:
      return re;
    case QueryGroup::kCube1D:
      return d1;
    case QueryGroup::kCube2D:
      return d2;
    case QueryGroup::kCube3D:
      return d3;
    case QueryGroup::kComplexHierarchy:
      return ch;
  }
  return false;
}

void WorkloadConfig::validate() const {
  if (nrun < 0) throw ParameterError("NRUN must be non-negative");
  if (timeout.count() <= 0) throw ParameterError("timeout must be positive");
}

WorkloadConfig with_blocks(WorkloadConfig base, std::string_view blocks) {
  base.re = base.d1 = base.d2 = base.d3 = base.ch = false;
  std::size_t pos = 0;
  while (pos <= blocks.size()) {
    auto comma = blocks.find(',', pos);
    if (comma == std::string_view::npos) comma = blocks.size();
    std::string_view token = blocks.substr(pos, comma - pos);
    while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
    while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
    if (!token.empty()) {
      const auto g = group_from_name(token);
      if (!g) throw ParameterError("unknown workload block '" + std::string(token) + "' (expected RE, 1D, 2D, 3D, CH)");
      switch (*g) {
        case QueryGroup::kReporting:
          base.re = true;
          break;
        case QueryGroup::kCube1D:
          base.d1 = true;
          break;
        case QueryGroup::kCube2D:
          base.d2 = true;
          break;
        case QueryGroup::kCube3D:
          base.d3 = true;
          break;
        case QueryGroup::kComplexHierarchy:
          base.ch = true;
          break;
      }
    }
    pos = comma + 1;
  }
  return base;
}

int quarter(int monthkey) {
  if (monthkey < 1 || monthkey > 12) throw ParameterError("month key " + std::to_string(monthkey) + " outside 1..12");
  return (monthkey + 2) / 3;
}

namespace {

using G = QueryGroup;
using F = AggregateFn;

std::vector<Aggregation> both(F fn) { return {{fn, "f_quantity"}, {fn, "f_totalamount"}}; }

std::vector<OrderKey> asc(std::initializer_list<const char*> attrs) {
  std::vector<OrderKey> out;
  for (const char* a : attrs) out.push_back({a, false});
  return out;
}

Comparison cmp(const char* attr, CompareOp op, Value literal, Transform t = Transform::kNone) {
  return Comparison{attr, t, op, std::move(literal)};
}

std::vector<QuerySpec> make_workload() {
  using Op = CompareOp;
  const Value brand25 = std::string("Brand#25");
  std::vector<QuerySpec> q;
  q.push_back({"Q01", G::kReporting,
               {{F::kMin, "f_quantity"}, {F::kMax, "f_quantity"}, {F::kSum, "f_quantity"}, {F::kAvg, "f_quantity"},
                {F::kMin, "f_totalamount"}, {F::kMax, "f_totalamount"}, {F::kSum, "f_totalamount"},
                {F::kAvg, "f_totalamount"}},
               {}, {}, {}, 0});
  // p_retailprice is functionally dependent on p_partkey; carrying it as a
  // key column lets the result be ordered by it.
  q.push_back({"Q02", G::kReporting, {{F::kSum, "f_quantity"}}, {"p_partkey", "p_retailprice"},
               {cmp("p_retailprice", Op::kLe, Decimal::from_integer(1000))}, asc({"p_retailprice"}), 0});
  q.push_back({"Q03", G::kReporting, {{F::kSum, "f_totalamount"}}, {},
               {cmp("n_name", Op::kEq, std::string("FRANCE"))}, {}, 0});
  q.push_back({"Q04", G::kCube1D, {{F::kSum, "f_quantity"}}, {"p_partkey", "p_retailprice"},
               {cmp("p_retailprice", Op::kGt, Decimal::from_integer(1500))}, {{"p_retailprice", true}}, 0});
  q.push_back({"Q05", G::kCube1D, both(F::kSum), {"m_monthname"},
               {cmp("m_monthkey", Op::kEq, std::int64_t{1}, Transform::kQuarter)}, asc({"m_monthname"}), 0});
  q.push_back({"Q06", G::kCube1D, both(F::kSum), {"d_dayname"},
               {cmp("m_monthkey", Op::kEq, std::int64_t{1}, Transform::kQuarter)}, asc({"d_dayname"}), 0});
  q.push_back({"Q07", G::kCube1D, both(F::kAvg), {"r_name"}, {cmp("r_name", Op::kEq, std::string("AMERICA"))}, {}, 0});
  q.push_back({"Q08", G::kCube2D, both(F::kSum), {"c_name", "p_name"}, {cmp("p_brand", Op::kEq, brand25)},
               asc({"c_name", "p_name"}), 0});
  q.push_back({"Q09", G::kCube2D, both(F::kSum), {"n_name", "p_name"}, {cmp("p_brand", Op::kEq, brand25)},
               asc({"n_name", "p_name"}), 0});
  q.push_back({"Q10", G::kCube2D, both(F::kSum), {"r_name", "p_name"}, {cmp("p_brand", Op::kEq, brand25)},
               asc({"r_name", "p_name"}), 0});
  q.push_back({"Q11", G::kCube2D, both(F::kMax), {"s_name", "p_name"},
               {cmp("s_acctbal", Op::kLt, Decimal::from_integer(0))}, asc({"s_name", "p_name"}), 0});
  q.push_back({"Q12", G::kCube3D, both(F::kSum), {"c_name", "p_name", "y_yearkey"}, {},
               asc({"c_name", "p_name", "y_yearkey"}), 0});
  q.push_back({"Q13", G::kCube3D, both(F::kSum), {"c_name", "p_name", "y_yearkey"},
               {cmp("y_yearkey", Op::kGt, std::int64_t{2000}), cmp("c_acctbal", Op::kGt, Decimal::from_integer(5000))},
               asc({"c_name", "p_name", "y_yearkey"}), 0});
  q.push_back({"Q14", G::kCube3D, both(F::kSum), {"c_name", "p_name", "y_yearkey"},
               {cmp("c_mktsegment", Op::kEq, std::string("AUTOMOBILE")), cmp("y_yearkey", Op::kEq, std::int64_t{2002})},
               asc({"c_name", "p_name", "y_yearkey"}), 0});
  q.push_back({"Q15", G::kComplexHierarchy, both(F::kAvg), {"t_name"}, {}, asc({"t_name"}), 0});
  q.push_back({"Q16", G::kComplexHierarchy, both(F::kAvg), {"t_name"}, {cmp("t_name", Op::kEq, std::string("BRUSHED"))},
               asc({"t_name"}), 0});
  q.push_back({"Q17", G::kComplexHierarchy, both(F::kAvg), {"p_name"}, {cmp("t_name", Op::kEq, std::string("BRUSHED"))},
               asc({"p_name"}), 0});
  q.push_back({"Q18", G::kComplexHierarchy, both(F::kSum), {"p_name"}, {cmp("p_size", Op::kGt, std::int64_t{40})},
               asc({"p_name"}), 0});
  q.push_back({"Q19", G::kComplexHierarchy, both(F::kSum), {"t_name"}, {cmp("p_size", Op::kGt, std::int64_t{40})},
               asc({"t_name"}), 0});
  q.push_back({"Q20", G::kComplexHierarchy, both(F::kSum), {"t_name"}, {cmp("p_size", Op::kGt, std::int64_t{40})},
               asc({"t_name"}), 1});
  return q;
}

}  // namespace

std::vector<QuerySpec> full_workload() {
  static const std::vector<QuerySpec> all = make_workload();
  return all;
}

std::vector<QuerySpec> build_workload(const WorkloadConfig& wc) {
  std::vector<QuerySpec> out;
  for (auto& q : full_workload())
    if (wc.enabled(q.group)) out.push_back(std::move(q));
  return out;
}

std::optional<QuerySpec> find_query(std::string_view id) {
  for (auto& q : full_workload())
    if (q.id == id) return q;
  return std::nullopt;
}

const std::vector<AttributeInfo>& vocabulary() {
  using K = ValueKind;
  static const std::vector<AttributeInfo> v = {
      {Attr::kCustkey, "c_custkey", "Customer.c_custkey", Role::kCustomer, "CustomerDim", "Customer", "c_custkey", K::kInteger},
      {Attr::kCustName, "c_name", "Customer.c_name", Role::kCustomer, "CustomerDim", "Customer", "c_name", K::kString},
      {Attr::kCustAcctbal, "c_acctbal", "Customer.c_acctbal", Role::kCustomer, "CustomerDim", "Customer", "c_acctbal", K::kDecimal},
      {Attr::kMktsegment, "c_mktsegment", "Customer.c_mktsegment", Role::kCustomer, "CustomerDim", "Customer", "c_mktsegment", K::kString},
      {Attr::kCustNation, "n_name", "C_Nation.n_name", Role::kCustomer, "CustomerDim", "C_Nation", "n_name", K::kString},
      {Attr::kCustRegion, "r_name", "C_Region.r_name", Role::kCustomer, "CustomerDim", "C_Region", "r_name", K::kString},
      {Attr::kSuppkey, "s_suppkey", "Supplier.s_suppkey", Role::kSupplier, "SupplierDim", "Supplier", "s_suppkey", K::kInteger},
      {Attr::kSuppName, "s_name", "Supplier.s_name", Role::kSupplier, "SupplierDim", "Supplier", "s_name", K::kString},
      {Attr::kSuppAcctbal, "s_acctbal", "Supplier.s_acctbal", Role::kSupplier, "SupplierDim", "Supplier", "s_acctbal", K::kDecimal},
      {Attr::kSuppNation, "S_Nation.n_name", "S_Nation.n_name", Role::kSupplier, "SupplierDim", "S_Nation", "n_name", K::kString},
      {Attr::kSuppRegion, "S_Region.r_name", "S_Region.r_name", Role::kSupplier, "SupplierDim", "S_Region", "r_name", K::kString},
      {Attr::kPartkey, "p_partkey", "Part.p_partkey", Role::kPart, "PartDim", "Part", "p_partkey", K::kInteger},
      {Attr::kPartName, "p_name", "Part.p_name", Role::kPart, "PartDim", "Part", "p_name", K::kString},
      {Attr::kBrand, "p_brand", "Part.p_brand", Role::kPart, "PartDim", "Part", "p_brand", K::kString},
      {Attr::kRetailprice, "p_retailprice", "Part.p_retailprice", Role::kPart, "PartDim", "Part", "p_retailprice", K::kDecimal},
      {Attr::kSize, "p_size", "Part.p_size", Role::kPart, "PartDim", "Part", "p_size", K::kInteger},
      {Attr::kCategory, "t_name", "Category.t_name", Role::kPart, "PartDim", "Category", "t_name", K::kString},
      {Attr::kDatekey, "d_datekey", "Day.d_datekey", Role::kDate, "Date", "Day", "d_datekey", K::kInteger},
      {Attr::kDayname, "d_dayname", "Day.d_dayname", Role::kDate, "Date", "Day", "d_dayname", K::kString},
      {Attr::kMonthkey, "m_monthkey", "Month.m_monthkey", Role::kDate, "Date", "Month", "m_monthkey", K::kInteger},
      {Attr::kMonthname, "m_monthname", "Month.m_monthname", Role::kDate, "Date", "Month", "m_monthname", K::kString},
      {Attr::kYearkey, "y_yearkey", "Year.y_yearkey", Role::kDate, "Date", "Year", "y_yearkey", K::kInteger},
  };
  return v;
}

const AttributeInfo* resolve_attribute(std::string_view name, const WarehouseModel& model) {
  for (const auto& a : vocabulary()) {
    if (a.name != name && a.qualified != name) continue;
    const DimensionDef* d = model.find_dimension(std::string(a.dimension));
    if (d == nullptr || d->find_level(std::string(a.level)) == nullptr) return nullptr;
    return &a;
  }
  return nullptr;
}

std::vector<std::string> validate_query(const QuerySpec& q, const WarehouseModel& model) {
  std::vector<std::string> out;
  const std::string where = q.id + ": ";
  if (q.aggregations.empty()) out.push_back(where + "no aggregations");
  for (const auto& a : q.aggregations) {
    const auto& ms = model.fact.measures;
    if (std::find(ms.begin(), ms.end(), a.measure) == ms.end()) out.push_back(where + "unknown measure " + a.measure);
  }
  for (const auto& g : q.group_by)
    if (resolve_attribute(g, model) == nullptr) out.push_back(where + "unknown grouping attribute " + g);
  for (const auto& c : q.restriction) {
    const AttributeInfo* a = resolve_attribute(c.attribute, model);
    if (a == nullptr) {
      out.push_back(where + "unknown restriction attribute " + c.attribute);
      continue;
    }
    const ValueKind effective = c.transform == Transform::kQuarter ? ValueKind::kInteger : a->kind;
    if (c.transform == Transform::kQuarter && a->kind != ValueKind::kInteger)
      out.push_back(where + "Quarter() applied to non-integer attribute " + c.attribute);
    const bool numeric_attr = effective != ValueKind::kString;
    const bool numeric_lit = kind_of(c.literal) != ValueKind::kString;
    if (numeric_attr != numeric_lit)
      out.push_back(where + "literal for " + c.attribute + " has kind " + std::string(kind_name(kind_of(c.literal))));
  }
  for (const auto& o : q.ordering)
    if (std::find(q.group_by.begin(), q.group_by.end(), o.attribute) == q.group_by.end())
      out.push_back(where + "ordering attribute " + o.attribute + " is not a grouping attribute");
  if (q.category_depth < 0 || q.category_depth > 1) out.push_back(where + "category depth must be 0 or 1");
  return out;
}

}  // namespace xweb
