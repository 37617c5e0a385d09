#include "xweb/xquery.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "xweb/error.hpp"

namespace xweb {
namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out += "\"\"";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out + "\"";
}

std::string literal(const Value& v) {
  switch (kind_of(v)) {
    case ValueKind::kString:
      return quote(std::get<std::string>(v));
    case ValueKind::kDecimal:
      return std::get<Decimal>(v).to_string();
    case ValueKind::kInteger:
      break;
  }
  return std::to_string(std::get<std::int64_t>(v));
}

// Levels along each chain, finest first, and the variable each binds.
struct Chain {
  Role role;
  const char* vars[3];
};
constexpr Chain kChains[] = {
    {Role::kCustomer, {"c", "cn", "cr"}},
    {Role::kSupplier, {"s", "sn", "sr"}},
    {Role::kPart, {"p", nullptr, nullptr}},
    {Role::kDate, {"d", "m", "y"}},
};

int chain_depth(const AttributeInfo& a) {
  switch (a.id) {
    case Attr::kCustNation:
    case Attr::kSuppNation:
    case Attr::kMonthkey:
    case Attr::kMonthname:
      return 2;
    case Attr::kCustRegion:
    case Attr::kSuppRegion:
    case Attr::kYearkey:
      return 3;
    default:
      return 1;
  }
}

const char* var_of(const AttributeInfo& a) {
  for (const auto& ch : kChains)
    if (ch.role == a.role) return ch.vars[chain_depth(a) - 1];
  return "?";
}

std::string typed(const AttributeInfo& a) {
  const std::string path = "$" + std::string(var_of(a)) + "/" + std::string(a.element);
  switch (a.kind) {
    case ValueKind::kInteger:
      return "xs:integer(" + path + ")";
    case ValueKind::kDecimal:
      return "xs:decimal(" + path + ")";
    case ValueKind::kString:
      break;
  }
  return "string(" + path + ")";
}

std::string fact_ref(const WarehouseModel& model, std::string_view dimension) {
  for (const auto& r : model.fact.dimrefs)
    if (r.dimension == dimension) return r.attribute;
  throw ValidationError("fact has no reference to dimension " + std::string(dimension));
}

}  // namespace

std::string render_xquery(const QuerySpec& q, const WarehouseModel& model) {
  if (auto problems = validate_query(q, model); !problems.empty()) throw ValidationError(problems.front());

  std::map<Role, int> depth;
  bool category_key = false;
  std::vector<const Comparison*> on_category;
  std::vector<std::pair<const AttributeInfo*, const Comparison*>> plain;
  std::vector<const AttributeInfo*> keys;
  for (const auto& g : q.group_by) {
    const AttributeInfo* a = resolve_attribute(g, model);
    keys.push_back(a);
    depth[a->role] = std::max(depth[a->role], chain_depth(*a));
    category_key = category_key || a->id == Attr::kCategory;
  }
  for (const auto& c : q.restriction) {
    const AttributeInfo* a = resolve_attribute(c.attribute, model);
    depth[a->role] = std::max(depth[a->role], chain_depth(*a));
    if (a->id == Attr::kCategory)
      on_category.push_back(&c);
    else
      plain.emplace_back(a, &c);
  }
  const bool uses_category = category_key || !on_category.empty();

  std::ostringstream x;
  x << "xquery version \"3.1\";\n";
  x << "(: " << q.id << " [" << group_name(q.group) << "] :)\n\n";

  // Member sequences of every level the query touches.
  for (const auto& ch : kChains) {
    auto it = depth.find(ch.role);
    if (it == depth.end()) continue;
    const AttributeInfo* any = nullptr;
    for (const auto& a : vocabulary())
      if (a.role == ch.role) any = &a;
    const DimensionDef* dim = model.find_dimension(std::string(any->dimension));
    for (int i = 0; i < it->second; ++i) {
      x << "declare variable $" << ch.vars[i] << "_all := doc(" << quote(dim->path) << ")/dimension/Level[@id = "
        << quote(dim->levels.at(i).id) << "]/instance;\n";
    }
  }
  if (uses_category) {
    const DimensionDef* dim = model.find_dimension("PartDim");
    x << "declare variable $categories := doc(" << quote(dim->path)
      << ")/dimension/Level[@id = \"Category\"]/instance;\n\n";
    x << "declare function local:tops($name as xs:string) as xs:string* {\n"
         "  let $parents := $categories[@id = $name]/rollup[@level = \"Category\"]/@ref/string()\n"
         "  return if (empty($parents)) then $name\n"
         "         else distinct-values(for $p in $parents return local:tops($p))\n"
         "};\n";
  }
  // Joined, filtered facts; one <b> per (fact, group key).
  x << "\ndeclare variable $bindings := (\n";
  x << "  for $f in doc(" << quote(model.fact.path) << ")/facts/fact\n";

  std::vector<std::string> conditions;
  for (const auto& ch : kChains) {
    auto it = depth.find(ch.role);
    if (it == depth.end()) continue;
    const AttributeInfo* any = nullptr;
    for (const auto& a : vocabulary())
      if (a.role == ch.role) any = &a;
    const DimensionDef* dim = model.find_dimension(std::string(any->dimension));
    x << "  let $" << ch.vars[0] << " := $" << ch.vars[0] << "_all[@id = $f/"
      << fact_ref(model, any->dimension) << "]\n";
    conditions.push_back(std::string("exists($") + ch.vars[0] + ")");
    for (int i = 1; i < it->second; ++i) {
      x << "  let $" << ch.vars[i] << " := $" << ch.vars[i] << "_all[@id = $" << ch.vars[i - 1]
        << "/rollup[@level = " << quote(dim->levels.at(i).id) << "]/@ref]\n";
      conditions.push_back(std::string("exists($") + ch.vars[i] + ")");
    }
  }
  static const std::map<CompareOp, const char*> ops = {{CompareOp::kEq, "eq"}, {CompareOp::kNe, "ne"},
                                                       {CompareOp::kLt, "lt"}, {CompareOp::kLe, "le"},
                                                       {CompareOp::kGt, "gt"}, {CompareOp::kGe, "ge"}};
  for (const auto& [a, c] : plain) {
    std::string lhs = typed(*a);
    if (c->transform == Transform::kQuarter) lhs = "xs:integer(ceiling(" + lhs + " div 3))";
    conditions.push_back(lhs + " " + ops.at(c->op) + " " + literal(c->literal));
  }
  auto category_test = [&](const std::string& var) {
    std::string out;
    for (const Comparison* c : on_category) {
      if (!out.empty()) out += " and ";
      out += var + " " + ops.at(c->op) + " " + literal(c->literal);
    }
    return out;
  };
  const std::string cats = q.category_depth == 0
                               ? "distinct-values($p/rollup[@level = \"Category\"]/@ref/string())"
                               : "distinct-values(for $r in $p/rollup[@level = \"Category\"]/@ref/string() "
                                 "return local:tops($r))";
  if (uses_category && !category_key)
    conditions.push_back("(some $t in " + cats + " satisfies " + category_test("$t") + ")");
  if (!conditions.empty()) {
    x << "  where ";
    for (std::size_t i = 0; i < conditions.size(); ++i) x << (i ? "\n    and " : "") << conditions[i];
    x << "\n";
  }
  if (category_key) {
    x << "  for $t in " << cats << "\n";
    if (!on_category.empty()) x << "  where " << category_test("$t") << "\n";
  }

  std::vector<std::string> key_exprs;
  for (const auto* k : keys) key_exprs.push_back(k->id == Attr::kCategory ? "$t" : typed(*k));
  std::vector<std::string> measures;
  for (const auto& a : q.aggregations)
    if (std::find(measures.begin(), measures.end(), a.measure) == measures.end()) measures.push_back(a.measure);

  x << "  return <b k=\"{string-join((";
  for (std::size_t i = 0; i < key_exprs.size(); ++i) x << (i ? ", " : "") << "string(" << key_exprs[i] << ")";
  x << "), \"|\")}\">{";
  std::vector<std::string> content;
  for (std::size_t i = 0; i < key_exprs.size(); ++i)
    content.push_back("<k" + std::to_string(i) + ">{" + key_exprs[i] + "}</k" + std::to_string(i) + ">");
  for (const auto& m : measures) content.push_back("$f/" + m);
  for (std::size_t i = 0; i < content.size(); ++i) x << (i ? ", " : "") << content[i];
  x << "}</b>\n);\n";

  // Grouping: one iteration per distinct key over the bindings.
  x << "\n<result query=" << quote(q.id) << ">{\n";
  x << "  for $key in distinct-values($bindings/@k)\n";
  x << "  let $g := $bindings[@k = $key]\n";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::string path = "$g[1]/k" + std::to_string(i);
    std::string cast = "string(" + path + ")";
    if (keys[i]->kind == ValueKind::kInteger) cast = "xs:integer(" + path + ")";
    if (keys[i]->kind == ValueKind::kDecimal) cast = "xs:decimal(" + path + ")";
    x << "  let $k" << i << " := " << cast << "\n";
  }
  std::map<std::string, std::string> by_measure;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    by_measure[measures[i]] = "$v" + std::to_string(i);
    x << "  let $v" << i << " := $g/" << measures[i] << " ! xs:decimal(.)\n";
  }
  x << "  where exists((";
  for (std::size_t i = 0; i < measures.size(); ++i) x << (i ? ", " : "") << by_measure[measures[i]];
  x << "))\n";

  std::vector<std::string> order;
  std::vector<bool> ordered(keys.size(), false);
  for (const auto& o : q.ordering) {
    for (std::size_t i = 0; i < q.group_by.size(); ++i) {
      if (q.group_by[i] != o.attribute || ordered[i]) continue;
      order.push_back("$k" + std::to_string(i) + (o.descending ? " descending" : " ascending"));
      ordered[i] = true;
    }
  }
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!ordered[i]) order.push_back("$k" + std::to_string(i) + " ascending");
  if (!order.empty()) {
    x << "  order by ";
    for (std::size_t i = 0; i < order.size(); ++i) x << (i ? ", " : "") << order[i];
    x << "\n";
  }

  x << "  return <row>{\n";
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < keys.size(); ++i)
    parts.push_back("    <" + q.group_by[i] + ">{$k" + std::to_string(i) + "}</" + q.group_by[i] + ">");
  for (const auto& a : q.aggregations) {
    const std::string& v = by_measure[a.measure];
    std::string expr;
    switch (a.fn) {
      case AggregateFn::kMin:
        expr = "min(" + v + ")";
        break;
      case AggregateFn::kMax:
        expr = "max(" + v + ")";
        break;
      case AggregateFn::kSum:
        expr = "sum(" + v + ")";
        break;
      case AggregateFn::kAvg:
        expr = "round(avg(" + v + "), 2)";
        break;
    }
    const std::string col = a.column();
    parts.push_back("    if (exists(" + v + ")) then <" + col + ">{" + expr + "}</" + col + "> else ()");
  }
  for (std::size_t i = 0; i < parts.size(); ++i) x << parts[i] << (i + 1 < parts.size() ? ",\n" : "\n");
  x << "  }</row>\n}</result>\n";
  return x.str();
}

std::vector<std::filesystem::path> export_workload(const std::vector<QuerySpec>& queries, const WarehouseModel& model,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> out;
  for (const auto& q : queries) {
    const auto path = dir / (q.id + ".xq");
    std::ofstream f(path, std::ios::binary);
    f << render_xquery(q, model);
    if (!f) throw Error("cannot write " + path.string());
    out.push_back(path);
  }
  return out;
}

}  // namespace xweb
