#include "xweb/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "xweb/error.hpp"
#include "xweb/xml.hpp"

namespace xweb {

QueryResult result_template(const QuerySpec& q) {
  QueryResult r;
  r.query = q.id;
  r.key_columns = q.group_by;
  for (const auto& a : q.aggregations) r.value_columns.push_back(a.column());
  return r;
}

std::vector<std::string> rollup_categories(const CategorySet& catset, const CategoryTaxonomy& taxonomy, int depth) {
  std::set<std::string> out;
  for (const auto& c : catset) {
    if (depth == 0) {
      out.insert(c.name);
      continue;
    }
    const auto level = CategoryTaxonomy::level_of(c.name);
    if (!level) throw ValidationError("unknown category " + c.name);
    std::vector<std::string> frontier{c.name};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& name : frontier) {
        if (CategoryTaxonomy::level_of(name) == 1) {
          out.insert(name);
          continue;
        }
        auto ps = taxonomy.parents(name);
        if (ps.empty()) throw ValidationError("category " + name + " has no parent");
        next.insert(next.end(), ps.begin(), ps.end());
      }
      frontier = std::move(next);
    }
  }
  return {out.begin(), out.end()};
}

WarehouseIndex::WarehouseIndex(const Warehouse& warehouse) : w_(warehouse) {
  const auto& d = w_.dimensions;
  auto fill = [](Map& m, const auto& v, auto key) {
    m.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m.emplace(key(v[i]), i);
  };
  fill(customers_, d.customers, [](const Customer& c) { return c.custkey; });
  fill(suppliers_, d.suppliers, [](const Supplier& s) { return s.suppkey; });
  fill(nations_, d.nations, [](const Nation& n) { return n.key; });
  fill(regions_, d.regions, [](const Region& r) { return r.key; });
  fill(parts_, d.parts, [](const Part& p) { return p.partkey; });
  fill(days_, d.days, [](const Day& x) { return x.datekey; });
  fill(months_, d.months, [](const Month& m) { return m.key; });
  fill(years_, d.years, [](const Year& y) { return y.yearkey; });
  for (int depth = 0; depth < 2; ++depth) {
    auto& cats = categories_[depth];
    cats.resize(d.parts.size());
    for (std::size_t i = 0; i < d.parts.size() && i < w_.assignment.catsets.size(); ++i)
      cats[i] = rollup_categories(w_.assignment.catsets[i], w_.taxonomy, depth);
  }
}

std::optional<std::size_t> WarehouseIndex::part_index(std::int64_t key) const {
  auto it = parts_.find(key);
  if (it == parts_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& WarehouseIndex::categories(std::size_t index, int depth) const {
  return categories_[depth == 0 ? 0 : 1].at(index);
}

namespace {

// Members a fact resolves to. Only the chains a query needs are filled.
struct Path {
  const Customer* c = nullptr;
  const Nation* cn = nullptr;
  const Region* cr = nullptr;
  const Supplier* s = nullptr;
  const Nation* sn = nullptr;
  const Region* sr = nullptr;
  const Part* p = nullptr;
  std::size_t part = 0;
  const Day* d = nullptr;
  const Month* m = nullptr;
  const Year* y = nullptr;
};

// 0 = not needed, 1 = finest level, 2 = nation/month, 3 = region/year.
struct Needs {
  int customer = 0;
  int supplier = 0;
  int part = 0;
  int date = 0;
};

int level_depth(Attr a) {
  switch (a) {
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

void require(Needs& n, const AttributeInfo& a) {
  const int depth = level_depth(a.id);
  switch (a.role) {
    case Role::kCustomer:
      n.customer = std::max(n.customer, depth);
      break;
    case Role::kSupplier:
      n.supplier = std::max(n.supplier, depth);
      break;
    case Role::kPart:
      n.part = 1;
      break;
    case Role::kDate:
      n.date = std::max(n.date, depth);
      break;
  }
}

bool resolve(const Fact& f, const Needs& n, const WarehouseIndex& ix, Path& p) {
  if (n.customer > 0) {
    const auto& k = f[Slot::kCustomer];
    if (!k || !(p.c = ix.customer(*k))) return false;
    if (n.customer > 1 && !(p.cn = ix.nation(p.c->nation))) return false;
    if (n.customer > 2 && !(p.cr = ix.region(p.cn->region))) return false;
  }
  if (n.supplier > 0) {
    const auto& k = f[Slot::kSupplier];
    if (!k || !(p.s = ix.supplier(*k))) return false;
    if (n.supplier > 1 && !(p.sn = ix.nation(p.s->nation))) return false;
    if (n.supplier > 2 && !(p.sr = ix.region(p.sn->region))) return false;
  }
  if (n.part > 0) {
    const auto& k = f[Slot::kPart];
    if (!k) return false;
    const auto i = ix.part_index(*k);
    if (!i) return false;
    p.part = *i;
    p.p = &ix.warehouse().dimensions.parts[*i];
  }
  if (n.date > 0) {
    const auto& k = f[Slot::kDate];
    if (!k || !(p.d = ix.day(*k))) return false;
    if (n.date > 1 && !(p.m = ix.month(p.d->month))) return false;
    if (n.date > 2 && !(p.y = ix.year(p.m->year))) return false;
  }
  return true;
}

Value attribute_value(Attr a, const Path& p) {
  switch (a) {
    case Attr::kCustkey:
      return p.c->custkey;
    case Attr::kCustName:
      return p.c->name;
    case Attr::kCustAcctbal:
      return p.c->acctbal;
    case Attr::kMktsegment:
      return p.c->mktsegment;
    case Attr::kCustNation:
      return p.cn->name;
    case Attr::kCustRegion:
      return p.cr->name;
    case Attr::kSuppkey:
      return p.s->suppkey;
    case Attr::kSuppName:
      return p.s->name;
    case Attr::kSuppAcctbal:
      return p.s->acctbal;
    case Attr::kSuppNation:
      return p.sn->name;
    case Attr::kSuppRegion:
      return p.sr->name;
    case Attr::kPartkey:
      return p.p->partkey;
    case Attr::kPartName:
      return p.p->name;
    case Attr::kBrand:
      return p.p->brand;
    case Attr::kRetailprice:
      return p.p->retailprice;
    case Attr::kSize:
      return p.p->size;
    case Attr::kDatekey:
      return p.d->datekey;
    case Attr::kDayname:
      return p.d->dayname;
    case Attr::kMonthkey:
      return p.m->monthkey;
    case Attr::kMonthname:
      return p.m->monthname;
    case Attr::kYearkey:
      return p.y->yearkey;
    case Attr::kCategory:
      break;
  }
  throw ValidationError("attribute has no single value");
}

bool holds(CompareOp op, int c) {
  switch (op) {
    case CompareOp::kEq:
      return c == 0;
    case CompareOp::kNe:
      return c != 0;
    case CompareOp::kLt:
      return c < 0;
    case CompareOp::kLe:
      return c <= 0;
    case CompareOp::kGt:
      return c > 0;
    case CompareOp::kGe:
      return c >= 0;
  }
  return false;
}

bool test(const Comparison& c, Value lhs) {
  if (c.transform == Transform::kQuarter)
    lhs = static_cast<std::int64_t>(quarter(static_cast<int>(std::get<std::int64_t>(lhs))));
  return holds(c.op, compare_values(lhs, c.literal));
}

struct Accumulator {
  std::int64_t count = 0;
  std::int64_t sum = 0;
  std::int64_t min = 0;
  std::int64_t max = 0;

  void add(std::int64_t v) {
    if (count == 0 || v < min) min = v;
    if (count == 0 || v > max) max = v;
    sum += v;
    ++count;
  }

  std::optional<Decimal> result(AggregateFn fn) const {
    if (count == 0) return std::nullopt;
    switch (fn) {
      case AggregateFn::kMin:
        return Decimal::from_cents(min);
      case AggregateFn::kMax:
        return Decimal::from_cents(max);
      case AggregateFn::kSum:
        return Decimal::from_cents(sum);
      case AggregateFn::kAvg:
        return Decimal::from_cents(sum).divide_rounded(count);
    }
    return std::nullopt;
  }
};

struct KeyLess {
  bool operator()(const std::vector<Value>& a, const std::vector<Value>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      const int c = compare_values(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

// Measure value in cents; quantities are whole units.
std::optional<std::int64_t> measure_cents(const Fact& f, Slot s) {
  const auto& v = f[s];
  if (!v) return std::nullopt;
  return s == Slot::kQuantity ? *v * 100 : *v;
}

}  // namespace

QueryResult evaluate(const QuerySpec& q, const WarehouseIndex& index, const Deadline& deadline) {
  const Warehouse& w = index.warehouse();
  if (auto problems = validate_query(q, w.model); !problems.empty()) throw ValidationError(problems.front());

  Needs needs;
  std::vector<const AttributeInfo*> keys;
  int category_key = -1;
  for (const auto& g : q.group_by) {
    const AttributeInfo* a = resolve_attribute(g, w.model);
    if (a->id == Attr::kCategory) category_key = static_cast<int>(keys.size());
    keys.push_back(a);
    require(needs, *a);
  }
  std::vector<std::pair<const AttributeInfo*, const Comparison*>> plain;
  std::vector<const Comparison*> on_category;
  for (const auto& c : q.restriction) {
    const AttributeInfo* a = resolve_attribute(c.attribute, w.model);
    require(needs, *a);
    if (a->id == Attr::kCategory)
      on_category.push_back(&c);
    else
      plain.emplace_back(a, &c);
  }
  const bool uses_category = category_key >= 0 || !on_category.empty();

  std::vector<Slot> measures;
  for (const auto& agg : q.aggregations) {
    const auto slot = slot_from_name(agg.measure);
    if (!slot || (*slot != Slot::kQuantity && *slot != Slot::kTotalAmount))
      throw ValidationError(q.id + ": measure " + agg.measure + " has no fact slot");
    measures.push_back(*slot);
  }

  struct Group {
    bool exists = false;
    std::vector<Accumulator> acc;
  };
  std::map<std::vector<Value>, Group, KeyLess> groups;
  auto accumulate = [&](const std::vector<Value>& key, const Fact& f) {
    Group& g = groups[key];
    if (g.acc.empty()) g.acc.resize(measures.size());
    for (std::size_t i = 0; i < measures.size(); ++i) {
      if (auto v = measure_cents(f, measures[i])) {
        g.acc[i].add(*v);
        g.exists = true;
      }
    }
  };

  std::vector<Value> key(keys.size());
  std::size_t n = 0;
  for (const Fact& f : w.facts) {
    if (deadline && (++n & 0xfff) == 0 && Clock::now() > *deadline)
      throw TimeoutError(q.id + " exceeded its deadline");
    Path p;
    if (!resolve(f, needs, index, p)) continue;
    bool pass = true;
    for (const auto& [a, c] : plain) {
      if (!test(*c, attribute_value(a->id, p))) {
        pass = false;
        break;
      }
    }
    if (!pass) continue;
    for (std::size_t i = 0; i < keys.size(); ++i)
      if (static_cast<int>(i) != category_key) key[i] = attribute_value(keys[i]->id, p);
    if (!uses_category) {
      accumulate(key, f);
      continue;
    }
    bool contributed = false;
    for (const auto& cat : index.categories(p.part, q.category_depth)) {
      const Value v = cat;
      bool ok = true;
      for (const Comparison* c : on_category) ok = ok && test(*c, v);
      if (!ok) continue;
      if (category_key < 0) {
        // The fact counts once however many of its categories qualify.
        if (!contributed) accumulate(key, f);
        contributed = true;
        break;
      }
      key[category_key] = v;
      accumulate(key, f);
    }
  }
  if (deadline && Clock::now() > *deadline) throw TimeoutError(q.id + " exceeded its deadline");

  QueryResult r = result_template(q);
  for (const auto& [k, g] : groups) {
    if (!g.exists) continue;
    ResultRow row{k, {}};
    for (std::size_t i = 0; i < measures.size(); ++i) row.values.push_back(g.acc[i].result(q.aggregations[i].fn));
    r.rows.push_back(std::move(row));
  }
  if (!q.ordering.empty()) {
    std::vector<std::pair<std::size_t, bool>> order;
    for (const auto& o : q.ordering) {
      const auto it = std::find(q.group_by.begin(), q.group_by.end(), o.attribute);
      order.emplace_back(static_cast<std::size_t>(it - q.group_by.begin()), o.descending);
    }
    // Rows arrive ascending by all keys, so a stable sort leaves that as the tie-break.
    std::stable_sort(r.rows.begin(), r.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
      for (const auto& [i, desc] : order) {
        const int c = compare_values(a.keys[i], b.keys[i]);
        if (c != 0) return desc ? c > 0 : c < 0;
      }
      return false;
    });
  }
  return r;
}

QueryResult evaluate(const QuerySpec& q, const Warehouse& w, const Deadline& deadline) {
  return evaluate(q, WarehouseIndex(w), deadline);
}

// ---- result exchange ---------------------------------------------------------

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

ValueKind key_kind(const std::string& column) {
  for (const auto& a : vocabulary())
    if (a.name == column || a.qualified == column) return a.kind;
  return ValueKind::kString;
}

}  // namespace

std::string to_csv(const QueryResult& r) {
  std::string out;
  bool first = true;
  for (const auto* cols : {&r.key_columns, &r.value_columns})
    for (const auto& c : *cols) {
      if (!first) out += ',';
      out += csv_cell(c);
      first = false;
    }
  out += '\n';
  for (const auto& row : r.rows) {
    first = true;
    for (const auto& k : row.keys) {
      if (!first) out += ',';
      out += csv_cell(to_string(k));
      first = false;
    }
    for (const auto& v : row.values) {
      if (!first) out += ',';
      if (v) out += v->to_string();
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string to_result_xml(const QueryResult& r) {
  std::string out = "<result query=\"" + xml::escape(r.query) + "\">";
  for (const auto& row : r.rows) {
    out += "<row>";
    for (std::size_t i = 0; i < row.keys.size(); ++i)
      out += "<" + r.key_columns[i] + ">" + xml::escape(to_string(row.keys[i])) + "</" + r.key_columns[i] + ">";
    for (std::size_t i = 0; i < row.values.size(); ++i)
      if (row.values[i])
        out += "<" + r.value_columns[i] + ">" + row.values[i]->to_string() + "</" + r.value_columns[i] + ">";
    out += "</row>";
  }
  return out + "</result>\n";
}

QueryResult parse_result_xml(std::string_view document, const QuerySpec& q) {
  const xml::Element root = xml::parse_document(document);
  if (root.name != "result") throw ParseError("expected <result>, found <" + root.name + ">", root.line, root.column);
  QueryResult r = result_template(q);
  for (const auto& row_el : root.children) {
    if (row_el.name != "row") throw ParseError("unexpected <" + row_el.name + "> in result", row_el.line, row_el.column);
    ResultRow row;
    for (const auto& col : r.key_columns) {
      const xml::Element* e = row_el.child(col);
      if (e == nullptr) throw ParseError("row lacks key column " + col, row_el.line, row_el.column);
      row.keys.push_back(parse_value(e->text, key_kind(col)));
    }
    for (const auto& col : r.value_columns) {
      const xml::Element* e = row_el.child(col);
      if (e == nullptr || e->text.empty())
        row.values.emplace_back();
      else
        row.values.emplace_back(Decimal::parse(e->text));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

QueryResult normalized(QueryResult r) {
  std::stable_sort(r.rows.begin(), r.rows.end(),
                   [](const ResultRow& a, const ResultRow& b) { return KeyLess{}(a.keys, b.keys); });
  return r;
}

std::optional<std::string> diff_results(const QueryResult& expected, const QueryResult& actual) {
  const std::string id = expected.query.empty() ? actual.query : expected.query;
  if (expected.key_columns != actual.key_columns || expected.value_columns != actual.value_columns)
    return id + ": column layout differs";
  const QueryResult e = normalized(expected);
  const QueryResult a = normalized(actual);
  auto describe = [](const ResultRow& row) {
    std::string s = "(";
    for (std::size_t i = 0; i < row.keys.size(); ++i) s += (i ? ", " : "") + to_string(row.keys[i]);
    return s + ")";
  };
  const std::size_t n = std::min(e.rows.size(), a.rows.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ResultRow& x = e.rows[i];
    const ResultRow& y = a.rows[i];
    if (KeyLess{}(x.keys, y.keys)) return id + ": missing row " + describe(x);
    if (KeyLess{}(y.keys, x.keys)) return id + ": unexpected row " + describe(y);
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (x.values[j] == y.values[j]) continue;
      return id + ": row " + describe(x) + " " + e.value_columns[j] + " expected " +
             (x.values[j] ? x.values[j]->to_string() : "absent") + ", got " +
             (y.values[j] ? y.values[j]->to_string() : "absent");
    }
  }
  if (e.rows.size() != a.rows.size())
    return id + ": expected " + std::to_string(e.rows.size()) + " rows, got " + std::to_string(a.rows.size());
  return std::nullopt;
}

}  // namespace xweb
