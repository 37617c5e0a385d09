#include "xweb/oracle.hpp"

#include <algorithm>

#include "xweb/error.hpp"

namespace xweb {
namespace {

// Numbers as cents, so integers and decimals compare on one scale.
struct Cell {
  bool numeric = false;
  std::int64_t cents = 0;
  std::string text;
  Value original;
};

Cell cell(const Value& v) {
  Cell c;
  c.original = v;
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    c.numeric = true;
    c.cents = *i * 100;
  } else if (const auto* d = std::get_if<Decimal>(&v)) {
    c.numeric = true;
    c.cents = d->cents();
  } else {
    c.text = std::get<std::string>(v);
  }
  return c;
}

int cmp(const Cell& a, const Cell& b) {
  if (a.numeric != b.numeric) throw ValidationError("oracle: string compared with number");
  if (a.numeric) return a.cents < b.cents ? -1 : a.cents > b.cents ? 1 : 0;
  return a.text < b.text ? -1 : a.text > b.text ? 1 : 0;
}

struct Tuple {
  std::vector<std::pair<std::string, Cell>> attrs;
  const Cell* get(const std::string& name) const {
    for (const auto& [n, c] : attrs)
      if (n == name) return &c;
    return nullptr;
  }
  void put(std::string name, const Value& v) { attrs.emplace_back(std::move(name), cell(v)); }
};

template <typename T, typename K>
const T* scan(const std::vector<T>& v, K key) {
  for (const auto& x : v)
    if (key(x)) return &x;
  return nullptr;
}

// Top-level ancestors of one category, by walking the edge list.
void tops(const std::string& name, const CategoryTaxonomy& t, std::vector<std::string>& out) {
  bool has_parent = false;
  for (const auto& [child, parent] : t.edges()) {
    if (child != name) continue;
    has_parent = true;
    tops(parent, t, out);
  }
  if (!has_parent && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

// Joined attributes of one fact; absent chains are simply not recorded.
Tuple flatten(const Fact& f, const Warehouse& w) {
  const auto& d = w.dimensions;
  Tuple t;
  if (const auto& k = f[Slot::kCustomer]) {
    if (const Customer* c = scan(d.customers, [&](const Customer& x) { return x.custkey == *k; })) {
      t.put("c_custkey", c->custkey);
      t.put("c_name", c->name);
      t.put("c_acctbal", c->acctbal);
      t.put("c_mktsegment", c->mktsegment);
      if (const Nation* n = scan(d.nations, [&](const Nation& x) { return x.key == c->nation; })) {
        t.put("n_name", n->name);
        t.put("C_Nation.n_name", n->name);
        if (const Region* r = scan(d.regions, [&](const Region& x) { return x.key == n->region; })) {
          t.put("r_name", r->name);
          t.put("C_Region.r_name", r->name);
        }
      }
    }
  }
  if (const auto& k = f[Slot::kSupplier]) {
    if (const Supplier* s = scan(d.suppliers, [&](const Supplier& x) { return x.suppkey == *k; })) {
      t.put("s_suppkey", s->suppkey);
      t.put("s_name", s->name);
      t.put("s_acctbal", s->acctbal);
      if (const Nation* n = scan(d.nations, [&](const Nation& x) { return x.key == s->nation; })) {
        t.put("S_Nation.n_name", n->name);
        if (const Region* r = scan(d.regions, [&](const Region& x) { return x.key == n->region; }))
          t.put("S_Region.r_name", r->name);
      }
    }
  }
  if (const auto& k = f[Slot::kPart]) {
    for (std::size_t i = 0; i < d.parts.size(); ++i) {
      const Part& p = d.parts[i];
      if (p.partkey != *k) continue;
      t.put("p_partkey", p.partkey);
      t.put("p_name", p.name);
      t.put("p_brand", p.brand);
      t.put("p_retailprice", p.retailprice);
      t.put("p_size", p.size);
      break;
    }
  }
  if (const auto& k = f[Slot::kDate]) {
    if (const Day* day = scan(d.days, [&](const Day& x) { return x.datekey == *k; })) {
      t.put("d_datekey", day->datekey);
      t.put("d_dayname", day->dayname);
      if (const Month* m = scan(d.months, [&](const Month& x) { return x.key == day->month; })) {
        t.put("m_monthkey", m->monthkey);
        t.put("m_monthname", m->monthname);
        if (const Year* y = scan(d.years, [&](const Year& x) { return x.yearkey == m->year; }))
          t.put("y_yearkey", y->yearkey);
      }
    }
  }
  return t;
}

std::vector<std::string> fact_categories(const Fact& f, const Warehouse& w, int depth) {
  std::vector<std::string> out;
  const auto& k = f[Slot::kPart];
  if (!k) return out;
  for (std::size_t i = 0; i < w.dimensions.parts.size(); ++i) {
    if (w.dimensions.parts[i].partkey != *k) continue;
    for (const auto& c : w.assignment.catsets.at(i)) {
      if (depth == 0) {
        if (std::find(out.begin(), out.end(), c.name) == out.end()) out.push_back(c.name);
      } else {
        tops(c.name, w.taxonomy, out);
      }
    }
    break;
  }
  return out;
}

bool satisfied(const Comparison& c, const Cell& attr) {
  Cell lhs = attr;
  if (c.transform == Transform::kQuarter) {
    const std::int64_t m = attr.cents / 100;
    lhs.cents = ((m - 1) / 3 + 1) * 100;
  }
  const int r = cmp(lhs, cell(c.literal));
  switch (c.op) {
    case CompareOp::kEq:
      return r == 0;
    case CompareOp::kNe:
      return r != 0;
    case CompareOp::kLt:
      return r < 0;
    case CompareOp::kLe:
      return r <= 0;
    case CompareOp::kGt:
      return r > 0;
    case CompareOp::kGe:
      return r >= 0;
  }
  return false;
}

struct Bucket {
  std::vector<Cell> key;
  std::size_t last_fact = static_cast<std::size_t>(-1);
  std::vector<std::int64_t> count, sum, lo, hi;
};

std::int64_t rounded_mean(std::int64_t sum, std::int64_t n) {
  std::int64_t q = sum / n;
  std::int64_t r = sum % n;
  if (r < 0) {
    q -= 1;
    r += n;
  }
  return 2 * r >= n ? q + 1 : q;
}

}  // namespace

QueryResult oracle_evaluate(const QuerySpec& q, const Warehouse& w) {
  if (w.facts.size() > kOracleFactLimit)
    throw ParameterError("oracle limited to " + std::to_string(kOracleFactLimit) + " facts");

  std::vector<Bucket> buckets;
  const std::size_t na = q.aggregations.size();
  for (std::size_t fi = 0; fi < w.facts.size(); ++fi) {
    const Fact& f = w.facts[fi];
    Tuple base = flatten(f, w);

    // One candidate tuple per category when t_name is involved.
    bool wants_category = false;
    for (const auto& g : q.group_by) wants_category = wants_category || g == "t_name";
    for (const auto& c : q.restriction) wants_category = wants_category || c.attribute == "t_name";
    std::vector<Tuple> tuples;
    if (wants_category) {
      for (const auto& name : fact_categories(f, w, q.category_depth)) {
        Tuple t = base;
        t.put("t_name", name);
        tuples.push_back(std::move(t));
      }
    } else {
      tuples.push_back(std::move(base));
    }

    for (const Tuple& t : tuples) {
      bool ok = true;
      for (const auto& g : q.group_by) ok = ok && t.get(g) != nullptr;
      for (const auto& c : q.restriction) {
        const Cell* a = t.get(c.attribute);
        ok = ok && a != nullptr && satisfied(c, *a);
      }
      if (!ok) continue;

      std::vector<Cell> key;
      for (const auto& g : q.group_by) key.push_back(*t.get(g));
      Bucket* b = nullptr;
      for (auto& candidate : buckets) {
        bool same = true;
        for (std::size_t i = 0; i < key.size() && same; ++i) same = cmp(candidate.key[i], key[i]) == 0;
        if (same) {
          b = &candidate;
          break;
        }
      }
      if (b == nullptr) {
        buckets.push_back(Bucket{key, static_cast<std::size_t>(-1), std::vector<std::int64_t>(na, 0),
                                 std::vector<std::int64_t>(na, 0), std::vector<std::int64_t>(na, 0),
                                 std::vector<std::int64_t>(na, 0)});
        b = &buckets.back();
      }
      if (b->last_fact == fi) continue;  // each fact counts once per group
      b->last_fact = fi;
      for (std::size_t i = 0; i < na; ++i) {
        std::optional<std::int64_t> v;
        if (q.aggregations[i].measure == "f_quantity" && f[Slot::kQuantity]) v = *f[Slot::kQuantity] * 100;
        if (q.aggregations[i].measure == "f_totalamount" && f[Slot::kTotalAmount]) v = *f[Slot::kTotalAmount];
        if (!v) continue;
        if (b->count[i] == 0 || *v < b->lo[i]) b->lo[i] = *v;
        if (b->count[i] == 0 || *v > b->hi[i]) b->hi[i] = *v;
        b->sum[i] += *v;
        b->count[i] += 1;
      }
    }
  }

  QueryResult r;
  r.query = q.id;
  r.key_columns = q.group_by;
  for (const auto& a : q.aggregations) r.value_columns.push_back(std::string(aggregate_name(a.fn)) + "_" + a.measure);

  std::vector<const Bucket*> kept;
  for (const auto& b : buckets) {
    bool any = false;
    for (auto c : b.count) any = any || c > 0;
    if (any) kept.push_back(&b);
  }
  auto position = [&](const std::string& attr) {
    for (std::size_t i = 0; i < q.group_by.size(); ++i)
      if (q.group_by[i] == attr) return i;
    throw ValidationError("oracle: ordering on non-grouping attribute " + attr);
  };
  std::sort(kept.begin(), kept.end(), [&](const Bucket* x, const Bucket* y) {
    for (const auto& o : q.ordering) {
      const std::size_t i = position(o.attribute);
      const int c = cmp(x->key[i], y->key[i]);
      if (c != 0) return o.descending ? c > 0 : c < 0;
    }
    for (std::size_t i = 0; i < x->key.size(); ++i) {
      const int c = cmp(x->key[i], y->key[i]);
      if (c != 0) return c < 0;
    }
    return false;
  });
  for (const Bucket* b : kept) {
    ResultRow row;
    for (const auto& k : b->key) row.keys.push_back(k.original);
    for (std::size_t i = 0; i < na; ++i) {
      if (b->count[i] == 0) {
        row.values.emplace_back();
        continue;
      }
      std::int64_t v = 0;
      switch (q.aggregations[i].fn) {
        case AggregateFn::kMin:
          v = b->lo[i];
          break;
        case AggregateFn::kMax:
          v = b->hi[i];
          break;
        case AggregateFn::kSum:
          v = b->sum[i];
          break;
        case AggregateFn::kAvg:
          v = rounded_mean(b->sum[i], b->count[i]);
          break;
      }
      row.values.emplace_back(Decimal::from_cents(v));
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace xweb
