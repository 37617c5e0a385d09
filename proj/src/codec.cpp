#include "xweb/codec.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "xweb/error.hpp"
#include "xweb/xml.hpp"

namespace xweb {

namespace {

constexpr std::string_view kXmlDeclaration = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";

std::string join(const std::vector<std::string>& items, char sep = ' ') {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && !(s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

const std::string& required_attr(const xml::Element& e, std::string_view name) {
  const std::string* v = e.attribute(name);
  if (v == nullptr)
    throw ParseError("<" + e.name + "> lacks attribute '" + std::string(name) + "'", e.line, e.column);
  return *v;
}

std::int64_t to_int(std::string_view text, std::string_view what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ParseError("expected an integer for " + std::string(what) + ", got '" + std::string(text) + "'");
  return v;
}

}  // namespace

// ---- model ------------------------------------------------------------------

std::string emit_model(const WarehouseModel& model) {
  if (model.dimensions.empty()) throw ValidationError("model declares no dimensions");
  const auto problems = validate_model(model);
  if (!problems.empty()) throw ValidationError("invalid warehouse model: " + problems.front());

  std::string out(kXmlDeclaration);
  out += "<xweb-dw-model>\n";
  const auto& f = model.fact;
  out += "  <fact id=\"" + xml::escape(f.id) + "\" path=\"" + xml::escape(f.path) + "\">\n";
  for (const auto& m : f.measures) out += "    <measure id=\"" + xml::escape(m) + "\"/>\n";
  for (const auto& r : f.dimrefs)
    out += "    <dimref dimension=\"" + xml::escape(r.dimension) + "\" attribute=\"" + xml::escape(r.attribute) +
           "\"/>\n";
  out += "  </fact>\n";
  for (const auto& d : model.dimensions) {
    out += "  <dimension id=\"" + xml::escape(d.id) + "\" path=\"" + xml::escape(d.path) + "\">\n";
    for (const auto& l : d.levels)
      out += "    <level id=\"" + xml::escape(l.id) + "\" rollup=\"" + xml::escape(join(l.rollup)) +
             "\" drilldown=\"" + xml::escape(join(l.drilldown)) + "\"/>\n";
    out += "  </dimension>\n";
  }
  out += "</xweb-dw-model>\n";
  return out;
}

WarehouseModel parse_model(std::string_view document) {
  const xml::Element root = xml::parse_document(document);
  if (root.name != "xweb-dw-model")
    throw ParseError("expected <xweb-dw-model> root, found <" + root.name + ">", root.line, root.column);
  WarehouseModel m;
  bool have_fact = false;
  for (const auto& child : root.children) {
    if (child.name == "fact") {
      if (have_fact) throw ParseError("more than one <fact> element", child.line, child.column);
      have_fact = true;
      m.fact.id = required_attr(child, "id");
      m.fact.path = required_attr(child, "path");
      for (const auto& c : child.children) {
        if (c.name == "measure") {
          m.fact.measures.push_back(required_attr(c, "id"));
        } else if (c.name == "dimref") {
          m.fact.dimrefs.push_back({required_attr(c, "dimension"), required_attr(c, "attribute")});
        } else {
          throw ParseError("unexpected <" + c.name + "> in <fact>", c.line, c.column);
        }
      }
    } else if (child.name == "dimension") {
      DimensionDef d;
      d.id = required_attr(child, "id");
      d.path = required_attr(child, "path");
      for (const auto& c : child.children) {
        if (c.name != "level") throw ParseError("unexpected <" + c.name + "> in <dimension>", c.line, c.column);
        LevelDef l;
        l.id = required_attr(c, "id");
        if (const auto* r = c.attribute("rollup")) l.rollup = split_ws(*r);
        if (const auto* dd = c.attribute("drilldown")) l.drilldown = split_ws(*dd);
        d.levels.push_back(std::move(l));
      }
      m.dimensions.push_back(std::move(d));
    } else {
      throw ParseError("unexpected <" + child.name + "> in <xweb-dw-model>", child.line, child.column);
    }
  }
  if (!have_fact) throw ParseError("model document has no <fact> element");
  return m;
}

// ---- dimensions ----------------------------------------------------------------

std::string emit_dimension(const DimensionDef& dimension, const DimensionData& data) {
  if (data.size() != dimension.levels.size())
    throw ValidationError("dimension " + dimension.id + " declares " + std::to_string(dimension.levels.size()) +
                          " levels, data has " + std::to_string(data.size()));
  std::map<std::string, std::unordered_set<std::string>> ids;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].level != dimension.levels[i].id)
      throw ValidationError("dimension " + dimension.id + ": level " + std::to_string(i) + " is " + data[i].level +
                            ", expected " + dimension.levels[i].id);
    auto& set = ids[data[i].level];
    for (const auto& inst : data[i].instances)
      if (!set.insert(inst.id).second)
        throw ValidationError("duplicate instance " + inst.id + " in level " + data[i].level);
  }

  std::string out(kXmlDeclaration);
  out += "<dimension id=\"" + xml::escape(dimension.id) + "\">\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LevelDef& def = dimension.levels[i];
    const LevelData& level = data[i];
    const bool self_rollup = std::find(def.rollup.begin(), def.rollup.end(), def.id) != def.rollup.end();
    const bool needs_parent = !def.rollup.empty() && !self_rollup;
    out += "  <Level id=\"" + xml::escape(level.level) + "\">\n";
    for (const auto& inst : level.instances) {
      for (const auto& name : level.attributes) {
        const bool has = std::any_of(inst.attributes.begin(), inst.attributes.end(),
                                     [&](const auto& a) { return a.first == name; });
        if (!has)
          throw ValidationError("instance " + inst.id + " of level " + level.level + " lacks attribute " + name);
      }
      if (needs_parent && inst.parents.empty())
        throw ValidationError("orphan instance " + inst.id + " of level " + level.level + ": no parent in " +
                              join(def.rollup));
      for (const auto& p : inst.parents) {
        if (std::find(def.rollup.begin(), def.rollup.end(), p.level) == def.rollup.end())
          throw ValidationError("instance " + inst.id + " of level " + level.level + " references level " + p.level +
                                ", which " + level.level + " does not roll up to");
        if (!ids[p.level].count(p.ref))
          throw ValidationError("orphan instance " + inst.id + " of level " + level.level + ": parent " + p.level +
                                "/" + p.ref + " does not exist");
      }
      out += "    <instance id=\"" + xml::escape(inst.id) + "\">";
      for (const auto& [name, value] : inst.attributes)
        out += "<" + name + ">" + xml::escape(value) + "</" + name + ">";
      for (const auto& p : inst.parents)
        out += "<rollup level=\"" + xml::escape(p.level) + "\" ref=\"" + xml::escape(p.ref) + "\"/>";
      out += "</instance>\n";
    }
    out += "  </Level>\n";
  }
  out += "</dimension>\n";
  return out;
}

ParsedDimension parse_dimension(std::string_view document) {
  const xml::Element root = xml::parse_document(document);
  if (root.name != "dimension")
    throw ParseError("expected <dimension> root, found <" + root.name + ">", root.line, root.column);
  ParsedDimension out;
  out.id = required_attr(root, "id");
  for (const auto& lvl : root.children) {
    if (lvl.name != "Level") throw ParseError("unexpected <" + lvl.name + "> in <dimension>", lvl.line, lvl.column);
    LevelData level;
    level.level = required_attr(lvl, "id");
    std::set<std::string> declared;
    auto declare = [&](const std::string& name) {
      if (declared.insert(name).second) level.attributes.push_back(name);
    };
    for (const auto& inst : lvl.children) {
      if (inst.name != "instance")
        throw ParseError("unexpected <" + inst.name + "> in <Level>", inst.line, inst.column);
      MemberRecord rec;
      rec.id = required_attr(inst, "id");
      // Member values may be given as XML attributes or as child elements.
      for (const auto& a : inst.attributes) {
        if (a.name == "id") continue;
        rec.attributes.emplace_back(a.name, a.value);
        declare(a.name);
      }
      for (const auto& c : inst.children) {
        if (c.name == "rollup") {
          rec.parents.push_back({required_attr(c, "level"), required_attr(c, "ref")});
        } else {
          if (!c.children.empty())
            throw ParseError("member attribute <" + c.name + "> must not have child elements", c.line, c.column);
          rec.attributes.emplace_back(c.name, c.text);
          declare(c.name);
        }
      }
      level.instances.push_back(std::move(rec));
    }
    out.data.push_back(std::move(level));
  }
  return out;
}

// ---- typed <-> generic ---------------------------------------------------------

namespace {

MemberRecord record(std::string id, std::vector<std::pair<std::string, std::string>> attrs,
                    std::vector<ParentRef> parents = {}) {
  return MemberRecord{std::move(id), std::move(attrs), std::move(parents)};
}

void geography(const DimensionSet& dims, DimensionData& out, const std::string& nation_level,
               const std::string& region_level) {
  LevelData nations{nation_level, {"n_nationkey", "n_name"}, {}};
  for (const auto& n : dims.nations) {
    const auto key = std::to_string(n.key);
    nations.instances.push_back(
        record(key, {{"n_nationkey", key}, {"n_name", n.name}}, {{region_level, std::to_string(n.region)}}));
  }
  LevelData regions{region_level, {"r_regionkey", "r_name"}, {}};
  for (const auto& r : dims.regions) {
    const auto key = std::to_string(r.key);
    regions.instances.push_back(record(key, {{"r_regionkey", key}, {"r_name", r.name}}));
  }
  out.push_back(std::move(nations));
  out.push_back(std::move(regions));
}

}  // namespace

DimensionData date_members(const DimensionSet& dims) {
  DimensionData out;
  LevelData days{"Day", {"d_datekey", "d_dayname"}, {}};
  for (const auto& d : dims.days) {
    const auto key = std::to_string(d.datekey);
    days.instances.push_back(
        record(key, {{"d_datekey", key}, {"d_dayname", d.dayname}}, {{"Month", std::to_string(d.month)}}));
  }
  LevelData months{"Month", {"m_monthkey", "m_monthname"}, {}};
  for (const auto& m : dims.months)
    months.instances.push_back(record(std::to_string(m.key),
                                      {{"m_monthkey", std::to_string(m.monthkey)}, {"m_monthname", m.monthname}},
                                      {{"Year", std::to_string(m.year)}}));
  LevelData years{"Year", {"y_yearkey"}, {}};
  for (const auto& y : dims.years) {
    const auto key = std::to_string(y.yearkey);
    years.instances.push_back(record(key, {{"y_yearkey", key}}));
  }
  out.push_back(std::move(days));
  out.push_back(std::move(months));
  out.push_back(std::move(years));
  return out;
}

DimensionData part_members(const DimensionSet& dims, const CategoryTaxonomy& taxonomy,
                           const CategoryAssignment& assignment) {
  if (assignment.catsets.size() != dims.parts.size())
    throw ValidationError("category assignment does not cover every part");
  DimensionData out;
  LevelData parts{"Part", {"p_partkey", "p_name", "p_brand", "p_retailprice", "p_size"}, {}};
  for (std::size_t i = 0; i < dims.parts.size(); ++i) {
    const Part& p = dims.parts[i];
    std::vector<ParentRef> cats;
    for (const auto& c : assignment.catsets[i]) cats.push_back({"Category", c.name});
    const auto key = std::to_string(p.partkey);
    parts.instances.push_back(record(key,
                                     {{"p_partkey", key},
                                      {"p_name", p.name},
                                      {"p_brand", p.brand},
                                      {"p_retailprice", p.retailprice.to_string()},
                                      {"p_size", std::to_string(p.size)}},
                                     std::move(cats)));
  }
  LevelData categories{"Category", {"t_name", "t_level"}, {}};
  const auto& names = CategoryTaxonomy::level_names();
  for (int level = 1; level <= 3; ++level) {
    for (const auto& name : names[level - 1]) {
      std::vector<ParentRef> parents;
      for (const auto& parent : taxonomy.parents(name)) parents.push_back({"Category", parent});
      categories.instances.push_back(
          record(name, {{"t_name", name}, {"t_level", std::to_string(level)}}, std::move(parents)));
    }
  }
  out.push_back(std::move(parts));
  out.push_back(std::move(categories));
  return out;
}

DimensionData customer_members(const DimensionSet& dims) {
  DimensionData out;
  LevelData customers{"Customer", {"c_custkey", "c_name", "c_acctbal", "c_mktsegment"}, {}};
  for (const auto& c : dims.customers) {
    const auto key = std::to_string(c.custkey);
    customers.instances.push_back(record(key,
                                         {{"c_custkey", key},
                                          {"c_name", c.name},
                                          {"c_acctbal", c.acctbal.to_string()},
                                          {"c_mktsegment", c.mktsegment}},
                                         {{"C_Nation", std::to_string(c.nation)}}));
  }
  out.push_back(std::move(customers));
  geography(dims, out, "C_Nation", "C_Region");
  return out;
}

DimensionData supplier_members(const DimensionSet& dims) {
  DimensionData out;
  LevelData suppliers{"Supplier", {"s_suppkey", "s_name", "s_acctbal"}, {}};
  for (const auto& s : dims.suppliers) {
    const auto key = std::to_string(s.suppkey);
    suppliers.instances.push_back(
        record(key, {{"s_suppkey", key}, {"s_name", s.name}, {"s_acctbal", s.acctbal.to_string()}},
               {{"S_Nation", std::to_string(s.nation)}}));
  }
  out.push_back(std::move(suppliers));
  geography(dims, out, "S_Nation", "S_Region");
  return out;
}

// ---- facts ----------------------------------------------------------------------

FactWriter::FactWriter(std::ostream& out, std::string_view fact_id) : out_(out) {
  out_ << kXmlDeclaration << "<facts id=\"" << xml::escape(fact_id) << "\">\n";
}

FactWriter::~FactWriter() {
  try {
    finish();
  } catch (...) {
  }
}

void FactWriter::write(const Fact& fact) {
  if (finished_) throw Error("FactWriter: write after finish");
  line_.assign("  <fact>");
  for (Slot slot : fact.order) {
    const auto& v = fact[slot];
    if (!v) continue;
    const auto name = slot_name(slot);
    line_ += '<';
    line_ += name;
    line_ += '>';
    line_ += slot == Slot::kTotalAmount ? Decimal::from_cents(*v).to_string() : std::to_string(*v);
    line_ += "</";
    line_ += name;
    line_ += '>';
  }
  line_ += "</fact>\n";
  out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
  if (!out_) throw Error("fact document write failed");
  ++count_;
}

void FactWriter::finish() {
  if (finished_) return;
  finished_ = true;
  out_ << "</facts>\n";
  out_.flush();
  if (!out_) throw Error("fact document write failed");
}

std::string emit_facts(const std::vector<Fact>& facts, std::string_view fact_id) {
  std::ostringstream out;
  {
    FactWriter writer(out, fact_id);
    for (const auto& f : facts) writer.write(f);
    writer.finish();
  }
  return out.str();
}

std::vector<Fact> parse_facts(std::string_view document, std::vector<std::string>* warnings) {
  using Event = xml::Reader::Event;
  xml::Reader r(document);
  std::vector<Fact> facts;
  if (r.next() != Event::kStartElement || r.name() != "facts") r.fail("expected <facts> root element");

  for (;;) {
    const Event e = r.next();
    if (e == Event::kEndElement) break;  // </facts>
    if (e == Event::kText) {
      if (!blank(r.text())) r.fail("unexpected text in <facts>");
      continue;
    }
    if (r.name() != "fact") r.fail("unexpected <" + r.name() + "> in <facts>");

    Fact f;
    std::size_t placed = 0;
    for (;;) {
      const Event fe = r.next();
      if (fe == Event::kEndElement) break;  // </fact>
      if (fe == Event::kText) {
        if (!blank(r.text())) r.fail("unexpected text in <fact>");
        continue;
      }
      const auto slot = slot_from_name(r.name());
      if (!slot) {
        if (warnings != nullptr && warnings->size() < kMaxWarnings)
          warnings->push_back("fact " + std::to_string(facts.size() + 1) + ": ignored unknown element <" + r.name() +
                              "> at line " + std::to_string(r.line()));
        for (std::size_t open = 1; open > 0;) {
          const Event skip = r.next();
          if (skip == Event::kStartElement) ++open;
          if (skip == Event::kEndElement) --open;
        }
        continue;
      }
      if (f[*slot]) r.fail("duplicate <" + r.name() + "> in fact");
      const std::string element = r.name();
      std::string value;
      for (;;) {
        const Event ve = r.next();
        if (ve == Event::kText) {
          value += r.text();
        } else if (ve == Event::kEndElement) {
          break;
        } else {
          r.fail("nested element inside <" + element + ">");
        }
      }
      const std::string_view trimmed = [&] {
        std::string_view v = value;
        const auto b = v.find_first_not_of(" \t\r\n");
        if (b == std::string_view::npos) return std::string_view{};
        return v.substr(b, v.find_last_not_of(" \t\r\n") - b + 1);
      }();
      try {
        f[*slot] = *slot == Slot::kTotalAmount ? Decimal::parse(trimmed).cents() : to_int(trimmed, element);
      } catch (const ParseError& err) {
        r.fail(err.what());
      }
      f.order[placed++] = *slot;
    }
    for (Slot s : kCanonicalOrder)
      if (!f[s]) f.order[placed++] = s;
    facts.push_back(f);
  }
  r.next();  // end of document (throws on trailing garbage)
  return facts;
}

// ---- whole warehouse ------------------------------------------------------------

std::vector<const NamedDocument*> WarehouseDocuments::load_order() const {
  std::vector<const NamedDocument*> out{&model};
  for (const auto& d : dimensions) out.push_back(&d);
  out.push_back(&facts);
  return out;
}

std::vector<NamedDocument> emit_dimension_documents(const Warehouse& w) {
  std::vector<NamedDocument> out;
  for (const auto& d : w.model.dimensions) {
    DimensionData data;
    if (d.id == "Date") {
      data = date_members(w.dimensions);
    } else if (d.id == "PartDim") {
      data = part_members(w.dimensions, w.taxonomy, w.assignment);
    } else if (d.id == "CustomerDim") {
      data = customer_members(w.dimensions);
    } else if (d.id == "SupplierDim") {
      data = supplier_members(w.dimensions);
    } else {
      throw ValidationError("no member data for dimension " + d.id);
    }
    out.push_back({d.path, emit_dimension(d, data)});
  }
  return out;
}

WarehouseDocuments emit_warehouse(const Warehouse& w) {
  WarehouseDocuments docs;
  docs.model = {std::string(kModelDocument), emit_model(w.model)};
  docs.dimensions = emit_dimension_documents(w);
  docs.facts = {w.model.fact.path, emit_facts(w.facts, w.model.fact.id)};
  return docs;
}

namespace {

const LevelData& find_level(const ParsedDimension& d, std::string_view id) {
  for (const auto& l : d.data)
    if (l.level == id) return l;
  throw ParseError("dimension " + d.id + " has no level " + std::string(id));
}

class Fields {
 public:
  Fields(const MemberRecord& rec, std::string_view level) : rec_(rec), level_(level) {}

  const std::string& str(std::string_view name) const {
    for (const auto& [k, v] : rec_.attributes)
      if (k == name) return v;
    throw ParseError("instance " + rec_.id + " of level " + std::string(level_) + " lacks " + std::string(name));
  }
  std::int64_t integer(std::string_view name) const { return to_int(str(name), name); }
  Decimal decimal(std::string_view name) const { return Decimal::parse(str(name)); }
  std::int64_t parent(std::string_view level) const {
    for (const auto& p : rec_.parents)
      if (p.level == level) return to_int(p.ref, level);
    throw ParseError("instance " + rec_.id + " of level " + std::string(level_) + " has no " + std::string(level) +
                     " parent");
  }
  std::int64_t id() const { return to_int(rec_.id, level_); }

 private:
  const MemberRecord& rec_;
  std::string_view level_;
};

std::pair<std::vector<Nation>, std::vector<Region>> read_geography(const ParsedDimension& d, std::string_view nation_level,
                                                                   std::string_view region_level) {
  std::vector<Nation> nations;
  for (const auto& rec : find_level(d, nation_level).instances) {
    Fields f(rec, nation_level);
    nations.push_back({f.id(), f.str("n_name"), f.parent(region_level)});
  }
  std::vector<Region> regions;
  for (const auto& rec : find_level(d, region_level).instances) {
    Fields f(rec, region_level);
    regions.push_back({f.id(), f.str("r_name")});
  }
  return {std::move(nations), std::move(regions)};
}

}  // namespace

ParsedWarehouse assemble_warehouse(WarehouseModel model, const std::vector<ParsedDimension>& dimensions,
                                   std::vector<Fact> facts, std::vector<std::string> fact_warnings) {
  ParsedWarehouse out;
  out.warnings = std::move(fact_warnings);
  Warehouse& w = out.warehouse;
  auto find = [&](std::string_view id) -> const ParsedDimension& {
    for (const auto& d : dimensions)
      if (d.id == id) return d;
    throw ParseError("warehouse lacks dimension document for " + std::string(id));
  };
  for (const auto& def : model.dimensions) find(def.id);

  // Date
  const auto& date = find("Date");
  for (const auto& rec : find_level(date, "Day").instances) {
    Fields f(rec, "Day");
    w.dimensions.days.push_back({f.integer("d_datekey"), f.str("d_dayname"), f.parent("Month")});
  }
  for (const auto& rec : find_level(date, "Month").instances) {
    Fields f(rec, "Month");
    w.dimensions.months.push_back({f.id(), f.integer("m_monthkey"), f.str("m_monthname"), f.parent("Year")});
  }
  for (const auto& rec : find_level(date, "Year").instances) {
    Fields f(rec, "Year");
    w.dimensions.years.push_back({f.integer("y_yearkey")});
  }

  // Customer and supplier
  const auto& cust = find("CustomerDim");
  for (const auto& rec : find_level(cust, "Customer").instances) {
    Fields f(rec, "Customer");
    w.dimensions.customers.push_back(
        {f.integer("c_custkey"), f.str("c_name"), f.decimal("c_acctbal"), f.str("c_mktsegment"), f.parent("C_Nation")});
  }
  std::tie(w.dimensions.nations, w.dimensions.regions) = read_geography(cust, "C_Nation", "C_Region");
  const auto& supp = find("SupplierDim");
  for (const auto& rec : find_level(supp, "Supplier").instances) {
    Fields f(rec, "Supplier");
    w.dimensions.suppliers.push_back({f.integer("s_suppkey"), f.str("s_name"), f.decimal("s_acctbal"), f.parent("S_Nation")});
  }
  const auto supplier_geo = read_geography(supp, "S_Nation", "S_Region");
  if (supplier_geo.first != w.dimensions.nations || supplier_geo.second != w.dimensions.regions)
    throw ParseError("customer and supplier nation/region tables differ");

  // Part and the category graph
  const auto& part = find("PartDim");
  std::vector<CategoryTaxonomy::Edge> edges;
  for (const auto& rec : find_level(part, "Category").instances)
    for (const auto& p : rec.parents)
      if (p.level == "Category") edges.emplace_back(rec.id, p.ref);
  try {
    w.taxonomy = CategoryTaxonomy(std::move(edges));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("invalid category hierarchy in ") + "PartDim: " + e.what());
  }
  for (const auto& rec : find_level(part, "Part").instances) {
    Fields f(rec, "Part");
    w.dimensions.parts.push_back({f.integer("p_partkey"), f.str("p_name"), f.str("p_brand"),
                                  f.decimal("p_retailprice"), f.integer("p_size")});
    CategorySet set;
    for (const auto& p : rec.parents) {
      if (p.level != "Category") continue;
      const auto level = CategoryTaxonomy::level_of(p.ref);
      if (!level) throw ParseError("part " + rec.id + " references unknown category " + p.ref);
      set.push_back({p.ref, *level});
    }
    w.assignment.catsets.push_back(std::move(set));
  }

  // Dangling fact references are data dirtiness, not errors.
  std::unordered_set<std::int64_t> cust_keys, part_keys, supp_keys, date_keys;
  for (const auto& c : w.dimensions.customers) cust_keys.insert(c.custkey);
  for (const auto& p : w.dimensions.parts) part_keys.insert(p.partkey);
  for (const auto& s : w.dimensions.suppliers) supp_keys.insert(s.suppkey);
  for (const auto& d : w.dimensions.days) date_keys.insert(d.datekey);
  const std::array<std::pair<Slot, const std::unordered_set<std::int64_t>*>, 4> checks = {
      {{Slot::kCustomer, &cust_keys}, {Slot::kPart, &part_keys}, {Slot::kSupplier, &supp_keys}, {Slot::kDate, &date_keys}}};
  for (std::size_t i = 0; i < facts.size(); ++i) {
    for (const auto& [slot, keys] : checks) {
      const auto& v = facts[i][slot];
      if (v && !keys->count(*v)) {
        ++out.dangling_references;
        if (out.warnings.size() < kMaxWarnings)
          out.warnings.push_back("fact " + std::to_string(i + 1) + ": " + std::string(slot_name(slot)) + " " +
                                 std::to_string(*v) + " does not resolve");
      }
    }
  }
  w.model = std::move(model);
  w.facts = std::move(facts);
  return out;
}

ParsedWarehouse parse_warehouse(const WarehouseDocuments& docs) {
  WarehouseModel model = parse_model(docs.model.bytes);
  std::vector<ParsedDimension> dims;
  for (const auto& d : docs.dimensions) dims.push_back(parse_dimension(d.bytes));
  for (const auto& def : model.dimensions) {
    const bool present = std::any_of(docs.dimensions.begin(), docs.dimensions.end(),
                                     [&](const NamedDocument& nd) { return nd.name == def.path; });
    if (!present) throw ParseError("model names " + def.path + " but no such document was supplied");
  }
  if (docs.facts.name != model.fact.path)
    throw ParseError("fact document is " + docs.facts.name + ", model names " + model.fact.path);
  std::vector<std::string> warnings;
  std::vector<Fact> facts = parse_facts(docs.facts.bytes, &warnings);
  return assemble_warehouse(std::move(model), dims, std::move(facts), std::move(warnings));
}

}  // namespace xweb
