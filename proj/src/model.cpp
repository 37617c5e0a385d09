#include "xweb/model.hpp"

#include <algorithm>
#include <set>

namespace xweb {

const LevelDef* DimensionDef::find_level(const std::string& level_id) const {
  for (const auto& level : levels)
    if (level.id == level_id) return &level;
  return nullptr;
}

const DimensionDef* WarehouseModel::find_dimension(const std::string& dimension_id) const {
  for (const auto& d : dimensions)
    if (d.id == dimension_id) return &d;
  return nullptr;
}

WarehouseModel build_default_model() {
  WarehouseModel m;
  m.fact = FactDef{"Sale",
                   "f_sale.xml",
                   {"f_quantity", "f_totalamount"},
                   {{"CustomerDim", "c_custkey"},
                    {"PartDim", "p_partkey"},
                    {"SupplierDim", "s_suppkey"},
                    {"Date", "d_datekey"}}};
  m.dimensions = {
      {"Date",
       "d_date.xml",
       {{"Day", {"Month"}, {}}, {"Month", {"Year"}, {"Day"}}, {"Year", {}, {"Month"}}}},
      {"PartDim",
       "d_part.xml",
       {{"Part", {"Category"}, {}}, {"Category", {"Category"}, {"Part", "Category"}}}},
      {"CustomerDim",
       "d_customer.xml",
       {{"Customer", {"C_Nation"}, {}},
        {"C_Nation", {"C_Region"}, {"Customer"}},
        {"C_Region", {}, {"C_Nation"}}}},
      {"SupplierDim",
       "d_supplier.xml",
       {{"Supplier", {"S_Nation"}, {}},
        {"S_Nation", {"S_Region"}, {"Supplier"}},
        {"S_Region", {}, {"S_Nation"}}}},
  };
  return m;
}

namespace {

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool ends_with_xml(const std::string& path) {
  return path.size() > 4 && path.compare(path.size() - 4, 4, ".xml") == 0;
}

void validate_dimension(const DimensionDef& d, std::vector<std::string>& out) {
  const std::string where = "dimension " + d.id;
  if (d.id.empty()) out.push_back("dimension with empty id");
  if (!ends_with_xml(d.path)) out.push_back(where + ": path '" + d.path + "' does not end in .xml");
  if (d.levels.empty()) out.push_back(where + ": no levels");

  std::set<std::string> seen;
  for (const auto& level : d.levels) {
    if (level.id.empty()) out.push_back(where + ": level with empty id");
    if (!seen.insert(level.id).second) out.push_back(where + ": duplicate level " + level.id);
  }
  for (const auto& level : d.levels) {
    for (const auto& target : level.rollup) {
      const LevelDef* t = d.find_level(target);
      if (t == nullptr) {
        out.push_back(where + ": level " + level.id + " rolls up to unknown level " + target);
      } else if (!contains(t->drilldown, level.id)) {
        out.push_back(where + ": level " + level.id + " rolls up to " + target + " but " + target +
                      " does not drill down to " + level.id);
      }
    }
    for (const auto& target : level.drilldown) {
      const LevelDef* t = d.find_level(target);
      if (t == nullptr) {
        out.push_back(where + ": level " + level.id + " drills down to unknown level " + target);
      } else if (!contains(t->rollup, level.id)) {
        out.push_back(where + ": level " + level.id + " drills down to " + target + " but " + target +
                      " does not roll up to " + level.id);
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_model(const WarehouseModel& model) {
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& d : model.dimensions) {
    if (!ids.insert(d.id).second) out.push_back("duplicate dimension id " + d.id);
    validate_dimension(d, out);
  }

  const auto& f = model.fact;
  if (f.id.empty()) out.push_back("fact with empty id");
  if (!ends_with_xml(f.path)) out.push_back("fact " + f.id + ": path '" + f.path + "' does not end in .xml");
  if (f.measures.empty()) out.push_back("fact " + f.id + ": no measures");
  if (f.dimrefs.empty()) out.push_back("fact " + f.id + ": no dimension references");
  std::set<std::string> referenced;
  for (const auto& ref : f.dimrefs) {
    if (!referenced.insert(ref.dimension).second)
      out.push_back("fact " + f.id + ": dimension " + ref.dimension + " referenced twice");
    if (model.find_dimension(ref.dimension) == nullptr)
      out.push_back("fact " + f.id + ": reference to undeclared dimension " + ref.dimension);
    if (ref.attribute.empty()) out.push_back("fact " + f.id + ": reference to " + ref.dimension + " has no attribute");
  }
  return out;
}

}  // namespace xweb
