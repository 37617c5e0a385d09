#pragma once

#include <string>
#include <utility>
#include <vector>

namespace xweb {

/// One granularity tier of a dimension hierarchy.
struct LevelDef {
  std::string id;
  std::vector<std::string> rollup;     // coarser levels
  std::vector<std::string> drilldown;  // finer levels

  bool operator==(const LevelDef&) const = default;
};

struct DimensionDef {
  std::string id;
  std::string path;  // document name, e.g. "d_date.xml"
  /// Finest level first; facts reference levels.front().
  std::vector<LevelDef> levels;

  const LevelDef* find_level(const std::string& level_id) const;
  bool operator==(const DimensionDef&) const = default;
};

struct DimensionRef {
  std::string dimension;  // DimensionDef::id
  std::string attribute;  // element name carried by each fact, e.g. "c_custkey"

  bool operator==(const DimensionRef&) const = default;
};

struct FactDef {
  std::string id;
  std::string path;
  std::vector<std::string> measures;
  std::vector<DimensionRef> dimrefs;

  bool operator==(const FactDef&) const = default;
};

/// In-memory twin of dw-model.xml. Immutable once built.
struct WarehouseModel {
  FactDef fact;
  std::vector<DimensionDef> dimensions;

  const DimensionDef* find_dimension(const std::string& dimension_id) const;
  bool operator==(const WarehouseModel&) const = default;
};

/// The XWeB schema: Sale facts over Date, PartDim, CustomerDim and SupplierDim.
WarehouseModel build_default_model();

/// One message per violated invariant; empty when the model is valid.
std::vector<std::string> validate_model(const WarehouseModel& model);

}  // namespace xweb
