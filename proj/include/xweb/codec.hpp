#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xweb/model.hpp"
#include "xweb/warehouse.hpp"

namespace xweb {

// ---- Generic dimension documents ------------------------------------------

struct ParentRef {
  std::string level;
  std::string ref;  // instance id in that level
  bool operator==(const ParentRef&) const = default;
};

struct MemberRecord {
  std::string id;
  std::vector<std::pair<std::string, std::string>> attributes;  // name, text value
  std::vector<ParentRef> parents;
  bool operator==(const MemberRecord&) const = default;
};

struct LevelData {
  std::string level;
  std::vector<std::string> attributes;  // names every instance must carry
  std::vector<MemberRecord> instances;
  bool operator==(const LevelData&) const = default;
};

/// Member records of one dimension, one entry per level, finest first.
using DimensionData = std::vector<LevelData>;

std::string emit_model(const WarehouseModel& model);
WarehouseModel parse_model(std::string_view document);

/// Throws ValidationError for level mismatches, missing attributes and
/// parent references to nonexistent instances (naming the orphan).
std::string emit_dimension(const DimensionDef& dimension, const DimensionData& data);

struct ParsedDimension {
  std::string id;
  DimensionData data;
};
ParsedDimension parse_dimension(std::string_view document);

// ---- XWeB member tables <-> generic records --------------------------------

DimensionData date_members(const DimensionSet& dims);
DimensionData part_members(const DimensionSet& dims, const CategoryTaxonomy& taxonomy,
                           const CategoryAssignment& assignment);
DimensionData customer_members(const DimensionSet& dims);
DimensionData supplier_members(const DimensionSet& dims);

// ---- Fact documents ---------------------------------------------------------

/// Streams a fact document: header on construction, one line per fact,
/// footer on finish(). Holds no per-fact state.
class FactWriter {
 public:
  explicit FactWriter(std::ostream& out, std::string_view fact_id = "Sale");
  FactWriter(const FactWriter&) = delete;
  FactWriter& operator=(const FactWriter&) = delete;
  ~FactWriter();

  void write(const Fact& fact);
  void finish();
  std::uint64_t count() const { return count_; }

 private:
  std::ostream& out_;
  std::string line_;
  std::uint64_t count_ = 0;
  bool finished_ = false;
};

std::string emit_facts(const std::vector<Fact>& facts, std::string_view fact_id = "Sale");

/// Child order inside <fact> is free; missing children stay missing. The
/// resulting slot order lists present slots in document order, then the
/// missing ones in canonical order. Unknown child elements are skipped with a
/// warning appended to `warnings` (at most kMaxWarnings).
std::vector<Fact> parse_facts(std::string_view document, std::vector<std::string>* warnings = nullptr);

// ---- Whole warehouse --------------------------------------------------------

struct NamedDocument {
  std::string name;
  std::string bytes;
};

struct WarehouseDocuments {
  NamedDocument model;                    // dw-model.xml
  std::vector<NamedDocument> dimensions;  // model order
  NamedDocument facts;

  /// Model, dimensions, facts.
  std::vector<const NamedDocument*> load_order() const;
};

inline constexpr std::string_view kModelDocument = "dw-model.xml";

/// Dimension documents of `w` (facts excluded), in model order.
std::vector<NamedDocument> emit_dimension_documents(const Warehouse& w);

WarehouseDocuments emit_warehouse(const Warehouse& w);

inline constexpr std::size_t kMaxWarnings = 100;

struct ParsedWarehouse {
  Warehouse warehouse;
  /// Ignored fact elements, then dangling fact references; facts are kept regardless.
  std::vector<std::string> warnings;
  std::uint64_t dangling_references = 0;
};

/// Inverse of emit_warehouse.
ParsedWarehouse parse_warehouse(const WarehouseDocuments& docs);

/// Assembles a warehouse from already-parsed parts (used by the reference driver).
ParsedWarehouse assemble_warehouse(WarehouseModel model, const std::vector<ParsedDimension>& dimensions,
                                   std::vector<Fact> facts, std::vector<std::string> fact_warnings = {});

}  // namespace xweb
