#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xweb {

/// The three-level, many-to-many category graph behind the Part/Category
/// hierarchy. Level 1 is the coarsest.
class CategoryTaxonomy {
 public:
  using Edge = std::pair<std::string, std::string>;  // (child, parent)

  /// The fixed category names per level (1-based level index).
  static const std::array<std::vector<std::string>, 3>& level_names();

  /// Validates and builds; throws ValidationError naming the offending category.
  explicit CategoryTaxonomy(std::vector<Edge> rollup_edges);

  const std::vector<Edge>& edges() const { return edges_; }

  /// 1, 2 or 3; nullopt for names outside the fixed category table.
  static std::optional<int> level_of(std::string_view name);

  std::vector<std::string> parents(std::string_view category) const;
  std::vector<std::string> children(std::string_view category) const;

  bool operator==(const CategoryTaxonomy&) const = default;

 private:
  std::vector<Edge> edges_;  // sorted, unique
};

/// The built-in extension. Includes BRUSHED -> {NICKEL, STEEL} and
/// {ECONOMY, STANDARD, SMALL} -> BRUSHED.
CategoryTaxonomy default_taxonomy();

/// Parses "CHILD -> PARENT" lines ('#' comments and blank lines ignored).
CategoryTaxonomy parse_taxonomy(std::string_view text);

/// The default taxonomy, or the one read from `file` when given.
CategoryTaxonomy build_category_taxonomy(const std::optional<std::filesystem::path>& file = std::nullopt);

std::string format_taxonomy(const CategoryTaxonomy& taxonomy);

}  // namespace xweb
