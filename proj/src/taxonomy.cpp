#include "xweb/taxonomy.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "xweb/error.hpp"

namespace xweb {

const std::array<std::vector<std::string>, 3>& CategoryTaxonomy::level_names() {
  static const std::array<std::vector<std::string>, 3> names = {{
      {"BRASS", "COPPER", "NICKEL", "STEEL", "TIN"},
      {"ANODIZED", "BRUSHED", "BURNISHED", "PLATED", "POLISHED"},
      {"ECONOMY", "LARGE", "MEDIUM", "PROMO", "SMALL", "STANDARD"},
  }};
  return names;
}

std::optional<int> CategoryTaxonomy::level_of(std::string_view name) {
  const auto& names = level_names();
  for (int level = 0; level < 3; ++level)
    if (std::find(names[level].begin(), names[level].end(), name) != names[level].end()) return level + 1;
  return std::nullopt;
}

CategoryTaxonomy::CategoryTaxonomy(std::vector<Edge> rollup_edges) : edges_(std::move(rollup_edges)) {
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  std::map<std::string, int> parent_count;
  for (const auto& [child, parent] : edges_) {
    const auto child_level = level_of(child);
    const auto parent_level = level_of(parent);
    if (!child_level) throw ValidationError("unknown category " + child);
    if (!parent_level) throw ValidationError("unknown category " + parent);
    if (*parent_level != *child_level - 1)
      throw ValidationError("category " + child + " (level " + std::to_string(*child_level) +
                            ") cannot roll up to " + parent + " (level " + std::to_string(*parent_level) + ")");
    ++parent_count[child];
  }
  bool multi_parent = false;
  for (int level = 1; level < 3; ++level) {
    for (const auto& name : level_names()[level]) {
      const int n = parent_count[name];
      if (n == 0) throw ValidationError("category " + name + " has no parent category");
      multi_parent = multi_parent || n >= 2;
    }
  }
  if (!multi_parent) throw ValidationError("taxonomy is strict: no category has two or more parents");
}

std::vector<std::string> CategoryTaxonomy::parents(std::string_view category) const {
  std::vector<std::string> out;
  for (const auto& [child, parent] : edges_)
    if (child == category) out.push_back(parent);
  return out;
}

std::vector<std::string> CategoryTaxonomy::children(std::string_view category) const {
  std::vector<std::string> out;
  for (const auto& [child, parent] : edges_)
    if (parent == category) out.push_back(child);
  std::sort(out.begin(), out.end());
  return out;
}

CategoryTaxonomy default_taxonomy() {
  return CategoryTaxonomy({
      {"ANODIZED", "BRASS"},   {"ANODIZED", "COPPER"},  {"BRUSHED", "NICKEL"},   {"BRUSHED", "STEEL"},
      {"BURNISHED", "COPPER"}, {"PLATED", "NICKEL"},    {"PLATED", "TIN"},       {"POLISHED", "BRASS"},
      {"POLISHED", "STEEL"},   {"ECONOMY", "ANODIZED"}, {"ECONOMY", "BRUSHED"},  {"LARGE", "BURNISHED"},
      {"LARGE", "PLATED"},     {"MEDIUM", "POLISHED"},  {"PROMO", "ANODIZED"},   {"PROMO", "PLATED"},
      {"SMALL", "BRUSHED"},    {"STANDARD", "BRUSHED"}, {"STANDARD", "POLISHED"},
  });
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CategoryTaxonomy parse_taxonomy(std::string_view text) {
  std::vector<CategoryTaxonomy::Edge> edges;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw ParseError("expected 'CHILD -> PARENT'", line_no, 1);
    const auto child = trim(line.substr(0, arrow));
    const auto parent = trim(line.substr(arrow + 2));
    if (child.empty() || parent.empty()) throw ParseError("empty category name", line_no, 1);
    edges.emplace_back(std::string(child), std::string(parent));
  }
  return CategoryTaxonomy(std::move(edges));
}

CategoryTaxonomy build_category_taxonomy(const std::optional<std::filesystem::path>& file) {
  if (!file) return default_taxonomy();
  std::ifstream in(*file, std::ios::binary);
  if (!in) throw ParameterError("cannot read taxonomy file " + file->string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_taxonomy(buf.str());
}

std::string format_taxonomy(const CategoryTaxonomy& taxonomy) {
  std::string out;
  for (const auto& [child, parent] : taxonomy.edges()) out += child + " -> " + parent + "\n";
  return out;
}

}  // namespace xweb
