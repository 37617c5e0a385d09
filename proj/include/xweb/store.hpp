#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xweb/codec.hpp"
#include "xweb/datagen.hpp"

namespace xweb {

inline constexpr std::string_view kToolkitVersion = "1.0.0";
inline constexpr std::string_view kManifestFile = "manifest.txt";

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& file);

struct DocumentDigest {
  std::string name;
  std::string sha256;
  std::uint64_t bytes = 0;
  bool operator==(const DocumentDigest&) const = default;
};

/// Reproducibility record written next to the generated documents.
struct Manifest {
  GenParams params;
  std::string taxonomy = "default";  // or the taxonomy file given at generation
  std::string toolkit_version{kToolkitVersion};
  GenerationStats stats;
  double estimated_bytes = 0;
  std::vector<DocumentDigest> documents;  // load order

  std::uint64_t total_bytes() const;
};

/// key=value lines; repeated `document` keys keep load order.
std::string format_manifest(const Manifest& m);
/// Throws ParseError.
Manifest parse_manifest(std::string_view text);
/// Every scalar key=value pair, for echoing into reports.
std::vector<std::pair<std::string, std::string>> manifest_entries(const Manifest& m);

Manifest read_manifest(const std::filesystem::path& dir);

/// Documents that are missing or whose bytes no longer match their digest.
std::vector<std::string> tampered_documents(const Manifest& m, const std::filesystem::path& dir);

/// Writes the six documents and the manifest into `dir`. Facts are streamed
/// to disk and never held in memory.
Manifest generate_to_directory(const GenParams& gp, const CategoryTaxonomy& taxonomy, const std::string& taxonomy_source,
                               const std::filesystem::path& dir);

/// Reads the documents listed in the manifest. Throws ValidationError naming
/// any tampered document.
WarehouseDocuments read_documents(const Manifest& m, const std::filesystem::path& dir);

}  // namespace xweb
