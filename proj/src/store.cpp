#include "xweb/store.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "xweb/error.hpp"

namespace xweb {
namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 unavailable");
  }
  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sampling_name(Sampling s) { return s == Sampling::kScan ? "scan" : "geometric"; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& p, std::string_view bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + p.string());
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  Sha256 h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

std::uint64_t Manifest::total_bytes() const {
  std::uint64_t n = 0;
  for (const auto& d : documents) n += d.bytes;
  return n;
}

std::vector<std::pair<std::string, std::string>> manifest_entries(const Manifest& m) {
  return {
      {"toolkit_version", m.toolkit_version},
      {"sf", num(m.params.sf)},
      {"density", num(m.params.density)},
      {"p_missing", num(m.params.p_missing)},
      {"p_reorder", num(m.params.p_reorder)},
      {"seed", std::to_string(m.params.seed)},
      {"scale_divisor", std::to_string(m.params.scale_divisor)},
      {"sampling", sampling_name(m.params.sampling)},
      {"taxonomy", m.taxonomy},
      {"fact_count", std::to_string(m.stats.facts_emitted)},
      {"slots_nulled", std::to_string(m.stats.slots_nulled)},
      {"facts_reordered", std::to_string(m.stats.facts_reordered)},
      {"estimated_bytes", num(m.estimated_bytes)},
      {"total_bytes", std::to_string(m.total_bytes())},
  };
}

std::string format_manifest(const Manifest& m) {
  std::string out = "# xweb warehouse manifest\n";
  for (const auto& [k, v] : manifest_entries(m)) out += k + "=" + v + "\n";
  for (const auto& d : m.documents) out += "document=" + d.name + " " + d.sha256 + " " + std::to_string(d.bytes) + "\n";
  return out;
}

Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  bool seen_version = false;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("manifest: expected key=value", n, 1);
    const std::string key = line.substr(0, eq);
    const std::string v = line.substr(eq + 1);
    try {
      if (key == "toolkit_version") {
        m.toolkit_version = v;
        seen_version = true;
      } else if (key == "sf") {
        m.params.sf = std::stod(v);
      } else if (key == "density") {
        m.params.density = std::stod(v);
      } else if (key == "p_missing") {
        m.params.p_missing = std::stod(v);
      } else if (key == "p_reorder") {
        m.params.p_reorder = std::stod(v);
      } else if (key == "seed") {
        m.params.seed = std::stoull(v);
      } else if (key == "scale_divisor") {
        m.params.scale_divisor = std::stoll(v);
      } else if (key == "sampling") {
        if (v != "scan" && v != "geometric") throw ParseError("manifest: unknown sampling " + v, n, eq + 2);
        m.params.sampling = v == "scan" ? Sampling::kScan : Sampling::kGeometricSkip;
      } else if (key == "taxonomy") {
        m.taxonomy = v;
      } else if (key == "fact_count") {
        m.stats.facts_emitted = std::stoull(v);
      } else if (key == "slots_nulled") {
        m.stats.slots_nulled = std::stoull(v);
      } else if (key == "facts_reordered") {
        m.stats.facts_reordered = std::stoull(v);
      } else if (key == "estimated_bytes") {
        m.estimated_bytes = std::stod(v);
      } else if (key == "total_bytes") {
        // derived
      } else if (key == "document") {
        std::istringstream fields(v);
        DocumentDigest d;
        if (!(fields >> d.name >> d.sha256 >> d.bytes) || d.sha256.size() != 64)
          throw ParseError("manifest: malformed document entry", n, eq + 2);
        m.documents.push_back(d);
      } else {
        throw ParseError("manifest: unknown key " + key, n, 1);
      }
    } catch (const std::logic_error&) {
      throw ParseError("manifest: bad value for " + key, n, eq + 2);
    }
  }
  if (!seen_version || m.documents.empty()) throw ParseError("manifest: missing toolkit_version or documents");
  return m;
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto p = dir / kManifestFile;
  if (!std::filesystem::exists(p)) throw ParameterError("no " + std::string(kManifestFile) + " in " + dir.string());
  return parse_manifest(read_file(p));
}

std::vector<std::string> tampered_documents(const Manifest& m, const std::filesystem::path& dir) {
  std::vector<std::string> out;
  for (const auto& d : m.documents) {
    const auto p = dir / d.name;
    if (!std::filesystem::exists(p) || std::filesystem::file_size(p) != d.bytes || sha256_file(p) != d.sha256)
      out.push_back(d.name);
  }
  return out;
}

Manifest generate_to_directory(const GenParams& gp, const CategoryTaxonomy& taxonomy, const std::string& taxonomy_source,
                               const std::filesystem::path& dir) {
  gp.validate();
  std::filesystem::create_directories(dir);

  // Same streams as generate_warehouse(), so both paths produce identical bytes.
  Warehouse w;
  w.model = build_default_model();
  w.dimensions = generate_dimensions(gp);
  w.taxonomy = taxonomy;
  Rng cat_rng = Rng::derive(gp.seed, static_cast<std::uint64_t>(Stream::kCategories));
  w.assignment = assign_categories(static_cast<std::int64_t>(w.dimensions.parts.size()), taxonomy, cat_rng);

  Manifest m;
  m.params = gp;
  m.taxonomy = taxonomy_source;
  auto record = [&](const std::string& name, std::string_view bytes) {
    write_file(dir / name, bytes);
    m.documents.push_back({name, sha256_hex(bytes), bytes.size()});
  };
  record(std::string(kModelDocument), emit_model(w.model));
  std::vector<DimensionSize> sizes = dimension_sizes(w.dimensions, CategoryTaxonomy::level_names()[0].size() +
                                                                        CategoryTaxonomy::level_names()[1].size() +
                                                                        CategoryTaxonomy::level_names()[2].size());
  for (auto& doc : emit_dimension_documents(w)) {
    for (std::size_t i = 0; i < w.model.dimensions.size(); ++i) {
      if (w.model.dimensions[i].path != doc.name) continue;
      for (auto& s : sizes)
        if (s.dimension == w.model.dimensions[i].id) s.nodesize = static_cast<double>(doc.bytes.size()) / s.members;
    }
    record(doc.name, doc.bytes);
  }

  const auto fact_path = dir / w.model.fact.path;
  {
    std::ofstream out(fact_path, std::ios::binary);
    if (!out) throw Error("cannot write " + fact_path.string());
    FactWriter writer(out, w.model.fact.id);
    Rng fact_rng = Rng::derive(gp.seed, static_cast<std::uint64_t>(Stream::kFacts));
    m.stats = generate_facts(w.dimensions, w.assignment, gp, fact_rng, [&](const Fact& f) { writer.write(f); });
    writer.finish();
    out.flush();
    if (!out) throw Error("cannot write " + fact_path.string());
  }
  const auto fact_bytes = std::filesystem::file_size(fact_path);
  m.documents.push_back({w.model.fact.path, sha256_file(fact_path), fact_bytes});

  // Bytes per fact element measured from this document; a generic default when empty.
  const double fact_size = m.stats.facts_emitted > 0 ? static_cast<double>(fact_bytes) / m.stats.facts_emitted : 220.0;
  m.estimated_bytes = estimate_size(gp, sizes, fact_size).total;

  write_file(dir / kManifestFile, format_manifest(m));
  return m;
}

WarehouseDocuments read_documents(const Manifest& m, const std::filesystem::path& dir) {
  if (auto bad = tampered_documents(m, dir); !bad.empty()) {
    std::string names;
    for (const auto& b : bad) names += (names.empty() ? "" : ", ") + b;
    throw ValidationError("documents do not match the manifest digests: " + names);
  }
  if (m.documents.size() < 2) throw ValidationError("manifest lists too few documents");
  WarehouseDocuments docs;
  docs.model = {m.documents.front().name, read_file(dir / m.documents.front().name)};
  for (std::size_t i = 1; i + 1 < m.documents.size(); ++i)
    docs.dimensions.push_back({m.documents[i].name, read_file(dir / m.documents[i].name)});
  docs.facts = {m.documents.back().name, read_file(dir / m.documents.back().name)};
  return docs;
}

}  // namespace xweb
