#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xweb/error.hpp"
#include "xweb/random.hpp"
#include "xweb/taxonomy.hpp"
#include "xweb/warehouse.hpp"

namespace xweb {

/// How the density filter walks the customer x part x supplier x day space.
enum class Sampling {
  kScan,           // one Bernoulli(D) draw per candidate combination
  kGeometricSkip,  // jump straight to the next retained combination
};

/// Hot/cold mixture used for measure values.
struct SkewConfig {
  double hot_probability = 0.8;
  double hot_width = 0.1;  // fraction of the range, taken from its low end
};

struct GenParams {
  double sf = 1.0;
  double density = 1e-5;
  double p_missing = 0.0;
  double p_reorder = 0.0;
  std::uint64_t seed = 42;
  std::int64_t scale_divisor = 1000;
  Sampling sampling = Sampling::kGeometricSkip;
  SkewConfig skew;

  /// Throws ParameterError when a field is out of range.
  void validate() const;
};

struct Cardinalities {
  std::int64_t parts = 0;
  std::int64_t customers = 0;
  std::int64_t suppliers = 0;
  std::int64_t days = 0;

  /// Size of the candidate space the fact generator walks.
  std::uint64_t combinations() const;
};

/// Cardinalities implied by (sf, scale_divisor); dates are fixed.
Cardinalities cardinalities_for(const GenParams& gp);

/// Calendar range covered by the Date dimension.
inline constexpr int kFirstYear = 1998;
inline constexpr int kLastYear = 2004;

DimensionSet generate_dimensions(const GenParams& gp);

/// Part category selection: 1..3 root picks per part, each at a random level
/// followed by up to (3 - level) random subcategories from the levels below.
CategoryAssignment assign_categories(std::int64_t part_count, const CategoryTaxonomy& taxonomy, Rng& rng);

/// With probability `skew.hot_probability` a uniform draw from the first
/// `hot_width` of [lo, hi], otherwise uniform over [lo, hi].
std::int64_t skewed_random(Rng& rng, std::int64_t lo, std::int64_t hi, const SkewConfig& skew = {});

struct GenerationStats {
  std::uint64_t facts_emitted = 0;
  std::uint64_t slots_nulled = 0;
  std::uint64_t facts_reordered = 0;  // SWITCH applied (may still be the identity)
  bool operator==(const GenerationStats&) const = default;
};

/// Raised when the fact sink throws; the original message is kept.
class SinkError : public Error {
 public:
  SinkError(const std::string& what, std::uint64_t emitted)
      : Error(what + " (after " + std::to_string(emitted) + " facts)"), facts_emitted(emitted) {}
  std::uint64_t facts_emitted;
};

using FactSink = std::function<void(const Fact&)>;

/// Walks customer x part x supplier x day in that nesting order and emits
/// each combination with probability D, with Pm nulling and Po reordering.
GenerationStats generate_facts(const DimensionSet& dims, const CategoryAssignment& assignment,
                               const GenParams& gp, Rng& rng, const FactSink& sink);

/// Independent generator streams derived from GenParams::seed.
enum class Stream : std::uint64_t { kDimensions = 1, kCategories = 2, kFacts = 3 };

/// Dimensions, taxonomy, assignment and (materialized) facts in one call.
Warehouse generate_warehouse(const GenParams& gp, const CategoryTaxonomy& taxonomy = default_taxonomy());

/// Size of one dimension for the analytic estimate.
struct DimensionSize {
  std::string dimension;
  double members = 0;    // |d|: all hierarchy levels
  double finest = 0;     // |h_1^d|: level referenced by facts
  double nodesize = 0;   // bytes per member node
};

struct SizeEstimate {
  double s_dimensions = 0;
  double s_facts = 0;
  double total = 0;
  std::vector<DimensionSize> inputs;
  double fact_size = 0;
  double density = 0;
};

/// S = sum |d| * nodesize(d)  +  prod |h_1^d| * D * fact_size.
SizeEstimate estimate_size(const GenParams& gp, const std::vector<DimensionSize>& dimensions, double fact_size);

/// |d| and |h_1^d| for the four XWeB dimensions; nodesize left at zero.
std::vector<DimensionSize> dimension_sizes(const DimensionSet& dims, std::size_t category_count = 16);

}  // namespace xweb
