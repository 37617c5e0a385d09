#include "xweb/datagen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace xweb {

namespace {

constexpr std::array<const char*, 5> kRegionNames = {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};

struct NationSeed {
  const char* name;
  int region;
};

// TPC-H nation table.
constexpr std::array<NationSeed, 25> kNations = {{
    {"ALGERIA", 0},      {"ARGENTINA", 1}, {"BRAZIL", 1},  {"CANADA", 1},       {"EGYPT", 4},
    {"ETHIOPIA", 0},     {"FRANCE", 3},    {"GERMANY", 3}, {"INDIA", 2},        {"INDONESIA", 2},
    {"IRAN", 4},         {"IRAQ", 4},      {"JAPAN", 2},   {"JORDAN", 4},       {"KENYA", 0},
    {"MOROCCO", 0},      {"MOZAMBIQUE", 0}, {"PERU", 1},   {"CHINA", 2},        {"ROMANIA", 3},
    {"SAUDI ARABIA", 4}, {"VIETNAM", 2},   {"RUSSIA", 3},  {"UNITED KINGDOM", 3}, {"UNITED STATES", 1},
}};

constexpr std::array<const char*, 5> kSegments = {"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD", "MACHINERY"};

constexpr std::array<const char*, 92> kColors = {
    "almond",   "antique",   "aquamarine", "azure",     "beige",     "bisque",    "black",     "blanched",
    "blue",     "blush",     "brown",      "burlywood", "burnished", "chartreuse", "chiffon",  "chocolate",
    "coral",    "cornflower", "cornsilk",  "cream",     "cyan",      "dark",      "deep",      "dim",
    "dodger",   "drab",      "firebrick",  "floral",    "forest",    "frosted",   "gainsboro", "ghost",
    "goldenrod", "green",    "grey",       "honeydew",  "hot",       "indian",    "ivory",     "khaki",
    "lace",     "lavender",  "lawn",       "lemon",     "light",     "lime",      "linen",     "magenta",
    "maroon",   "medium",    "metallic",   "midnight",  "mint",      "misty",     "moccasin",  "navajo",
    "navy",     "olive",     "orange",     "orchid",    "pale",      "papaya",    "peach",     "peru",
    "pink",     "plum",      "powder",     "puff",      "purple",    "red",       "rose",      "rosy",
    "royal",    "saddle",    "salmon",     "sandy",     "seashell",  "sienna",    "sky",       "slate",
    "smoke",    "snow",      "spring",     "steel",     "tan",       "thistle",   "tomato",    "turquoise",
    "violet",   "wheat",     "white",      "yellow",
};

constexpr std::array<const char*, 12> kMonthNames = {"January", "February", "March",     "April",   "May",      "June",
                                                     "July",    "August",   "September", "October", "November", "December"};

constexpr std::array<const char*, 7> kDayNames = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                                  "Friday", "Saturday", "Sunday"};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const std::int64_t yoe = y - era * 400;
  const std::int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

const char* day_name(int y, int m, int d) {
  // 1970-01-01 was a Thursday (index 3).
  const std::int64_t n = days_from_civil(y, m, d);
  const std::int64_t idx = ((n % 7) + 7 + 3) % 7;
  return kDayNames[static_cast<std::size_t>(idx)];
}

std::int64_t scaled_cardinality(double base, const GenParams& gp, const char* what) {
  const long double x = static_cast<long double>(base) * gp.sf / static_cast<long double>(gp.scale_divisor);
  // Absorb representation error in sf (e.g. 0.1) before taking the ceiling.
  const long double c = std::ceil(x - 1e-9L * std::max(1.0L, x));
  if (!(c >= 1)) throw ParameterError(std::string("scale_divisor too large: no ") + what + " left");
  return static_cast<std::int64_t>(c);
}

std::string padded(const char* prefix, std::int64_t key) {
  std::string digits = std::to_string(key);
  if (digits.size() < 9) digits.insert(0, 9 - digits.size(), '0');
  return prefix + digits;
}

Decimal random_acctbal(Rng& rng) { return Decimal::from_cents(rng.uniform_int(-99999, 999999)); }

bool contains(const CategorySet& set, const std::string& name) {
  return std::any_of(set.begin(), set.end(), [&](const CategoryRef& c) { return c.name == name; });
}

}  // namespace

void GenParams::validate() const {
  if (!(sf > 0) || !std::isfinite(sf)) throw ParameterError("scale factor must be positive");
  if (!(density > 0 && density <= 1)) throw ParameterError("density must be in (0, 1]");
  if (!(p_missing >= 0 && p_missing <= 1)) throw ParameterError("missing-value probability must be in [0, 1]");
  if (!(p_reorder >= 0 && p_reorder <= 1)) throw ParameterError("reordering probability must be in [0, 1]");
  if (scale_divisor <= 0) throw ParameterError("scale divisor must be a positive integer");
  if (!(skew.hot_probability >= 0 && skew.hot_probability <= 1))
    throw ParameterError("hot probability must be in [0, 1]");
  if (!(skew.hot_width > 0 && skew.hot_width <= 1)) throw ParameterError("hot width must be in (0, 1]");
}

std::uint64_t Cardinalities::combinations() const {
  std::uint64_t n = 1;
  for (std::int64_t c : {customers, parts, suppliers, days}) {
    const auto u = static_cast<std::uint64_t>(c);
    if (u != 0 && n > std::numeric_limits<std::uint64_t>::max() / u)
      throw ParameterError("candidate combination count overflows 64 bits");
    n *= u;
  }
  return n;
}

Cardinalities cardinalities_for(const GenParams& gp) {
  gp.validate();
  Cardinalities c;
  c.parts = scaled_cardinality(200000, gp, "parts");
  c.customers = scaled_cardinality(150000, gp, "customers");
  c.suppliers = scaled_cardinality(10000, gp, "suppliers");
  c.days = days_from_civil(kLastYear, 12, 31) - days_from_civil(kFirstYear, 1, 1) + 1;
  return c;
}

DimensionSet generate_dimensions(const GenParams& gp) {
  const Cardinalities card = cardinalities_for(gp);
  Rng rng = Rng::derive(gp.seed, static_cast<std::uint64_t>(Stream::kDimensions));
  DimensionSet dims;

  for (std::size_t r = 0; r < kRegionNames.size(); ++r)
    dims.regions.push_back({static_cast<std::int64_t>(r), kRegionNames[r]});
  for (std::size_t n = 0; n < kNations.size(); ++n)
    dims.nations.push_back({static_cast<std::int64_t>(n), kNations[n].name, kNations[n].region});

  dims.parts.reserve(static_cast<std::size_t>(card.parts));
  for (std::int64_t key = 1; key <= card.parts; ++key) {
    Part p;
    p.partkey = key;
    const auto first = rng.uniform_int(0, kColors.size() - 1);
    auto second = rng.uniform_int(0, kColors.size() - 2);
    if (second >= first) ++second;
    p.name = std::string(kColors[first]) + " " + kColors[second];
    p.brand = "Brand#" + std::to_string(rng.uniform_int(1, 5)) + std::to_string(rng.uniform_int(1, 5));
    p.retailprice = Decimal::from_cents(90000 + ((key / 10) % 20001) + 100 * (key % 1000));
    p.size = rng.uniform_int(1, 50);
    dims.parts.push_back(std::move(p));
  }

  dims.customers.reserve(static_cast<std::size_t>(card.customers));
  for (std::int64_t key = 1; key <= card.customers; ++key) {
    Customer c;
    c.custkey = key;
    c.name = padded("Customer#", key);
    c.nation = rng.uniform_int(0, 24);
    c.acctbal = random_acctbal(rng);
    c.mktsegment = kSegments[rng.uniform_int(0, kSegments.size() - 1)];
    dims.customers.push_back(std::move(c));
  }

  dims.suppliers.reserve(static_cast<std::size_t>(card.suppliers));
  for (std::int64_t key = 1; key <= card.suppliers; ++key) {
    Supplier s;
    s.suppkey = key;
    s.name = padded("Supplier#", key);
    s.nation = rng.uniform_int(0, 24);
    s.acctbal = random_acctbal(rng);
    dims.suppliers.push_back(std::move(s));
  }

  for (int y = kFirstYear; y <= kLastYear; ++y) {
    dims.years.push_back({y});
    for (int m = 1; m <= 12; ++m) {
      const std::int64_t month_key = y * 100 + m;
      dims.months.push_back({month_key, m, kMonthNames[m - 1], y});
      for (int d = 1; d <= days_in_month(y, m); ++d)
        dims.days.push_back({month_key * 100 + d, day_name(y, m, d), month_key});
    }
  }
  return dims;
}

CategoryAssignment assign_categories(std::int64_t part_count, [[maybe_unused]] const CategoryTaxonomy& taxonomy,
                                     Rng& rng) {
  constexpr int kMaxRetries = 100;
  const auto& cat = CategoryTaxonomy::level_names();
  auto pick = [&](int level) -> const std::string& {
    const auto& names = cat[level - 1];
    return names[rng.uniform_int(0, names.size() - 1)];
  };

  CategoryAssignment out;
  out.catsets.reserve(static_cast<std::size_t>(std::max<std::int64_t>(part_count, 0)));
  for (std::int64_t p = 0; p < part_count; ++p) {
    CategorySet set;
    const auto ncat = rng.uniform_int(1, 3);
    for (std::int64_t i = 0; i < ncat; ++i) {
      int level = 0;
      const std::string* cand = nullptr;
      while (cand == nullptr) {
        level = static_cast<int>(rng.uniform_int(1, 3));
        for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
          const std::string& c = pick(level);
          if (!contains(set, c)) {
            cand = &c;
            break;
          }
        }
      }
      set.push_back({*cand, level});
      const auto nsubcat = rng.uniform_int(0, 3 - level);
      for (int j = 1; j <= nsubcat; ++j) {
        const std::string& sub = pick(level + j);
        if (!contains(set, sub)) set.push_back({sub, level + j});
      }
    }
    out.catsets.push_back(std::move(set));
  }
  return out;
}

std::int64_t skewed_random(Rng& rng, std::int64_t lo, std::int64_t hi, const SkewConfig& skew) {
  if (lo > hi) throw ParameterError("skewed_random: lo > hi");
  const long double span = static_cast<long double>(hi) - lo + 1;
  const long double hot = std::ceil(span * skew.hot_width - 1e-9L * std::max(1.0L, span));
  const auto hot_count = static_cast<std::int64_t>(std::clamp<long double>(hot, 1, span));
  if (rng.bernoulli(skew.hot_probability)) return rng.uniform_int(lo, lo + hot_count - 1);
  return rng.uniform_int(lo, hi);
}

GenerationStats generate_facts(const DimensionSet& dims, const CategoryAssignment& assignment, const GenParams& gp,
                               Rng& rng, const FactSink& sink) {
  gp.validate();
  if (assignment.catsets.size() != dims.parts.size())
    throw ParameterError("category assignment covers " + std::to_string(assignment.catsets.size()) +
                         " parts, dimension set has " + std::to_string(dims.parts.size()));

  const std::uint64_t n_day = dims.days.size();
  const std::uint64_t n_supp = dims.suppliers.size();
  const std::uint64_t n_part = dims.parts.size();
  const Cardinalities card{static_cast<std::int64_t>(n_part), static_cast<std::int64_t>(dims.customers.size()),
                           static_cast<std::int64_t>(n_supp), static_cast<std::int64_t>(n_day)};
  const std::uint64_t total = card.combinations();

  GenerationStats stats;
  auto emit = [&](std::uint64_t index) {
    const std::uint64_t d = index % n_day;
    const std::uint64_t s = (index / n_day) % n_supp;
    const std::uint64_t p = (index / (n_day * n_supp)) % n_part;
    const std::uint64_t c = index / (n_day * n_supp * n_part);
    const Part& part = dims.parts[p];

    const std::int64_t quantity = skewed_random(rng, 1, 10000, gp.skew);
    Fact f;
    f[Slot::kCustomer] = dims.customers[c].custkey;
    f[Slot::kPart] = part.partkey;
    f[Slot::kSupplier] = dims.suppliers[s].suppkey;
    f[Slot::kDate] = dims.days[d].datekey;
    f[Slot::kQuantity] = quantity;
    f[Slot::kTotalAmount] = (part.retailprice * quantity).cents();
    for (auto& slot : f.slots) {
      if (rng.bernoulli(gp.p_missing)) {
        slot.reset();
        ++stats.slots_nulled;
      }
    }
    if (rng.bernoulli(gp.p_reorder)) {
      for (std::size_t i = kSlotCount - 1; i > 0; --i)
        std::swap(f.order[i], f.order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
      ++stats.facts_reordered;
    }
    try {
      sink(f);
    } catch (const std::exception& e) {
      throw SinkError(std::string("fact sink failed: ") + e.what(), stats.facts_emitted);
    }
    ++stats.facts_emitted;
  };

  if (gp.sampling == Sampling::kScan || gp.density >= 1.0) {
    for (std::uint64_t i = 0; i < total; ++i)
      if (rng.bernoulli(gp.density)) emit(i);
    return stats;
  }

  // The gap before the next retained candidate of a Bernoulli(D) sequence is
  // geometric: floor(ln(U) / ln(1 - D)).
  const double log_keep = std::log1p(-gp.density);
  std::uint64_t index = 0;
  while (index < total) {
    const double u = 1.0 - rng.uniform01();  // (0, 1]
    const double gap = std::floor(std::log(u) / log_keep);
    if (gap >= static_cast<double>(total - index)) break;
    index += static_cast<std::uint64_t>(gap);
    emit(index);
    ++index;
  }
  return stats;
}

Warehouse generate_warehouse(const GenParams& gp, const CategoryTaxonomy& taxonomy) {
  Warehouse w;
  w.model = build_default_model();
  w.dimensions = generate_dimensions(gp);
  w.taxonomy = taxonomy;
  Rng cat_rng = Rng::derive(gp.seed, static_cast<std::uint64_t>(Stream::kCategories));
  w.assignment = assign_categories(static_cast<std::int64_t>(w.dimensions.parts.size()), taxonomy, cat_rng);
  Rng fact_rng = Rng::derive(gp.seed, static_cast<std::uint64_t>(Stream::kFacts));
  generate_facts(w.dimensions, w.assignment, gp, fact_rng, [&](const Fact& f) { w.facts.push_back(f); });
  return w;
}

SizeEstimate estimate_size(const GenParams& gp, const std::vector<DimensionSize>& dimensions, double fact_size) {
  if (!(gp.density > 0 && gp.density <= 1)) throw ParameterError("density must be in (0, 1]");
  if (!(fact_size > 0)) throw ParameterError("fact_size must be positive");
  if (dimensions.empty()) throw ParameterError("estimate_size needs at least one dimension");
  SizeEstimate e;
  e.inputs = dimensions;
  e.fact_size = fact_size;
  e.density = gp.density;
  double product = 1;
  for (const auto& d : dimensions) {
    if (!(d.members > 0 && d.finest > 0 && d.nodesize > 0))
      throw ParameterError("dimension " + d.dimension + ": sizes must be positive");
    e.s_dimensions += d.members * d.nodesize;
    product *= d.finest;
  }
  e.s_facts = product * gp.density * fact_size;
  e.total = e.s_dimensions + e.s_facts;
  return e;
}

std::vector<DimensionSize> dimension_sizes(const DimensionSet& dims, std::size_t category_count) {
  const auto n = [](const auto& v) { return static_cast<double>(v.size()); };
  const double geo = n(dims.nations) + n(dims.regions);
  return {
      {"CustomerDim", n(dims.customers) + geo, n(dims.customers), 0},
      {"PartDim", n(dims.parts) + static_cast<double>(category_count), n(dims.parts), 0},
      {"SupplierDim", n(dims.suppliers) + geo, n(dims.suppliers), 0},
      {"Date", n(dims.days) + n(dims.months) + n(dims.years), n(dims.days), 0},
  };
}

}  // namespace xweb
