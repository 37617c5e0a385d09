// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <string>

#include "fixtures.hpp"
#include "xweb/bench.hpp"
#include "xweb/codec.hpp"
#include "xweb/datagen.hpp"
#include "xweb/engine.hpp"
#include "xweb/http.hpp"
#include "xweb/oracle.hpp"
#include "xweb/workload.hpp"

namespace xweb {
namespace {

using namespace std::chrono_literals;
using testing::small_params;
using testing::wide_params;

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Check ac1_oracle() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::size_t comparisons = 0, largest = 0, nonempty = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const double pm = (i % 2) ? 0.3 : 0.0;
    const double po = (i / 2 % 2) ? 0.5 : 0.0;
    // Alternate a dense small-cardinality space with a sparse wide one so
    // the price and brand restrictions select rows in both regimes.
    const GenParams gp = (i % 4 < 2) ? small_params(2000 + i, 5e-4, pm, po) : wide_params(2000 + i, 8e-8, pm, po);
    const auto w = generate_warehouse(gp);
    largest = std::max(largest, w.facts.size());
    if (w.facts.size() > 5000) c.fail("seed " + std::to_string(2000 + i) + " has more than 5000 facts");
    const WarehouseIndex index(w);
    for (const auto& q : full_workload()) {
      const auto fast = evaluate(q, index);
      const auto slow = oracle_evaluate(q, w);
      ++comparisons;
      nonempty += !fast.rows.empty();
      if (!(fast == slow)) {
        const auto d = diff_results(slow, fast);
        c.fail("seed " + std::to_string(2000 + i) + " " + q.id + ": " + d.value_or("rows differ"));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs >= 300) c.fail(fmt("took %.1f s", secs));
  if (c.ok)
    c.detail = std::to_string(comparisons) + " comparisons, " + std::to_string(nonempty) + " non-empty, max " +
               std::to_string(largest) + " facts, " + fmt("%.1f s", secs);
  return c;
}

Check ac2_density() {
  Check c;
  GenParams base;
  base.scale_divisor = 1000;
  const double n = static_cast<double>(cardinalities_for(base).combinations());
  const double d = 500.0 / n;
  const double sigma = 14 * std::sqrt((1 - d) / (n * d) + (1 - 14 * d) / (n * 14 * d));
  double worst = 0;
  std::uint64_t sum_lo = 0, sum_hi = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto lo = small_params(seed, d, 0, 0, 1000);
    auto hi = small_params(seed, 14 * d, 0, 0, 1000);
    const auto a = generate_warehouse(lo).facts.size();
    const auto b = generate_warehouse(hi).facts.size();
    sum_lo += a;
    sum_hi += b;
    const double ratio = static_cast<double>(b) / static_cast<double>(a);
    worst = std::max(worst, std::abs(ratio - 14) / sigma);
    if (std::abs(ratio - 14) > 4 * sigma) c.fail(fmt("seed %.0f ratio %.3f outside 14 +- %.3f", seed, ratio, 4 * sigma));
  }
  if (c.ok)
    c.detail = fmt("mean counts %.1f -> %.1f, worst deviation %.2f sigma", sum_lo / 10.0, sum_hi / 10.0, worst);
  return c;
}

Check ac3_dirtiness() {
  Check c;
  const auto missing = generate_warehouse(small_params(77, 2e-5, 0.25, 0, 1000));
  const auto reordered = generate_warehouse(small_params(78, 2e-5, 0, 0.5, 1000));
  if (missing.facts.size() < 10'000 || reordered.facts.size() < 10'000) c.fail("fewer than 10^4 facts");
  std::uint64_t nulled = 0, shuffled = 0;
  for (const auto& f : missing.facts) nulled += kSlotCount - f.present_count();
  for (const auto& f : reordered.facts) shuffled += f.reordered();
  const double pm = static_cast<double>(nulled) / static_cast<double>(missing.facts.size() * kSlotCount);
  const double po = static_cast<double>(shuffled) / static_cast<double>(reordered.facts.size());
  const double po_expected = 0.5 * 719.0 / 720.0;
  if (std::abs(pm - 0.25) > 0.02) c.fail(fmt("nulled fraction %.4f", pm));
  if (std::abs(po - po_expected) > 0.02) c.fail(fmt("reordered fraction %.4f vs %.4f", po, po_expected));
  if (c.ok) c.detail = fmt("nulled %.4f, reordered %.4f (expected %.4f)", pm, po, po_expected);
  return c;
}

Check ac4_taxonomy() {
  Check c;
  const auto t = default_taxonomy();
  auto rng = Rng::derive(4, static_cast<std::uint64_t>(Stream::kCategories));
  const auto a = assign_categories(10'000, t, rng);
  std::size_t non_strict = 0, non_covering = 0;
  for (std::size_t i = 0; i < a.catsets.size(); ++i) {
    const auto& set = a.catsets[i];
    if (set.empty()) c.fail("part " + std::to_string(i + 1) + " has an empty catset");
    std::set<std::string> names;
    int per_level[4] = {0, 0, 0, 0};
    for (const auto& cat : set) {
      names.insert(cat.name);
      ++per_level[cat.level];
    }
    if (names.size() != set.size()) c.fail("part " + std::to_string(i + 1) + " has a duplicate category");
    if (per_level[1] >= 2 || per_level[2] >= 2 || per_level[3] >= 2) ++non_strict;
    bool skips = false;
    for (const auto& cat : set) {
      if (cat.level == 1) continue;
      bool has_parent = false;
      for (const auto& p : t.parents(cat.name))
        for (const auto& o : set) has_parent = has_parent || o.name == p;
      skips = skips || !has_parent;
    }
    non_covering += skips;
  }
  if (non_strict == 0) c.fail("no non-strictness witness");
  if (non_covering == 0) c.fail("no non-coveringness witness");
  if (c.ok)
    c.detail = std::to_string(non_strict) + " non-strict and " + std::to_string(non_covering) +
               " non-covering parts of 10000";
  return c;
}

Check ac5_roundtrip() {
  Check c;
  std::size_t facts = 0, reordered = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto w = generate_warehouse(small_params(500 + seed, 1e-4, 0.2, 0.5));
    const auto back = parse_warehouse(emit_warehouse(w)).warehouse;
    const std::string tag = "seed " + std::to_string(500 + seed) + ": ";
    if (!(back.model == w.model)) c.fail(tag + "model differs");
    if (!(back.dimensions == w.dimensions)) c.fail(tag + "dimensions differ");
    if (!(back.taxonomy == w.taxonomy)) c.fail(tag + "taxonomy differs");
    if (!(back.assignment == w.assignment)) c.fail(tag + "assignment differs");
    if (back.facts.size() != w.facts.size()) c.fail(tag + "fact count differs");
    for (std::size_t i = 0; i < std::min(back.facts.size(), w.facts.size()); ++i)
      if (!back.facts[i].same_content(w.facts[i])) c.fail(tag + "fact " + std::to_string(i) + " differs");
    facts += w.facts.size();
    for (const auto& f : w.facts) reordered += f.reordered();
  }
  const std::string header = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<facts id=\"Sale\">";
  const auto canonical = parse_facts(header +
                                     "<fact><c_custkey>1</c_custkey><p_partkey>2</p_partkey><s_suppkey>3</s_suppkey>"
                                     "<d_datekey>19990101</d_datekey><f_quantity>4</f_quantity>"
                                     "<f_totalamount>5.50</f_totalamount></fact></facts>");
  const auto shuffled = parse_facts(header +
                                    "<fact><f_totalamount>5.50</f_totalamount><d_datekey>19990101</d_datekey>"
                                    "<c_custkey>1</c_custkey><f_quantity>4</f_quantity><s_suppkey>3</s_suppkey>"
                                    "<p_partkey>2</p_partkey></fact></facts>");
  if (canonical.size() != 1 || shuffled.size() != 1 || !canonical[0].same_content(shuffled[0]) ||
      !shuffled[0].reordered())
    c.fail("shuffled fixture does not parse to the canonical fact");
  if (reordered == 0) c.fail("no reordered facts exercised");
  if (c.ok)
    c.detail = "10 warehouses, " + std::to_string(facts) + " facts (" + std::to_string(reordered) +
               " reordered), shuffled fixture equal";
  return c;
}

Check ac6_accounting() {
  Check c;
  const auto w = generate_warehouse(small_params(606, 1e-4, 0.1, 0.1));
  WorkloadConfig wc;
  wc.nrun = 3;
  ReferenceDriver loaded;
  const auto load = load_test(loaded, emit_warehouse(w));
  RunReport r = performance_test(loaded, wc, w.model);
  r.load = load;
  const RunReport back = report_from_json(report_to_json(r));

  std::size_t durations = 0;
  std::vector<Nanos> all_cold, all_warm;
  for (const auto& q : back.queries)
    for (const auto& ex : q.runs) {
      ++durations;
      if (ex.status != RunStatus::kOk) c.fail(q.id + " did not run cleanly");
      (ex.kind == RunKind::kCold ? all_cold : all_warm).push_back(ex.duration);
    }
  if (durations != 80) c.fail(std::to_string(durations) + " durations");
  if (!back.load || back.load->total.count() <= 0) c.fail("no load time");

  const auto within_ms = [&](const std::optional<Stats>& stored, const std::vector<Nanos>& raw,
                             const std::string& what) {
    if (!stored) return c.fail(what + " stats missing");
    const auto s = compute_stats(raw);
    const double ms = 1e6;
    if (s.count != stored->count || std::abs(double(s.global_ns - stored->global_ns)) >= ms ||
        std::abs(s.avg_ns - stored->avg_ns) >= ms || std::abs(double(s.min_ns - stored->min_ns)) >= ms ||
        std::abs(double(s.max_ns - stored->max_ns)) >= ms || std::abs(s.stddev_ns - stored->stddev_ns) >= ms)
      c.fail(what + " stats disagree with raw durations");
  };
  within_ms(back.cold, all_cold, "cold");
  within_ms(back.warm, all_warm, "warm");
  for (const auto& b : back.blocks) {
    std::vector<Nanos> cold, warm;
    for (const auto& q : back.queries)
      if (q.group == b.group)
        for (const auto& ex : q.runs) (ex.kind == RunKind::kCold ? cold : warm).push_back(ex.duration);
    within_ms(b.cold, cold, std::string(group_name(b.group)) + " cold");
    within_ms(b.warm, warm, std::string(group_name(b.group)) + " warm");
  }
  if (c.ok) c.detail = "80 durations + 1 load time, " + std::to_string(back.blocks.size()) + " blocks recomputed";
  return c;
}

Check ac7_conservation() {
  Check c;
  std::size_t max_q20 = 0;
  for (std::uint64_t seed = 700; seed < 710; ++seed) {
    const auto w = generate_warehouse(small_params(seed, 2e-4));
    const auto q05 = testing::total_of(evaluate(*find_query("Q05"), w), "sum_f_quantity");
    const auto q06 = testing::total_of(evaluate(*find_query("Q06"), w), "sum_f_quantity");
    if (!q05 || !q06 || !(*q05 == *q06)) c.fail("seed " + std::to_string(seed) + ": Q05 and Q06 totals differ");
    const auto q20 = evaluate(*find_query("Q20"), w);
    max_q20 = std::max(max_q20, q20.rows.size());
    if (q20.rows.size() > 5) c.fail("seed " + std::to_string(seed) + ": Q20 has more than 5 groups");
  }
  if (c.ok) c.detail = "10 warehouses, Q20 at most " + std::to_string(max_q20) + " groups";
  return c;
}

Check ac8_http() {
  Check c;
  const auto w = generate_warehouse(small_params(808, 1e-4, 0.1, 0.2));
  const auto docs = emit_warehouse(w);
  HttpDriverConfig cfg;
  cfg.id = "mock";
  {
    MockOptions opts;
    opts.latency = 20ms;
    MockBackend mock(opts);
    mock.start();
    cfg.base_url = mock.base_url();
    HttpDriver d(cfg);
    const auto load = load_test(d, docs);
    if (load.documents.size() != 6) c.fail("load acknowledged " + std::to_string(load.documents.size()) + " docs");
    WorkloadConfig wc = with_blocks({}, "RE");
    wc.nrun = 2;
    const auto r = performance_test(d, wc, w.model);
    if (r.queries.size() != 3) c.fail("RE block ran " + std::to_string(r.queries.size()) + " queries");
    for (const auto& q : r.queries) {
      if (q.status != RunStatus::kOk) c.fail(q.id + ": " + q.error);
      for (const auto& ex : q.runs)
        if (ex.duration < 20ms) c.fail(q.id + " duration below injected latency");
    }
  }
  MockOptions opts;
  opts.corrupt_query = "Q03";
  MockBackend mock(opts);
  mock.start();
  cfg.base_url = mock.base_url();
  HttpDriver d(cfg);
  load_test(d, docs);
  std::size_t flagged = 0;
  for (const auto& v : verify_backend(d, w, WorkloadConfig{})) {
    if (v.kind == VerdictKind::kMismatch) {
      ++flagged;
      if (v.query != "Q03") c.fail(v.query + " flagged without a fault");
    } else if (v.query == "Q03") {
      c.fail("fault in Q03 not flagged");
    }
  }
  if (c.ok) c.detail = "load + RE with 20 ms latency, " + std::to_string(flagged) + " fault flagged";
  return c;
}

Check ac9_estimate() {
  Check c;
  const std::vector<DimensionSize> fixture = {{"CustomerDim", 150, 150, 220},
                                              {"PartDim", 200, 200, 220},
                                              {"SupplierDim", 10, 10, 220},
                                              {"Date", 2557, 2557, 220}};
  GenParams gp;
  gp.density = 1;
  const auto full = estimate_size(gp, fixture, 220);
  if (full.s_facts != 168'762'000'000.0) c.fail(fmt("fact term %.1f", full.s_facts));
  for (double d : {1e-9, 1e-7, 3e-5, 0.25}) {
    gp.density = d;
    const auto e = estimate_size(gp, fixture, 220);
    const double expected = 168'762'000'000.0 * d;
    if (std::abs(e.s_facts - expected) > 4 * std::numeric_limits<double>::epsilon() * expected) c.fail(fmt("fact term at D=%g is %.6f", d, e.s_facts));
    gp.density = 2 * d;
    if (estimate_size(gp, fixture, 220).s_facts != 2 * e.s_facts) c.fail(fmt("doubling D=%g is not exact", d));
  }
  if (c.ok) c.detail = "168762000000 bytes at D=1, linear within 4 ulp, exact under doubling";
  return c;
}

}  // namespace
}  // namespace xweb

int main() {
  using xweb::Check;
  const std::pair<const char*, std::function<Check()>> checks[] = {
      {"AC1 oracle equivalence", xweb::ac1_oracle},     {"AC2 density law", xweb::ac2_density},
      {"AC3 dirtiness statistics", xweb::ac3_dirtiness}, {"AC4 taxonomy invariants", xweb::ac4_taxonomy},
      {"AC5 codec round trip", xweb::ac5_roundtrip},    {"AC6 protocol accounting", xweb::ac6_accounting},
      {"AC7 drill/roll conservation", xweb::ac7_conservation}, {"AC8 http adapter", xweb::ac8_http},
      {"AC9 size estimate", xweb::ac9_estimate},
  };
  int failed = 0;
  for (const auto& [name, run] : checks) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", c.ok ? "PASS" : "FAIL", name, c.detail.c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
