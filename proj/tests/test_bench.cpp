#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "fixtures.hpp"
#include "xweb/bench.hpp"
#include "xweb/codec.hpp"
#include "xweb/datagen.hpp"
#include "xweb/error.hpp"
#include "xweb/http.hpp"

namespace xweb {
namespace {

using namespace std::chrono_literals;
using testing::small_params;

std::vector<Nanos> ns(std::initializer_list<std::int64_t> v) {
  std::vector<Nanos> out;
  for (auto x : v) out.emplace_back(x);
  return out;
}

TEST(Stats, FixedLists) {
  const auto a = compute_stats(ns({5, 5, 5}));
  EXPECT_EQ(a.count, 3u);
  EXPECT_EQ(a.global_ns, 15);
  EXPECT_EQ(a.avg_ns, 5);
  EXPECT_EQ(a.min_ns, 5);
  EXPECT_EQ(a.max_ns, 5);
  EXPECT_EQ(a.stddev_ns, 0);

  const auto b = compute_stats(ns({2, 4}));
  EXPECT_EQ(b.avg_ns, 3);
  EXPECT_EQ(b.stddev_ns, 1);

  const auto c = compute_stats(ns({7}));
  EXPECT_EQ(c.global_ns, 7);
  EXPECT_EQ(c.avg_ns, 7);
  EXPECT_EQ(c.min_ns, 7);
  EXPECT_EQ(c.max_ns, 7);
  EXPECT_EQ(c.stddev_ns, 0);

  EXPECT_THROW(compute_stats({}), ParameterError);
}

class Loaded : public ::testing::Test {
 protected:
  void SetUp() override {
    w_ = generate_warehouse(small_params(31, 1e-4, 0.1, 0.2));
    docs_ = emit_warehouse(w_);
    load_ = load_test(driver_, docs_);
  }
  Warehouse w_;
  WarehouseDocuments docs_;
  ReferenceDriver driver_;
  LoadReport load_;
};

TEST_F(Loaded, LoadTimesEveryDocument) {
  ASSERT_EQ(load_.documents.size(), 6u);
  Nanos sum{0};
  for (const auto& d : load_.documents) {
    EXPECT_GT(d.duration.count(), 0) << d.name;
    sum += d.duration;
  }
  EXPECT_EQ(sum, load_.total);
  ASSERT_NE(driver_.warehouse(), nullptr);
  EXPECT_EQ(driver_.warehouse()->facts.size(), w_.facts.size());
  EXPECT_TRUE(driver_.warnings().empty());
}

TEST_F(Loaded, ReportingBlockCounting) {
  WorkloadConfig wc = with_blocks({}, "RE");
  wc.nrun = 2;
  const auto r = performance_test(driver_, wc, w_.model);
  ASSERT_EQ(r.queries.size(), 3u);
  std::size_t durations = 0;
  for (const auto& q : r.queries) {
    EXPECT_EQ(q.status, RunStatus::kOk);
    ASSERT_EQ(q.runs.size(), 3u);
    EXPECT_EQ(q.runs[0].kind, RunKind::kCold);
    EXPECT_EQ(q.runs[1].kind, RunKind::kWarm);
    EXPECT_EQ(q.runs[2].index, 2);
    durations += q.runs.size();
  }
  EXPECT_EQ(durations, 9u);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].cold->count, 3u);
  EXPECT_EQ(r.blocks[0].warm->count, 6u);
}

TEST_F(Loaded, ColdOnlyRun) {
  const auto r = performance_test(driver_, WorkloadConfig{}, w_.model);
  ASSERT_EQ(r.queries.size(), 20u);
  for (const auto& q : r.queries) EXPECT_EQ(q.runs.size(), 1u);
  EXPECT_FALSE(r.warm.has_value());
  EXPECT_EQ(r.cold->count, 20u);
}

TEST_F(Loaded, ColdPassPrecedesWarmPasses) {
  WorkloadConfig wc = with_blocks({}, "RE,1D");
  wc.nrun = 1;
  std::vector<std::pair<std::string, int>> order;
  performance_test(driver_, wc, w_.model,
                   [&](const QueryRecord& q, const Execution& ex) { order.emplace_back(q.id, ex.index); });
  ASSERT_EQ(order.size(), 14u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(order[i].second, 0);
  for (std::size_t i = 7; i < 14; ++i) EXPECT_EQ(order[i].second, 1);
  EXPECT_EQ(order[0].first, "Q01");
  EXPECT_EQ(order[7].first, "Q01");
}

TEST_F(Loaded, VerifyReferenceMatchesEverything) {
  const auto verdicts = verify_backend(driver_, w_, WorkloadConfig{});
  ASSERT_EQ(verdicts.size(), 20u);
  for (const auto& v : verdicts) EXPECT_EQ(v.kind, VerdictKind::kMatch) << v.query << ": " << v.detail;
}

TEST_F(Loaded, JsonRoundTripAndTamperDetection) {
  WorkloadConfig wc;
  wc.nrun = 1;
  RunReport r = performance_test(driver_, wc, w_.model);
  r.load = load_;
  r.fact_count = w_.facts.size();
  r.environment = {{"seed", "31"}};
  r.verdicts = verify_backend(driver_, w_, wc);
  const auto text = report_to_json(r);
  const RunReport back = report_from_json(text);
  EXPECT_EQ(report_to_json(back), text);
  EXPECT_EQ(back.queries.size(), 20u);
  EXPECT_EQ(back.load->documents.size(), 6u);

  RunReport tampered = back;
  tampered.queries[3].runs[0].duration += 5ms;
  EXPECT_THROW(report_from_json(report_to_json(tampered)), ParseError);
  EXPECT_THROW(report_from_json("{\"backend\": 1}"), ParseError);
  EXPECT_THROW(report_from_json("not json"), ParseError);
}

TEST_F(Loaded, CsvHasOneLinePerDuration) {
  WorkloadConfig wc;
  wc.nrun = 3;
  RunReport r = performance_test(driver_, wc, w_.model);
  r.load = load_;
  const auto csv = report_to_csv(r);
  std::size_t lines = 0, load_lines = 0;
  std::size_t pos = 0;
  for (std::size_t next; (next = csv.find('\n', pos)) != std::string::npos; pos = next + 1) {
    ++lines;
    load_lines += csv.compare(pos, 5, "load,") == 0;
  }
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "query,group,run_kind,run_index,duration_ms,status");
  EXPECT_EQ(load_lines, 1u);
  EXPECT_EQ(lines, 1u + 6u + 1u + 80u);
}

class FlakyDriver : public ReferenceDriver {
 public:
  std::string id() const override { return "flaky"; }
  QueryResponse execute_query(const QuerySpec& q, const std::string& text, const Deadline& deadline) override {
    if (q.id == "Q02") throw DriverError("backend crashed");
    if (q.id == "Q03") std::this_thread::sleep_for(30ms);
    return ReferenceDriver::execute_query(q, text, deadline);
  }
};

TEST(Protocol, FaultsAndLateAnswersAreRecordedAndSkipped) {
  const auto w = generate_warehouse(small_params(32, 1e-5));
  FlakyDriver d;
  load_test(d, emit_warehouse(w));
  WorkloadConfig wc = with_blocks({}, "RE,1D");
  wc.nrun = 2;
  wc.timeout = 20ms;
  const auto r = performance_test(d, wc, w.model);
  ASSERT_EQ(r.queries.size(), 7u);
  EXPECT_EQ(r.queries[1].status, RunStatus::kError);
  EXPECT_EQ(r.queries[1].runs.size(), 1u);
  EXPECT_NE(r.queries[1].error.find("crashed"), std::string::npos);
  EXPECT_EQ(r.queries[2].status, RunStatus::kTimeout);
  EXPECT_EQ(r.queries[2].runs.size(), 1u);
  EXPECT_EQ(r.queries[0].runs.size(), 3u);
  EXPECT_EQ(r.queries[6].status, RunStatus::kOk);
  EXPECT_EQ(r.blocks[0].cold->count, 1u);
}

TEST(Protocol, OneMillisecondTimeoutOnLargeWarehouse) {
  GenParams gp = small_params(33, 4e-4, 0, 0, 1000);
  const auto w = generate_warehouse(gp);
  ASSERT_GT(w.facts.size(), 250'000u);
  ReferenceDriver d;
  load_test(d, emit_warehouse(w));
  WorkloadConfig wc;
  wc.nrun = 2;
  wc.timeout = 1ms;
  const auto r = performance_test(d, wc, w.model);
  ASSERT_EQ(r.queries.size(), 20u);
  for (const auto& q : r.queries) {
    EXPECT_EQ(q.status, RunStatus::kTimeout) << q.id;
    EXPECT_EQ(q.runs.size(), 1u) << q.id;
  }
  EXPECT_FALSE(r.cold.has_value());
  EXPECT_NO_THROW(report_from_json(report_to_json(r)));
}

TEST(Protocol, LoadRequiresModelFirst) {
  const auto docs = emit_warehouse(generate_warehouse(small_params(34, 1e-5)));
  ReferenceDriver d;
  EXPECT_THROW(d.load_document(docs.facts.name, docs.facts.bytes), DriverError);
  EXPECT_THROW(d.execute_query(*find_query("Q01"), "", std::nullopt), DriverError);
  d.load_document(docs.model.name, docs.model.bytes);
  EXPECT_THROW(d.load_document("d_unknown.xml", "<x/>"), DriverError);
  EXPECT_THROW(d.load_document(docs.dimensions[0].name, docs.dimensions[1].bytes), DriverError);
}

TEST(Protocol, UnreachableDriverRecordsNoTiming) {
  HttpDriverConfig cfg;
  cfg.base_url = "http://127.0.0.1:1";
  cfg.connect_timeout = 200ms;
  HttpDriver d(cfg);
  const auto docs = emit_warehouse(generate_warehouse(small_params(35, 1e-5)));
  try {
    load_test(d, docs);
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    EXPECT_TRUE(e.partial.documents.empty());
    EXPECT_EQ(e.partial.total.count(), 0);
  }
}

Nanos fact_load_time(const WarehouseDocuments& docs) {
  Nanos best = Nanos::max();
  for (int i = 0; i < 3; ++i) {
    ReferenceDriver d;
    const auto r = load_test(d, docs);
    best = std::min(best, r.documents.back().duration);
  }
  return best;
}

TEST(Protocol, FactLoadTimeGrowsWithFactCount) {
  const auto small = emit_warehouse(generate_warehouse(small_params(36, 5e-5, 0, 0, 1000)));
  const auto large = emit_warehouse(generate_warehouse(small_params(36, 1e-4, 0, 0, 1000)));
  ASSERT_GT(large.facts.bytes.size(), small.facts.bytes.size() * 3 / 2);
  EXPECT_GT(fact_load_time(large), fact_load_time(small));
}

}  // namespace
}  // namespace xweb
