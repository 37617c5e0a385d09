#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xweb/codec.hpp"
#include "xweb/engine.hpp"
#include "xweb/error.hpp"
#include "xweb/workload.hpp"

namespace xweb {

using Nanos = std::chrono::nanoseconds;

struct QueryResponse {
  std::optional<QueryResult> rows;  // set when the backend returns comparable rows
  std::string payload;              // raw response body, if any
};

/// A backend under test. Calls are strictly serial.
class Driver {
 public:
  virtual ~Driver() = default;

  virtual std::string id() const = 0;
  virtual bool returns_comparable_rows() const = 0;

  /// Drops everything loaded so far.
  virtual void reset() = 0;

  /// Returns once the backend has acknowledged the document. Throws DriverError.
  virtual void load_document(const std::string& name, std::string_view bytes) = 0;

  /// `text` is the rendered XQuery; backends that understand QuerySpec may
  /// ignore it. Throws TimeoutError past `deadline`, DriverError on failure.
  virtual QueryResponse execute_query(const QuerySpec& q, const std::string& text, const Deadline& deadline) = 0;
};

/// In-process backend: parses each document on arrival and answers with the
/// reference engine. Documents must arrive model first and facts last.
class ReferenceDriver : public Driver {
 public:
  std::string id() const override { return "reference"; }
  bool returns_comparable_rows() const override { return true; }
  void reset() override;
  void load_document(const std::string& name, std::string_view bytes) override;
  QueryResponse execute_query(const QuerySpec& q, const std::string& text, const Deadline& deadline) override;

  /// nullptr until the fact document has been loaded.
  const Warehouse* warehouse() const { return loaded_ ? &loaded_->warehouse : nullptr; }
  const std::vector<std::string>& warnings() const;

 private:
  std::optional<WarehouseModel> model_;
  std::vector<ParsedDimension> dimensions_;
  std::optional<ParsedWarehouse> loaded_;
  std::unique_ptr<WarehouseIndex> index_;
};

// ---- statistics -----------------------------------------------------------------

struct Stats {
  std::size_t count = 0;
  std::int64_t global_ns = 0;
  double avg_ns = 0;
  std::int64_t min_ns = 0;
  std::int64_t max_ns = 0;
  double stddev_ns = 0;  // population
  bool operator==(const Stats&) const = default;
};

/// Throws ParameterError on an empty list.
Stats compute_stats(const std::vector<Nanos>& durations);

// ---- protocol --------------------------------------------------------------------

struct DocumentLoad {
  std::string name;
  std::uint64_t bytes = 0;
  Nanos duration{0};
};

struct LoadReport {
  std::vector<DocumentLoad> documents;
  Nanos total{0};
};

/// Raised by load_test when the backend rejects a document; carries the
/// documents acknowledged before the failure.
class LoadError : public DriverError {
 public:
  LoadError(const std::string& what, LoadReport partial) : DriverError(what), partial(std::move(partial)) {}
  LoadReport partial;
};

/// Ships model, dimensions and facts in that order, timing each.
LoadReport load_test(Driver& driver, const WarehouseDocuments& docs);

enum class RunKind { kCold, kWarm };
enum class RunStatus { kOk, kTimeout, kError };
std::string_view run_kind_name(RunKind k);
std::string_view run_status_name(RunStatus s);

struct Execution {
  RunKind kind = RunKind::kCold;
  int index = 0;  // 0 for the cold run, 1..NRUN for warm runs
  Nanos duration{0};
  std::int64_t started_unix_ns = 0;
  RunStatus status = RunStatus::kOk;
};

struct QueryRecord {
  std::string id;
  QueryGroup group = QueryGroup::kReporting;
  std::vector<Execution> runs;
  RunStatus status = RunStatus::kOk;  // first failure, if any; later runs are skipped
  std::string error;
  std::optional<std::size_t> row_count;  // from the cold run
};

struct BlockStats {
  QueryGroup group = QueryGroup::kReporting;
  std::optional<Stats> cold;
  std::optional<Stats> warm;
};

enum class VerdictKind { kMatch, kMismatch, kIncomparable };
std::string_view verdict_name(VerdictKind k);

struct Verdict {
  std::string query;
  VerdictKind kind = VerdictKind::kMatch;
  std::string detail;
};

struct RunReport {
  std::string backend;
  std::string timestamp;  // UTC, ISO 8601
  std::map<std::string, std::string> environment;  // generation parameters and such
  std::uint64_t fact_count = 0;
  WorkloadConfig config;
  std::optional<LoadReport> load;
  std::vector<QueryRecord> queries;
  std::vector<BlockStats> blocks;
  std::optional<Stats> cold;
  std::optional<Stats> warm;
  std::vector<Verdict> verdicts;
  std::string caveat = "backend cache state before the cold run is not controlled";
};

/// Called after every execution; used for progress output.
using ExecutionObserver = std::function<void(const QueryRecord&, const Execution&)>;

/// One cold pass over the enabled queries, then NRUN warm passes. Queries that
/// time out or fail keep their recorded runs and skip the rest.
RunReport performance_test(Driver& driver, const WorkloadConfig& wc, const WarehouseModel& model,
                           const ExecutionObserver& observer = {});

/// Recomputes block and overall Stats from the raw durations of successful runs.
void summarize(RunReport& report);

/// Runs every enabled query once (untimed) and compares with evaluate() on `w`.
std::vector<Verdict> verify_backend(Driver& driver, const Warehouse& w, const WorkloadConfig& wc);

// ---- report files ----------------------------------------------------------------

std::string report_to_json(const RunReport& r);
/// Throws ParseError on malformed or inconsistent input.
RunReport report_from_json(std::string_view text);

/// query,group,run_kind,run_index,duration_ms,status
std::string report_to_csv(const RunReport& r);

/// Per-block Stats table in milliseconds.
std::string stats_table(const RunReport& r);

std::string utc_timestamp();

}  // namespace xweb
