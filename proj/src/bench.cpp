#include "xweb/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numeric>

#include "json.hpp"
#include "xweb/xquery.hpp"

namespace xweb {

// ---- reference driver ------------------------------------------------------------

void ReferenceDriver::reset() {
  index_.reset();
  loaded_.reset();
  dimensions_.clear();
  model_.reset();
}

void ReferenceDriver::load_document(const std::string& name, std::string_view bytes) {
  try {
    if (name == kModelDocument) {
      reset();
      model_ = parse_model(bytes);
      return;
    }
    if (!model_) throw DriverError("model document must be loaded first");
    if (name == model_->fact.path) {
      index_.reset();
      std::vector<std::string> warnings;
      std::vector<Fact> facts = parse_facts(bytes, &warnings);
      loaded_ = assemble_warehouse(*model_, dimensions_, std::move(facts), std::move(warnings));
      index_ = std::make_unique<WarehouseIndex>(loaded_->warehouse);
      return;
    }
    for (const auto& d : model_->dimensions) {
      if (d.path != name) continue;
      ParsedDimension parsed = parse_dimension(bytes);
      if (parsed.id != d.id) throw DriverError("document declares dimension " + parsed.id + ", expected " + d.id);
      std::erase_if(dimensions_, [&](const ParsedDimension& p) { return p.id == d.id; });
      dimensions_.push_back(std::move(parsed));
      return;
    }
    throw DriverError("document not named by the model");
  } catch (const DriverError& e) {
    throw DriverError(name + ": " + e.what());
  } catch (const Error& e) {
    throw DriverError(name + ": " + e.what());
  }
}

QueryResponse ReferenceDriver::execute_query(const QuerySpec& q, const std::string&, const Deadline& deadline) {
  if (!index_) throw DriverError("no warehouse loaded");
  QueryResponse r;
  try {
    r.rows = evaluate(q, *index_, deadline);
  } catch (const TimeoutError&) {
    throw;
  } catch (const Error& e) {
    throw DriverError(e.what());
  }
  return r;
}

const std::vector<std::string>& ReferenceDriver::warnings() const {
  static const std::vector<std::string> none;
  return loaded_ ? loaded_->warnings : none;
}

// ---- statistics -----------------------------------------------------------------

Stats compute_stats(const std::vector<Nanos>& durations) {
  if (durations.empty()) throw ParameterError("statistics of an empty duration list");
  Stats s;
  s.count = durations.size();
  s.min_ns = durations.front().count();
  s.max_ns = durations.front().count();
  for (const auto d : durations) {
    s.global_ns += d.count();
    s.min_ns = std::min<std::int64_t>(s.min_ns, d.count());
    s.max_ns = std::max<std::int64_t>(s.max_ns, d.count());
  }
  const double n = static_cast<double>(s.count);
  s.avg_ns = static_cast<double>(s.global_ns) / n;
  double sq = 0;
  for (const auto d : durations) {
    const double dev = static_cast<double>(d.count()) - s.avg_ns;
    sq += dev * dev;
  }
  s.stddev_ns = std::sqrt(sq / n);
  return s;
}

// ---- protocol --------------------------------------------------------------------

namespace {

std::int64_t unix_ns() {
  return std::chrono::duration_cast<Nanos>(std::chrono::system_clock::now().time_since_epoch()).count();
}

}  // namespace

LoadReport load_test(Driver& driver, const WarehouseDocuments& docs) {
  LoadReport report;
  for (const NamedDocument* doc : docs.load_order()) {
    const auto start = Clock::now();
    try {
      driver.load_document(doc->name, doc->bytes);
    } catch (const Error& e) {
      throw LoadError(std::string("load of ") + doc->name + " failed: " + e.what(), report);
    }
    const Nanos took = std::chrono::duration_cast<Nanos>(Clock::now() - start);
    report.documents.push_back({doc->name, doc->bytes.size(), took});
    report.total += took;
  }
  return report;
}

std::string_view run_kind_name(RunKind k) { return k == RunKind::kCold ? "cold" : "warm"; }

std::string_view run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::kOk:
      return "ok";
    case RunStatus::kTimeout:
      return "timeout";
    case RunStatus::kError:
      return "error";
  }
  return "?";
}

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::kMatch:
      return "match";
    case VerdictKind::kMismatch:
      return "mismatch";
    case VerdictKind::kIncomparable:
      return "incomparable";
  }
  return "?";
}

RunReport performance_test(Driver& driver, const WorkloadConfig& wc, const WarehouseModel& model,
                           const ExecutionObserver& observer) {
  wc.validate();
  RunReport report;
  report.backend = driver.id();
  report.timestamp = utc_timestamp();
  report.config = wc;

  const auto queries = build_workload(wc);
  std::vector<std::string> texts;
  for (const auto& q : queries) {
    texts.push_back(render_xquery(q, model));
    report.queries.push_back(QueryRecord{q.id, q.group, {}, RunStatus::kOk, {}, std::nullopt});
  }

  for (int pass = 0; pass <= wc.nrun; ++pass) {
    for (std::size_t i = 0; i < queries.size(); ++i) {
      QueryRecord& rec = report.queries[i];
      if (rec.status != RunStatus::kOk) continue;
      Execution ex;
      ex.kind = pass == 0 ? RunKind::kCold : RunKind::kWarm;
      ex.index = pass;
      ex.started_unix_ns = unix_ns();
      const auto start = Clock::now();
      try {
        QueryResponse resp = driver.execute_query(queries[i], texts[i], start + wc.timeout);
        ex.duration = std::chrono::duration_cast<Nanos>(Clock::now() - start);
        if (ex.duration > wc.timeout) {
          ex.status = RunStatus::kTimeout;
          rec.error = "response arrived after the timeout";
        } else if (pass == 0 && resp.rows) {
          rec.row_count = resp.rows->rows.size();
        }
      } catch (const TimeoutError& e) {
        ex.duration = std::chrono::duration_cast<Nanos>(Clock::now() - start);
        ex.status = RunStatus::kTimeout;
        rec.error = e.what();
      } catch (const Error& e) {
        ex.duration = std::chrono::duration_cast<Nanos>(Clock::now() - start);
        ex.status = RunStatus::kError;
        rec.error = e.what();
      }
      rec.status = ex.status;
      rec.runs.push_back(ex);
      if (observer) observer(rec, ex);
    }
  }
  summarize(report);
  return report;
}

void summarize(RunReport& report) {
  report.blocks.clear();
  std::vector<Nanos> all_cold;
  std::vector<Nanos> all_warm;
  for (QueryGroup g : kAllGroups) {
    if (!report.config.enabled(g)) continue;
    std::vector<Nanos> cold;
    std::vector<Nanos> warm;
    for (const auto& q : report.queries) {
      if (q.group != g) continue;
      for (const auto& ex : q.runs) {
        if (ex.status != RunStatus::kOk) continue;
        (ex.kind == RunKind::kCold ? cold : warm).push_back(ex.duration);
      }
    }
    BlockStats b;
    b.group = g;
    if (!cold.empty()) b.cold = compute_stats(cold);
    if (!warm.empty()) b.warm = compute_stats(warm);
    all_cold.insert(all_cold.end(), cold.begin(), cold.end());
    all_warm.insert(all_warm.end(), warm.begin(), warm.end());
    report.blocks.push_back(b);
  }
  report.cold = all_cold.empty() ? std::nullopt : std::optional<Stats>(compute_stats(all_cold));
  report.warm = all_warm.empty() ? std::nullopt : std::optional<Stats>(compute_stats(all_warm));
}

std::vector<Verdict> verify_backend(Driver& driver, const Warehouse& w, const WorkloadConfig& wc) {
  std::vector<Verdict> out;
  const auto queries = build_workload(wc);
  if (!driver.returns_comparable_rows()) {
    for (const auto& q : queries) out.push_back({q.id, VerdictKind::kIncomparable, "backend returns opaque payloads"});
    return out;
  }
  const WarehouseIndex index(w);
  for (const auto& q : queries) {
    try {
      const QueryResult expected = evaluate(q, index);
      QueryResponse resp = driver.execute_query(q, render_xquery(q, w.model), Clock::now() + wc.timeout);
      if (!resp.rows) {
        out.push_back({q.id, VerdictKind::kIncomparable, "no rows returned"});
        continue;
      }
      if (auto d = diff_results(expected, *resp.rows))
        out.push_back({q.id, VerdictKind::kMismatch, *d});
      else
        out.push_back({q.id, VerdictKind::kMatch, {}});
    } catch (const Error& e) {
      out.push_back({q.id, VerdictKind::kMismatch, std::string("backend failed: ") + e.what()});
    }
  }
  return out;
}

// ---- report files ----------------------------------------------------------------

namespace {

using nlohmann::json;

json stats_json(const std::optional<Stats>& s) {
  if (!s) return nullptr;
  return json{{"count", s->count},   {"global_ns", s->global_ns}, {"avg_ns", s->avg_ns},
              {"min_ns", s->min_ns}, {"max_ns", s->max_ns},       {"stddev_ns", s->stddev_ns}};
}

std::optional<Stats> stats_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  Stats s;
  s.count = j.at("count").get<std::size_t>();
  s.global_ns = j.at("global_ns").get<std::int64_t>();
  s.avg_ns = j.at("avg_ns").get<double>();
  s.min_ns = j.at("min_ns").get<std::int64_t>();
  s.max_ns = j.at("max_ns").get<std::int64_t>();
  s.stddev_ns = j.at("stddev_ns").get<double>();
  return s;
}

bool close(const std::optional<Stats>& a, const std::optional<Stats>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->count == b->count && a->global_ns == b->global_ns && a->min_ns == b->min_ns && a->max_ns == b->max_ns &&
         std::abs(a->avg_ns - b->avg_ns) <= 1 && std::abs(a->stddev_ns - b->stddev_ns) <= 1;
}

template <typename E>
E enum_from(const std::string& text, std::initializer_list<E> values, std::string_view (*name)(E)) {
  for (E v : values)
    if (name(v) == text) return v;
  throw ParseError("unknown value '" + text + "'");
}

std::string ms(Nanos d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(d.count()) / 1e6);
  return buf;
}

}  // namespace

std::string report_to_json(const RunReport& r) {
  json j;
  j["backend"] = r.backend;
  j["timestamp"] = r.timestamp;
  j["environment"] = r.environment;
  j["fact_count"] = r.fact_count;
  json blocks = json::array();
  for (QueryGroup g : kAllGroups)
    if (r.config.enabled(g)) blocks.push_back(std::string(group_name(g)));
  j["config"] = {{"blocks", blocks}, {"nrun", r.config.nrun}, {"timeout_ms", r.config.timeout.count()}};
  if (r.load) {
    json docs = json::array();
    for (const auto& d : r.load->documents)
      docs.push_back({{"name", d.name}, {"bytes", d.bytes}, {"duration_ns", d.duration.count()}});
    j["load"] = {{"total_ns", r.load->total.count()}, {"documents", docs}};
  } else {
    j["load"] = nullptr;
  }
  json qs = json::array();
  for (const auto& q : r.queries) {
    json runs = json::array();
    for (const auto& ex : q.runs)
      runs.push_back({{"kind", run_kind_name(ex.kind)},
                      {"index", ex.index},
                      {"duration_ns", ex.duration.count()},
                      {"started_unix_ns", ex.started_unix_ns},
                      {"status", run_status_name(ex.status)}});
    json jq = {{"id", q.id}, {"group", group_name(q.group)}, {"status", run_status_name(q.status)}, {"runs", runs}};
    if (!q.error.empty()) jq["error"] = q.error;
    if (q.row_count) jq["row_count"] = *q.row_count;
    qs.push_back(jq);
  }
  j["queries"] = qs;
  json bs = json::array();
  for (const auto& b : r.blocks)
    bs.push_back({{"group", group_name(b.group)}, {"cold", stats_json(b.cold)}, {"warm", stats_json(b.warm)}});
  j["blocks"] = bs;
  j["cold"] = stats_json(r.cold);
  j["warm"] = stats_json(r.warm);
  json vs = json::array();
  for (const auto& v : r.verdicts) vs.push_back({{"query", v.query}, {"verdict", verdict_name(v.kind)}, {"detail", v.detail}});
  j["verdicts"] = vs;
  j["caveat"] = r.caveat;
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  RunReport r;
  try {
    const json j = json::parse(text);
    r.backend = j.at("backend").get<std::string>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.environment = j.at("environment").get<std::map<std::string, std::string>>();
    r.fact_count = j.at("fact_count").get<std::uint64_t>();
    const json& c = j.at("config");
    r.config.re = r.config.d1 = r.config.d2 = r.config.d3 = r.config.ch = false;
    std::string blocks;
    for (const auto& b : c.at("blocks")) blocks += b.get<std::string>() + ",";
    r.config = with_blocks(r.config, blocks);
    r.config.nrun = c.at("nrun").get<int>();
    r.config.timeout = std::chrono::milliseconds(c.at("timeout_ms").get<std::int64_t>());
    if (!j.at("load").is_null()) {
      LoadReport lr;
      lr.total = Nanos(j["load"].at("total_ns").get<std::int64_t>());
      for (const auto& d : j["load"].at("documents"))
        lr.documents.push_back({d.at("name").get<std::string>(), d.at("bytes").get<std::uint64_t>(),
                                Nanos(d.at("duration_ns").get<std::int64_t>())});
      r.load = lr;
    }
    const auto kinds = {RunKind::kCold, RunKind::kWarm};
    const auto statuses = {RunStatus::kOk, RunStatus::kTimeout, RunStatus::kError};
    for (const auto& jq : j.at("queries")) {
      QueryRecord q;
      q.id = jq.at("id").get<std::string>();
      const auto g = group_from_name(jq.at("group").get<std::string>());
      if (!g) throw ParseError("unknown group for " + q.id);
      q.group = *g;
      q.status = enum_from(jq.at("status").get<std::string>(), statuses, run_status_name);
      q.error = jq.value("error", "");
      if (jq.contains("row_count")) q.row_count = jq["row_count"].get<std::size_t>();
      for (const auto& jr : jq.at("runs")) {
        Execution ex;
        ex.kind = enum_from(jr.at("kind").get<std::string>(), kinds, run_kind_name);
        ex.index = jr.at("index").get<int>();
        ex.duration = Nanos(jr.at("duration_ns").get<std::int64_t>());
        ex.started_unix_ns = jr.at("started_unix_ns").get<std::int64_t>();
        ex.status = enum_from(jr.at("status").get<std::string>(), statuses, run_status_name);
        q.runs.push_back(ex);
      }
      r.queries.push_back(std::move(q));
    }
    for (const auto& jb : j.at("blocks")) {
      BlockStats b;
      const auto g = group_from_name(jb.at("group").get<std::string>());
      if (!g) throw ParseError("unknown block group");
      b.group = *g;
      b.cold = stats_from(jb.at("cold"));
      b.warm = stats_from(jb.at("warm"));
      r.blocks.push_back(b);
    }
    r.cold = stats_from(j.at("cold"));
    r.warm = stats_from(j.at("warm"));
    const auto verdicts = {VerdictKind::kMatch, VerdictKind::kMismatch, VerdictKind::kIncomparable};
    for (const auto& jv : j.at("verdicts"))
      r.verdicts.push_back({jv.at("query").get<std::string>(),
                            enum_from(jv.at("verdict").get<std::string>(), verdicts, verdict_name),
                            jv.value("detail", "")});
    r.caveat = j.value("caveat", "");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }

  // Stored statistics must follow from the raw durations.
  RunReport check = r;
  summarize(check);
  bool same = check.blocks.size() == r.blocks.size() && close(check.cold, r.cold) && close(check.warm, r.warm);
  for (std::size_t i = 0; same && i < r.blocks.size(); ++i)
    same = check.blocks[i].group == r.blocks[i].group && close(check.blocks[i].cold, r.blocks[i].cold) &&
           close(check.blocks[i].warm, r.blocks[i].warm);
  if (!same) throw ParseError("report statistics do not match its raw durations");
  return r;
}

std::string report_to_csv(const RunReport& r) {
  std::string out = "query,group,run_kind,run_index,duration_ms,status\n";
  if (r.load) {
    for (const auto& d : r.load->documents) out += d.name + ",,load,0," + ms(d.duration) + ",ok\n";
    out += "load,,load,0," + ms(r.load->total) + ",ok\n";
  }
  for (const auto& q : r.queries)
    for (const auto& ex : q.runs)
      out += q.id + "," + std::string(group_name(q.group)) + "," + std::string(run_kind_name(ex.kind)) + "," +
             std::to_string(ex.index) + "," + ms(ex.duration) + "," + std::string(run_status_name(ex.status)) + "\n";
  return out;
}

std::string stats_table(const RunReport& r) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-6s %-5s %5s %14s %12s %12s %12s %12s\n", "block", "run", "n", "global_ms",
                "avg_ms", "min_ms", "max_ms", "stddev_ms");
  out += line;
  auto row = [&](std::string_view block, const char* kind, const std::optional<Stats>& s) {
    if (!s) return;
    std::snprintf(line, sizeof line, "%-6.*s %-5s %5zu %14.3f %12.3f %12.3f %12.3f %12.3f\n",
                  static_cast<int>(block.size()), block.data(), kind, s->count, s->global_ns / 1e6, s->avg_ns / 1e6,
                  s->min_ns / 1e6, s->max_ns / 1e6, s->stddev_ns / 1e6);
    out += line;
  };
  for (const auto& b : r.blocks) {
    row(group_name(b.group), "cold", b.cold);
    row(group_name(b.group), "warm", b.warm);
  }
  row("all", "cold", r.cold);
  row("all", "warm", r.warm);
  if (r.load) {
    std::snprintf(line, sizeof line, "load %.3f ms over %zu documents\n", r.load->total.count() / 1e6,
                  r.load->documents.size());
    out += line;
  }
  std::size_t failed = 0;
  for (const auto& q : r.queries) failed += q.status != RunStatus::kOk;
  if (failed > 0) out += std::to_string(failed) + " queries timed out or failed\n";
  return out;
}

std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace xweb
