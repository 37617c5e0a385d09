#include "xweb/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "xweb/bench.hpp"
#include "xweb/http.hpp"
#include "xweb/store.hpp"
#include "xweb/xquery.hpp"

namespace xweb {
namespace fs = std::filesystem;

namespace {

struct GenerateArgs {
  GenParams params;
  std::string out;
  std::string taxonomy;
  std::string sampling = "geometric";
};

struct RunArgs {
  std::string warehouse;
  std::string driver = "reference";
  std::string driver_config;
  std::string blocks = "RE,1D,2D,3D,CH";
  int nrun = 0;
  double timeout_s = 60;
  bool verify = false;
  std::string report_dir = "reports";
};

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string plot;
};

struct ExportArgs {
  std::string out;
  std::string blocks = "RE,1D,2D,3D,CH";
};

struct MockArgs {
  int latency_ms = 0;
  double duration_s = 0;
};

struct VerifyArgs {
  std::string warehouse;
  std::string results;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
  if (!out) throw Error("cannot write " + p.string());
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  GenParams gp = a.params;
  if (a.sampling != "geometric" && a.sampling != "scan")
    throw ParameterError("--sampling must be 'geometric' or 'scan'");
  gp.sampling = a.sampling == "scan" ? Sampling::kScan : Sampling::kGeometricSkip;
  gp.validate();
  const CategoryTaxonomy taxonomy =
      build_category_taxonomy(a.taxonomy.empty() ? std::nullopt : std::optional<fs::path>(a.taxonomy));
  const Manifest m = generate_to_directory(gp, taxonomy, a.taxonomy.empty() ? "default" : a.taxonomy, a.out);
  out << "wrote " << m.documents.size() << " documents to " << a.out << "\n";
  for (const auto& d : m.documents) out << "  " << d.name << "  " << d.bytes << " bytes\n";
  out << "facts: " << m.stats.facts_emitted << ", estimated size " << static_cast<std::uint64_t>(m.estimated_bytes)
      << " bytes, actual " << m.total_bytes() << " bytes\n";
  return kExitOk;
}

std::string report_stem(const fs::path& dir, const std::string& backend) {
  std::string ts = utc_timestamp();
  std::erase_if(ts, [](char c) { return c == ':' || c == '-'; });
  for (int i = 0;; ++i) {
    const std::string stem = "run-" + backend + "-" + ts + (i ? "-" + std::to_string(i) : "");
    if (!fs::exists(dir / (stem + ".json"))) return stem;
  }
}

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  if (!fs::is_directory(a.warehouse)) throw ParameterError("warehouse directory " + a.warehouse + " does not exist");
  WorkloadConfig wc = with_blocks(WorkloadConfig{}, a.blocks);
  wc.nrun = a.nrun;
  if (!(a.timeout_s > 0)) throw ParameterError("--timeout must be positive");
  wc.timeout = std::chrono::milliseconds(std::max<std::int64_t>(1, static_cast<std::int64_t>(a.timeout_s * 1000)));
  wc.validate();

  std::unique_ptr<Driver> driver;
  if (a.driver == "reference") {
    driver = std::make_unique<ReferenceDriver>();
  } else if (a.driver == "http") {
    if (a.driver_config.empty()) throw ParameterError("--driver http needs --driver-config");
    driver = std::make_unique<HttpDriver>(load_http_config(a.driver_config));
  } else {
    throw ParameterError("--driver must be 'reference' or 'http'");
  }

  const Manifest manifest = read_manifest(a.warehouse);
  const WarehouseDocuments docs = read_documents(manifest, a.warehouse);

  driver->reset();
  LoadReport load;
  try {
    load = load_test(*driver, docs);
  } catch (const LoadError& e) {
    err << "load failed after " << e.partial.documents.size() << " documents: " << e.what() << "\n";
    return kExitRuntime;
  }
  out << "loaded " << load.documents.size() << " documents in " << load.total.count() / 1e6 << " ms\n";

  RunReport report = performance_test(*driver, wc, build_default_model(), [&](const QueryRecord& q, const Execution& ex) {
    out << q.id << " " << run_kind_name(ex.kind) << " " << ex.index << " " << ex.duration.count() / 1e6 << " ms "
        << run_status_name(ex.status) << "\n";
  });
  report.load = load;
  report.fact_count = manifest.stats.facts_emitted;
  for (const auto& [k, v] : manifest_entries(manifest)) report.environment[k] = v;
  report.environment["driver"] = driver->id();
  report.environment["warehouse"] = fs::absolute(a.warehouse).string();

  bool mismatch = false;
  if (a.verify) {
    const ParsedWarehouse local = parse_warehouse(docs);
    report.verdicts = verify_backend(*driver, local.warehouse, wc);
    for (const auto& v : report.verdicts) {
      out << "verify " << v.query << ": " << verdict_name(v.kind) << (v.detail.empty() ? "" : " (" + v.detail + ")")
          << "\n";
      mismatch = mismatch || v.kind == VerdictKind::kMismatch;
    }
  }

  fs::create_directories(a.report_dir);
  const std::string stem = report_stem(a.report_dir, report.backend);
  write_file(fs::path(a.report_dir) / (stem + ".json"), report_to_json(report));
  write_file(fs::path(a.report_dir) / (stem + ".csv"), report_to_csv(report));
  out << stats_table(report);
  out << "report: " << (fs::path(a.report_dir) / (stem + ".json")).string() << "\n";
  return mismatch ? kExitMismatch : kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& in : a.inputs) {
    if (fs::is_directory(in)) {
      for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".json") files.push_back(e.path());
    } else if (fs::exists(in)) {
      files.push_back(in);
    } else {
      throw ParameterError("no such report: " + in);
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ParameterError("no report files found");

  struct Point {
    std::string block;
    std::uint64_t facts;
    double ms;
  };
  std::vector<Point> points;
  for (const auto& f : files) {
    RunReport r;
    try {
      r = report_from_json(read_file(f));
    } catch (const Error& e) {
      err << f.string() << ": " << e.what() << "\n";
      return kExitRuntime;
    }
    out << f.filename().string() << "  backend " << r.backend << ", " << r.fact_count << " facts, " << r.timestamp
        << "\n";
    out << stats_table(r) << "\n";
    for (const auto& b : r.blocks)
      if (b.cold) points.push_back({std::string(group_name(b.group)), r.fact_count, b.cold->global_ns / 1e6});
  }
  if (!a.plot.empty()) {
    std::stable_sort(points.begin(), points.end(), [](const Point& x, const Point& y) {
      return x.block != y.block ? x.block < y.block : x.facts < y.facts;
    });
    std::string csv = "block,fact_count,cold_global_ms\n";
    char buf[64];
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, "%.6f", p.ms);
      csv += p.block + "," + std::to_string(p.facts) + "," + buf + "\n";
    }
    write_file(a.plot, csv);
    out << "plot series: " << a.plot << "\n";
  }
  return kExitOk;
}

int cmd_export(const ExportArgs& a, std::ostream& out) {
  const auto paths = export_workload(build_workload(with_blocks(WorkloadConfig{}, a.blocks)), build_default_model(), a.out);
  out << "wrote " << paths.size() << " queries to " << a.out << "\n";
  return kExitOk;
}

int cmd_serve_mock(const MockArgs& a, std::ostream& out) {
  MockOptions o;
  o.latency = std::chrono::milliseconds(a.latency_ms);
  MockBackend mock(o);
  mock.start();
  out << mock.base_url() << std::endl;
  if (a.duration_s > 0) {
    std::this_thread::sleep_for(std::chrono::duration<double>(a.duration_s));
  } else {
    for (;;) std::this_thread::sleep_for(std::chrono::hours(1));
  }
  mock.stop();
  return kExitOk;
}

// Compares Qnn.xml result documents produced elsewhere with the reference engine.
int cmd_verify_results(const VerifyArgs& a, std::ostream& out) {
  if (!fs::is_directory(a.warehouse)) throw ParameterError("warehouse directory " + a.warehouse + " does not exist");
  if (!fs::is_directory(a.results)) throw ParameterError("results directory " + a.results + " does not exist");
  const Manifest manifest = read_manifest(a.warehouse);
  const ParsedWarehouse pw = parse_warehouse(read_documents(manifest, a.warehouse));
  const WarehouseIndex index(pw.warehouse);
  std::size_t checked = 0;
  bool mismatch = false;
  for (const auto& q : full_workload()) {
    const fs::path p = fs::path(a.results) / (q.id + ".xml");
    if (!fs::exists(p)) continue;
    ++checked;
    const auto d = diff_results(evaluate(q, index), parse_result_xml(read_file(p), q));
    out << q.id << ": " << (d ? "mismatch (" + *d + ")" : std::string("match")) << "\n";
    mismatch = mismatch || d.has_value();
  }
  if (checked == 0) throw ParameterError("no Qnn.xml result files in " + a.results);
  return mismatch ? kExitMismatch : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"XWeB data warehouse benchmark toolkit", "xweb"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.set_config("--config", "", "read options from an INI or TOML file; command-line flags win");
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "generate a warehouse: six XML documents plus manifest");
  gen->add_option("--sf", ga.params.sf, "scale factor")->capture_default_str();
  gen->add_option("--density", ga.params.density, "fact density D in (0, 1]")->capture_default_str();
  gen->add_option("--pm", ga.params.p_missing, "per-slot missing-value probability")->capture_default_str();
  gen->add_option("--po", ga.params.p_reorder, "per-fact reordering probability")->capture_default_str();
  gen->add_option("--seed", ga.params.seed, "random seed")->capture_default_str();
  gen->add_option("--divisor", ga.params.scale_divisor, "cardinality scale divisor")->capture_default_str();
  gen->add_option("--out", ga.out, "output directory")->required();
  gen->add_option("--taxonomy", ga.taxonomy, "category taxonomy file (CHILD -> PARENT lines)");
  gen->add_option("--sampling", ga.sampling, "geometric or scan")->capture_default_str();

  RunArgs ra;
  auto* run = app.add_subcommand("run", "load a warehouse into a backend and time the workload");
  run->add_option("--warehouse", ra.warehouse, "directory written by generate")->required();
  run->add_option("--driver", ra.driver, "reference or http")->capture_default_str();
  run->add_option("--driver-config", ra.driver_config, "key = value file for the http driver");
  run->add_option("--blocks", ra.blocks, "workload blocks: RE,1D,2D,3D,CH")->capture_default_str();
  run->add_option("--nrun", ra.nrun, "warm runs after the cold run")->capture_default_str();
  run->add_option("--timeout", ra.timeout_s, "per-execution timeout in seconds")->capture_default_str();
  run->add_flag("--verify", ra.verify, "compare backend results with the reference engine");
  run->add_option("--report-dir", ra.report_dir, "where JSON and CSV reports go")->capture_default_str();

  ReportArgs rp;
  auto* rep = app.add_subcommand("report", "summarize report files");
  rep->add_option("reports", rp.inputs, "report files or directories")->required();
  rep->add_option("--plot", rp.plot, "write fact-count vs cold time series CSV");

  ExportArgs ea;
  auto* exp = app.add_subcommand("export-workload", "write the workload as Qnn.xq XQuery files");
  exp->add_option("--out", ea.out, "output directory")->required();
  exp->add_option("--blocks", ea.blocks, "workload blocks")->capture_default_str();

  MockArgs ma;
  auto* mock = app.add_subcommand("serve-mock", "serve the mock HTTP backend on an ephemeral port");
  mock->add_option("--latency-ms", ma.latency_ms, "latency added to every query")->capture_default_str();
  mock->add_option("--duration", ma.duration_s, "seconds to serve; 0 serves until killed")->capture_default_str();

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify-results", "check Qnn.xml result documents against the reference engine");
  ver->add_option("--warehouse", va.warehouse, "directory written by generate")->required();
  ver->add_option("--results", va.results, "directory holding Qnn.xml files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParameter;
  }

  try {
    if (gen->parsed()) return cmd_generate(ga, out);
    if (run->parsed()) return cmd_run(ra, out, err);
    if (rep->parsed()) return cmd_report(rp, out, err);
    if (exp->parsed()) return cmd_export(ea, out);
    if (mock->parsed()) return cmd_serve_mock(ma, out);
    if (ver->parsed()) return cmd_verify_results(va, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n" << "run 'xweb --help' for usage\n";
    return kExitParameter;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitParameter;
}

}  // namespace xweb
