#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "xweb/bench.hpp"
#include "xweb/cli.hpp"
#include "xweb/http.hpp"
#include "xweb/store.hpp"

namespace xweb {
namespace {

namespace fs = std::filesystem;
using testing::scratch_dir;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  args.insert(args.begin(), "xweb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<fs::path> files_with(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ext) out.push_back(e.path());
  return out;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = new fs::path(scratch_dir("cli"));
    const auto r = cli({"generate", "--sf", "1", "--density", "1e-4", "--seed", "42", "--divisor", "5000", "--pm",
                        "0.1", "--out", (*root_ / "wh").string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*root_);
    delete root_;
  }
  static fs::path* root_;
};
fs::path* Cli::root_ = nullptr;

TEST_F(Cli, GenerateWritesSixDocumentsAndManifest) {
  std::size_t xml = files_with(*root_ / "wh", ".xml").size();
  EXPECT_EQ(xml, 6u);
  EXPECT_TRUE(fs::exists(*root_ / "wh" / "manifest.txt"));
  const auto r = cli({"generate", "--sf", "1", "--density", "1e-4", "--seed", "42", "--divisor", "5000", "--pm",
                      "0.1", "--out", (*root_ / "wh2").string()});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(read_manifest(*root_ / "wh").documents, read_manifest(*root_ / "wh2").documents);
}

TEST_F(Cli, ParameterErrorsExitOne) {
  EXPECT_EQ(cli({"generate", "--density", "0", "--out", (*root_ / "bad").string()}).code, kExitParameter);
  EXPECT_EQ(cli({"generate", "--out"}).code, kExitParameter);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitParameter);
  EXPECT_EQ(cli({"run", "--warehouse", (*root_ / "missing").string()}).code, kExitParameter);
  EXPECT_EQ(cli({"run", "--warehouse", (*root_ / "wh").string(), "--driver", "http"}).code, kExitParameter);
  EXPECT_EQ(cli({"run", "--warehouse", (*root_ / "wh").string(), "--blocks", "XX"}).code, kExitParameter);
  EXPECT_EQ(cli({"--version"}).code, kExitOk);
}

TEST_F(Cli, RunReferenceReportingBlock) {
  const auto reports = *root_ / "reports-re";
  const auto r = cli({"run", "--warehouse", (*root_ / "wh").string(), "--blocks", "RE", "--nrun", "0",
                      "--report-dir", reports.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto json = files_with(reports, ".json");
  ASSERT_EQ(json.size(), 1u);
  EXPECT_EQ(files_with(reports, ".csv").size(), 1u);
  std::ifstream in(json[0]);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto report = report_from_json(ss.str());
  ASSERT_EQ(report.queries.size(), 3u);
  EXPECT_EQ(report.queries[2].id, "Q03");
  for (const auto& q : report.queries) {
    ASSERT_EQ(q.runs.size(), 1u);
    EXPECT_EQ(q.runs[0].kind, RunKind::kCold);
  }
  EXPECT_EQ(report.environment.at("seed"), "42");
  EXPECT_EQ(report.fact_count, read_manifest(*root_ / "wh").stats.facts_emitted);
}

TEST_F(Cli, VerifyAllMatches) {
  const auto r = cli({"run", "--warehouse", (*root_ / "wh").string(), "--verify", "--report-dir",
                      (*root_ / "reports-verify").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::size_t matches = 0;
  for (std::size_t pos = 0; (pos = r.out.find(": match", pos)) != std::string::npos; ++pos) ++matches;
  EXPECT_EQ(matches, 20u);
}

TEST_F(Cli, HttpDriverAgainstMockCubeBlocks) {
  MockBackend mock;
  mock.start();
  const auto cfg = *root_ / "mock.conf";
  std::ofstream(cfg) << "id = mock\nbase_url = " << mock.base_url() << "\n";
  const auto reports = *root_ / "reports-http";
  const auto r = cli({"run", "--warehouse", (*root_ / "wh").string(), "--driver", "http", "--driver-config",
                      cfg.string(), "--blocks", "2D,3D", "--report-dir", reports.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream in(files_with(reports, ".json").at(0));
  std::stringstream ss;
  ss << in.rdbuf();
  const auto report = report_from_json(ss.str());
  std::vector<std::string> ids;
  for (const auto& q : report.queries) ids.push_back(q.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"Q08", "Q09", "Q10", "Q11", "Q12", "Q13", "Q14"}));
  EXPECT_EQ(report.backend, "mock");
}

TEST_F(Cli, MismatchExitsThree) {
  MockOptions opts;
  opts.corrupt_query = "Q01";
  MockBackend mock(opts);
  mock.start();
  const auto cfg = *root_ / "corrupt.conf";
  std::ofstream(cfg) << "base_url = " << mock.base_url() << "\n";
  const auto r = cli({"run", "--warehouse", (*root_ / "wh").string(), "--driver", "http", "--driver-config",
                      cfg.string(), "--blocks", "RE", "--verify", "--report-dir", (*root_ / "reports-bad").string()});
  EXPECT_EQ(r.code, kExitMismatch) << r.err;
  EXPECT_NE(r.out.find("verify Q01: mismatch"), std::string::npos);
}

TEST_F(Cli, UnreachableBackendExitsTwo) {
  const auto cfg = *root_ / "dead.conf";
  std::ofstream(cfg) << "base_url = http://127.0.0.1:1\nconnect_timeout_ms = 200\n";
  const auto r = cli({"run", "--warehouse", (*root_ / "wh").string(), "--driver", "http", "--driver-config",
                      cfg.string(), "--report-dir", (*root_ / "reports-dead").string()});
  EXPECT_EQ(r.code, kExitRuntime) << r.err;
}

TEST_F(Cli, ReportAndPlot) {
  const auto reports = *root_ / "reports-plot";
  ASSERT_EQ(cli({"run", "--warehouse", (*root_ / "wh").string(), "--report-dir", reports.string()}).code, kExitOk);
  ASSERT_EQ(cli({"run", "--warehouse", (*root_ / "wh").string(), "--report-dir", reports.string()}).code, kExitOk);
  const auto plot = *root_ / "series.csv";
  const auto r = cli({"report", reports.string(), "--plot", plot.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("stddev_ms"), std::string::npos);
  std::ifstream in(plot);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "block,fact_count,cold_global_ms");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 10u);  // 5 blocks x 2 reports
}

TEST_F(Cli, ReportFailures) {
  const auto empty = scratch_dir("cli-empty");
  EXPECT_NE(cli({"report", empty.string()}).code, kExitOk);
  std::ofstream(empty / "broken.json") << "{\"backend\": ";
  const auto r = cli({"report", empty.string()});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("broken.json"), std::string::npos);
  fs::remove_all(empty);
}

TEST_F(Cli, TamperedWarehouseIsRejected) {
  const auto dir = *root_ / "wh-tampered";
  ASSERT_EQ(cli({"generate", "--density", "1e-4", "--divisor", "5000", "--out", dir.string()}).code, kExitOk);
  std::ofstream(dir / "d_supplier.xml", std::ios::app) << " ";
  const auto r = cli({"run", "--warehouse", dir.string(), "--report-dir", (*root_ / "reports-t").string()});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("d_supplier.xml"), std::string::npos);
}

TEST_F(Cli, ExportWorkload) {
  const auto out = *root_ / "xq";
  ASSERT_EQ(cli({"export-workload", "--out", out.string(), "--blocks", "CH"}).code, kExitOk);
  EXPECT_EQ(files_with(out, ".xq").size(), 6u);
}

}  // namespace
}  // namespace xweb
