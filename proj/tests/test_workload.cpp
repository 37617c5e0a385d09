#include <gtest/gtest.h>

#include <map>

#include "xweb/error.hpp"
#include "xweb/model.hpp"
#include "xweb/workload.hpp"

namespace xweb {
namespace {

std::vector<std::string> ids(const std::vector<QuerySpec>& qs) {
  std::vector<std::string> out;
  for (const auto& q : qs) out.push_back(q.id);
  return out;
}

WorkloadConfig none() {
  WorkloadConfig wc;
  wc.re = wc.d1 = wc.d2 = wc.d3 = wc.ch = false;
  return wc;
}

TEST(Workload, FullWorkloadGroupSizes) {
  const auto all = build_workload(WorkloadConfig{});
  ASSERT_EQ(all.size(), 20u);
  std::map<QueryGroup, int> sizes;
  for (std::size_t i = 0; i < all.size(); ++i) {
    char id[4];
    std::snprintf(id, sizeof id, "Q%02zu", i + 1);
    EXPECT_EQ(all[i].id, id);
    ++sizes[all[i].group];
  }
  EXPECT_EQ(sizes[QueryGroup::kReporting], 3);
  EXPECT_EQ(sizes[QueryGroup::kCube1D], 4);
  EXPECT_EQ(sizes[QueryGroup::kCube2D], 4);
  EXPECT_EQ(sizes[QueryGroup::kCube3D], 3);
  EXPECT_EQ(sizes[QueryGroup::kComplexHierarchy], 6);
  EXPECT_EQ(build_workload(WorkloadConfig{}), all);
}

TEST(Workload, BlockGatingIsExact) {
  auto wc = none();
  EXPECT_TRUE(build_workload(wc).empty());
  wc.re = true;
  EXPECT_EQ(ids(build_workload(wc)), (std::vector<std::string>{"Q01", "Q02", "Q03"}));
  EXPECT_EQ(ids(build_workload(with_blocks(WorkloadConfig{}, "2D,3D"))),
            (std::vector<std::string>{"Q08", "Q09", "Q10", "Q11", "Q12", "Q13", "Q14"}));
  EXPECT_EQ(build_workload(with_blocks(WorkloadConfig{}, "ch")).size(), 6u);
  EXPECT_THROW(with_blocks(WorkloadConfig{}, "RE,4D"), ParameterError);
}

TEST(Workload, EveryQueryResolvesAgainstDefaultModel) {
  const auto m = build_default_model();
  for (const auto& q : full_workload()) EXPECT_TRUE(validate_query(q, m).empty()) << q.id;
}

TEST(Workload, TableShapes) {
  const auto q01 = *find_query("Q01");
  EXPECT_TRUE(q01.group_by.empty());
  EXPECT_TRUE(q01.ordering.empty());
  EXPECT_EQ(q01.aggregations.size(), 8u);
  const auto q04 = *find_query("Q04");
  ASSERT_EQ(q04.ordering.size(), 1u);
  EXPECT_EQ(q04.ordering[0].attribute, "p_retailprice");
  EXPECT_TRUE(q04.ordering[0].descending);
  EXPECT_EQ(find_query("Q05")->restriction[0].transform, Transform::kQuarter);
  EXPECT_EQ(find_query("Q19")->category_depth, 0);
  EXPECT_EQ(find_query("Q20")->category_depth, 1);
  EXPECT_EQ(find_query("Q12")->group_by, (std::vector<std::string>{"c_name", "p_name", "y_yearkey"}));
  EXPECT_FALSE(find_query("Q21").has_value());
  EXPECT_EQ(Aggregation({AggregateFn::kAvg, "f_totalamount"}).column(), "avg_f_totalamount");
}

TEST(Workload, Quarter) {
  EXPECT_EQ(quarter(1), 1);
  EXPECT_EQ(quarter(3), 1);
  EXPECT_EQ(quarter(4), 2);
  EXPECT_EQ(quarter(12), 4);
  EXPECT_THROW(quarter(0), ParameterError);
  EXPECT_THROW(quarter(13), ParameterError);
}

TEST(Workload, ValidationDiagnostics) {
  const auto m = build_default_model();
  QuerySpec q = *find_query("Q09");
  q.group_by.push_back("p_colour");
  q.restriction.push_back({"y_yearkey", Transform::kNone, CompareOp::kEq, std::string("2000")});
  q.ordering.push_back({"c_name", false});
  const auto diags = validate_query(q, m);
  ASSERT_EQ(diags.size(), 3u);
  EXPECT_NE(diags[0].find("p_colour"), std::string::npos);
  EXPECT_NE(diags[1].find("y_yearkey"), std::string::npos);
  EXPECT_NE(diags[2].find("c_name"), std::string::npos);
}

TEST(Workload, QualifiedNamesAndModelChecks) {
  const auto m = build_default_model();
  const auto* n = resolve_attribute("C_Nation.n_name", m);
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->name, "n_name");
  ASSERT_NE(resolve_attribute("S_Region.r_name", m), nullptr);
  EXPECT_EQ(resolve_attribute("S_Region.r_name", m)->role, Role::kSupplier);
  EXPECT_EQ(resolve_attribute("w_week", m), nullptr);

  auto stripped = m;
  std::erase_if(stripped.dimensions, [](const DimensionDef& d) { return d.id == "SupplierDim"; });
  EXPECT_EQ(resolve_attribute("s_name", stripped), nullptr);
  EXPECT_FALSE(validate_query(*find_query("Q11"), stripped).empty());
}

TEST(WorkloadConfig, Validation) {
  WorkloadConfig wc;
  wc.nrun = -1;
  EXPECT_THROW(wc.validate(), ParameterError);
  wc.nrun = 0;
  wc.timeout = std::chrono::milliseconds(0);
  EXPECT_THROW(wc.validate(), ParameterError);
}

}  // namespace
}  // namespace xweb
