#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xweb/model.hpp"
#include "xweb/workload.hpp"

namespace xweb {

/// XQuery 3.1 text for `q` over the documents named in `model`. Grouping uses
/// distinct-values over composite keys (no group by clause). Its output is
/// the document to_result_xml() produces for the same query, modulo number
/// formatting.
std::string render_xquery(const QuerySpec& q, const WarehouseModel& model);

/// Writes one Qnn.xq per query into `dir` (created if needed); returns the paths.
std::vector<std::filesystem::path> export_workload(const std::vector<QuerySpec>& queries, const WarehouseModel& model,
                                                   const std::filesystem::path& dir);

}  // namespace xweb
