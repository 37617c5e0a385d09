#pragma once

#include <cstddef>

#include "xweb/engine.hpp"

namespace xweb {

/// Largest warehouse the oracle accepts.
inline constexpr std::size_t kOracleFactLimit = 10'000;

/// Brute-force evaluator for cross-checking evaluate(). Flattens every fact
/// into a joined tuple by linear lookups, then groups by nested scans. Throws
/// ParameterError above kOracleFactLimit facts.
QueryResult oracle_evaluate(const QuerySpec& q, const Warehouse& w);

}  // namespace xweb
