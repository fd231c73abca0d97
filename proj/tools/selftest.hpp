#pragma once

#include "zp/json_io.hpp"

namespace zp {

/// Fast invariant suite across all modules; "passed" is the conjunction.
json run_selftest(const PrecisionContext& ctx, const RunInfo& run);

}  // namespace zp
