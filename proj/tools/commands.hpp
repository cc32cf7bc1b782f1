#pragma once

#include "cli_config.hpp"

namespace warplab {

// Exit codes: 0 success, 2 validation error, 3 non-convergence,
// 4 identity/acceptance failure.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 2;
inline constexpr int kNonConvergence = 3;
inline constexpr int kCheckFailure = 4;

/// Dispatch a validated config. Errors are also written into the report.
int run(const RunConfig& cfg);

}  // namespace warplab
