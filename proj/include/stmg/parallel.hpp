#pragma once

#include <functional>

namespace stmg {

/// Runs fn(0..n-1) on up to `jobs` threads (0 = hardware concurrency).
/// Exceptions propagate to the caller; index assignment is static, so
/// results are deterministic.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

} // namespace stmg
