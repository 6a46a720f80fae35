#pragma once

#include <cstddef>
#include <functional>

#include "morita/report.hpp"

namespace morita {

/// Number of worker threads for verification sweeps. Controlled by the
/// MORITA_THREADS environment variable, clamped to [1, hardware].
std::size_t thread_budget();

/// Runs body(index, section) for every index in [0, count) and merges the
/// per-chunk sections in index order, so the assembled section is identical
/// to a sequential sweep regardless of the thread count. The body must be
/// pure apart from writes to its own section.
void parallel_sweep(std::size_t count, ReportSection& section,
                    const std::function<void(std::size_t, ReportSection&)>& body);

}  // namespace morita
