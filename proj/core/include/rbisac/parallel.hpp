// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <cstddef>
#include <functional>

namespace rbisac {

/// Worker count from RBISAC_WORKERS, falling back to hardware concurrency.
int default_worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 selects
/// default_worker_count()). Tasks are claimed dynamically, so callers must
/// write results by index. The first exception (lowest index) is rethrown
/// after all workers stop.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int workers = 0);

} // namespace rbisac
