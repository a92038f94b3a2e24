#pragma once

// Deterministic parallel map over an index range. Work is assigned statically
// (worker w takes indices congruent to w mod jobs) and results are collected
// by index, so the output is identical for any worker count. A point that
// throws is recorded as a failed entry without aborting the rest.

#include <functional>
#include <string>
#include <vector>

namespace chemcompass {

struct SweepPoint {
  bool ok = false;
  std::vector<double> values;
  std::string error;
};

using PointFn = std::function<std::vector<double>(std::size_t)>;

// jobs <= 0 selects hardware concurrency; the count is clamped to n.
std::vector<SweepPoint> parallel_sweep(std::size_t n, int jobs, const PointFn& eval);

int effective_jobs(std::size_t n, int jobs);

}  // namespace chemcompass
