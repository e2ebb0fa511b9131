#pragma once

#include <cstddef>
#include <cstdlib>
#include <memory>
#include <string>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>

namespace sphereflock {

/// Worker cap from SPHEREFLOCK_THREADS; 0 means no cap.
inline std::size_t worker_limit_from_env() {
  const char* raw = std::getenv("SPHEREFLOCK_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    const long value = std::stol(raw);
    return value > 0 ? static_cast<std::size_t>(value) : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

/// Holds the process-wide worker cap for its lifetime.
class WorkerCap {
 public:
  explicit WorkerCap(std::size_t workers) {
    if (workers > 0)
      control_ = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism, workers);
  }

 private:
  std::unique_ptr<tbb::global_control> control_;
};

/// Calls body(i) for i in [0, n). Each index is handled by exactly one task,
/// so results written per index do not depend on the worker count.
template <class Body>
void for_each_index(std::size_t n, std::size_t min_parallel, Body&& body) {
  if (n < min_parallel) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n), [&](const tbb::blocked_range<std::size_t>& r) {
    for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
  });
}

}  // namespace sphereflock
