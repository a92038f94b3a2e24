#include "chemcompass/sweep.hpp"

#include <algorithm>
#include <thread>

namespace chemcompass {

int effective_jobs(std::size_t n, int jobs) {
  if (jobs <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    jobs = hw ? static_cast<int>(hw) : 1;
  }
  if (n == 0) return 1;
  return std::min<int>(jobs, static_cast<int>(std::min<std::size_t>(n, 1024)));
}

std::vector<SweepPoint> parallel_sweep(std::size_t n, int jobs, const PointFn& eval) {
  std::vector<SweepPoint> results(n);
  int workers = effective_jobs(n, jobs);

  auto run_slice = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < n;
         i += static_cast<std::size_t>(workers)) {
      try {
        results[i].values = eval(i);
        results[i].ok = true;
      } catch (const std::exception& e) {
        results[i].ok = false;
        results[i].error = e.what();
      } catch (...) {
        results[i].ok = false;
        results[i].error = "unknown error";
      }
    }
  };

  if (workers <= 1) {
    run_slice(0);
    return results;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run_slice, w);
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace chemcompass
