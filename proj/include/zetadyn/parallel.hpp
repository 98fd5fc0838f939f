#pragma once

#include <exception>
#include <mutex>

namespace zetadyn {

enum class Exec { Serial, Parallel };

/// Index-space parallel loop. Results must be written to disjoint slots so
/// that serial and parallel execution produce identical output. The first
/// exception thrown by any iteration is rethrown after the loop completes.
template <class F>
void parallel_for(long n, Exec mode, F&& fn) {
  if (mode == Exec::Serial) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace zetadyn
