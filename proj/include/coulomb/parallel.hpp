#pragma once

#include <cstddef>
#include <exception>

#include <omp.h>

namespace cgas {

/// Execution policy for batch kernels. `Serial` is the reference path; both
/// must produce identical results because every task owns its own RNG.
enum class Execution { Serial, Parallel };

/// Runs task(i) for i in [0, count). Exceptions raised inside workers are
/// collected and the one from the lowest task index is rethrown.
template <class Task>
void for_each_task(std::size_t count, Execution exec, Task&& task) {
  const auto n = static_cast<long long>(count);
  if (exec == Execution::Serial) {
    for (long long i = 0; i < n; ++i) task(static_cast<std::size_t>(i));
    return;
  }
  std::exception_ptr first_error;
  long long first_index = n;
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      task(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(cgas_task_error)
      if (i < first_index) {
        first_index = i;
        first_error = std::current_exception();
      }
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

inline void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace cgas
