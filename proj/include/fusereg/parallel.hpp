#ifndef FUSEREG_PARALLEL_HPP
#define FUSEREG_PARALLEL_HPP

#include <cstddef>
#include <cstdint>

#include "fusereg/common.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fusereg {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

// Runs fn(i) for i in [0, count). fn must only write to slots owned by i and
// must not throw (capture failures in per-index state instead). The serial
// branch is the reference implementation used to validate the OpenMP one.
template <typename Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
#ifdef _OPENMP
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
      fn(static_cast<std::size_t>(i));
    }
    return;
  }
#else
  (void)exec;
#endif
  for (std::size_t i = 0; i < count; ++i) fn(i);
}

}  // namespace fusereg

#endif  // FUSEREG_PARALLEL_HPP
