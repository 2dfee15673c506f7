#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace besov {

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int k) {
#ifdef _OPENMP
  if (k > 0) omp_set_num_threads(k);
#else
  (void)k;
#endif
}

struct KahanAcc {
  double s = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// Fixed block size for reductions: block boundaries never depend on the
// thread count, so sums are bit-identical for any number of threads.
inline constexpr std::int64_t kSumBlock = 4096;

template <class F>
double det_sum(std::int64_t n, F&& term) {
  if (n <= 0) return 0.0;
  const std::int64_t nb = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < nb; ++b) {
    const std::int64_t lo = b * kSumBlock;
    const std::int64_t hi = std::min(n, lo + kSumBlock);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  KahanAcc acc;
  for (double v : partial) acc.add(v);
  return acc.s;
}

// Max is associative and commutative exactly, so a plain reduction is
// already thread-count independent.
template <class F>
double par_max(std::int64_t n, F&& term) {
  double m = -std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::int64_t i = 0; i < n; ++i) m = std::max(m, term(i));
  return m;
}

template <class F>
void par_for(std::int64_t n, F&& body) {
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) body(i);
}

}  // namespace besov
