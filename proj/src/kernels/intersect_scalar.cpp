#include "pspt/kernels/intersect.hpp"

namespace pspt::kernels {

size_t intersect_positions_scalar(const uint32_t* a, size_t na,
                                  const uint32_t* b, size_t nb,
                                  uint32_t* out_a, uint32_t* out_b) {
  size_t i = 0, j = 0, k = 0;
  while (i < na && j < nb) {
    uint32_t av = a[i], bv = b[j];
    if (av < bv) {
      ++i;
    } else if (av > bv) {
      ++j;
    } else {
      out_a[k] = static_cast<uint32_t>(i);
      out_b[k] = static_cast<uint32_t>(j);
      ++k;
      ++i;
      ++j;
    }
  }
  return k;
}

bool intersect_min_sum_scalar(const uint32_t* a, const double* da, size_t na,
                              const uint32_t* b, const double* db, size_t nb,
                              MinSumHit& best) {
  size_t i = 0, j = 0;
  bool found = false;
  double best_sum = 0.0;
  while (i < na && j < nb) {
    uint32_t av = a[i], bv = b[j];
    if (av < bv) {
      ++i;
    } else if (av > bv) {
      ++j;
    } else {
      double sum = da[i] + db[j];
      // Ascending scan: on a tie the earlier (smaller) id is kept.
      if (!found || sum < best_sum) {
        found = true;
        best_sum = sum;
        best = {av, static_cast<uint32_t>(i), static_cast<uint32_t>(j), da[i],
                db[j]};
      }
      ++i;
      ++j;
    }
  }
  return found;
}

}  // namespace pspt::kernels
