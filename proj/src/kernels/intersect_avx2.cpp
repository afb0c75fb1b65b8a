#include "pspt/kernels/intersect.hpp"

#if defined(PSPT_HAVE_AVX2_KERNELS)

#include <immintrin.h>

#include <bit>

// 8x8 block intersection: compare an 8-lane window of each array under all 8
// rotations of the second window, then advance the window whose maximum is
// smaller. Every equal pair is co-resident in some window pair, and each id
// occurs at most once per array, so each match is reported exactly once and
// in ascending id order.

namespace pspt::kernels {
namespace {

struct WindowMatches {
  uint32_t lanes;       // bit k set: a[i+k] matched
  uint8_t partner[8];   // partner[k]: offset of the match in the b window
};

inline WindowMatches match_8x8(const uint32_t* a, const uint32_t* b) {
  const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a));
  __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b));
  const __m256i rot1 = _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0);

  uint64_t word = 0;  // byte r holds the lane mask for rotation r
  for (int r = 0; r < 8; ++r) {
    __m256i eq = _mm256_cmpeq_epi32(va, vb);
    word |= static_cast<uint64_t>(
                _mm256_movemask_ps(_mm256_castsi256_ps(eq)))
            << (8 * r);
    vb = _mm256_permutevar8x32_epi32(vb, rot1);
  }

  WindowMatches m{};
  for (int r = 0; r < 8; ++r) {
    uint32_t mask = static_cast<uint32_t>((word >> (8 * r)) & 0xffu);
    m.lanes |= mask;
    while (mask) {
      int k = std::countr_zero(mask);
      mask &= mask - 1;
      m.partner[k] = static_cast<uint8_t>((k + r) & 7);
    }
  }
  return m;
}

}  // namespace

size_t intersect_positions_avx2(const uint32_t* a, size_t na,
                                const uint32_t* b, size_t nb, uint32_t* out_a,
                                uint32_t* out_b) {
  size_t i = 0, j = 0, k = 0;
  while (i + 8 <= na && j + 8 <= nb) {
    if (a[i + 7] < b[j]) {  // disjoint windows, skip the compare network
      i += 8;
      continue;
    }
    if (b[j + 7] < a[i]) {
      j += 8;
      continue;
    }
    WindowMatches m = match_8x8(a + i, b + j);
    uint32_t lanes = m.lanes;
    while (lanes) {
      int lane = std::countr_zero(lanes);
      lanes &= lanes - 1;
      out_a[k] = static_cast<uint32_t>(i + lane);
      out_b[k] = static_cast<uint32_t>(j + m.partner[lane]);
      ++k;
    }
    uint32_t amax = a[i + 7], bmax = b[j + 7];
    if (amax <= bmax) i += 8;
    if (bmax <= amax) j += 8;
  }
  // Scalar tail.
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

bool intersect_min_sum_avx2(const uint32_t* a, const double* da, size_t na,
                            const uint32_t* b, const double* db, size_t nb,
                            MinSumHit& best) {
  size_t i = 0, j = 0;
  bool found = false;
  double best_sum = 0.0;
  auto consider = [&](size_t ia, size_t jb) {
    double sum = da[ia] + db[jb];
    if (!found || sum < best_sum) {  // ties keep the earlier (smaller) id
      found = true;
      best_sum = sum;
      best = {a[ia], static_cast<uint32_t>(ia), static_cast<uint32_t>(jb),
              da[ia], db[jb]};
    }
  };
  while (i + 8 <= na && j + 8 <= nb) {
    if (a[i + 7] < b[j]) {
      i += 8;
      continue;
    }
    if (b[j + 7] < a[i]) {
      j += 8;
      continue;
    }
    WindowMatches m = match_8x8(a + i, b + j);
    uint32_t lanes = m.lanes;
    while (lanes) {
      int lane = std::countr_zero(lanes);
      lanes &= lanes - 1;
      consider(i + lane, j + m.partner[lane]);
    }
    uint32_t amax = a[i + 7], bmax = b[j + 7];
    if (amax <= bmax) i += 8;
    if (bmax <= amax) j += 8;
  }
  while (i < na && j < nb) {
    uint32_t av = a[i], bv = b[j];
    if (av < bv) {
      ++i;
    } else if (av > bv) {
      ++j;
    } else {
      consider(i, j);
      ++i;
      ++j;
    }
  }
  return found;
}

}  // namespace pspt::kernels

#endif  // PSPT_HAVE_AVX2_KERNELS
