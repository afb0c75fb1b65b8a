#pragma once

#include <cstddef>
#include <cstdint>

// Sorted-array intersection kernels. Both inputs are strictly ascending
// uint32 id arrays (one entry per id); this is the inner loop of every
// block-intersection query, so it comes in a scalar reference flavor and a
// SIMD flavor picked once at startup (override with PSPT_KERNEL=scalar|avx2).
// The variants are bit-for-bit equivalent and are tested against each other.

namespace pspt::kernels {

// Writes the matching positions of each array into out_a/out_b (caller
// provides min(na, nb) slots) and returns the match count.
size_t intersect_positions(const uint32_t* a, size_t na, const uint32_t* b,
                           size_t nb, uint32_t* out_a, uint32_t* out_b);

struct MinSumHit {
  uint32_t member = 0;  // common id
  uint32_t a_pos = 0;
  uint32_t b_pos = 0;
  double dist_a = 0.0;
  double dist_b = 0.0;
};

// Fused intersection + argmin of (dist_a[i] + dist_b[j]), ties broken by the
// smaller common id. Returns false when the arrays are disjoint.
bool intersect_min_sum(const uint32_t* a, const double* da, size_t na,
                       const uint32_t* b, const double* db, size_t nb,
                       MinSumHit& best);

// Reference implementations, always available.
size_t intersect_positions_scalar(const uint32_t* a, size_t na,
                                  const uint32_t* b, size_t nb,
                                  uint32_t* out_a, uint32_t* out_b);
bool intersect_min_sum_scalar(const uint32_t* a, const double* da, size_t na,
                              const uint32_t* b, const double* db, size_t nb,
                              MinSumHit& best);

#if defined(__x86_64__) || defined(_M_X64)
#define PSPT_HAVE_AVX2_KERNELS 1
size_t intersect_positions_avx2(const uint32_t* a, size_t na,
                                const uint32_t* b, size_t nb, uint32_t* out_a,
                                uint32_t* out_b);
bool intersect_min_sum_avx2(const uint32_t* a, const double* da, size_t na,
                            const uint32_t* b, const double* db, size_t nb,
                            MinSumHit& best);
#endif

enum class Isa { scalar, avx2 };

Isa active_isa();
const char* isa_name(Isa isa);
// Test hook; silently falls back to scalar when the CPU lacks the ISA.
void set_isa(Isa isa);

}  // namespace pspt::kernels
