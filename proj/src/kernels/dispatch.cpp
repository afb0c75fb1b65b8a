#include <atomic>
#include <cstdlib>
#include <cstring>

#include "pspt/kernels/intersect.hpp"

namespace pspt::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PSPT_HAVE_AVX2_KERNELS) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa pick_default() {
  if (const char* env = std::getenv("PSPT_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
    return Isa::scalar;
  }
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa> g_isa{pick_default()};

}  // namespace

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "?";
}

void set_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
  g_isa.store(isa, std::memory_order_relaxed);
}

size_t intersect_positions(const uint32_t* a, size_t na, const uint32_t* b,
                           size_t nb, uint32_t* out_a, uint32_t* out_b) {
#if defined(PSPT_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2)
    return intersect_positions_avx2(a, na, b, nb, out_a, out_b);
#endif
  return intersect_positions_scalar(a, na, b, nb, out_a, out_b);
}

bool intersect_min_sum(const uint32_t* a, const double* da, size_t na,
                       const uint32_t* b, const double* db, size_t nb,
                       MinSumHit& best) {
#if defined(PSPT_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2)
    return intersect_min_sum_avx2(a, da, na, b, db, nb, best);
#endif
  return intersect_min_sum_scalar(a, da, na, b, db, nb, best);
}

}  // namespace pspt::kernels
