#include "pspt/detail/crc32.hpp"

#include <array>

namespace pspt::detail {
namespace {

// Slicing-by-8 tables.
struct Tables {
  uint32_t t[8][256];
};

Tables make_tables() {
  Tables tb{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k) c = (c >> 1) ^ ((c & 1u) ? 0xedb88320u : 0u);
    tb.t[0][i] = c;
  }
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = tb.t[0][i];
    for (int s = 1; s < 8; ++s) {
      c = tb.t[0][c & 0xffu] ^ (c >> 8);
      tb.t[s][i] = c;
    }
  }
  return tb;
}

const Tables& tables() {
  static const Tables tb = make_tables();
  return tb;
}

}  // namespace

void Crc32::update(const void* data, size_t len) {
  const auto* p = static_cast<const uint8_t*>(data);
  const auto& tb = tables();
  uint32_t c = state_;
  while (len >= 8) {
    uint32_t lo = c ^ (uint32_t(p[0]) | uint32_t(p[1]) << 8 |
                       uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24);
    uint32_t hi = uint32_t(p[4]) | uint32_t(p[5]) << 8 | uint32_t(p[6]) << 16 |
                  uint32_t(p[7]) << 24;
    c = tb.t[7][lo & 0xffu] ^ tb.t[6][(lo >> 8) & 0xffu] ^
        tb.t[5][(lo >> 16) & 0xffu] ^ tb.t[4][lo >> 24] ^
        tb.t[3][hi & 0xffu] ^ tb.t[2][(hi >> 8) & 0xffu] ^
        tb.t[1][(hi >> 16) & 0xffu] ^ tb.t[0][hi >> 24];
    p += 8;
    len -= 8;
  }
  while (len--) c = tb.t[0][(c ^ *p++) & 0xffu] ^ (c >> 8);
  state_ = c;
}

uint32_t crc32(const void* data, size_t len) {
  Crc32 c;
  c.update(data, len);
  return c.value();
}

}  // namespace pspt::detail
