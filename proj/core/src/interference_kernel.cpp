// Built with relaxed floating-point flags (see core/CMakeLists.txt) so the
// loop below vectorizes. Keep this file free of standard math calls.
#include "interference_kernel.hpp"

#include <bit>

namespace hetcache::detail {

namespace {

inline std::uint32_t mix(std::uint32_t h) {
  h ^= h >> 16;
  h *= 0x7feb352du;
  h ^= h >> 15;
  h *= 0x846ca68bu;
  h ^= h >> 16;
  return h;
}

inline float log2_approx(float x) {
  const std::uint32_t b = std::bit_cast<std::uint32_t>(x);
  const float e = static_cast<float>(static_cast<std::int32_t>(b >> 23) - 127);
  const float m = std::bit_cast<float>((b & 0x007FFFFFu) | 0x3F800000u);
  const float t = (m - 1.0f) / (m + 1.0f);
  const float t2 = t * t;
  const float p =
      t * (2.8853900817779268f +
           t2 * (0.96179669392597560f + t2 * (0.57707801635558536f + t2 * (0.41219858311113242f + t2 * 0.32059017312365011f))));
  return e + p;
}

inline float exp2_approx(float x) {
  x = x < -126.0f ? -126.0f : x;
  const float whole = static_cast<float>(static_cast<std::int32_t>(x) - (x < static_cast<float>(static_cast<std::int32_t>(x)) ? 1 : 0));
  const float f = x - whole;
  const float p =
      1.0f + f * (0.69314718f + f * (0.24022651f + f * (0.05550411f + f * (0.00961813f + f * (0.00133336f + f * 0.00015469f)))));
  return std::bit_cast<float>(std::bit_cast<std::uint32_t>(p) + (static_cast<std::uint32_t>(static_cast<std::int32_t>(whole)) << 23));
}

inline float wrap(float d, float side) {
  d = d < 0.0f ? -d : d;
  const float other = side - d;
  return other < d ? other : d;
}

}  // namespace

std::uint32_t mix32(std::uint32_t h) { return mix(h); }

float exp_faded_sum(const float* __restrict x, const float* __restrict y, std::size_t begin, std::size_t end, float ux,
                    float uy, float side, float half_alpha, std::uint32_t key) {
  float acc = 0.0f;
  for (std::size_t i = begin; i < end; ++i) {
    const float dx = wrap(x[i] - ux, side);
    const float dy = wrap(y[i] - uy, side);
    float r2 = dx * dx + dy * dy;
    r2 = r2 < 1e-6f ? 1e-6f : r2;
    const std::uint32_t h = mix(key ^ (static_cast<std::uint32_t>(i) * 0x9E3779B9u));
    const float u = (static_cast<float>(h >> 8) + 0.5f) * (1.0f / 16777216.0f);
    // -ln(u) = -log2(u) ln 2, the ln 2 is applied by the caller's scale.
    acc += -log2_approx(u) * exp2_approx(-half_alpha * log2_approx(r2));
  }
  return acc * 0.69314718055994531f;
}

}  // namespace hetcache::detail
