#pragma once

#include <cstddef>
#include <cstdint>

namespace hetcache::detail {

/// Sum over i in [begin, end) of h_i * r_i^{-alpha}, where r_i is the
/// wrap-around distance from (ux, uy) to (x[i], y[i]) and h_i ~ Exp(1) is
/// derived from a counter hash of (key, i). Single precision, roughly 1e-6
/// relative accuracy per term.
float exp_faded_sum(const float* x, const float* y, std::size_t begin, std::size_t end, float ux, float uy,
                    float side, float half_alpha, std::uint32_t key);

std::uint32_t mix32(std::uint32_t h);

}  // namespace hetcache::detail
