#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "sspucb/kernels.hpp"

namespace sspucb::kernels::avx2 {

namespace {
constexpr std::size_t kLanes = 4;
}

void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out) {
  const std::size_t n = mean.size();
  const std::size_t rounds = n / kLanes;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d cap = _mm256_set1_pd(max_radius);
  for (std::size_t i = 0; i < rounds; ++i) {
    const std::size_t at = i * kLanes;
    const __m256d m = _mm256_loadu_pd(mean.data() + at);
    const __m256d v = _mm256_loadu_pd(visits.data() + at);
    const __m256d s = _mm256_loadu_pd(scale.data() + at);
    const __m256d unvisited = _mm256_cmp_pd(v, zero, _CMP_EQ_OQ);
    // Lanes with v == 0 produce inf/nan here and are replaced by the cap.
    const __m256d rad = _mm256_blendv_pd(_mm256_sqrt_pd(_mm256_div_pd(s, v)), cap, unvisited);
    // max(x, 0) returns the second operand on equality, matching std::max(0, x).
    _mm256_storeu_pd(out.data() + at, _mm256_max_pd(_mm256_sub_pd(m, rad), zero));
  }
  for (std::size_t e = rounds * kLanes; e < n; ++e) {
    const double rad = visits[e] == 0.0 ? max_radius : std::sqrt(scale[e] / visits[e]);
    out[e] = std::max(0.0, mean[e] - rad);
  }
}

void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out) {
  const std::size_t n = cost.size();
  const std::size_t rounds = n / kLanes;
  for (std::size_t i = 0; i < rounds; ++i) {
    const std::size_t at = i * kLanes;
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(target.data() + at));
    const __m256d v = _mm256_i32gather_pd(values.data(), idx, 8);
    const __m256d c = _mm256_loadu_pd(cost.data() + at);
    _mm256_storeu_pd(out.data() + at, _mm256_add_pd(c, v));
  }
  for (std::size_t k = rounds * kLanes; k < n; ++k) out[k] = cost[k] + values[target[k]];
}

}  // namespace sspucb::kernels::avx2
