#include <algorithm>
#include <cmath>

#include "sspucb/kernels.hpp"

namespace sspucb::kernels::scalar {

void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out) {
  for (std::size_t e = 0; e < mean.size(); ++e) {
    const double rad = visits[e] == 0.0 ? max_radius : std::sqrt(scale[e] / visits[e]);
    out[e] = std::max(0.0, mean[e] - rad);
  }
}

void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out) {
  for (std::size_t k = 0; k < cost.size(); ++k) out[k] = cost[k] + values[target[k]];
}

}  // namespace sspucb::kernels::scalar
