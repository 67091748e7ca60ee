#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops of the synchronous value-iteration learner.
//
// Each kernel has a scalar reference and, on x86-64, an AVX2 variant. The
// variants perform the same IEEE operations in the same order (no FMA), so
// their outputs are bit-identical; tests/test_kernels.cpp enforces this.
// The active variant is chosen once at startup from CPUID and can be pinned
// for testing with set_isa() or the SSPUCB_ISA=scalar|avx2 environment
// variable.

namespace sspucb::kernels {

enum class Isa { scalar, avx2 };

/// Best variant the running CPU supports.
Isa detect_isa();
/// Currently dispatched variant.
Isa active_isa();
/// Pins a variant. Returns false (and leaves dispatch unchanged) if the CPU
/// or the build lacks it.
bool set_isa(Isa isa);
std::string_view isa_name(Isa isa);

/// out[e] = max(0, mean[e] - rad[e]) with
/// rad[e] = visits[e] == 0 ? max_radius : sqrt(scale[e] / visits[e]),
/// where scale[e] = c * log N(source(e)).
void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out);

/// out[k] = cost[k] + values[target[k]] (one Bellman backup term per edge).
void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out);

namespace scalar {
void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out);
void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out);
}  // namespace scalar

namespace avx2 {
void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out);
void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out);
}  // namespace avx2

}  // namespace sspucb::kernels
