#include "sspucb/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace sspucb::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SSPUCB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  Isa isa = detect_isa();
  if (const char* env = std::getenv("SSPUCB_ISA")) {
    const std::string want(env);
    if (want == "scalar") isa = Isa::scalar;
    // Asking for avx2 on a machine without it falls back silently.
  }
  return isa;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detect_isa() { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (isa == Isa::avx2 && !cpu_has_avx2()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void optimistic_costs(std::span<const double> mean, std::span<const double> visits,
                      std::span<const double> scale, double max_radius, std::span<double> out) {
#if defined(SSPUCB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::optimistic_costs(mean, visits, scale, max_radius, out);
#endif
  scalar::optimistic_costs(mean, visits, scale, max_radius, out);
}

void edge_backups(std::span<const double> cost, std::span<const std::int32_t> target,
                  std::span<const double> values, std::span<double> out) {
#if defined(SSPUCB_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::edge_backups(cost, target, values, out);
#endif
  scalar::edge_backups(cost, target, values, out);
}

}  // namespace sspucb::kernels
