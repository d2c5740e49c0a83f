#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace duhamel::simd {
namespace {

bool cpu_has_avx2() {
#if defined(DUHAMEL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* forced = std::getenv("DUHAMEL_ISA")) {
    Isa isa = parse_isa(forced);
    if (available(isa)) return isa;
  }
  if (available(Isa::kAvx2)) return Isa::kAvx2;
  if (available(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return cpu_has_avx2();
    case Isa::kNeon:
#if defined(DUHAMEL_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

namespace {

const KernelTable& lookup(Isa isa) {
  switch (isa) {
#if defined(DUHAMEL_HAVE_AVX2)
    case Isa::kAvx2:
      return avx2::kernels();
#endif
#if defined(DUHAMEL_HAVE_NEON)
    case Isa::kNeon:
      return neon::kernels();
#endif
    default:
      return scalar::kernels();
  }
}

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> t{&lookup(current().load())};
  return t;
}

}  // namespace

const KernelTable& table(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("SIMD variant not available: " + std::string(name(isa)));
  return lookup(isa);
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!available(isa)) throw std::invalid_argument("SIMD variant not available: " + std::string(name(isa)));
  current().store(isa, std::memory_order_relaxed);
  active_table().store(&lookup(isa), std::memory_order_relaxed);
}

const KernelTable& active() { return *active_table().load(std::memory_order_relaxed); }

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::kScalar;
  if (text == "avx2") return Isa::kAvx2;
  if (text == "neon") return Isa::kNeon;
  throw std::invalid_argument("unknown SIMD variant: " + std::string(text));
}

}  // namespace duhamel::simd
