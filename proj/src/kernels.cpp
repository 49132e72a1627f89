#include "lsw/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "lsw/error.hpp"

namespace lsw::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(LSW_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("LSW_KERNELS"); env != nullptr && std::strcmp(env, "scalar") == 0)
    return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_available(isa))
    throw ConfigError(std::string("kernel variant not available on this CPU: ") + isa_name(isa));
  current().store(isa, std::memory_order_relaxed);
}

#if defined(LSW_HAVE_AVX2_KERNELS)
#define LSW_DISPATCH(call) \
  return active_isa() == Isa::avx2 ? avx2::call : scalar::call
#else
#define LSW_DISPATCH(call) return scalar::call
#endif

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("dot: length mismatch");
  LSW_DISPATCH(dot(a, b));
}

void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out) {
  if (taps.empty() || input.size() < taps.size() || out.size() != input.size() - taps.size() + 1)
    throw ConfigError("correlate: output length must be input length - taps + 1");
  LSW_DISPATCH(correlate(input, taps, out));
}

void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  if (a.size() != b.size() || a.size() != out.size()) throw ConfigError("multiply: length mismatch");
  LSW_DISPATCH(multiply(a, b, out));
}

double sum(std::span<const double> x) { LSW_DISPATCH(sum(x)); }

double sum_squares(std::span<const double> x) { LSW_DISPATCH(sum_squares(x)); }

#undef LSW_DISPATCH

}  // namespace lsw::kernels
