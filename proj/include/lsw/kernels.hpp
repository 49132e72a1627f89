#pragma once

#include <span>

// Data-parallel inner loops shared by the simulator, the design builder and
// the Monte Carlo checks. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2/FMA variant. The active variant is chosen at
// runtime from CPU capabilities; set LSW_KERNELS=scalar in the environment
// (or call set_isa) to force the reference path.
namespace lsw::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);
bool isa_available(Isa isa);
Isa active_isa();
/// Throws ConfigError if the requested variant is not available on this CPU.
void set_isa(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);

/// Sliding correlation:
///   out[i] = sum_l taps[l] * input[i + L - 1 - l],  L = taps.size().
/// out.size() must equal input.size() - L + 1. With input holding a series
/// over times t0.., out[i] is the filter response at time t0 + i + L - 1
/// using lags 0..L-1.
void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out);

/// Elementwise product out[i] = a[i] * b[i].
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);

double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
}  // namespace scalar

#if defined(LSW_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void correlate(std::span<const double> input, std::span<const double> taps, std::span<double> out);
void multiply(std::span<const double> a, std::span<const double> b, std::span<double> out);
double sum(std::span<const double> x);
double sum_squares(std::span<const double> x);
}  // namespace avx2
#endif

}  // namespace lsw::kernels
