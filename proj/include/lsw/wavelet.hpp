#pragma once

#include <cstdint>
#include <vector>

namespace lsw {

inline constexpr int kDefaultMaxScale = 6;

/// Wavelet scale, j = 1 finest. Validated on construction against a
/// configurable ceiling.
class Scale {
 public:
  explicit Scale(int j, int max_scale = kDefaultMaxScale);

  int value() const noexcept { return j_; }
  /// Number of nonzero Haar coefficients, 2^j.
  std::int64_t support() const noexcept { return std::int64_t{1} << j_; }

  friend bool operator==(Scale, Scale) = default;

 private:
  int j_;
};

/// Nonzero non-decimated Haar coefficients at one scale, stored by lag:
/// values[l] multiplies xi_{j,t-l}.
struct HaarCoeffs {
  Scale scale;
  std::vector<double> values;
};

HaarCoeffs haar_coeffs(Scale j);

/// 2^j.
std::int64_t support_length(Scale j);

}  // namespace lsw
