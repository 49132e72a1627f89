#include "lsw/wavelet.hpp"

#include <cmath>
#include <string>

#include "lsw/error.hpp"

namespace lsw {

Scale::Scale(int j, int max_scale) : j_(j) {
  // 2^j must fit comfortably in lag arithmetic.
  if (max_scale < 1 || max_scale > 30)
    throw ConfigError("maximum scale must lie in 1..30, got " + std::to_string(max_scale));
  if (j < 1 || j > max_scale)
    throw DomainError("scale j=" + std::to_string(j) + " outside 1.." + std::to_string(max_scale));
}

HaarCoeffs haar_coeffs(Scale j) {
  const std::int64_t len = j.support();
  const double amp = std::exp2(-0.5 * j.value());
  std::vector<double> values(static_cast<std::size_t>(len));
  for (std::int64_t l = 0; l < len; ++l) values[static_cast<std::size_t>(l)] = l < len / 2 ? amp : -amp;
  return {j, std::move(values)};
}

std::int64_t support_length(Scale j) { return j.support(); }

}  // namespace lsw
