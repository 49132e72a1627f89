#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lsw {

/// A contiguous series indexed by integer time, possibly starting before 0
/// (pre-sample innovations live at negative times).
struct LaggedSeries {
  std::int64_t first_time = 0;
  std::vector<double> values;

  std::int64_t size() const noexcept { return static_cast<std::int64_t>(values.size()); }
  std::int64_t last_time() const noexcept { return first_time + size() - 1; }
  bool covers(std::int64_t from, std::int64_t to) const noexcept {
    return from >= first_time && to <= last_time() && from <= to;
  }

  /// Throws RangeError when t is outside the stored range.
  double at(std::int64_t t) const;
  /// Values at times from..to inclusive. Throws RangeError when not covered.
  std::span<const double> window(std::int64_t from, std::int64_t to) const;
};

}  // namespace lsw
