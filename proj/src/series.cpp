#include "lsw/series.hpp"

#include <string>

#include "lsw/error.hpp"

namespace lsw {

double LaggedSeries::at(std::int64_t t) const {
  if (t < first_time || t > last_time())
    throw RangeError("time " + std::to_string(t) + " outside stored range " + std::to_string(first_time) + ".." +
                     std::to_string(last_time()));
  return values[static_cast<std::size_t>(t - first_time)];
}

std::span<const double> LaggedSeries::window(std::int64_t from, std::int64_t to) const {
  if (!covers(from, to))
    throw RangeError("window " + std::to_string(from) + ".." + std::to_string(to) + " outside stored range " +
                     std::to_string(first_time) + ".." + std::to_string(last_time()));
  return std::span<const double>(values).subspan(static_cast<std::size_t>(from - first_time),
                                                 static_cast<std::size_t>(to - from + 1));
}

}  // namespace lsw
