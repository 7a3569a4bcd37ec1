#include "regstab/rs_index.hpp"

#include <cmath>
#include <string>

#include "regstab/error.hpp"

namespace regstab::rs {

std::string_view to_string(Category c) noexcept {
  switch (c) {
    case Category::Fragile: return "Fragile";
    case Category::Vulnerable: return "Vulnerable";
    case Category::Stable: return "Stable";
  }
  return "Unknown";
}

Category classify(double rs_value) noexcept {
  if (rs_value < kFragileBelow) return Category::Fragile;
  if (rs_value < kStableFrom) return Category::Vulnerable;
  return Category::Stable;
}

RsScore rs_transform(double bpnn_output) {
  if (!std::isfinite(bpnn_output)) throw Error(ErrorKind::NonFinite, "network output");
  if (!(bpnn_output > 0.0))
    throw Error(ErrorKind::NonPositiveOutput, "network output " + std::to_string(bpnn_output));
  const double value = 100.0 / bpnn_output - 1.0;
  return {value, classify(value), bpnn_output};
}

Vector normalize_labels(std::span<const double> raw, double raw_min, double raw_max) {
  if (!std::isfinite(raw_min) || !std::isfinite(raw_max) || !(raw_max > raw_min))
    throw Error(ErrorKind::DegenerateRange, "label range [" + std::to_string(raw_min) + ", " +
                                                std::to_string(raw_max) + "]");
  Vector out(raw.size());
  const double span = raw_max - raw_min;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] >= raw_min && raw[i] <= raw_max))
      throw Error(ErrorKind::OutOfRange, "label " + std::to_string(raw[i]) + " at position " + std::to_string(i));
    out[i] = 100.0 * (raw[i] - raw_min) / span;
  }
  return out;
}

}  // namespace regstab::rs
