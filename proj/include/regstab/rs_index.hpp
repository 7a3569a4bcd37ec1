#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "regstab/matrix.hpp"

namespace regstab::rs {

enum class Category { Fragile, Vulnerable, Stable };

std::string_view to_string(Category c) noexcept;

inline constexpr double kFragileBelow = 0.25;
inline constexpr double kStableFrom = 1.0;
inline constexpr double kDefaultLabelMin = 0.0;
inline constexpr double kDefaultLabelMax = 120.0;

struct RsScore {
  double value = 0.0;
  Category category = Category::Fragile;
  std::optional<double> bpnn_output;
};

/// Fragile below 0.25, Vulnerable on [0.25, 1), Stable from 1 up. Boundaries
/// belong to the less fragile class.
Category classify(double rs_value) noexcept;

/// RS = 100 / bpnn_output - 1. Throws NonPositiveOutput for outputs <= 0.
RsScore rs_transform(double bpnn_output);

/// Network output in (0, 1) rescaled onto the 0-100 label scale.
inline double bpnn_scale(double sigmoid_output) noexcept { return 100.0 * sigmoid_output; }

/// Affine min-max map of raw fragility labels onto [0, 100].
Vector normalize_labels(std::span<const double> raw, double raw_min = kDefaultLabelMin,
                        double raw_max = kDefaultLabelMax);

}  // namespace regstab::rs
