#pragma once

#include <span>
#include <vector>

#include "regstab/matrix.hpp"

namespace regstab::forecast {

struct Point {
  int year = 0;
  double value = 0.0;
};

/// Year-ordered observations. Years must be strictly increasing.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<Point> points);

  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  Vector years() const;
  Vector values() const;

 private:
  std::vector<Point> points_;
};

struct LinearFit {
  double slope = 0.0;      // per year
  double intercept = 0.0;  // value at year 0
  double r = 0.0;          // Pearson correlation of year vs value
  Vector residuals;        // in series order
  double mean_year = 0.0;
  double mean_value = 0.0;

  double at(double year) const noexcept { return mean_value + slope * (year - mean_year); }
};

inline constexpr std::size_t kMinFitPoints = 3;
inline constexpr double kDefaultMinAbsR = 0.8;
inline constexpr int kDefaultHorizon = 5;

/// Closed-form least squares on mean-centred years. Throws TooFewPoints or
/// DegenerateYears.
LinearFit fit(const TimeSeries& series);

struct Relativity {
  double r = 0.0;
  bool pass = false;
};

/// Pearson year-vs-value gate applied before trusting a linear forecast.
Relativity relativity_check(const TimeSeries& series, double min_abs_r = kDefaultMinAbsR);

std::vector<Point> predict(const LinearFit& fit, std::span<const int> years);

/// The `horizon` years following the last observation.
std::vector<int> default_horizon(const TimeSeries& series, int horizon = kDefaultHorizon);

}  // namespace regstab::forecast
