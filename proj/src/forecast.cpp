#include "regstab/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regstab/error.hpp"
#include "regstab/numerics.hpp"

namespace regstab::forecast {

TimeSeries::TimeSeries(std::vector<Point> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].value))
      throw Error(ErrorKind::NonFinite, "value for year " + std::to_string(points_[i].year));
    if (i > 0 && points_[i].year <= points_[i - 1].year)
      throw Error(ErrorKind::DegenerateYears, "years must be strictly increasing at " + std::to_string(points_[i].year));
  }
}

Vector TimeSeries::years() const {
  Vector out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.year);
  return out;
}

Vector TimeSeries::values() const {
  Vector out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.value);
  return out;
}

LinearFit fit(const TimeSeries& series) {
  const std::size_t n = series.size();
  if (n < kMinFitPoints)
    throw Error(ErrorKind::TooFewPoints, std::to_string(n) + " points, need " + std::to_string(kMinFitPoints));
  const Vector x = series.years();
  const Vector y = series.values();

  LinearFit out;
  for (std::size_t i = 0; i < n; ++i) {
    out.mean_year += x[i];
    out.mean_value += y[i];
  }
  out.mean_year /= static_cast<double>(n);
  out.mean_value /= static_cast<double>(n);

  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - out.mean_year;
    sxx += dx * dx;
    sxy += dx * (y[i] - out.mean_value);
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::DegenerateYears, "all years identical");

  out.slope = sxy / sxx;
  out.intercept = out.mean_value - out.slope * out.mean_year;
  out.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.residuals[i] = (y[i] - out.mean_value) - out.slope * (x[i] - out.mean_year);
  // A flat series has no defined correlation; it is a perfect zero-slope fit.
  out.r = 0.0;
  bool constant = true;
  for (double v : y) constant = constant && v == y.front();
  if (!constant) out.r = numerics::pearson(x, y);
  return out;
}

Relativity relativity_check(const TimeSeries& series, double min_abs_r) {
  const Vector y = series.values();
  if (y.size() >= 2 && std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); }))
    return {0.0, false};
  const double r = numerics::pearson(series.years(), y);
  return {r, std::abs(r) >= min_abs_r};
}

std::vector<Point> predict(const LinearFit& fit, std::span<const int> years) {
  std::vector<Point> out;
  out.reserve(years.size());
  for (int year : years) out.push_back({year, fit.at(year)});
  return out;
}

std::vector<int> default_horizon(const TimeSeries& series, int horizon) {
  if (series.size() == 0) throw Error(ErrorKind::TooFewPoints, "empty series");
  if (horizon < 1) throw Error(ErrorKind::OutOfRange, "horizon must be >= 1");
  std::vector<int> years;
  for (int h = 1; h <= horizon; ++h) years.push_back(series.points().back().year + h);
  return years;
}

}  // namespace regstab::forecast
