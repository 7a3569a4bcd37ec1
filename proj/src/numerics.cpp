#include "regstab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "regstab/error.hpp"

namespace regstab::numerics {

namespace {

std::string cell(std::size_t r, std::size_t c) {
  return "row " + std::to_string(r) + ", column " + std::to_string(c);
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p, q); accumulates the rotation into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> column_names,
                       std::vector<std::string> column_units)
    : values_(std::move(values)), names_(std::move(column_names)), units_(std::move(column_units)) {
  if (values_.rows() < 2 || values_.cols() < 1)
    throw Error(ErrorKind::DimensionMismatch, "data matrix needs n >= 2 rows and p >= 1 columns");
  if (names_.size() != values_.cols())
    throw Error(ErrorKind::DimensionMismatch, "one column name per column required");
  if (units_.empty()) units_.assign(values_.cols(), "");
  if (units_.size() != values_.cols())
    throw Error(ErrorKind::DimensionMismatch, "one unit tag per column required");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != names_.size())
    throw Error(ErrorKind::DimensionMismatch, "column names must be unique");
  for (std::size_t r = 0; r < values_.rows(); ++r)
    for (std::size_t c = 0; c < values_.cols(); ++c)
      if (!std::isfinite(values_(r, c))) throw Error(ErrorKind::NonFinite, cell(r, c));
}

std::size_t DataMatrix::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorKind::MissingColumn, name);
  return static_cast<std::size_t>(it - names_.begin());
}

ColumnStats column_stats(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "column statistics need n >= 2");
  ColumnStats stats{Vector(p, 0.0), Vector(p, 0.0)};
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += x(i, j);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
    stats.means[j] = mean;
    stats.sample_variances[j] = ss / static_cast<double>(n - 1);
  }
  return stats;
}

Standardized standardize(const DataMatrix& x) {
  ColumnStats stats = column_stats(x.values());
  Matrix z(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    if (!(stats.sample_variances[j] > 0.0))
      throw Error(ErrorKind::ZeroVariance, x.column_names()[j]);
    const double sd = std::sqrt(stats.sample_variances[j]);
    for (std::size_t i = 0; i < x.rows(); ++i) z(i, j) = (x.values()(i, j) - stats.means[j]) / sd;
  }
  return {DataMatrix(std::move(z), x.column_names(), x.column_units()), std::move(stats)};
}

Matrix correlation_matrix(const DataMatrix& z) {
  const std::size_t p = z.cols();
  if (p == 0 || z.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "empty data matrix");
  std::vector<Vector> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = z.values().column(j);
  Matrix r(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    r(i, i) = 1.0;
    for (std::size_t j = i + 1; j < p; ++j) {
      const double rij = pearson(cols[i], cols[j]);
      r(i, j) = rij;
      r(j, i) = rij;
    }
  }
  return r;
}

SymmetricEigen symmetric_eigen(const Matrix& r, int max_sweeps) {
  const std::size_t n = r.rows();
  if (n == 0 || r.cols() != n) throw Error(ErrorKind::DimensionMismatch, "eigen input must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(r(i, j))) throw Error(ErrorKind::NonFinite, cell(i, j));
      if (std::abs(r(i, j) - r(j, i)) > kSymmetryTolerance)
        throw Error(ErrorKind::NotSymmetric, cell(i, j));
    }

  Matrix a = r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (r(i, j) + r(j, i));
  Matrix v = Matrix::identity(n);

  // Absolute tolerance for unit-scale input, relative beyond that.
  const double tol = kJacobiTolerance * std::max(1.0, frobenius_norm(a));
  int sweeps = 0;
  while (off_diagonal_norm(a) >= tol) {
    if (sweeps == max_sweeps)
      throw Error(ErrorKind::NoConvergence,
                  "off-diagonal norm still above tolerance after " + std::to_string(sweeps) + " sweeps");
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    ++sweeps;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  SymmetricEigen out{Vector(n), Matrix(n, n), sweeps};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src);
    double norm = 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < n; ++i) {
      norm += v(i, src) * v(i, src);
      if (std::abs(v(i, src)) > std::abs(v(peak, src))) peak = i;
    }
    norm = std::sqrt(norm);
    const double sign = v(peak, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = sign * v(i, src) / norm;
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()) + " values");
  const std::size_t n = x.size();
  if (n < 2) throw Error(ErrorKind::LengthMismatch, "pearson needs at least two pairs");
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw Error(ErrorKind::NonFinite, "pair " + std::to_string(i));

  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw Error(ErrorKind::ZeroVariance, "first sequence is constant");
  if (!(syy > 0.0)) throw Error(ErrorKind::ZeroVariance, "second sequence is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace regstab::numerics
