#pragma once

#include <span>
#include <string>
#include <vector>

#include "regstab/matrix.hpp"

namespace regstab::numerics {

/// n x p observations (row = country-year, column = index) with per-column
/// labels. Construction validates shape, finiteness and unique names.
class DataMatrix {
 public:
  DataMatrix(Matrix values, std::vector<std::string> column_names,
             std::vector<std::string> column_units = {});

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& column_names() const noexcept { return names_; }
  const std::vector<std::string>& column_units() const noexcept { return units_; }
  std::size_t rows() const noexcept { return values_.rows(); }
  std::size_t cols() const noexcept { return values_.cols(); }

  /// Position of a named column; throws MissingColumn.
  std::size_t index_of(const std::string& name) const;

 private:
  Matrix values_;
  std::vector<std::string> names_;
  std::vector<std::string> units_;
};

struct ColumnStats {
  Vector means;
  Vector sample_variances;  // divisor n - 1
};

ColumnStats column_stats(const Matrix& x);

struct Standardized {
  DataMatrix z;
  ColumnStats stats;
};

/// z_ij = (x_ij - mean_j) / sqrt(Var_j), Var with divisor n - 1.
/// Throws ZeroVariance naming the first constant column.
Standardized standardize(const DataMatrix& x);

/// Pearson correlation of every column pair; the diagonal is exactly 1.
Matrix correlation_matrix(const DataMatrix& z);

struct SymmetricEigen {
  Vector eigenvalues;  // descending
  Matrix eigenvectors; // column i pairs with eigenvalues[i]
  int sweeps = 0;
};

inline constexpr double kSymmetryTolerance = 1e-10;
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are sorted descending; equal eigenvalues keep the order of the
/// diagonal slot they converged in. Each eigenvector is normalised and its
/// largest-magnitude entry made positive.
SymmetricEigen symmetric_eigen(const Matrix& r, int max_sweeps = kJacobiMaxSweeps);

/// Pearson product-moment correlation, clamped to [-1, 1].
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace regstab::numerics
