#pragma once

#include <string>
#include <vector>

#include "regstab/numerics.hpp"

namespace regstab::pca {

enum class ReductionMode {
  /// Keep the k original columns ranked by attributed contribution.
  IndexSelection,
  /// Project standardized data onto the first k eigenvectors.
  Projection,
};

inline constexpr double kDefaultThreshold = 0.95;

struct Contributions {
  Vector rates;        // lambda_i / sum(lambda)
  Vector accumulated;  // running prefix sum of rates
};

/// Throws AllZero when the spectrum sums to zero and NegativeEigenvalue for
/// any value below -1e-10 (tiny negatives from round-off are read as zero).
Contributions contribution_rates(std::span<const double> eigenvalues);

/// Smallest k with accumulated[k-1] >= threshold.
std::size_t select_components(std::span<const double> accumulated, double threshold);

/// Greedy attribution of components to original columns: component i (in
/// eigenvalue order) is credited to the not-yet-credited column with the
/// largest absolute loading. Returns column positions, one per component.
std::vector<std::size_t> attribute_components(const Matrix& eigenvectors);

struct PcaResult {
  Vector eigenvalues;
  Vector contribution_rates;
  Vector accumulated_rates;
  std::size_t selected_k = 0;
  /// Original column names in component order (one per component).
  std::vector<std::string> ranked_indexes;
  /// First selected_k entries of ranked_indexes.
  std::vector<std::string> selected_indexes;
  Matrix loadings;
};

struct PcaOutput {
  PcaResult result;
  numerics::DataMatrix reduced;
};

/// Full chain: standardize, correlate, eigendecompose, rate, select, reduce.
PcaOutput run(const numerics::DataMatrix& x, double threshold = kDefaultThreshold,
              ReductionMode mode = ReductionMode::IndexSelection);

}  // namespace regstab::pca
