#include "regstab/pca.hpp"

#include <cmath>

#include "regstab/error.hpp"

namespace regstab::pca {

namespace {
constexpr double kNegativeTolerance = 1e-10;
}

Contributions contribution_rates(std::span<const double> eigenvalues) {
  if (eigenvalues.empty()) throw Error(ErrorKind::EmptyDataset, "no eigenvalues");
  double total = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double v = eigenvalues[i];
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "eigenvalue " + std::to_string(i));
    if (v < -kNegativeTolerance)
      throw Error(ErrorKind::NegativeEigenvalue, "eigenvalue " + std::to_string(i) + " = " + std::to_string(v));
    total += std::max(v, 0.0);
  }
  if (!(total > 0.0)) throw Error(ErrorKind::AllZero, "eigenvalues sum to zero");

  Contributions out{Vector(eigenvalues.size()), Vector(eigenvalues.size())};
  double running = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    out.rates[i] = std::max(eigenvalues[i], 0.0) / total;
    running += out.rates[i];
    out.accumulated[i] = running;
  }
  return out;
}

std::size_t select_components(std::span<const double> accumulated, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw Error(ErrorKind::OutOfRange, "threshold must lie in (0, 1], got " + std::to_string(threshold));
  for (std::size_t k = 0; k < accumulated.size(); ++k) {
    if (k > 0 && accumulated[k] < accumulated[k - 1])
      throw Error(ErrorKind::OutOfRange, "accumulated rates must be nondecreasing");
  }
  for (std::size_t k = 0; k < accumulated.size(); ++k)
    if (accumulated[k] >= threshold) return k + 1;
  // A full spectrum may sum to 1 - ulp; that still reaches a threshold of 1.
  if (!accumulated.empty() && accumulated.back() >= threshold - kNegativeTolerance)
    return accumulated.size();
  throw Error(ErrorKind::ThresholdUnreachable, "accumulated rates never reach " + std::to_string(threshold));
}

std::vector<std::size_t> attribute_components(const Matrix& eigenvectors) {
  const std::size_t p = eigenvectors.rows();
  std::vector<bool> taken(p, false);
  std::vector<std::size_t> owner;
  owner.reserve(eigenvectors.cols());
  for (std::size_t comp = 0; comp < eigenvectors.cols(); ++comp) {
    std::size_t best = p;
    for (std::size_t j = 0; j < p; ++j) {
      if (taken[j]) continue;
      if (best == p || std::abs(eigenvectors(j, comp)) > std::abs(eigenvectors(best, comp))) best = j;
    }
    taken[best] = true;
    owner.push_back(best);
  }
  return owner;
}

PcaOutput run(const numerics::DataMatrix& x, double threshold, ReductionMode mode) {
  const auto standardized = numerics::standardize(x);
  const Matrix r = numerics::correlation_matrix(standardized.z);
  auto eigen = numerics::symmetric_eigen(r);
  auto rates = contribution_rates(eigen.eigenvalues);
  const std::size_t k = select_components(rates.accumulated, threshold);

  PcaResult result;
  result.eigenvalues = std::move(eigen.eigenvalues);
  result.contribution_rates = std::move(rates.rates);
  result.accumulated_rates = std::move(rates.accumulated);
  result.selected_k = k;
  result.loadings = std::move(eigen.eigenvectors);
  const auto owners = attribute_components(result.loadings);
  for (std::size_t c : owners) result.ranked_indexes.push_back(x.column_names()[c]);
  result.selected_indexes.assign(result.ranked_indexes.begin(), result.ranked_indexes.begin() + k);

  const std::size_t n = x.rows();
  if (mode == ReductionMode::IndexSelection) {
    Matrix kept(n, k);
    std::vector<std::string> names;
    std::vector<std::string> units;
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t src = owners[c];
      for (std::size_t i = 0; i < n; ++i) kept(i, c) = x.values()(i, src);
      names.push_back(x.column_names()[src]);
      units.push_back(x.column_units()[src]);
    }
    return {std::move(result), numerics::DataMatrix(std::move(kept), std::move(names), std::move(units))};
  }

  Matrix basis(x.cols(), k);
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t c = 0; c < k; ++c) basis(i, c) = result.loadings(i, c);
  Matrix scores = standardized.z.values() * basis;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < k; ++c) names.push_back("PC" + std::to_string(c + 1));
  return {std::move(result), numerics::DataMatrix(std::move(scores), std::move(names))};
}

}  // namespace regstab::pca
