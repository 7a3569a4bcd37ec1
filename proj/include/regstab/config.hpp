#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "regstab/bpnn.hpp"
#include "regstab/forecast.hpp"
#include "regstab/pca.hpp"
#include "regstab/records.hpp"
#include "regstab/rs_index.hpp"

namespace regstab {

/// Every tunable of the pipeline. Defaults reproduce the published setup.
struct PipelineConfig {
  double pca_threshold = pca::kDefaultThreshold;
  pca::ReductionMode pca_mode = pca::ReductionMode::IndexSelection;
  double outlier_z_cutoff = ingest::kDefaultOutlierCutoff;
  bool drop_outliers = false;
  bpnn::NetworkConfig network{};
  double label_min = rs::kDefaultLabelMin;
  double label_max = rs::kDefaultLabelMax;
  int forecast_horizon = forecast::kDefaultHorizon;
  double relativity_min_abs_r = forecast::kDefaultMinAbsR;

  /// Throws InvalidConfig.
  void validate() const;

  /// Assigns one key; throws InvalidConfig for unknown keys or bad values.
  ///
  /// Keys: pca_threshold, pca_mode (index|projection), outlier_z_cutoff,
  /// drop_outliers, n_hidden, learning_rate, max_epochs, loss_tolerance,
  /// seed, label_min, label_max, forecast_horizon, relativity_min_abs_r.
  void set(std::string_view key, std::string_view value);

  /// Applies a flat `key = value` file on top of the current values. Blank
  /// lines and lines starting with '#' are skipped.
  void apply(std::istream& in, const std::string& source = "<config>");
  void apply_file(const std::filesystem::path& path);
};

}  // namespace regstab
