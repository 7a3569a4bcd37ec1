#pragma once

// End-to-end commands: each one validates its inputs, computes through the
// library modules, optionally writes artifacts into an output directory and
// returns a human-readable report.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "regstab/config.hpp"

namespace regstab::pipeline {

namespace fs = std::filesystem;

// ---- PCA ------------------------------------------------------------------

/// One row per component: the index it is attributed to, its eigenvalue and
/// its contribution.
struct PcaTable {
  std::vector<std::string> names;
  Vector eigenvalues;
  Vector rates;
  Vector accumulated;
  std::size_t selected_k = 0;
  double threshold = 0.0;
  std::vector<std::string> selected() const;
};

struct NamedEigenvalues {
  std::vector<std::string> names;
  Vector values;
};

/// `name,eigenvalue` rows (optional header) or a bare column of values.
NamedEigenvalues read_eigenvalues(std::istream& in, const std::string& source = "<eigenvalues>");
NamedEigenvalues load_eigenvalues(const fs::path& path);

/// Rates an externally computed spectrum, rows kept in the given order.
PcaTable pca_table(const NamedEigenvalues& spectrum, double threshold);

struct DatasetPca {
  PcaTable table;
  pca::PcaOutput output;
};

/// Runs PCA on all seven indexes; throws MissingColumn when a record lacks
/// one.
DatasetPca pca_from_records(const ingest::Records& records, const PipelineConfig& config);

std::string format_pca_table(const PcaTable& table);

// ---- network training and scoring ------------------------------------------

/// Per-feature standardisation captured at training time.
struct FeatureScaler {
  std::vector<std::string> names;  // index short names, network input order
  Vector means;
  Vector sds;

  Vector transform(const ingest::CountryYearRecord& record) const;
};

/// Sidecar next to the model file holding the scaler.
fs::path scaler_path(const fs::path& model_path);
void write_scaler(std::ostream& out, const FeatureScaler& scaler);
FeatureScaler read_scaler(std::istream& in, const std::string& source = "<scaler>");

struct TrainedModel {
  bpnn::Network network;
  std::uint64_t seed = 0;
  FeatureScaler scaler;
};

void save_trained_model(const fs::path& model_path, const TrainedModel& model);
TrainedModel load_trained_model(const fs::path& model_path);

struct TrainOutcome {
  TrainedModel model;
  bpnn::TrainReport report;
  ingest::Preprocessed preprocessed;
};

/// Feature choice: the PCA-selected indexes when every record carries all
/// seven, otherwise LAP, AAT, AMS, FO, PSR. Labels come from the fsi column,
/// min-max scaled to [0, 100] and divided by 100.
TrainOutcome train_model(const ingest::Records& records, const PipelineConfig& config);

struct ScoredRecord {
  std::string country;
  int year = 0;
  rs::RsScore score;
};

ScoredRecord score_record(const ingest::CountryYearRecord& record, const TrainedModel& model);
std::vector<ScoredRecord> score_records(const ingest::Records& records, const TrainedModel& model);

// ---- forecasting -----------------------------------------------------------

struct CountryForecast {
  std::string country;
  std::string source;  // "rs column" or "model"
  forecast::TimeSeries series;
  forecast::LinearFit fit;
  forecast::Relativity relativity;
  std::vector<forecast::Point> predictions;
};

/// One forecast per country in name order. RS comes from the rs column when
/// every row of the country has it, otherwise from `model`; ModelMissing when
/// neither is available, InsufficientHistory below three years.
std::vector<CountryForecast> forecast_countries(const ingest::Records& records, const PipelineConfig& config,
                                                const TrainedModel* model = nullptr);

// ---- commands ----------------------------------------------------------------

struct CommandResult {
  std::string report;
  std::vector<fs::path> written;
  std::vector<std::string> warnings;
};

/// Exactly one of `records` / `eigenvalues` drives the table; eigenvalues win
/// when both are given. An empty out_dir writes nothing.
CommandResult cmd_pca(const PipelineConfig& config, const ingest::Records* records, const fs::path& eigenvalues,
                      const fs::path& out_dir);
CommandResult cmd_train(const PipelineConfig& config, const ingest::Records& records, const fs::path& model_path,
                        const fs::path& out_dir);
CommandResult cmd_score(const PipelineConfig& config, const ingest::Records& records, const fs::path& model_path,
                        const fs::path& out_dir);
CommandResult cmd_forecast(const PipelineConfig& config, const ingest::Records& records, const fs::path& model_path,
                           const fs::path& out_dir);
CommandResult cmd_report(const PipelineConfig& config, const ingest::Records& records, const fs::path& model_path,
                         const fs::path& eigenvalues, const fs::path& out_dir);

/// File-system-safe stem for a country name.
std::string file_stem(const std::string& country);

}  // namespace regstab::pipeline
