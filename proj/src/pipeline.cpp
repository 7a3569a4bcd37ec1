#include "regstab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "regstab/error.hpp"
#include "text.hpp"

namespace regstab::pipeline {

namespace {

using ingest::Index;
using ingest::Records;

constexpr std::array<Index, 5> kDefaultFeatures = {Index::LAP, Index::AAT, Index::AMS, Index::FO, Index::PSR};

void write_text(const fs::path& path, const std::string& body, CommandResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << body;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
  result.written.push_back(path);
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

Index require_index(const std::string& name) {
  auto idx = ingest::index_from_name(name);
  if (!idx) throw Error(ErrorKind::ParseError, "unknown index '" + name + "'");
  return *idx;
}

std::string f4(double v) { return text::format("%.4f", v); }
std::string pct(double fraction) { return text::format("%.2f%%", 100.0 * fraction); }

std::string forecast_report(const std::vector<CountryForecast>& forecasts, const PipelineConfig& config) {
  std::ostringstream out;
  out << "Linear forecast of RS (relativity gate |r| >= " << f4(config.relativity_min_abs_r) << ")\n";
  for (const auto& f : forecasts) {
    out << '\n' << f.country << " (" << f.series.size() << " years, RS from " << f.source << ")\n";
    out << "  r = " << f4(f.relativity.r) << (f.relativity.pass ? "  linear\n" : "  WARNING: below relativity gate\n");
    out << "  slope = " << text::format("%.6f", f.fit.slope) << " per year, intercept = "
        << text::format("%.6f", f.fit.intercept) << '\n';
    for (const auto& p : f.predictions) out << "  " << p.year << "  " << f4(p.value) << '\n';
  }
  return out.str();
}

std::string forecast_csv(const std::vector<CountryForecast>& forecasts) {
  std::ostringstream out;
  out << "country,year,predicted_rs\n";
  for (const auto& f : forecasts)
    for (const auto& p : f.predictions) out << f.country << ',' << p.year << ',' << f4(p.value) << '\n';
  return out.str();
}

std::string scores_csv(const std::vector<ScoredRecord>& scored) {
  std::ostringstream out;
  out << "country,year,bpnn_output,rs,category\n";
  for (const auto& s : scored)
    out << s.country << ',' << s.year << ',' << f4(*s.score.bpnn_output) << ',' << f4(s.score.value) << ','
        << rs::to_string(s.score.category) << '\n';
  return out.str();
}

std::string scores_report(const std::vector<ScoredRecord>& scored) {
  std::ostringstream out;
  out << text::format("%-16s %6s %12s %10s  %s\n", "country", "year", "BPNN(x)", "RS", "category");
  for (const auto& s : scored)
    out << text::format("%-16s %6d %12s %10s  %s\n", s.country.c_str(), s.year, f4(*s.score.bpnn_output).c_str(),
                        f4(s.score.value).c_str(), std::string(rs::to_string(s.score.category)).c_str());
  return out.str();
}

std::vector<std::string> relativity_warnings(const std::vector<CountryForecast>& forecasts) {
  std::vector<std::string> warnings;
  for (const auto& f : forecasts)
    if (!f.relativity.pass)
      warnings.push_back("RelativityFailed: " + f.country + " r = " + f4(f.relativity.r));
  return warnings;
}

}  // namespace

// ---- PCA --------------------------------------------------------------------

std::vector<std::string> PcaTable::selected() const {
  return {names.begin(), names.begin() + static_cast<std::ptrdiff_t>(selected_k)};
}

NamedEigenvalues read_eigenvalues(std::istream& in, const std::string& source) {
  NamedEigenvalues out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto cells = ingest::split_csv_line(body);
    const std::string value_cell = cells.size() >= 2 ? cells[1] : cells[0];
    auto v = text::parse_double(value_cell);
    if (!v) {
      if (out.values.empty() && out.names.empty()) continue;  // header
      throw Error(ErrorKind::ParseError, source + " line " + std::to_string(line_no) + ": '" + value_cell + "'");
    }
    out.names.push_back(cells.size() >= 2 ? std::string(text::trim(cells[0]))
                                          : "PC" + std::to_string(out.values.size() + 1));
    out.values.push_back(*v);
  }
  if (out.values.empty()) throw Error(ErrorKind::EmptyDataset, source + ": no eigenvalues");
  return out;
}

NamedEigenvalues load_eigenvalues(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_eigenvalues(in, path.string());
}

PcaTable pca_table(const NamedEigenvalues& spectrum, double threshold) {
  if (spectrum.names.size() != spectrum.values.size())
    throw Error(ErrorKind::LengthMismatch, "one name per eigenvalue required");
  auto rates = pca::contribution_rates(spectrum.values);
  PcaTable table;
  table.names = spectrum.names;
  table.eigenvalues = spectrum.values;
  table.selected_k = pca::select_components(rates.accumulated, threshold);
  table.rates = std::move(rates.rates);
  table.accumulated = std::move(rates.accumulated);
  table.threshold = threshold;
  return table;
}

DatasetPca pca_from_records(const Records& records, const PipelineConfig& config) {
  const auto x = ingest::to_data_matrix(records, ingest::kAllIndexes);
  auto output = pca::run(x, config.pca_threshold, config.pca_mode);
  PcaTable table;
  table.names = output.result.ranked_indexes;
  table.eigenvalues = output.result.eigenvalues;
  table.rates = output.result.contribution_rates;
  table.accumulated = output.result.accumulated_rates;
  table.selected_k = output.result.selected_k;
  table.threshold = config.pca_threshold;
  return {std::move(table), std::move(output)};
}

std::string format_pca_table(const PcaTable& table) {
  std::ostringstream out;
  out << text::format("%-8s %12s %10s %16s\n", "Index", "Eigenvalue", "Cr", "Accumulated Cr");
  for (std::size_t i = 0; i < table.names.size(); ++i)
    out << text::format("%-8s %12s %10s %16s\n", table.names[i].c_str(), f4(table.eigenvalues[i]).c_str(),
                        pct(table.rates[i]).c_str(), pct(table.accumulated[i]).c_str());
  out << "Selected k = " << table.selected_k << " at threshold " << pct(table.threshold) << ":";
  for (const auto& name : table.selected()) out << ' ' << name;
  out << '\n';
  return out.str();
}

// ---- training and scoring -----------------------------------------------------

Vector FeatureScaler::transform(const ingest::CountryYearRecord& record) const {
  Vector x(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto v = record.get(require_index(names[i]));
    if (!v)
      throw Error(ErrorKind::MissingColumn, names[i] + " absent for " + record.country + " " + std::to_string(record.year));
    x[i] = (*v - means[i]) / sds[i];
  }
  return x;
}

fs::path scaler_path(const fs::path& model_path) {
  fs::path p = model_path;
  p += ".scaler";
  return p;
}

void write_scaler(std::ostream& out, const FeatureScaler& scaler) {
  for (std::size_t i = 0; i < scaler.names.size(); ++i)
    out << "feature " << scaler.names[i] << ' ' << text::g17(scaler.means[i]) << ' ' << text::g17(scaler.sds[i]) << '\n';
}

FeatureScaler read_scaler(std::istream& in, const std::string& source) {
  FeatureScaler s;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto parts = text::split_ws(line);
    if (parts.empty()) continue;
    std::optional<double> mean, sd;
    if (parts.size() == 4 && parts[0] == "feature") {
      mean = text::parse_double(parts[2]);
      sd = text::parse_double(parts[3]);
    }
    if (!mean || !sd || !(*sd > 0.0))
      throw Error(ErrorKind::ParseError, source + " line " + std::to_string(line_no) + ": expected 'feature NAME MEAN SD'");
    s.names.emplace_back(parts[1]);
    require_index(s.names.back());
    s.means.push_back(*mean);
    s.sds.push_back(*sd);
  }
  if (s.names.empty()) throw Error(ErrorKind::ParseError, source + ": no features");
  return s;
}

void save_trained_model(const fs::path& model_path, const TrainedModel& model) {
  bpnn::save_model(model_path, model.network, model.seed);
  const fs::path sp = scaler_path(model_path);
  std::ofstream out(sp, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + sp.string());
  write_scaler(out, model.scaler);
}

TrainedModel load_trained_model(const fs::path& model_path) {
  auto stored = bpnn::load_model(model_path);
  const fs::path sp = scaler_path(model_path);
  std::ifstream in(sp);
  if (!in) throw Error(ErrorKind::ModelMissing, sp.string());
  TrainedModel model{std::move(stored.network), stored.seed, read_scaler(in, sp.string())};
  if (model.scaler.names.size() != model.network.n_input())
    throw Error(ErrorKind::DimensionMismatch, "scaler has " + std::to_string(model.scaler.names.size()) +
                                                  " features, network takes " +
                                                  std::to_string(model.network.n_input()));
  return model;
}

TrainOutcome train_model(const Records& records, const PipelineConfig& config) {
  config.validate();
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "no training records");
  for (const auto& r : records)
    if (!r.fsi) throw Error(ErrorKind::MissingColumn, "fsi absent for " + r.country + " " + std::to_string(r.year));

  TrainOutcome outcome;
  outcome.preprocessed = ingest::preprocess(records, config.outlier_z_cutoff, config.drop_outliers);
  const Records& rows = outcome.preprocessed.clean;

  std::vector<Index> features;
  const bool seven = std::all_of(ingest::kAllIndexes.begin(), ingest::kAllIndexes.end(),
                                 [&](Index idx) { return ingest::all_have(rows, idx); });
  if (seven) {
    PipelineConfig selection = config;
    selection.pca_mode = pca::ReductionMode::IndexSelection;
    for (const auto& name : pca_from_records(rows, selection).table.selected()) features.push_back(require_index(name));
  } else {
    features.assign(kDefaultFeatures.begin(), kDefaultFeatures.end());
  }

  const auto standardized = numerics::standardize(ingest::to_data_matrix(rows, features));
  FeatureScaler& scaler = outcome.model.scaler;
  scaler.names = standardized.z.column_names();
  scaler.means = standardized.stats.means;
  for (double v : standardized.stats.sample_variances) scaler.sds.push_back(std::sqrt(v));

  Vector raw_labels;
  for (const auto& r : rows) raw_labels.push_back(*r.fsi);
  const Vector scaled = rs::normalize_labels(raw_labels, config.label_min, config.label_max);
  Matrix labels(rows.size(), 1);
  for (std::size_t i = 0; i < rows.size(); ++i) labels(i, 0) = scaled[i] / 100.0;

  bpnn::NetworkConfig net_config = config.network;
  net_config.n_input = features.size();
  net_config.n_output = 1;
  auto trained = bpnn::train(net_config, standardized.z.values(), labels);
  outcome.model.network = std::move(trained.network);
  outcome.model.seed = net_config.rng_seed;
  outcome.report = std::move(trained.report);
  return outcome;
}

ScoredRecord score_record(const ingest::CountryYearRecord& record, const TrainedModel& model) {
  const auto act = bpnn::forward(model.network, model.scaler.transform(record));
  return {record.country, record.year, rs::rs_transform(rs::bpnn_scale(act.output[0]))};
}

std::vector<ScoredRecord> score_records(const Records& records, const TrainedModel& model) {
  std::vector<ScoredRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(score_record(r, model));
  return out;
}

// ---- forecasting ----------------------------------------------------------------

std::vector<CountryForecast> forecast_countries(const Records& records, const PipelineConfig& config,
                                                const TrainedModel* model) {
  config.validate();
  if (records.empty()) throw Error(ErrorKind::EmptyDataset, "no records to forecast");
  std::vector<CountryForecast> out;
  for (const auto& [country, rows] : ingest::by_country(records)) {
    CountryForecast f;
    f.country = country;
    const bool has_rs = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.rs.has_value(); });
    if (!has_rs && model == nullptr)
      throw Error(ErrorKind::ModelMissing, country + ": no rs column and no model to score with");
    f.source = has_rs ? "rs column" : "model";

    if (rows.size() < forecast::kMinFitPoints)
      throw Error(ErrorKind::InsufficientHistory,
                  country + ": " + std::to_string(rows.size()) + " years, need " + std::to_string(forecast::kMinFitPoints));
    std::vector<forecast::Point> points;
    for (const auto& r : rows)
      points.push_back({r.year, has_rs ? *r.rs : score_record(r, *model).score.value});
    f.series = forecast::TimeSeries(std::move(points));
    f.fit = forecast::fit(f.series);
    f.relativity = forecast::relativity_check(f.series, config.relativity_min_abs_r);
    f.predictions = forecast::predict(f.fit, forecast::default_horizon(f.series, config.forecast_horizon));
    out.push_back(std::move(f));
  }
  return out;
}

// ---- commands -------------------------------------------------------------------

std::string file_stem(const std::string& country) {
  std::string s;
  for (char c : country) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' || c == '_';
    s += ok ? c : '_';
  }
  return s.empty() ? "_" : s;
}

CommandResult cmd_pca(const PipelineConfig& config, const Records* records, const fs::path& eigenvalues,
                      const fs::path& out_dir) {
  config.validate();
  CommandResult result;
  std::optional<DatasetPca> dataset;
  PcaTable table;
  if (!eigenvalues.empty()) {
    table = pca_table(load_eigenvalues(eigenvalues), config.pca_threshold);
  } else if (records != nullptr) {
    dataset = pca_from_records(*records, config);
    table = dataset->table;
  } else {
    throw Error(ErrorKind::EmptyDataset, "pca needs a dataset or an eigenvalue file");
  }
  result.report = format_pca_table(table);

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text(out_dir / "pca_report.txt", result.report, result);
    if (dataset) {
      const auto& reduced = dataset->output.reduced;
      std::ostringstream csv;
      csv << "country,year";
      for (const auto& n : reduced.column_names()) csv << ',' << n;
      csv << '\n';
      for (std::size_t i = 0; i < reduced.rows(); ++i) {
        csv << (*records)[i].country << ',' << (*records)[i].year;
        for (double v : reduced.values().row(i)) csv << ',' << text::g17(v);
        csv << '\n';
      }
      write_text(out_dir / "pca_reduced.csv", csv.str(), result);
    }
  }
  return result;
}

CommandResult cmd_train(const PipelineConfig& config, const Records& records, const fs::path& model_path,
                        const fs::path& out_dir) {
  if (model_path.empty()) throw Error(ErrorKind::InvalidConfig, "train needs a model output path");
  const auto outcome = train_model(records, config);
  CommandResult result;

  std::ostringstream rep;
  const auto& net = outcome.model.network;
  rep << "features:";
  for (const auto& n : outcome.model.scaler.names) rep << ' ' << n;
  rep << "\ntopology: " << net.n_input() << ' ' << net.n_hidden() << ' ' << net.n_output() << '\n';
  rep << "seed: " << outcome.model.seed << '\n';
  rep << "learning rate: " << text::g17(config.network.learning_rate) << '\n';
  rep << "samples: " << outcome.preprocessed.clean.size() << '\n';
  rep << "outliers flagged: " << outcome.preprocessed.flagged.size()
      << (config.drop_outliers ? " (dropped)\n" : " (kept)\n");
  for (const auto& flag : outcome.preprocessed.flags) {
    const auto& r = records[flag.record];
    rep << "  " << r.country << ' ' << r.year << ' ' << ingest::short_name(flag.index) << " z = " << f4(flag.z) << '\n';
  }
  rep << "epochs: " << outcome.report.epochs_run
      << (outcome.report.stop_reason == bpnn::StopReason::Converged ? " (converged)\n" : " (max epochs)\n");
  rep << "final loss: " << text::format("%.6e", outcome.report.loss_history.back()) << '\n';
  result.report = rep.str();
  for (const auto& flag : outcome.preprocessed.flags) {
    const auto& r = records[flag.record];
    result.warnings.push_back("outlier: " + r.country + " " + std::to_string(r.year) + " " +
                              std::string(ingest::short_name(flag.index)));
  }

  if (model_path.has_parent_path()) ensure_dir(model_path.parent_path());
  save_trained_model(model_path, outcome.model);
  result.written.push_back(model_path);
  result.written.push_back(scaler_path(model_path));
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text(out_dir / "train_report.txt", result.report, result);
    std::ostringstream hist;
    for (std::size_t e = 0; e < outcome.report.loss_history.size(); ++e)
      hist << (e + 1) << ' ' << text::g17(outcome.report.loss_history[e]) << '\n';
    write_text(out_dir / "loss_history.dat", hist.str(), result);
  }
  return result;
}

CommandResult cmd_score(const PipelineConfig& config, const Records& records, const fs::path& model_path,
                        const fs::path& out_dir) {
  config.validate();
  if (model_path.empty()) throw Error(ErrorKind::ModelMissing, "score needs --model");
  const auto model = load_trained_model(model_path);
  const auto scored = score_records(records, model);
  CommandResult result;
  result.report = scores_report(scored);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text(out_dir / "scores.csv", scores_csv(scored), result);
  }
  return result;
}

CommandResult cmd_forecast(const PipelineConfig& config, const Records& records, const fs::path& model_path,
                           const fs::path& out_dir) {
  std::optional<TrainedModel> model;
  if (!model_path.empty()) model = load_trained_model(model_path);
  const auto forecasts = forecast_countries(records, config, model ? &*model : nullptr);
  CommandResult result;
  result.report = forecast_report(forecasts, config);
  result.warnings = relativity_warnings(forecasts);
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text(out_dir / "forecast.csv", forecast_csv(forecasts), result);
    write_text(out_dir / "forecast_report.txt", result.report, result);
  }
  return result;
}

CommandResult cmd_report(const PipelineConfig& config, const Records& records, const fs::path& model_path,
                         const fs::path& eigenvalues, const fs::path& out_dir) {
  config.validate();
  CommandResult result;
  std::ostringstream rep;

  const bool seven = std::all_of(ingest::kAllIndexes.begin(), ingest::kAllIndexes.end(),
                                 [&](Index idx) { return ingest::all_have(records, idx); });
  if (!eigenvalues.empty() || (seven && records.size() >= 2)) {
    rep << "== Contribution rates ==\n";
    rep << cmd_pca(config, &records, eigenvalues, {}).report << '\n';
  }

  std::optional<TrainedModel> model;
  if (!model_path.empty()) {
    model = load_trained_model(model_path);
    rep << "== Region stability scores ==\n" << scores_report(score_records(records, *model)) << '\n';
  }

  const auto forecasts = forecast_countries(records, config, model ? &*model : nullptr);
  rep << "== Forecast ==\n" << forecast_report(forecasts, config);
  result.report = rep.str();
  result.warnings = relativity_warnings(forecasts);

  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_text(out_dir / "report.txt", result.report, result);
    for (const auto& f : forecasts) {
      std::ostringstream observed, predicted;
      for (const auto& p : f.series.points()) observed << p.year << ' ' << f4(p.value) << '\n';
      for (const auto& p : f.predictions) predicted << p.year << ' ' << f4(p.value) << '\n';
      write_text(out_dir / (file_stem(f.country) + ".dat"), observed.str(), result);
      write_text(out_dir / (file_stem(f.country) + "_forecast.dat"), predicted.str(), result);
    }
  }
  return result;
}

}  // namespace regstab::pipeline
