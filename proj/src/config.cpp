#include "regstab/config.hpp"

#include <cmath>
#include <fstream>
#include <istream>

#include "regstab/error.hpp"
#include "text.hpp"

namespace regstab {

namespace {

double as_double(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v || std::isnan(*v))
    throw Error(ErrorKind::InvalidConfig, std::string(key) + " = '" + std::string(value) + "' is not a number");
  return *v;
}

template <class Int>
Int as_int(std::string_view key, std::string_view value) {
  auto v = text::parse_int<Int>(value);
  if (!v) throw Error(ErrorKind::InvalidConfig, std::string(key) + " = '" + std::string(value) + "' is not an integer");
  return *v;
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(pca_threshold > 0.0 && pca_threshold <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "pca_threshold must lie in (0, 1]");
  if (!(outlier_z_cutoff > 0.0)) throw Error(ErrorKind::InvalidConfig, "outlier_z_cutoff must be positive");
  if (!std::isfinite(label_min) || !std::isfinite(label_max) || !(label_max > label_min))
    throw Error(ErrorKind::InvalidConfig, "label_max must exceed label_min");
  if (forecast_horizon < 1) throw Error(ErrorKind::InvalidConfig, "forecast_horizon must be >= 1");
  if (!(relativity_min_abs_r >= 0.0 && relativity_min_abs_r <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "relativity_min_abs_r must lie in [0, 1]");
  network.validate();
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  value = text::trim(value);
  if (key == "pca_threshold") {
    pca_threshold = as_double(key, value);
  } else if (key == "pca_mode") {
    if (value == "index") pca_mode = pca::ReductionMode::IndexSelection;
    else if (value == "projection") pca_mode = pca::ReductionMode::Projection;
    else throw Error(ErrorKind::InvalidConfig, "pca_mode must be 'index' or 'projection'");
  } else if (key == "outlier_z_cutoff") {
    outlier_z_cutoff = as_double(key, value);
  } else if (key == "drop_outliers") {
    if (value == "true" || value == "1") drop_outliers = true;
    else if (value == "false" || value == "0") drop_outliers = false;
    else throw Error(ErrorKind::InvalidConfig, "drop_outliers must be true or false");
  } else if (key == "n_hidden") {
    network.n_hidden = as_int<std::size_t>(key, value);
  } else if (key == "learning_rate") {
    network.learning_rate = as_double(key, value);
  } else if (key == "max_epochs") {
    network.max_epochs = as_int<int>(key, value);
  } else if (key == "loss_tolerance") {
    network.loss_tolerance = as_double(key, value);
  } else if (key == "seed") {
    network.rng_seed = as_int<std::uint64_t>(key, value);
  } else if (key == "label_min") {
    label_min = as_double(key, value);
  } else if (key == "label_max") {
    label_max = as_double(key, value);
  } else if (key == "forecast_horizon") {
    forecast_horizon = as_int<int>(key, value);
  } else if (key == "relativity_min_abs_r") {
    relativity_min_abs_r = as_double(key, value);
  } else {
    throw Error(ErrorKind::InvalidConfig, "unknown key '" + std::string(key) + "'");
  }
}

void PipelineConfig::apply(std::istream& in, const std::string& source) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::InvalidConfig, source + " line " + std::to_string(line_no) + ": expected key = value");
    set(text::trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  validate();
}

void PipelineConfig::apply_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  apply(in, path.string());
}

}  // namespace regstab
