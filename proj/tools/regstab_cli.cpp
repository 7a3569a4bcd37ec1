// regstab: command-line front end over the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regstab/regstab.h"

namespace {

struct Options {
  std::string config;
  std::vector<std::string> data;
  std::string model;
  std::string out;
  std::string eigenvalues;
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::optional<int> horizon;
};

using ConfigPtr = std::unique_ptr<regstab_config, decltype(&regstab_config_destroy)>;
using DatasetPtr = std::unique_ptr<regstab_dataset, decltype(&regstab_dataset_destroy)>;

int report_failure(regstab_status status) {
  std::fprintf(stderr, "regstab: %s\n", regstab_last_error());
  return static_cast<int>(status);
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int run(const std::string& command, const Options& o) {
  regstab_config* raw_cfg = nullptr;
  if (auto st = regstab_config_create(&raw_cfg); st != REGSTAB_OK) return report_failure(st);
  ConfigPtr cfg(raw_cfg, &regstab_config_destroy);
  if (!o.config.empty())
    if (auto st = regstab_config_load(cfg.get(), o.config.c_str()); st != REGSTAB_OK) return report_failure(st);
  auto set = [&](const char* key, const std::string& value) { return regstab_config_set(cfg.get(), key, value.c_str()); };
  if (o.threshold)
    if (auto st = set("pca_threshold", exact(*o.threshold)); st != REGSTAB_OK) return report_failure(st);
  if (o.seed)
    if (auto st = set("seed", std::to_string(*o.seed)); st != REGSTAB_OK) return report_failure(st);
  if (o.horizon)
    if (auto st = set("forecast_horizon", std::to_string(*o.horizon)); st != REGSTAB_OK) return report_failure(st);

  regstab_dataset* raw_ds = nullptr;
  if (auto st = regstab_dataset_create(&raw_ds); st != REGSTAB_OK) return report_failure(st);
  DatasetPtr ds(raw_ds, &regstab_dataset_destroy);
  for (const auto& path : o.data)
    if (auto st = regstab_dataset_load_csv(ds.get(), path.c_str()); st != REGSTAB_OK) return report_failure(st);

  if (command != "pca" && o.data.empty()) {
    std::fprintf(stderr, "regstab: %s needs at least one --data file\n", command.c_str());
    return REGSTAB_ERR_VALIDATION;
  }

  char* report = nullptr;
  char* warnings = nullptr;
  regstab_status st = REGSTAB_OK;
  if (command == "pca") {
    st = regstab_cmd_pca(cfg.get(), o.data.empty() ? nullptr : ds.get(), opt(o.eigenvalues), opt(o.out), &report,
                         &warnings);
  } else if (command == "train") {
    st = regstab_cmd_train(cfg.get(), ds.get(), opt(o.model), opt(o.out), &report, &warnings);
  } else if (command == "score") {
    st = regstab_cmd_score(cfg.get(), ds.get(), opt(o.model), opt(o.out), &report, &warnings);
  } else if (command == "forecast") {
    st = regstab_cmd_forecast(cfg.get(), ds.get(), opt(o.model), opt(o.out), &report, &warnings);
  } else {
    st = regstab_cmd_report(cfg.get(), ds.get(), opt(o.model), opt(o.eigenvalues), opt(o.out), &report, &warnings);
  }
  if (st != REGSTAB_OK) return report_failure(st);

  std::fputs(report, stdout);
  if (warnings != nullptr && warnings[0] != '\0') std::fprintf(stderr, "warning: %s", warnings);
  regstab_string_free(report);
  regstab_string_free(warnings);
  return REGSTAB_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regional stability toolkit: PCA index selection, BP network scoring, RS forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", regstab_version());

  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "flat key = value configuration file");
    sub->add_option("--data", o.data, "input CSV (repeatable)");
    sub->add_option("--out", o.out, "output directory for artifacts");
  };

  auto* pca = app.add_subcommand("pca", "contribution-rate table and index selection");
  common(pca);
  pca->add_option("--eigenvalues", o.eigenvalues, "CSV of name,eigenvalue rows to rate directly");
  pca->add_option("--threshold", o.threshold, "accumulated contribution threshold in (0, 1]");

  auto* train = app.add_subcommand("train", "fit the BP network on fsi-labelled data");
  common(train);
  train->add_option("--model", o.model, "model file to write")->required();
  train->add_option("--seed", o.seed, "weight initialisation seed");
  train->add_option("--threshold", o.threshold, "accumulated contribution threshold in (0, 1]");

  auto* score = app.add_subcommand("score", "RS score and category per record");
  common(score);
  score->add_option("--model", o.model, "trained model file")->required();

  auto* forecast = app.add_subcommand("forecast", "linear RS forecast per country");
  common(forecast);
  forecast->add_option("--model", o.model, "score records lacking an rs column with this model");
  forecast->add_option("--horizon", o.horizon, "years to predict");

  auto* report = app.add_subcommand("report", "combined tables and plot data");
  common(report);
  report->add_option("--model", o.model, "trained model file");
  report->add_option("--eigenvalues", o.eigenvalues, "CSV of name,eigenvalue rows");
  report->add_option("--threshold", o.threshold, "accumulated contribution threshold in (0, 1]");
  report->add_option("--horizon", o.horizon, "years to predict");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return REGSTAB_ERR_VALIDATION;
  }

  for (auto* sub : {pca, train, score, forecast, report})
    if (sub->parsed()) return run(sub->get_name(), o);
  return REGSTAB_ERR_VALIDATION;
}
