#include "regstab/regstab.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <new>
#include <string>

#include "regstab/error.hpp"
#include "regstab/pipeline.hpp"

struct regstab_config {
  regstab::PipelineConfig value;
};

struct regstab_dataset {
  regstab::ingest::Records records;
};

struct regstab_model {
  regstab::bpnn::StoredModel stored;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_kind;

regstab_status fail(regstab_status status, const std::string& kind, const std::string& message) {
  g_last_kind = kind;
  g_last_error = message;
  return status;
}

template <class F>
regstab_status guarded(F&& body) {
  g_last_error.clear();
  g_last_kind.clear();
  try {
    body();
    return REGSTAB_OK;
  } catch (const regstab::Error& e) {
    return fail(static_cast<regstab_status>(e.category()), std::string(regstab::to_string(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(REGSTAB_ERR_NUMERIC, "OutOfMemory", "out of memory");
  } catch (const std::exception& e) {
    return fail(REGSTAB_ERR_VALIDATION, "Internal", e.what());
  }
}

regstab_status null_arg(const char* what) {
  return fail(REGSTAB_ERR_VALIDATION, "NullArgument", std::string("null argument: ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::filesystem::path as_path(const char* p) { return p == nullptr ? std::filesystem::path() : std::filesystem::path(p); }

void hand_out(const regstab::pipeline::CommandResult& result, char** report, char** warnings) {
  if (report != nullptr) *report = dup_string(result.report);
  if (warnings != nullptr) {
    std::string joined;
    for (const auto& w : result.warnings) joined += w + '\n';
    *warnings = dup_string(joined);
  }
}

void clear_out(char** report, char** warnings) {
  if (report != nullptr) *report = nullptr;
  if (warnings != nullptr) *warnings = nullptr;
}

}  // namespace

extern "C" {

const char* regstab_version(void) { return "1.0.0"; }
const char* regstab_last_error(void) { return g_last_error.c_str(); }
const char* regstab_last_error_kind(void) { return g_last_kind.c_str(); }
void regstab_string_free(char* s) { std::free(s); }

regstab_status regstab_config_create(regstab_config** out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new regstab_config{}; });
}

void regstab_config_destroy(regstab_config* cfg) { delete cfg; }

regstab_status regstab_config_load(regstab_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr) return null_arg("cfg/path");
  return guarded([&] {
    regstab::PipelineConfig next = cfg->value;
    next.apply_file(path);
    cfg->value = next;
  });
}

regstab_status regstab_config_set(regstab_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr) return null_arg("cfg/key/value");
  return guarded([&] {
    regstab::PipelineConfig next = cfg->value;
    next.set(key, value);
    next.validate();
    cfg->value = next;
  });
}

regstab_status regstab_dataset_create(regstab_dataset** out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] { *out = new regstab_dataset{}; });
}

void regstab_dataset_destroy(regstab_dataset* ds) { delete ds; }

regstab_status regstab_dataset_load_csv(regstab_dataset* ds, const char* path) {
  if (ds == nullptr || path == nullptr) return null_arg("ds/path");
  return guarded([&] {
    auto more = regstab::ingest::load_csv(path);
    auto merged = ds->records;
    regstab::ingest::merge_records(merged, more);
    ds->records = std::move(merged);
  });
}

size_t regstab_dataset_size(const regstab_dataset* ds) { return ds == nullptr ? 0 : ds->records.size(); }

regstab_status regstab_dataset_write_csv(const regstab_dataset* ds, const char* path) {
  if (ds == nullptr || path == nullptr) return null_arg("ds/path");
  return guarded([&] {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw regstab::Error(regstab::ErrorKind::Io, std::string("cannot write ") + path);
    regstab::ingest::write_csv(out, ds->records);
  });
}

regstab_status regstab_model_load(const char* path, regstab_model** out) {
  if (path == nullptr || out == nullptr) return null_arg("path/out");
  return guarded([&] { *out = new regstab_model{regstab::bpnn::load_model(path)}; });
}

void regstab_model_destroy(regstab_model* model) { delete model; }

size_t regstab_model_input_count(const regstab_model* model) {
  return model == nullptr ? 0 : model->stored.network.n_input();
}

regstab_status regstab_model_bpnn(const regstab_model* model, const double* x, size_t n, double* bpnn_out) {
  if (model == nullptr || (x == nullptr && n > 0) || bpnn_out == nullptr) return null_arg("model/x/bpnn_out");
  return guarded([&] {
    const auto act = regstab::bpnn::forward(model->stored.network, {x, n});
    *bpnn_out = regstab::rs::bpnn_scale(act.output.at(0));
  });
}

regstab_status regstab_pearson(const double* x, const double* y, size_t n, double* r_out) {
  if (x == nullptr || y == nullptr || r_out == nullptr) return null_arg("x/y/r_out");
  return guarded([&] { *r_out = regstab::numerics::pearson({x, n}, {y, n}); });
}

regstab_status regstab_contribution_rates(const double* eigenvalues, size_t p, double* rates_out,
                                          double* accumulated_out) {
  if (eigenvalues == nullptr || rates_out == nullptr || accumulated_out == nullptr)
    return null_arg("eigenvalues/rates_out/accumulated_out");
  return guarded([&] {
    const auto c = regstab::pca::contribution_rates({eigenvalues, p});
    std::copy(c.rates.begin(), c.rates.end(), rates_out);
    std::copy(c.accumulated.begin(), c.accumulated.end(), accumulated_out);
  });
}

regstab_status regstab_select_components(const double* accumulated, size_t p, double threshold, size_t* k_out) {
  if (accumulated == nullptr || k_out == nullptr) return null_arg("accumulated/k_out");
  return guarded([&] { *k_out = regstab::pca::select_components({accumulated, p}, threshold); });
}

regstab_status regstab_rs_transform(double bpnn_output, double* rs_out, regstab_category* category_out) {
  if (rs_out == nullptr) return null_arg("rs_out");
  return guarded([&] {
    const auto score = regstab::rs::rs_transform(bpnn_output);
    *rs_out = score.value;
    if (category_out != nullptr) *category_out = static_cast<regstab_category>(score.category);
  });
}

regstab_category regstab_classify(double rs_value) {
  return static_cast<regstab_category>(regstab::rs::classify(rs_value));
}

regstab_status regstab_fit_line(const int* years, const double* values, size_t n, regstab_line_fit* out) {
  if (years == nullptr || values == nullptr || out == nullptr) return null_arg("years/values/out");
  return guarded([&] {
    std::vector<regstab::forecast::Point> points;
    for (size_t i = 0; i < n; ++i) points.push_back({years[i], values[i]});
    const auto fit = regstab::forecast::fit(regstab::forecast::TimeSeries(std::move(points)));
    *out = {fit.slope, fit.intercept, fit.r, fit.mean_year, fit.mean_value};
  });
}

regstab_status regstab_cmd_pca(const regstab_config* cfg, const regstab_dataset* ds, const char* eigenvalues_path,
                               const char* out_dir, char** report, char** warnings) {
  clear_out(report, warnings);
  if (cfg == nullptr) return null_arg("cfg");
  return guarded([&] {
    hand_out(regstab::pipeline::cmd_pca(cfg->value, ds == nullptr ? nullptr : &ds->records,
                                        as_path(eigenvalues_path), as_path(out_dir)),
             report, warnings);
  });
}

regstab_status regstab_cmd_train(const regstab_config* cfg, const regstab_dataset* ds, const char* model_path,
                                 const char* out_dir, char** report, char** warnings) {
  clear_out(report, warnings);
  if (cfg == nullptr || ds == nullptr) return null_arg("cfg/ds");
  return guarded([&] {
    hand_out(regstab::pipeline::cmd_train(cfg->value, ds->records, as_path(model_path), as_path(out_dir)), report,
             warnings);
  });
}

regstab_status regstab_cmd_score(const regstab_config* cfg, const regstab_dataset* ds, const char* model_path,
                                 const char* out_dir, char** report, char** warnings) {
  clear_out(report, warnings);
  if (cfg == nullptr || ds == nullptr) return null_arg("cfg/ds");
  return guarded([&] {
    hand_out(regstab::pipeline::cmd_score(cfg->value, ds->records, as_path(model_path), as_path(out_dir)), report,
             warnings);
  });
}

regstab_status regstab_cmd_forecast(const regstab_config* cfg, const regstab_dataset* ds, const char* model_path,
                                    const char* out_dir, char** report, char** warnings) {
  clear_out(report, warnings);
  if (cfg == nullptr || ds == nullptr) return null_arg("cfg/ds");
  return guarded([&] {
    hand_out(regstab::pipeline::cmd_forecast(cfg->value, ds->records, as_path(model_path), as_path(out_dir)), report,
             warnings);
  });
}

regstab_status regstab_cmd_report(const regstab_config* cfg, const regstab_dataset* ds, const char* model_path,
                                  const char* eigenvalues_path, const char* out_dir, char** report,
                                  char** warnings) {
  clear_out(report, warnings);
  if (cfg == nullptr || ds == nullptr) return null_arg("cfg/ds");
  return guarded([&] {
    hand_out(regstab::pipeline::cmd_report(cfg->value, ds->records, as_path(model_path), as_path(eigenvalues_path),
                                           as_path(out_dir)),
             report, warnings);
  });
}

}  // extern "C"
