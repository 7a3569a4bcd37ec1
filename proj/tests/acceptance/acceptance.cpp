// One line per acceptance criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "regstab/bpnn.hpp"
#include "regstab/numerics.hpp"
#include "regstab/pca.hpp"
#include "regstab/pipeline.hpp"
#include "regstab/rs_index.hpp"
#include "support.hpp"

using namespace regstab;
namespace t = regstab::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto start = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail += std::string("exception: ") + e.what();
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s (%.1f ms)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, ms, o.detail.empty() ? "" : " -- ",
              o.detail.c_str());
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion_1(Outcome& o) {
  const auto start = Clock::now();
  const auto c = pca::contribution_rates(t::kTable2Eigenvalues);
  const auto k = pca::select_components(c.accumulated, 0.95);
  const double ms = elapsed_ms(start);
  for (std::size_t i = 0; i < 7; ++i) {
    o.require(std::abs(100 * c.rates[i] - t::kTable2Cr[i]) <= 0.01, "Cr row " + std::to_string(i + 1));
    o.require(std::abs(100 * c.accumulated[i] - t::kTable2Accumulated[i]) <= 0.01,
              "accumulated row " + std::to_string(i + 1));
  }
  o.require(k == 5, "k = " + std::to_string(k));
  o.require(ms < 1.0, "runtime " + fmt("%.3f ms", ms));
}

void criterion_2(Outcome& o) {
  ingest::Records recs = ingest::load_csv(t::data_path("sudan.csv"));
  ingest::merge_records(recs, ingest::load_csv(t::data_path("haiti.csv")));
  ingest::merge_records(recs, ingest::load_csv(t::data_path("somalia.csv")));
  const PipelineConfig cfg;
  const auto start = Clock::now();
  const auto result = pipeline::cmd_forecast(cfg, recs, {}, {});
  const double ms = elapsed_ms(start);
  const auto forecasts = pipeline::forecast_countries(recs, cfg);
  const std::pair<const char*, double> expected[] = {{"Haiti", -0.8689}, {"Somalia", 0.9547}, {"Sudan", -0.8265}};
  o.require(forecasts.size() == 3, "country count");
  for (std::size_t i = 0; i < 3 && i < forecasts.size(); ++i) {
    const auto& [name, r] = expected[i];
    o.require(forecasts[i].country == name, "order");
    o.require(std::abs(forecasts[i].relativity.r - r) <= 5e-4, std::string(name) + " r = " + fmt("%.6f", forecasts[i].relativity.r));
    o.require(result.report.find(fmt("r = %.4f", r)) != std::string::npos, std::string(name) + " not in report");
  }
  o.require(ms < 10.0, "runtime " + fmt("%.3f ms", ms));
}

void criterion_3(Outcome& o) {
  o.require(rs::rs_transform(80).value == 0.25, "rs(80)");
  o.require(rs::rs_transform(50).value == 1.0, "rs(50)");
  // Sweep (0, 100]: >80 fragile, (50, 80] vulnerable, <=50 stable.
  for (int i = 1; i <= 100000; ++i) {
    const double y = i / 1000.0;
    const auto expected = y > 80 ? rs::Category::Fragile : y > 50 ? rs::Category::Vulnerable : rs::Category::Stable;
    if (rs::rs_transform(y).category != expected) {
      o.require(false, "band mismatch at " + fmt("%.3f", y));
      return;
    }
  }
}

void criterion_4(Outcome& o) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> in(-2.0, 2.0), target(0.01, 0.99);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto net = t::random_network(gen, 5, 10, 1, 1.0);
    std::vector<double> x(5), d = {target(gen)};
    for (double& v : x) v = in(gen);
    worst = std::max(worst, bpnn::gradient_check(net, x, d, 1e-5));
  }
  o.require(worst < 1e-5, "max relative error " + fmt("%.3e", worst));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("200 triples, max rel err ") + fmt("%.2e", worst);
}

void criterion_5(Outcome& o) {
  const auto data = t::teacher_dataset(2016, 50);
  bpnn::NetworkConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.max_epochs = 10000;
  cfg.loss_tolerance = 1e-12;
  cfg.rng_seed = 42;
  const auto dir = t::scratch_dir("acceptance_c5");
  const auto start = Clock::now();
  const auto a = bpnn::train(cfg, data.inputs, data.labels);
  bpnn::save_model(dir / "a.txt", a.network, cfg.rng_seed);
  const auto b = bpnn::train(cfg, data.inputs, data.labels);
  bpnn::save_model(dir / "b.txt", b.network, cfg.rng_seed);
  const double ms = elapsed_ms(start);
  const double final_loss = a.report.loss_history.back();
  o.require(final_loss < 1e-3, "final loss " + fmt("%.3e", final_loss));
  o.require(a.report.epochs_run <= 10000, "epochs");
  o.require(slurp(dir / "a.txt") == slurp(dir / "b.txt"), "persisted models differ");
  o.require(ms < 30000.0, "runtime " + fmt("%.0f ms", ms));
  if (o.pass)
    o.detail = "summed loss " + fmt("%.3e", final_loss) + " after " + std::to_string(a.report.epochs_run) +
               " epochs (teacher seed 2016, student seed 42)";
}

void criterion_6(Outcome& o) {
  std::mt19937_64 gen(6);
  double worst_rec = 0, worst_trace = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 10;
    const Matrix r = t::random_symmetric(gen, n);
    const auto e = numerics::symmetric_eigen(r);
    Matrix d(n, n);
    double trace = 0, sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d(i, i) = e.eigenvalues[i];
      trace += r(i, i);
      sum += e.eigenvalues[i];
    }
    const Matrix back = t::naive_matmul(t::naive_matmul(e.eigenvectors, d), e.eigenvectors.transposed());
    double diff = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) diff += std::pow(back(i, j) - r(i, j), 2);
    worst_rec = std::max(worst_rec, std::sqrt(diff));
    worst_trace = std::max(worst_trace, std::abs(sum - trace));
  }
  o.require(worst_rec < 1e-8, "reconstruction " + fmt("%.3e", worst_rec));
  o.require(worst_trace < 1e-8, "trace " + fmt("%.3e", worst_trace));
  if (o.pass) o.detail = "max reconstruction " + fmt("%.2e", worst_rec) + ", trace " + fmt("%.2e", worst_trace);
}

void criterion_7(Outcome& o) {
  const std::pair<const char*, const std::array<double, 8>*> series[] = {
      {"Sudan", &t::kSudanRs}, {"Haiti", &t::kHaitiRs}, {"Somalia", &t::kSomaliaRs}};
  for (const auto& [name, values] : series) {
    std::vector<forecast::Point> pts;
    for (std::size_t i = 0; i < 8; ++i) pts.push_back({t::kYears[i], (*values)[i]});
    const forecast::TimeSeries s(pts);
    const auto f = forecast::fit(s);
    double se = 0, sxe = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      se += f.residuals[i];
      sxe += t::kYears[i] * f.residuals[i];
    }
    o.require(std::abs(se) < 1e-9 && std::abs(sxe) < 1e-9, std::string(name) + " residual identities");
    o.require(std::signbit(f.slope) == std::signbit(f.r), std::string(name) + " sign(slope) != sign(r)");
    if (std::string(name) == "Somalia") {
      const std::vector<int> years = {2018, 2019, 2020, 2021, 2022};
      const auto p = forecast::predict(f, years);
      for (std::size_t i = 1; i < p.size(); ++i)
        o.require(p[i].value > p[i - 1].value, "Somalia predictions not increasing");
    }
  }
}

void criterion_8(Outcome& o) {
  // The published spectrum cannot come from a 7x7 correlation matrix, whose trace is 7.
  double published = 0;
  for (double v : t::kTable2Eigenvalues) published += v;
  o.require(std::abs(published - 9.0822) < 1e-9, "published spectrum sum " + fmt("%.4f", published));
  const auto recs = ingest::load_csv(t::data_path("synthetic_seven_index.csv"));
  const auto pca = pipeline::pca_from_records(recs, PipelineConfig{});
  double total = 0;
  for (double v : pca.table.eigenvalues) total += v;
  o.require(std::abs(total - 7.0) < 1e-9, "correlation spectrum sums to " + fmt("%.6f", total));
  o.require(std::abs(published - total) > 1.0, "published spectrum unexpectedly consistent");

  // Printed RS values are consumed as given data, not regenerated.
  ingest::Records state = ingest::load_csv(t::data_path("sudan.csv"));
  const auto f = pipeline::forecast_countries(state, PipelineConfig{});
  o.require(f.size() == 1 && f[0].source == "rs column", "RS not taken from the rs column");
  for (std::size_t i = 0; i < 8 && !f.empty(); ++i)
    o.require(f[0].series.points()[i].value == t::kSudanRs[i], "RS value altered");
  if (o.pass)
    o.detail = "spectrum sum " + fmt("%.4f", published) + " vs trace 7; RS consumed from input; covered by 1, 3, 4, 5";
}

}  // namespace

int main() {
  run(1, "contribution rates reproduce the published table, k = 5", criterion_1);
  run(2, "forecast correlations for the three state tables", criterion_2);
  run(3, "RS cut points and label bands", criterion_3);
  run(4, "analytic vs finite-difference gradients", criterion_4);
  run(5, "teacher-student training and byte-identical models", criterion_5);
  run(6, "Jacobi reconstruction and trace", criterion_6);
  run(7, "OLS residual identities, slope sign, rising Somalia forecast", criterion_7);
  run(8, "non-reproducible published quantities handled as given", criterion_8);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
