#pragma once

// Shared test fixtures and independent oracles. Nothing in here calls into the
// library routines it is used to check.

#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "regstab/bpnn.hpp"
#include "regstab/matrix.hpp"

namespace regstab::testing {

inline std::filesystem::path data_path(const std::string& file) {
  return std::filesystem::path(REGSTAB_DATA_DIR) / file;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("regstab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// ---- printed tables ----------------------------------------------------------

inline const std::array<int, 8> kYears = {2010, 2011, 2012, 2013, 2014, 2015, 2016, 2017};
inline const std::array<double, 8> kSudanRs = {-0.0825, -0.08, -0.0830, -0.0835, -0.0973, -0.0875, -0.102, -0.127};
inline const std::array<double, 8> kHaitiRs = {-0.0354, -0.037, -0.0362, -0.0378, -0.036, -0.0388, -0.040, -0.042};
inline const std::array<double, 8> kSomaliaRs = {-0.056, -0.057, -0.043, -0.044, -0.042, -0.039, -0.032, -0.030};
inline const std::array<double, 8> kSudanLap = {239, 270, 265, 268, 258, 253, 250, 255};

inline const std::array<double, 7> kTable2Eigenvalues = {3.7366, 1.8172, 1.2306, 1.1533, 0.7351, 0.3561, 0.0533};
// Percent, as printed.
inline const std::array<double, 7> kTable2Cr = {41.14, 20.01, 13.55, 12.70, 8.090, 3.920, 0.590};
inline const std::array<double, 7> kTable2Accumulated = {41.14, 61.15, 74.70, 87.40, 95.49, 99.41, 100.00};

inline const std::array<double, 3> kPublishedCorrelations = {-0.8265, -0.8689, 0.9547};

// ---- oracles -------------------------------------------------------------------

/// Textbook two-pass mean / sample variance in long double.
inline std::pair<double, double> naive_mean_var(const std::vector<double>& x) {
  long double s = 0;
  for (double v : x) s += v;
  const long double m = s / x.size();
  long double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return {static_cast<double>(m), static_cast<double>(ss / (x.size() - 1))};
}

/// Correlation entry by explicit covariance / (sd * sd), O(n) double loop.
inline double naive_correlation(const Matrix& x, std::size_t a, std::size_t b) {
  const std::size_t n = x.rows();
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += x(i, a);
    mb += x(i, b);
  }
  ma /= n;
  mb /= n;
  long double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (x(i, a) - ma) * (x(i, b) - mb);
    va += (x(i, a) - ma) * (x(i, a) - ma);
    vb += (x(i, b) - mb) * (x(i, b) - mb);
  }
  cov /= (n - 1);
  va /= (n - 1);
  vb /= (n - 1);
  return static_cast<double>(cov / std::sqrt(va * vb));
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      out(i, j) = static_cast<double>(s);
    }
  return out;
}

/// Raw-coordinate normal equations solved in long double:
/// [n  Sx ; Sx Sxx] [a b]' = [Sy Sxy]'.
struct NaiveLine {
  double slope;
  double intercept;
};
inline NaiveLine naive_ols(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = x.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double det = n * sxx - sx * sx;
  return {static_cast<double>((n * sxy - sx * sy) / det), static_cast<double>((sxx * sy - sx * sxy) / det)};
}

inline double plain_sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

/// Square error of a network evaluated by a hand-written forward pass.
inline double oracle_loss(const bpnn::Network& net, const std::vector<double>& x, const std::vector<double>& d) {
  double e = 0;
  for (std::size_t i = 0; i < net.n_output(); ++i) {
    double s = net.output_biases[i];
    for (std::size_t j = 0; j < net.n_hidden(); ++j) {
      double t = net.hidden_biases[j];
      for (std::size_t k = 0; k < net.n_input(); ++k) t += net.hidden_weights(j, k) * x[k];
      s += net.output_weights(i, j) * plain_sigmoid(t);
    }
    const double y = plain_sigmoid(s);
    e += 0.5 * (d[i] - y) * (d[i] - y);
  }
  return e;
}

/// Central-difference gradient of oracle_loss over the flat parameter vector.
inline std::vector<double> central_difference(const bpnn::Network& net, const std::vector<double>& x,
                                              const std::vector<double>& d, double eps) {
  std::vector<double> params = net.parameters();
  std::vector<double> grad(params.size());
  bpnn::Network probe = net;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const double keep = params[p];
    params[p] = keep + eps;
    probe.set_parameters(params);
    const double up = oracle_loss(probe, x, d);
    params[p] = keep - eps;
    probe.set_parameters(params);
    const double down = oracle_loss(probe, x, d);
    params[p] = keep;
    grad[p] = (up - down) / (2 * eps);
  }
  return grad;
}

// ---- generators ----------------------------------------------------------------

inline Matrix random_symmetric(std::mt19937_64& gen, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(gen);
  return m;
}

inline bpnn::Network random_network(std::mt19937_64& gen, std::size_t n_in, std::size_t n_hidden, std::size_t n_out,
                                    double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  bpnn::Network net(n_in, n_hidden, n_out);
  std::vector<double> p(net.parameter_count());
  for (double& v : p) v = u(gen);
  net.set_parameters(p);
  return net;
}

/// Inputs drawn N(0, 1), labels produced by a fixed random teacher network.
struct TeacherData {
  bpnn::Network teacher;
  Matrix inputs;
  Matrix labels;
};

inline TeacherData teacher_dataset(std::uint64_t seed, std::size_t samples) {
  std::mt19937_64 gen(seed);
  TeacherData data{random_network(gen, 5, 10, 1, 1.0), Matrix(samples, 5), Matrix(samples, 1)};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> x(5);
    for (double& v : x) v = normal(gen);
    for (std::size_t k = 0; k < 5; ++k) data.inputs(s, k) = x[k];
    // Teacher evaluated through the oracle forward pass.
    double out = data.teacher.output_biases[0];
    for (std::size_t j = 0; j < 10; ++j) {
      double t = data.teacher.hidden_biases[j];
      for (std::size_t k = 0; k < 5; ++k) t += data.teacher.hidden_weights(j, k) * x[k];
      out += data.teacher.output_weights(0, j) * plain_sigmoid(t);
    }
    data.labels(s, 0) = plain_sigmoid(out);
  }
  return data;
}

}  // namespace regstab::testing
