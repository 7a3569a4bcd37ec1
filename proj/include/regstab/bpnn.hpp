#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "regstab/matrix.hpp"

namespace regstab::bpnn {

struct NetworkConfig {
  std::size_t n_input = 5;
  std::size_t n_hidden = 10;
  std::size_t n_output = 1;
  double learning_rate = 0.05;
  int max_epochs = 10000;
  /// Training stops once the epoch-over-epoch loss change drops below this.
  double loss_tolerance = 1e-6;
  std::uint64_t rng_seed = 0;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Three-layer fully connected network. Row j of hidden_weights feeds hidden
/// cell j; row i of output_weights feeds output cell i.
struct Network {
  Matrix hidden_weights;  // n_hidden x n_input
  Vector hidden_biases;   // n_hidden
  Matrix output_weights;  // n_output x n_hidden
  Vector output_biases;   // n_output

  Network() = default;
  Network(std::size_t n_input, std::size_t n_hidden, std::size_t n_output);

  std::size_t n_input() const noexcept { return hidden_weights.cols(); }
  std::size_t n_hidden() const noexcept { return hidden_weights.rows(); }
  std::size_t n_output() const noexcept { return output_weights.rows(); }

  /// Flat parameter view: hidden weights (row-major), hidden biases, output
  /// weights (row-major), output biases. Persistence uses the same order.
  std::size_t parameter_count() const noexcept;
  Vector parameters() const;
  void set_parameters(std::span<const double> values);

  friend bool operator==(const Network&, const Network&) = default;
};

/// Logistic 1 / (1 + e^-t), kept strictly inside (0, 1) even when saturated.
double sigmoid(double t) noexcept;

struct Activations {
  Vector hidden;
  Vector output;
};

Activations forward(const Network& net, std::span<const double> x);

/// Square error 0.5 * sum (d_i - y_i)^2.
double loss(std::span<const double> desired, std::span<const double> actual);

/// Analytic gradient of the square error w.r.t. every parameter, returned in
/// the shape of a Network. Bias gradients treat the bias as a weight on a
/// constant input of 1.
Network gradient(const Network& net, std::span<const double> x, std::span<const double> desired);

/// One online gradient-descent update. All deltas are computed from the
/// pre-update weights.
Network backprop_step(const Network& net, std::span<const double> x, std::span<const double> desired,
                      double learning_rate);

enum class StopReason { Converged, MaxEpochs };

struct TrainReport {
  int epochs_run = 0;
  std::vector<double> loss_history;  // summed square error after each epoch
  StopReason stop_reason = StopReason::MaxEpochs;
};

struct TrainResult {
  Network network;
  TrainReport report;
};

/// Seeded uniform [-0.5, 0.5] initialisation from a 64-bit Mersenne Twister,
/// converted to doubles without std::uniform_real_distribution so the values
/// are identical across standard libraries.
Network initialize(const NetworkConfig& config);

/// Summed square error over the dataset (rows of inputs / labels).
double dataset_loss(const Network& net, const Matrix& inputs, const Matrix& labels);

/// Online training from a given starting network; samples visited in row
/// order every epoch.
TrainResult fit(const NetworkConfig& config, Network start, const Matrix& inputs, const Matrix& labels);

/// initialize + fit.
TrainResult train(const NetworkConfig& config, const Matrix& inputs, const Matrix& labels);

/// Largest discrepancy between the analytic gradient and a central
/// difference with step epsilon, over every weight and bias. Parameters
/// whose gradients are both below 1e-8 in magnitude are compared by absolute
/// error, all others by relative error.
double gradient_check(const Network& net, std::span<const double> x, std::span<const double> desired,
                      double epsilon);

inline constexpr double kGradientAbsoluteFloor = 1e-8;

// Model file: "topology n_in n_hidden n_out", "seed <int>", then one
// parameter per line in flat order, 17 significant digits.
struct StoredModel {
  Network network;
  std::uint64_t seed = 0;
};

void write_model(std::ostream& out, const Network& net, std::uint64_t seed);
StoredModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const Network& net, std::uint64_t seed);
StoredModel load_model(const std::filesystem::path& path);

}  // namespace regstab::bpnn
