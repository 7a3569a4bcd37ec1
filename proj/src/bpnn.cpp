#include "regstab/bpnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <string>

#include "regstab/error.hpp"
#include "text.hpp"

namespace regstab::bpnn {

namespace {

// Largest double below 1 and smallest normal double: sigmoid is clamped into
// [kLow, kHigh] so saturated cells still report an activation in (0, 1).
constexpr double kHigh = 1.0 - 0x1.0p-53;
constexpr double kLow = std::numeric_limits<double>::min();

void check_dims(const Network& net, std::span<const double> x, std::span<const double> d) {
  if (x.size() != net.n_input())
    throw Error(ErrorKind::DimensionMismatch,
                "input has " + std::to_string(x.size()) + " values, network expects " + std::to_string(net.n_input()));
  if (d.size() != net.n_output())
    throw Error(ErrorKind::DimensionMismatch,
                "target has " + std::to_string(d.size()) + " values, network emits " + std::to_string(net.n_output()));
}

double unit_uniform(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

void NetworkConfig::validate() const {
  if (n_input < 1 || n_hidden < 1 || n_output < 1)
    throw Error(ErrorKind::InvalidConfig, "layer sizes must be >= 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw Error(ErrorKind::InvalidConfig, "learning rate must be positive");
  if (max_epochs < 1) throw Error(ErrorKind::InvalidConfig, "max_epochs must be >= 1");
  if (!(loss_tolerance > 0.0)) throw Error(ErrorKind::InvalidConfig, "loss tolerance must be positive");
}

Network::Network(std::size_t n_input, std::size_t n_hidden, std::size_t n_output)
    : hidden_weights(n_hidden, n_input),
      hidden_biases(n_hidden, 0.0),
      output_weights(n_output, n_hidden),
      output_biases(n_output, 0.0) {}

std::size_t Network::parameter_count() const noexcept {
  return hidden_weights.data().size() + hidden_biases.size() + output_weights.data().size() +
         output_biases.size();
}

Vector Network::parameters() const {
  Vector out;
  out.reserve(parameter_count());
  out.insert(out.end(), hidden_weights.data().begin(), hidden_weights.data().end());
  out.insert(out.end(), hidden_biases.begin(), hidden_biases.end());
  out.insert(out.end(), output_weights.data().begin(), output_weights.data().end());
  out.insert(out.end(), output_biases.begin(), output_biases.end());
  return out;
}

void Network::set_parameters(std::span<const double> values) {
  if (values.size() != parameter_count())
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(parameter_count()) + " parameters, got " +
                                                  std::to_string(values.size()));
  auto it = values.begin();
  for (double& w : hidden_weights.data()) w = *it++;
  for (double& b : hidden_biases) b = *it++;
  for (double& w : output_weights.data()) w = *it++;
  for (double& b : output_biases) b = *it++;
}

double sigmoid(double t) noexcept {
  const double s = 1.0 / (1.0 + std::exp(-t));
  return std::clamp(s, kLow, kHigh);
}

Activations forward(const Network& net, std::span<const double> x) {
  if (x.size() != net.n_input())
    throw Error(ErrorKind::DimensionMismatch,
                "input has " + std::to_string(x.size()) + " values, network expects " + std::to_string(net.n_input()));
  for (std::size_t k = 0; k < x.size(); ++k)
    if (!std::isfinite(x[k])) throw Error(ErrorKind::NonFinite, "input " + std::to_string(k));

  Activations act{Vector(net.n_hidden()), Vector(net.n_output())};
  for (std::size_t j = 0; j < net.n_hidden(); ++j) {
    double s = net.hidden_biases[j];
    for (std::size_t k = 0; k < net.n_input(); ++k) s += net.hidden_weights(j, k) * x[k];
    act.hidden[j] = sigmoid(s);
  }
  for (std::size_t i = 0; i < net.n_output(); ++i) {
    double s = net.output_biases[i];
    for (std::size_t j = 0; j < net.n_hidden(); ++j) s += net.output_weights(i, j) * act.hidden[j];
    act.output[i] = sigmoid(s);
  }
  return act;
}

double loss(std::span<const double> desired, std::span<const double> actual) {
  if (desired.size() != actual.size())
    throw Error(ErrorKind::LengthMismatch,
                std::to_string(desired.size()) + " targets vs " + std::to_string(actual.size()) + " outputs");
  double e = 0.0;
  for (std::size_t i = 0; i < desired.size(); ++i) e += (desired[i] - actual[i]) * (desired[i] - actual[i]);
  return 0.5 * e;
}

Network gradient(const Network& net, std::span<const double> x, std::span<const double> desired) {
  check_dims(net, x, desired);
  const Activations act = forward(net, x);
  Network g(net.n_input(), net.n_hidden(), net.n_output());

  // Output layer: y_i (1 - y_i) (y_i - d_i), times the hidden activation feeding each weight.
  Vector out_delta(net.n_output());
  for (std::size_t i = 0; i < net.n_output(); ++i) {
    const double y = act.output[i];
    out_delta[i] = y * (1.0 - y) * (y - desired[i]);
    for (std::size_t j = 0; j < net.n_hidden(); ++j) g.output_weights(i, j) = act.hidden[j] * out_delta[i];
    g.output_biases[i] = out_delta[i];
  }

  // Hidden layer: y'_j (1 - y'_j) sum_i w_ji * out_delta_i, times input x_k.
  for (std::size_t j = 0; j < net.n_hidden(); ++j) {
    double back = 0.0;
    for (std::size_t i = 0; i < net.n_output(); ++i) back += net.output_weights(i, j) * out_delta[i];
    const double h = act.hidden[j];
    const double hidden_delta = h * (1.0 - h) * back;
    for (std::size_t k = 0; k < net.n_input(); ++k) g.hidden_weights(j, k) = x[k] * hidden_delta;
    g.hidden_biases[j] = hidden_delta;
  }
  return g;
}

Network backprop_step(const Network& net, std::span<const double> x, std::span<const double> desired,
                      double learning_rate) {
  const Network g = gradient(net, x, desired);
  Network next = net;
  auto apply = [learning_rate](std::span<double> w, std::span<const double> dw) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * dw[i];
  };
  apply(next.hidden_weights.data(), g.hidden_weights.data());
  apply(next.hidden_biases, g.hidden_biases);
  apply(next.output_weights.data(), g.output_weights.data());
  apply(next.output_biases, g.output_biases);
  return next;
}

Network initialize(const NetworkConfig& config) {
  config.validate();
  Network net(config.n_input, config.n_hidden, config.n_output);
  std::mt19937_64 gen(config.rng_seed);
  Vector params(net.parameter_count());
  for (double& p : params) p = unit_uniform(gen) - 0.5;
  net.set_parameters(params);
  return net;
}

double dataset_loss(const Network& net, const Matrix& inputs, const Matrix& labels) {
  double total = 0.0;
  for (std::size_t s = 0; s < inputs.rows(); ++s)
    total += loss(labels.row(s), forward(net, inputs.row(s)).output);
  return total;
}

TrainResult fit(const NetworkConfig& config, Network start, const Matrix& inputs, const Matrix& labels) {
  config.validate();
  if (inputs.rows() == 0) throw Error(ErrorKind::EmptyDataset, "no training samples");
  if (labels.rows() != inputs.rows())
    throw Error(ErrorKind::DimensionMismatch, "inputs and labels have different sample counts");
  if (inputs.cols() != start.n_input() || labels.cols() != start.n_output())
    throw Error(ErrorKind::DimensionMismatch, "dataset shape does not match network topology");
  for (std::size_t s = 0; s < labels.rows(); ++s)
    for (double d : labels.row(s))
      if (!(d > 0.0 && d < 1.0))
        throw Error(ErrorKind::LabelOutOfRange, "sample " + std::to_string(s) + " label " + text::g17(d));

  TrainResult result{std::move(start), {}};
  Network& net = result.network;
  TrainReport& report = result.report;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    for (std::size_t s = 0; s < inputs.rows(); ++s)
      net = backprop_step(net, inputs.row(s), labels.row(s), config.learning_rate);
    const double e = dataset_loss(net, inputs, labels);
    report.loss_history.push_back(e);
    report.epochs_run = epoch;
    if (!std::isfinite(e)) throw Error(ErrorKind::NoConvergence, "training loss diverged at epoch " + std::to_string(epoch));
    if (epoch > 1 && std::abs(e - report.loss_history[epoch - 2]) < config.loss_tolerance) {
      report.stop_reason = StopReason::Converged;
      return result;
    }
  }
  report.stop_reason = StopReason::MaxEpochs;
  return result;
}

TrainResult train(const NetworkConfig& config, const Matrix& inputs, const Matrix& labels) {
  return fit(config, initialize(config), inputs, labels);
}

namespace {

// Square error from a flat parameter vector, evaluated in extended precision so
// the central difference is not swamped by round-off for tiny gradients.
long double extended_loss(const Network& shape, const std::vector<long double>& p, std::span<const double> x,
                          std::span<const double> desired) {
  const std::size_t n_in = shape.n_input(), n_hid = shape.n_hidden(), n_out = shape.n_output();
  const std::size_t hb = n_hid * n_in, ow = hb + n_hid, ob = ow + n_out * n_hid;
  std::vector<long double> hidden(n_hid);
  for (std::size_t j = 0; j < n_hid; ++j) {
    long double s = p[hb + j];
    for (std::size_t k = 0; k < n_in; ++k) s += p[j * n_in + k] * x[k];
    hidden[j] = 1.0L / (1.0L + std::exp(-s));
  }
  long double e = 0.0L;
  for (std::size_t i = 0; i < n_out; ++i) {
    long double s = p[ob + i];
    for (std::size_t j = 0; j < n_hid; ++j) s += p[ow + i * n_hid + j] * hidden[j];
    const long double y = 1.0L / (1.0L + std::exp(-s));
    e += (desired[i] - y) * (desired[i] - y);
  }
  return 0.5L * e;
}

}  // namespace

double gradient_check(const Network& net, std::span<const double> x, std::span<const double> desired,
                      double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-3))
    throw Error(ErrorKind::OutOfRange, "finite-difference step must lie in (0, 1e-3]");
  check_dims(net, x, desired);
  const Vector analytic = gradient(net, x, desired).parameters();
  const Vector flat = net.parameters();
  std::vector<long double> params(flat.begin(), flat.end());
  double worst = 0.0;
  for (std::size_t p = 0; p < params.size(); ++p) {
    const long double saved = params[p];
    params[p] = saved + epsilon;
    const long double up = extended_loss(net, params, x, desired);
    params[p] = saved - epsilon;
    const long double down = extended_loss(net, params, x, desired);
    params[p] = saved;

    const double numeric = static_cast<double>((up - down) / (2.0L * epsilon));
    const double diff = std::abs(analytic[p] - numeric);
    const double scale = std::max(std::abs(analytic[p]), std::abs(numeric));
    worst = std::max(worst, scale < kGradientAbsoluteFloor ? diff : diff / scale);
  }
  return worst;
}

void write_model(std::ostream& out, const Network& net, std::uint64_t seed) {
  out << "topology " << net.n_input() << ' ' << net.n_hidden() << ' ' << net.n_output() << '\n';
  out << "seed " << seed << '\n';
  for (double p : net.parameters()) out << text::g17(p) << '\n';
}

StoredModel read_model(std::istream& in) {
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, std::string("model file truncated before ") + what);
    return text::split_ws(line);
  };

  auto topo = next_line("topology");
  if (topo.size() != 4 || topo[0] != "topology") throw Error(ErrorKind::ParseError, "model line 1 must be 'topology n_in n_hidden n_out'");
  std::size_t dims[3];
  for (int i = 0; i < 3; ++i) {
    auto v = text::parse_int<std::size_t>(topo[i + 1]);
    if (!v || *v == 0) throw Error(ErrorKind::ParseError, "bad layer size '" + std::string(topo[i + 1]) + "'");
    dims[i] = *v;
  }
  auto seed_line = next_line("seed");
  std::optional<std::uint64_t> seed;
  if (seed_line.size() == 2 && seed_line[0] == "seed") seed = text::parse_int<std::uint64_t>(seed_line[1]);
  if (!seed) throw Error(ErrorKind::ParseError, "model line 2 must be 'seed <int>'");

  StoredModel model{Network(dims[0], dims[1], dims[2]), *seed};
  Vector params(model.network.parameter_count());
  for (std::size_t p = 0; p < params.size(); ++p) {
    next_line("all parameters were read");
    auto v = text::parse_double(line);
    if (!v || !std::isfinite(*v))
      throw Error(ErrorKind::ParseError, "model parameter " + std::to_string(p) + " '" + line + "'");
    params[p] = *v;
  }
  while (std::getline(in, line))
    if (!text::trim(line).empty()) throw Error(ErrorKind::ParseError, "trailing content after model parameters");
  model.network.set_parameters(params);
  return model;
}

void save_model(const std::filesystem::path& path, const Network& net, std::uint64_t seed) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_model(out, net, seed);
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ModelMissing, path.string());
  return read_model(in);
}

}  // namespace regstab::bpnn
