#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afbench/activation.hpp"
#include "afbench/data.hpp"
#include "afbench/matrix.hpp"
#include "afbench/random.hpp"

namespace afbench {

/// Layer widths include the output layer; every width but the last is a
/// hidden layer carrying the configured activation and dropout.
struct NetworkConfig {
  std::string name;
  std::size_t input_dim = 0;
  std::vector<std::size_t> layer_widths;
  ActivationSpec activation;
  double dropout_rate = 0.5;

  /// Throws DomainError on an unusable config.
  void validate() const;
  [[nodiscard]] std::size_t num_classes() const { return layer_widths.back(); }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Names of the eight standard topologies, in canonical order.
const std::vector<std::string>& preset_names();
bool is_preset(const std::string& name);
/// Standard topology by name (e.g. "DNN-5A" = 256-128-64-32-10). Throws DomainError.
NetworkConfig preset(const std::string& name, std::size_t input_dim = 3072,
                     ActivationSpec activation = ActivationSpec::defaults(ActivationKind::ReLU),
                     double dropout_rate = 0.5);

struct DenseLayer {
  Matrix weights;  // fan_in x fan_out
  Matrix bias;     // 1 x fan_out

  friend bool operator==(const DenseLayer&, const DenseLayer&) = default;
};

enum class Mode { Train, Eval };
struct ForwardResult;

class Network {
 public:
  Network(NetworkConfig config, std::vector<DenseLayer> layers);

  [[nodiscard]] const NetworkConfig& config() const noexcept { return config_; }
  [[nodiscard]] std::size_t num_layers() const noexcept { return layers_.size(); }
  [[nodiscard]] std::size_t num_hidden() const noexcept { return layers_.size() - 1; }

  [[nodiscard]] const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  /// One state per hidden layer.
  [[nodiscard]] const std::vector<ActivationState>& activation_states() const noexcept {
    return states_;
  }

  // Mutable access invalidates any outstanding ForwardCache.
  std::vector<DenseLayer>& mutable_layers() noexcept {
    ++version_;
    return layers_;
  }
  std::vector<ActivationState>& mutable_activation_states() noexcept {
    ++version_;
    return states_;
  }

  [[nodiscard]] std::uint64_t version() const noexcept { return version_; }

  /// Compares parameters and config; the version counter is ignored.
  friend bool operator==(const Network& a, const Network& b) {
    return a.config_ == b.config_ && a.layers_ == b.layers_ && a.states_ == b.states_;
  }

 private:
  friend ForwardResult forward(Network&, const Matrix&, Mode, RandomStream&);

  NetworkConfig config_;
  std::vector<DenseLayer> layers_;
  std::vector<ActivationState> states_;
  std::uint64_t version_ = 0;
};

/// Xavier-uniform weights in (-L, L), L = sqrt(6 / (fan_in + fan_out)); zero biases.
Network init_network(const NetworkConfig& config, RandomStream& rng);
double xavier_limit(std::size_t fan_in, std::size_t fan_out);

struct ForwardCache {
  std::vector<Matrix> layer_inputs;     // input seen by each layer, after dropout
  std::vector<Matrix> pre_activations;  // hidden layers only
  std::vector<Matrix> dropout_scale;    // mask / keep_prob per hidden layer; empty if no dropout
  Matrix logits;
  std::uint64_t network_version = 0;
  bool consumed = false;
};

struct ForwardResult {
  Matrix logits;
  std::optional<ForwardCache> cache;  // train mode only
};

/// Hidden layers: z = aW + b, a = act(z), then inverted dropout in train mode.
/// The output layer emits raw logits.
ForwardResult forward(Network& net, const Matrix& x, Mode mode, RandomStream& rng);
/// Eval-mode forward pass; never touches the network.
Matrix predict(const Network& net, const Matrix& x);

struct LossResult {
  double loss = 0.0;
  Matrix probs;
};

/// Mean over the batch of -log softmax(logits)[label], max-subtracted.
LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels);

struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Matrix> biases;
  std::vector<double> activation_params;  // one per hidden layer; 0 for fixed kinds
};

/// Gradients of the mean cross-entropy; consumes the cache.
Gradients backward(const Network& net, ForwardCache& cache, const Matrix& probs,
                   std::span<const int> labels);
/// Backpropagates a caller-supplied dL/dlogits; consumes the cache.
Gradients backward_from_output(const Network& net, ForwardCache& cache, const Matrix& dlogits);

/// p -= lr * g for weights, biases and trainable activation parameters.
void sgd_step(Network& net, const Gradients& grads, double learning_rate);

struct TrainConfig {
  double learning_rate = 0.01;
  double dropout_rate = 0.5;
  std::size_t batch_size = 64;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// One shuffled pass of minibatch SGD; returns the sample-weighted mean loss.
/// cfg.dropout_rate must equal the network's configured rate.
double train_epoch(Network& net, const Dataset& data, const TrainConfig& cfg, RandomStream& rng);

/// Fraction of rows whose argmax (lowest index on ties) equals the label.
double accuracy(const Matrix& logits, std::span<const int> labels);
double evaluate(const Network& net, const Dataset& data);

}  // namespace afbench
