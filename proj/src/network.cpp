#include "afbench/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "afbench/error.hpp"

namespace afbench {

namespace {

const std::map<std::string, std::vector<std::size_t>>& preset_table() {
  static const std::map<std::string, std::vector<std::size_t>> table = {
      {"DNN-3A", {1024, 1024, 10}},
      {"DNN-3B", {1024, 512, 10}},
      {"DNN-4", {400, 300, 100, 10}},
      {"DNN-5A", {256, 128, 64, 32, 10}},
      {"DNN-5B", {512, 512, 512, 512, 10}},
      {"DNN-5C", {1024, 1024, 512, 256, 10}},
      {"DNN-6", {512, 256, 128, 64, 32, 10}},
      {"DNN-7", {784, 512, 256, 128, 64, 32, 10}},
  };
  return table;
}

void check_labels(std::span<const int> labels, std::size_t rows, std::size_t classes,
                  const char* op) {
  if (labels.size() != rows) {
    throw ShapeError(std::string(op) + ": " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(rows) + " rows");
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes) {
      throw DomainError(std::string(op) + ": label " + std::to_string(y) + " outside [0, " +
                        std::to_string(classes) + ")");
    }
  }
}

constexpr std::size_t kEvalChunk = 1024;

}  // namespace

void NetworkConfig::validate() const {
  if (input_dim == 0) throw DomainError("network config '" + name + "': input_dim must be positive");
  if (layer_widths.empty()) {
    throw DomainError("network config '" + name + "': needs at least an output layer");
  }
  if (std::find(layer_widths.begin(), layer_widths.end(), 0U) != layer_widths.end()) {
    throw DomainError("network config '" + name + "': layer widths must be positive");
  }
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw DomainError("network config '" + name + "': dropout rate " +
                      std::to_string(dropout_rate) + " outside [0, 1)");
  }
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"DNN-3A", "DNN-3B", "DNN-4", "DNN-5A",
                                                 "DNN-5B", "DNN-5C", "DNN-6", "DNN-7"};
  return names;
}

bool is_preset(const std::string& name) { return preset_table().contains(name); }

NetworkConfig preset(const std::string& name, std::size_t input_dim, ActivationSpec activation,
                     double dropout_rate) {
  const auto it = preset_table().find(name);
  if (it == preset_table().end()) throw DomainError("unknown network preset '" + name + "'");
  NetworkConfig config{name, input_dim, it->second, activation, dropout_rate};
  config.validate();
  return config;
}

Network::Network(NetworkConfig config, std::vector<DenseLayer> layers)
    : config_(std::move(config)), layers_(std::move(layers)) {
  config_.validate();
  if (layers_.size() != config_.layer_widths.size()) {
    throw ShapeError("Network: " + std::to_string(layers_.size()) + " layers for a " +
                     std::to_string(config_.layer_widths.size()) + "-layer config");
  }
  std::size_t fan_in = config_.input_dim;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const std::size_t fan_out = config_.layer_widths[l];
    const auto& layer = layers_[l];
    if (layer.weights.rows() != fan_in || layer.weights.cols() != fan_out ||
        layer.bias.rows() != 1 || layer.bias.cols() != fan_out) {
      throw ShapeError("Network: layer " + std::to_string(l) + " has weights " +
                       layer.weights.shape_string() + " and bias " + layer.bias.shape_string() +
                       ", expected " + std::to_string(fan_in) + "x" + std::to_string(fan_out));
    }
    fan_in = fan_out;
  }
  states_.assign(layers_.size() - 1, initial_state(config_.activation));
}

double xavier_limit(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Network init_network(const NetworkConfig& config, RandomStream& rng) {
  config.validate();
  std::vector<DenseLayer> layers;
  layers.reserve(config.layer_widths.size());
  std::size_t fan_in = config.input_dim;
  for (std::size_t fan_out : config.layer_widths) {
    const double limit = xavier_limit(fan_in, fan_out);
    Matrix w(fan_in, fan_out);
    for (double& v : w.values()) {
      do {
        v = rng.uniform(-limit, limit);
      } while (v == -limit);
    }
    layers.push_back({std::move(w), Matrix(1, fan_out, 0.0)});
    fan_in = fan_out;
  }
  return Network(config, std::move(layers));
}

ForwardResult forward(Network& net, const Matrix& x, Mode mode, RandomStream& rng) {
  const NetworkConfig& cfg = net.config();
  if (x.cols() != cfg.input_dim) {
    throw ShapeError("forward: input " + x.shape_string() + " does not match input_dim " +
                     std::to_string(cfg.input_dim));
  }
  if (mode == Mode::Eval) return {predict(net, x), std::nullopt};

  ++net.version_;
  ForwardCache cache;
  cache.network_version = net.version_;
  const double keep = 1.0 - cfg.dropout_rate;
  const bool dropout = cfg.dropout_rate > 0.0;

  Matrix a = x;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const DenseLayer& layer = net.layers_[l];
    Matrix z = matmul(a, layer.weights);
    add_row_vector(z, layer.bias);
    cache.layer_inputs.push_back(std::move(a));
    if (l + 1 == net.num_layers()) {
      cache.logits = z;
      Matrix logits = std::move(z);
      return {std::move(logits), std::move(cache)};
    }
    const ActivationState& state = net.states_[l];
    Matrix out(z.rows(), z.cols());
    for (std::size_t i = 0; i < z.size(); ++i) {
      out.values()[i] = act_forward(cfg.activation, state, z.values()[i]);
    }
    if (dropout) {
      Matrix scale = rng_bernoulli_mask(rng, keep, z.rows(), z.cols());
      for (std::size_t i = 0; i < scale.size(); ++i) {
        scale.values()[i] /= keep;
        out.values()[i] *= scale.values()[i];
      }
      cache.dropout_scale.push_back(std::move(scale));
    }
    cache.pre_activations.push_back(std::move(z));
    a = std::move(out);
  }
  throw StateError("forward: network has no layers");
}

Matrix predict(const Network& net, const Matrix& x) {
  const NetworkConfig& cfg = net.config();
  if (x.cols() != cfg.input_dim) {
    throw ShapeError("predict: input " + x.shape_string() + " does not match input_dim " +
                     std::to_string(cfg.input_dim));
  }
  Matrix a = x;
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    const DenseLayer& layer = net.layers()[l];
    Matrix z = matmul(a, layer.weights);
    add_row_vector(z, layer.bias);
    if (l + 1 < net.num_layers()) {
      const ActivationState& state = net.activation_states()[l];
      for (double& v : z.values()) v = act_forward(cfg.activation, state, v);
    }
    a = std::move(z);
  }
  return a;
}

LossResult softmax_cross_entropy(const Matrix& logits, std::span<const int> labels) {
  check_labels(labels, logits.rows(), logits.cols(), "softmax_cross_entropy");
  LossResult result{0.0, Matrix(logits.rows(), logits.cols())};
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const double peak = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    auto p = result.probs.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      p[j] = std::exp(row[j] - peak);
      total += p[j];
    }
    for (double& v : p) v /= total;
    const auto y = static_cast<std::size_t>(labels[i]);
    // log-sum-exp form keeps the loss finite even when p[y] underflows.
    result.loss += std::log(total) - (row[y] - peak);
  }
  if (logits.rows() > 0) result.loss /= static_cast<double>(logits.rows());
  return result;
}

Gradients backward(const Network& net, ForwardCache& cache, const Matrix& probs,
                   std::span<const int> labels) {
  if (probs.rows() != cache.logits.rows() || probs.cols() != cache.logits.cols()) {
    throw ShapeError("backward: probs " + probs.shape_string() + " do not match logits " +
                     cache.logits.shape_string());
  }
  check_labels(labels, probs.rows(), probs.cols(), "backward");
  Matrix dlogits = probs;
  const double inv_batch = 1.0 / static_cast<double>(std::max<std::size_t>(probs.rows(), 1));
  for (std::size_t i = 0; i < dlogits.rows(); ++i) {
    dlogits(i, static_cast<std::size_t>(labels[i])) -= 1.0;
    for (double& v : dlogits.row(i)) v *= inv_batch;
  }
  return backward_from_output(net, cache, dlogits);
}

Gradients backward_from_output(const Network& net, ForwardCache& cache, const Matrix& dlogits) {
  if (cache.consumed || cache.layer_inputs.empty()) {
    throw StateError("backward: forward cache is missing or already consumed");
  }
  if (cache.network_version != net.version()) {
    throw StateError("backward: forward cache is stale (network changed since forward)");
  }
  if (dlogits.rows() != cache.logits.rows() || dlogits.cols() != cache.logits.cols()) {
    throw ShapeError("backward: output gradient " + dlogits.shape_string() +
                     " does not match logits " + cache.logits.shape_string());
  }
  cache.consumed = true;

  const std::size_t n_layers = net.num_layers();
  const ActivationSpec& spec = net.config().activation;
  Gradients g;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  g.activation_params.assign(net.num_hidden(), 0.0);

  Matrix dz = dlogits;
  for (std::size_t l = n_layers; l-- > 0;) {
    g.weights[l] = matmul_tn(cache.layer_inputs[l], dz);
    g.biases[l] = reduce(dz, Axis::Cols, ReduceOp::Sum);
    if (l == 0) break;

    // Gradient w.r.t. this layer's input, i.e. the previous hidden layer's output.
    Matrix da = matmul_nt(dz, net.layers()[l].weights);
    const std::size_t h = l - 1;
    if (!cache.dropout_scale.empty()) {
      const Matrix& scale = cache.dropout_scale[h];
      for (std::size_t i = 0; i < da.size(); ++i) da.values()[i] *= scale.values()[i];
    }
    const Matrix& z = cache.pre_activations[h];
    const ActivationState& state = net.activation_states()[h];
    double dparam = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
      const double zi = z.values()[i];
      if (spec.trainable()) dparam += da.values()[i] * act_dparam(spec, state, zi);
      da.values()[i] *= act_dinput(spec, state, zi);
    }
    g.activation_params[h] = dparam;
    dz = std::move(da);
  }
  return g;
}

void sgd_step(Network& net, const Gradients& grads, double learning_rate) {
  const auto& layers = net.layers();
  if (grads.weights.size() != layers.size() || grads.biases.size() != layers.size() ||
      grads.activation_params.size() != net.num_hidden()) {
    throw ShapeError("sgd_step: gradient layer count does not match the network");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (grads.weights[l].rows() != layers[l].weights.rows() ||
        grads.weights[l].cols() != layers[l].weights.cols() ||
        grads.biases[l].rows() != layers[l].bias.rows() ||
        grads.biases[l].cols() != layers[l].bias.cols()) {
      throw ShapeError("sgd_step: layer " + std::to_string(l) + " gradient shapes " +
                       grads.weights[l].shape_string() + "/" + grads.biases[l].shape_string() +
                       " do not match parameters " + layers[l].weights.shape_string() + "/" +
                       layers[l].bias.shape_string());
    }
  }

  auto& mut_layers = net.mutable_layers();
  for (std::size_t l = 0; l < mut_layers.size(); ++l) {
    auto w = mut_layers[l].weights.values();
    auto gw = grads.weights[l].values();
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= learning_rate * gw[i];
    auto b = mut_layers[l].bias.values();
    auto gb = grads.biases[l].values();
    for (std::size_t i = 0; i < b.size(); ++i) b[i] -= learning_rate * gb[i];
  }
  if (net.config().activation.trainable()) {
    auto& states = net.mutable_activation_states();
    for (std::size_t h = 0; h < states.size(); ++h) {
      states[h].grad = grads.activation_params[h];
      states[h].value -= learning_rate * states[h].grad;
    }
  }
}

double train_epoch(Network& net, const Dataset& data, const TrainConfig& cfg, RandomStream& rng) {
  if (data.size() == 0) throw DomainError("train_epoch: empty dataset");
  if (cfg.batch_size == 0) throw DomainError("train_epoch: batch size must be positive");
  if (data.dim() != net.config().input_dim) {
    throw ShapeError("train_epoch: dataset has " + std::to_string(data.dim()) +
                     " features, network expects " + std::to_string(net.config().input_dim));
  }
  if (data.num_classes != net.config().num_classes()) {
    throw ShapeError("train_epoch: dataset has " + std::to_string(data.num_classes) +
                     " classes, network outputs " + std::to_string(net.config().num_classes()));
  }
  if (cfg.dropout_rate != net.config().dropout_rate) {
    throw DomainError("train_epoch: train dropout " + std::to_string(cfg.dropout_rate) +
                      " differs from the network's " + std::to_string(net.config().dropout_rate));
  }

  double weighted_loss = 0.0;
  for (const auto& idx : batch_indices(data.size(), cfg.batch_size, rng)) {
    Batch batch = gather(data, idx);
    ForwardResult fwd = forward(net, batch.x, Mode::Train, rng);
    LossResult loss = softmax_cross_entropy(fwd.logits, batch.labels);
    Gradients grads = backward(net, *fwd.cache, loss.probs, batch.labels);
    sgd_step(net, grads, cfg.learning_rate);
    weighted_loss += loss.loss * static_cast<double>(idx.size());
  }
  return weighted_loss / static_cast<double>(data.size());
}

namespace {

std::size_t count_correct(const Matrix& logits, std::span<const int> labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    if (static_cast<int>(argmax(logits.row(i))) == labels[i]) ++correct;
  }
  return correct;
}

}  // namespace

double accuracy(const Matrix& logits, std::span<const int> labels) {
  if (labels.size() != logits.rows()) {
    throw ShapeError("accuracy: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(logits.rows()) + " rows");
  }
  if (labels.empty()) return 0.0;
  return static_cast<double>(count_correct(logits, labels)) /
         static_cast<double>(labels.size());
}

double evaluate(const Network& net, const Dataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < data.size(); start += kEvalChunk) {
    const std::size_t stop = std::min(data.size(), start + kEvalChunk);
    idx.clear();
    for (std::size_t i = start; i < stop; ++i) idx.push_back(i);
    Batch chunk = gather(data, idx);
    correct += count_correct(predict(net, chunk.x), chunk.labels);
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace afbench
