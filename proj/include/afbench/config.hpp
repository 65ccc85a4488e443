#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "afbench/activation.hpp"
#include "afbench/data.hpp"
#include "afbench/network.hpp"

// JSON configuration files. Every parse failure throws ConfigError with the
// line and column (syntax errors) or the dotted field path (schema errors).

namespace afbench {

struct DatasetSpec {
  enum class Kind { Blobs, Idx };
  Kind kind = Kind::Blobs;
  // blobs
  std::size_t n = 2000;
  std::size_t d = 20;
  std::size_t classes = 4;
  double spread = 0.08;
  std::uint64_t seed = 7;
  // idx
  std::filesystem::path images;
  std::filesystem::path labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
  std::optional<std::size_t> num_classes;
  /// Held-out fraction carved from the training data when no test files are given.
  double test_fraction = 0.0;
};

struct LoadedData {
  Dataset train;
  std::optional<Dataset> test;

  [[nodiscard]] const Dataset& eval() const { return test ? *test : train; }
};

LoadedData load_dataset(const DatasetSpec& spec);

/// A topology before the dataset is known: a standard preset name, or custom
/// widths where a missing width (written "C") stands for the class count.
struct NetworkTemplate {
  std::string name;
  std::vector<std::optional<std::size_t>> widths;

  /// Binds input dim, class count, activation and dropout. Throws ConfigError
  /// if a fixed output width disagrees with the class count.
  [[nodiscard]] NetworkConfig resolve(std::size_t input_dim, std::size_t num_classes,
                                      const ActivationSpec& activation,
                                      double dropout_rate) const;
};

/// "DNN-5A", "64-32-C", or {"name": ..., "layers": [64, 32, "C"]}.
NetworkTemplate parse_network_template(const std::string& json_text);

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<NetworkTemplate> configs;
  std::vector<ActivationSpec> activations;
  std::size_t runs = 5;
  TrainConfig train;
  std::uint64_t base_seed = 1;
  ActivationKind baseline = ActivationKind::ReLU;
  std::optional<ActivationKind> focus = ActivationKind::PFTS;
};

struct TrainRunConfig {
  DatasetSpec dataset;
  NetworkTemplate network;
  ActivationSpec activation = ActivationSpec::defaults(ActivationKind::ReLU);
  TrainConfig train;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
TrainRunConfig parse_train_config(const std::string& json_text);

std::string read_text_file(const std::filesystem::path& path);

/// NetworkConfig JSON: {"name", "input_dim", "layers", "activation": {"kind", "params"}, "dropout"}.
std::string network_config_to_json(const NetworkConfig& config);
NetworkConfig network_config_from_json(const std::string& json_text);

}  // namespace afbench
