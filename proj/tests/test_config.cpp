#include <doctest.h>

#include <string>

#include "afbench/config.hpp"
#include "afbench/error.hpp"

using namespace afbench;

namespace {

std::string message_of(const std::string& text) {
  try {
    static_cast<void>(parse_experiment_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kExperiment = R"({
  "dataset": {"kind": "blobs", "n": 200, "d": 5, "classes": 3, "spread": 0.1, "seed": 4},
  "configs": ["16-C", {"name": "deep", "layers": [8, 8, "C"]}],
  "activations": ["relu", {"kind": "pfts", "params": {"init": -0.1}}, {"kind": "lrelu", "params": {"alpha": 0.2}}],
  "runs": 2,
  "train": {"lr": 0.05, "dropout": 0.25, "batch": 16, "epochs": 3, "seed": 99},
  "base_seed": 11
})";

}  // namespace

TEST_CASE("experiment config parses") {
  const auto cfg = parse_experiment_config(kExperiment);
  CHECK(cfg.dataset.kind == DatasetSpec::Kind::Blobs);
  CHECK(cfg.dataset.n == 200);
  REQUIRE(cfg.configs.size() == 2);
  CHECK(cfg.configs[0].name == "16-C");
  CHECK(cfg.configs[1].name == "deep");
  REQUIRE(cfg.activations.size() == 3);
  CHECK(cfg.activations[1].trainable_init == -0.1);
  CHECK(cfg.activations[2].fixed_alpha == 0.2);
  CHECK(cfg.runs == 2);
  CHECK(cfg.train.learning_rate == 0.05);
  CHECK(cfg.train.dropout_rate == 0.25);
  CHECK(cfg.train.batch_size == 16);
  CHECK(cfg.base_seed == 11);
  CHECK(cfg.baseline == ActivationKind::ReLU);
  CHECK(cfg.focus == ActivationKind::PFTS);

  const NetworkConfig net = cfg.configs[1].resolve(5, 3, cfg.activations[0], 0.25);
  CHECK(net.layer_widths == std::vector<std::size_t>{8, 8, 3});
  const NetworkTemplate middle_c{"x", {4, std::nullopt, 3}};
  CHECK_THROWS_AS(static_cast<void>(middle_c.resolve(5, 3, {}, 0.5)), ConfigError);
  CHECK_THROWS_AS(static_cast<void>(parse_network_template(R"("DNN-4")").resolve(5, 3, {}, 0.5)), ConfigError);
  CHECK(parse_network_template(R"("DNN-4")").resolve(3072, 10, {}, 0.5) == preset("DNN-4"));
}

TEST_CASE("experiment config diagnostics") {
  CHECK(message_of("{\n  \"runs\": ,\n}").find("line 2") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": ["relu"], "extra": 1})")
            .find("field 'extra': unknown field") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": ["selu"]})")
            .find("activations[0]") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-X"], "activations": ["relu"]})")
            .find("configs[0]") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": ["pfts"]})")
            .find("baseline") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": ["relu"], "train": {"dropout": 1.0}})")
            .find("train.dropout") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": [{"kind": "relu", "params": {"alpha": 1}}]})")
            .find("activations[0].params.alpha") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "csv"}, "configs": ["8-C"], "activations": ["relu"]})")
            .find("dataset.kind") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C", "8-C"], "activations": ["relu"]})")
            .find("duplicate") != std::string::npos);
  CHECK(message_of(R"({"dataset": {"kind": "blobs"}, "configs": ["8-C"], "activations": ["relu"], "runs": -1})")
            .find("runs") != std::string::npos);
}

TEST_CASE("train config parses") {
  const auto cfg = parse_train_config(
      R"({"dataset": {"kind": "blobs", "test_fraction": 0.25}, "network": "32-C", "activation": "pfts", "train": {"epochs": 2}})");
  CHECK(cfg.activation.kind == ActivationKind::PFTS);
  CHECK(cfg.train.epochs == 2);
  CHECK(cfg.dataset.test_fraction == 0.25);
  const LoadedData data = load_dataset(cfg.dataset);
  REQUIRE(data.test.has_value());
  CHECK(data.test->size() == 500);
  CHECK(data.train.size() == 1500);
  CHECK(&data.eval() == &*data.test);
  CHECK_THROWS_AS(parse_train_config(R"({"dataset": {"kind": "blobs"}})"), ConfigError);
  CHECK_THROWS_AS(
      parse_train_config(R"({"dataset": {"kind": "idx", "images": "a"}, "network": "8-C"})"),
      ConfigError);
}

TEST_CASE("network config json round trip") {
  NetworkConfig cfg{"demo", 7, {5, 3}, ActivationSpec::defaults(ActivationKind::FTS), 0.1};
  cfg.activation.fixed_t = -0.4;
  CHECK(network_config_from_json(network_config_to_json(cfg)) == cfg);
  CHECK_THROWS_AS(network_config_from_json(R"({"input_dim": 3, "layers": []})"), ConfigError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/config.json"), ConfigError);
}
