#include "afbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "afbench/error.hpp"

namespace afbench {

namespace {

using json = nlohmann::json;

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("JSON syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError("field '" + path + "': " + what);
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) field_error(path.empty() ? "<root>" : path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) field_error(join(path, key), "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) field_error(path, "expected a number");
  return j.get<double>();
}

std::uint64_t get_uint(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    field_error(path, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) field_error(path, "expected a string");
  return j.get<std::string>();
}

ActivationKind get_kind(const json& j, const std::string& path) {
  const std::string name = get_string(j, path);
  const auto kind = parse_activation(name);
  if (!kind) {
    field_error(path, "unknown activation '" + name +
                          "' (expected relu, swish, tanh, lrelu, prelu, softplus, elu, frelu, "
                          "fts or pfts)");
  }
  return *kind;
}

const char* param_key(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::LReLU:
    case ActivationKind::ELU:
      return "alpha";
    case ActivationKind::Swish:
      return "beta";
    case ActivationKind::FTS:
      return "t";
    case ActivationKind::PReLU:
    case ActivationKind::FReLU:
    case ActivationKind::PFTS:
      return "init";
    default:
      return nullptr;
  }
}

ActivationSpec parse_activation_json(const json& j, const std::string& path) {
  if (j.is_string()) return ActivationSpec::defaults(get_kind(j, path));
  require_object(j, path);
  reject_unknown(j, path, {"kind", "params"});
  if (!j.contains("kind")) field_error(join(path, "kind"), "missing");
  const ActivationKind kind = get_kind(j["kind"], join(path, "kind"));
  ActivationSpec spec = ActivationSpec::defaults(kind);
  if (j.contains("params")) {
    const std::string ppath = join(path, "params");
    require_object(j["params"], ppath);
    const char* key = param_key(kind);
    for (const auto& [name, value] : j["params"].items()) {
      if (key == nullptr || name != key) {
        field_error(join(ppath, name), std::string("not a parameter of ") +
                                           std::string(activation_name(kind)));
      }
      const double v = get_number(value, join(ppath, name));
      switch (kind) {
        case ActivationKind::LReLU:
        case ActivationKind::ELU:
          spec.fixed_alpha = v;
          break;
        case ActivationKind::Swish:
          spec.fixed_beta = v;
          break;
        case ActivationKind::FTS:
          spec.fixed_t = v;
          break;
        default:
          spec.trainable_init = v;
          break;
      }
    }
  }
  return spec;
}

json activation_to_json(const ActivationSpec& spec) {
  json j = {{"kind", std::string(activation_name(spec.kind))}};
  if (const char* key = param_key(spec.kind)) {
    double v = 0.0;
    switch (spec.kind) {
      case ActivationKind::LReLU:
      case ActivationKind::ELU:
        v = spec.fixed_alpha;
        break;
      case ActivationKind::Swish:
        v = spec.fixed_beta;
        break;
      case ActivationKind::FTS:
        v = spec.fixed_t;
        break;
      default:
        v = spec.trainable_init;
        break;
    }
    j["params"] = {{key, v}};
  }
  return j;
}

TrainConfig parse_train_json(const json& j, const std::string& path) {
  TrainConfig cfg;
  if (j.is_null()) return cfg;
  require_object(j, path);
  reject_unknown(j, path, {"lr", "dropout", "batch", "epochs", "seed"});
  if (j.contains("lr")) cfg.learning_rate = get_number(j["lr"], join(path, "lr"));
  if (j.contains("dropout")) {
    cfg.dropout_rate = get_number(j["dropout"], join(path, "dropout"));
    if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0)) {
      field_error(join(path, "dropout"), "must lie in [0, 1)");
    }
  }
  if (j.contains("batch")) {
    cfg.batch_size = get_uint(j["batch"], join(path, "batch"));
    if (cfg.batch_size == 0) field_error(join(path, "batch"), "must be positive");
  }
  if (j.contains("epochs")) cfg.epochs = get_uint(j["epochs"], join(path, "epochs"));
  if (j.contains("seed")) cfg.seed = get_uint(j["seed"], join(path, "seed"));
  return cfg;
}

DatasetSpec parse_dataset_json(const json& j, const std::string& path) {
  require_object(j, path);
  DatasetSpec spec;
  if (!j.contains("kind")) field_error(join(path, "kind"), "missing (\"blobs\" or \"idx\")");
  const std::string kind = get_string(j["kind"], join(path, "kind"));
  if (kind == "blobs") {
    reject_unknown(j, path, {"kind", "n", "d", "classes", "spread", "seed", "test_fraction"});
    spec.kind = DatasetSpec::Kind::Blobs;
    if (j.contains("n")) spec.n = get_uint(j["n"], join(path, "n"));
    if (j.contains("d")) spec.d = get_uint(j["d"], join(path, "d"));
    if (j.contains("classes")) spec.classes = get_uint(j["classes"], join(path, "classes"));
    if (j.contains("spread")) spec.spread = get_number(j["spread"], join(path, "spread"));
    if (j.contains("seed")) spec.seed = get_uint(j["seed"], join(path, "seed"));
  } else if (kind == "idx") {
    reject_unknown(j, path, {"kind", "images", "labels", "test_images", "test_labels", "classes",
                             "test_fraction"});
    spec.kind = DatasetSpec::Kind::Idx;
    if (!j.contains("images")) field_error(join(path, "images"), "missing");
    if (!j.contains("labels")) field_error(join(path, "labels"), "missing");
    spec.images = get_string(j["images"], join(path, "images"));
    spec.labels = get_string(j["labels"], join(path, "labels"));
    if (j.contains("test_images") != j.contains("test_labels")) {
      field_error(join(path, "test_images"), "test_images and test_labels go together");
    }
    if (j.contains("test_images")) {
      spec.test_images = get_string(j["test_images"], join(path, "test_images"));
      spec.test_labels = get_string(j["test_labels"], join(path, "test_labels"));
    }
    if (j.contains("classes")) spec.num_classes = get_uint(j["classes"], join(path, "classes"));
  } else {
    field_error(join(path, "kind"), "expected \"blobs\" or \"idx\", got \"" + kind + "\"");
  }
  if (j.contains("test_fraction")) {
    spec.test_fraction = get_number(j["test_fraction"], join(path, "test_fraction"));
    if (!(spec.test_fraction >= 0.0 && spec.test_fraction < 1.0)) {
      field_error(join(path, "test_fraction"), "must lie in [0, 1)");
    }
  }
  return spec;
}

NetworkTemplate template_from_dashes(const std::string& text, const std::string& path) {
  NetworkTemplate t;
  t.name = text;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '-')) {
    if (part == "C") {
      t.widths.emplace_back(std::nullopt);
      continue;
    }
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v == 0) {
      field_error(path, "'" + text + "' is neither a preset (" + "DNN-3A ... DNN-7" +
                            ") nor a width list like 64-32-C");
    }
    t.widths.emplace_back(v);
  }
  return t;
}

NetworkTemplate parse_template_json(const json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (is_preset(name)) {
      NetworkTemplate t{name, {}};
      for (std::size_t w : preset(name).layer_widths) t.widths.emplace_back(w);
      return t;
    }
    return template_from_dashes(name, path);
  }
  require_object(j, path);
  reject_unknown(j, path, {"name", "layers"});
  if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
    field_error(join(path, "layers"), "expected a non-empty array of widths");
  }
  NetworkTemplate t;
  std::string generated;
  for (std::size_t i = 0; i < j["layers"].size(); ++i) {
    const json& w = j["layers"][i];
    const std::string wpath = join(path, "layers") + "[" + std::to_string(i) + "]";
    if (w.is_string() && w.get<std::string>() == "C") {
      t.widths.emplace_back(std::nullopt);
      generated += (i ? "-C" : "C");
    } else {
      const auto v = get_uint(w, wpath);
      if (v == 0) field_error(wpath, "width must be positive");
      t.widths.emplace_back(v);
      generated += (i ? "-" : "") + std::to_string(v);
    }
  }
  t.name = j.contains("name") ? get_string(j["name"], join(path, "name")) : generated;
  return t;
}

}  // namespace

LoadedData load_dataset(const DatasetSpec& spec) {
  LoadedData out;
  if (spec.kind == DatasetSpec::Kind::Blobs) {
    RandomStream rng(spec.seed);
    out.train = synth_blobs(spec.n, spec.d, spec.classes, spec.spread, rng);
  } else {
    out.train = load_idx(spec.images, spec.labels, spec.num_classes);
    if (!spec.test_images.empty()) {
      Dataset test = load_idx(spec.test_images, spec.test_labels, spec.num_classes);
      const std::size_t classes = std::max(out.train.num_classes, test.num_classes);
      out.train.num_classes = classes;
      test.num_classes = classes;
      out.test = std::move(test);
    }
  }
  if (!out.test && spec.test_fraction > 0.0) {
    RandomStream rng(derive_seed({spec.seed, 0x5EED5917ULL}));
    auto [train, test] = split(out.train, spec.test_fraction, rng);
    out.train = std::move(train);
    out.test = std::move(test);
  }
  return out;
}

NetworkConfig NetworkTemplate::resolve(std::size_t input_dim, std::size_t num_classes,
                                       const ActivationSpec& activation,
                                       double dropout_rate) const {
  NetworkConfig cfg;
  cfg.name = name;
  cfg.input_dim = input_dim;
  cfg.activation = activation;
  cfg.dropout_rate = dropout_rate;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (widths[i]) {
      cfg.layer_widths.push_back(*widths[i]);
    } else if (i + 1 == widths.size()) {
      cfg.layer_widths.push_back(num_classes);
    } else {
      throw ConfigError("network '" + name + "': only the last width may be C");
    }
  }
  if (cfg.layer_widths.empty() || cfg.layer_widths.back() != num_classes) {
    throw ConfigError("network '" + name + "': output width " +
                      (cfg.layer_widths.empty() ? std::string("<none>")
                                                : std::to_string(cfg.layer_widths.back())) +
                      " does not match the dataset's " + std::to_string(num_classes) +
                      " classes");
  }
  cfg.validate();
  return cfg;
}

NetworkTemplate parse_network_template(const std::string& json_text) {
  return parse_template_json(parse_json(json_text), "network");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  require_object(j, "");
  reject_unknown(j, "", {"dataset", "configs", "activations", "runs", "train", "base_seed",
                         "baseline", "focus"});
  ExperimentConfig cfg;
  if (!j.contains("dataset")) field_error("dataset", "missing");
  cfg.dataset = parse_dataset_json(j["dataset"], "dataset");

  if (!j.contains("configs") || !j["configs"].is_array() || j["configs"].empty()) {
    field_error("configs", "expected a non-empty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < j["configs"].size(); ++i) {
    const std::string path = "configs[" + std::to_string(i) + "]";
    cfg.configs.push_back(parse_template_json(j["configs"][i], path));
    if (!names.insert(cfg.configs.back().name).second) {
      field_error(path, "duplicate config name '" + cfg.configs.back().name + "'");
    }
  }

  if (!j.contains("activations") || !j["activations"].is_array() || j["activations"].empty()) {
    field_error("activations", "expected a non-empty array");
  }
  std::set<ActivationKind> kinds;
  for (std::size_t i = 0; i < j["activations"].size(); ++i) {
    const std::string path = "activations[" + std::to_string(i) + "]";
    cfg.activations.push_back(parse_activation_json(j["activations"][i], path));
    if (!kinds.insert(cfg.activations.back().kind).second) field_error(path, "duplicate activation");
  }

  if (j.contains("runs")) {
    cfg.runs = get_uint(j["runs"], "runs");
    if (cfg.runs == 0) field_error("runs", "must be positive");
  }
  if (j.contains("train")) cfg.train = parse_train_json(j["train"], "train");
  if (j.contains("base_seed")) cfg.base_seed = get_uint(j["base_seed"], "base_seed");
  if (j.contains("baseline")) cfg.baseline = get_kind(j["baseline"], "baseline");
  if (!kinds.contains(cfg.baseline)) {
    field_error("baseline", "baseline '" + std::string(activation_name(cfg.baseline)) +
                                "' is not among the activations");
  }
  if (j.contains("focus")) {
    cfg.focus = j["focus"].is_null() ? std::nullopt
                                     : std::optional<ActivationKind>(get_kind(j["focus"], "focus"));
  }
  return cfg;
}

TrainRunConfig parse_train_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  require_object(j, "");
  reject_unknown(j, "", {"dataset", "network", "activation", "train"});
  TrainRunConfig cfg;
  if (!j.contains("dataset")) field_error("dataset", "missing");
  cfg.dataset = parse_dataset_json(j["dataset"], "dataset");
  if (!j.contains("network")) field_error("network", "missing");
  cfg.network = parse_template_json(j["network"], "network");
  if (j.contains("activation")) cfg.activation = parse_activation_json(j["activation"], "activation");
  if (j.contains("train")) cfg.train = parse_train_json(j["train"], "train");
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string network_config_to_json(const NetworkConfig& config) {
  const json j = {{"name", config.name},
                  {"input_dim", config.input_dim},
                  {"layers", config.layer_widths},
                  {"activation", activation_to_json(config.activation)},
                  {"dropout", config.dropout_rate}};
  return j.dump(2);
}

NetworkConfig network_config_from_json(const std::string& json_text) {
  const json j = parse_json(json_text);
  require_object(j, "");
  reject_unknown(j, "", {"name", "input_dim", "layers", "activation", "dropout"});
  NetworkConfig cfg;
  if (j.contains("name")) cfg.name = get_string(j["name"], "name");
  if (!j.contains("input_dim")) field_error("input_dim", "missing");
  cfg.input_dim = get_uint(j["input_dim"], "input_dim");
  if (!j.contains("layers") || !j["layers"].is_array()) field_error("layers", "expected an array");
  for (std::size_t i = 0; i < j["layers"].size(); ++i) {
    cfg.layer_widths.push_back(get_uint(j["layers"][i], "layers[" + std::to_string(i) + "]"));
  }
  if (j.contains("activation")) cfg.activation = parse_activation_json(j["activation"], "activation");
  if (j.contains("dropout")) cfg.dropout_rate = get_number(j["dropout"], "dropout");
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace afbench
