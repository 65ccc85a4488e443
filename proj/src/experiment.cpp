#include "afbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

namespace afbench {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

std::string TrialSpec::describe() const {
  return "config=" + network.name + " activation=" +
         std::string(activation_name(network.activation.kind)) +
         " run=" + std::to_string(run_index) + " seed=" + std::to_string(seed);
}

std::uint64_t trial_seed(std::uint64_t base_seed, const std::string& config_name,
                         ActivationKind kind, std::size_t run_index) {
  return derive_seed({base_seed, fnv1a(config_name), activation_index(kind), run_index});
}

std::vector<TrialSpec> build_trials(std::span<const NetworkConfig> configs,
                                    std::span<const ActivationSpec> activations, std::size_t runs,
                                    const TrainConfig& train, std::uint64_t base_seed) {
  if (runs == 0) throw DomainError("build_trials: run count must be positive");
  std::vector<TrialSpec> specs;
  std::set<std::uint64_t> seen;
  for (const NetworkConfig& base : configs) {
    for (const ActivationSpec& act : activations) {
      for (std::size_t r = 0; r < runs; ++r) {
        TrialSpec spec{base, r, trial_seed(base_seed, base.name, act.kind, r), train};
        spec.network.activation = act;
        spec.network.dropout_rate = train.dropout_rate;
        spec.train.seed = spec.seed;
        if (!seen.insert(spec.seed).second) {
          throw DomainError("build_trials: derived seed collision at " + spec.describe());
        }
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

ResultTable::ResultTable(std::vector<std::string> configs, std::vector<ActivationKind> activations)
    : configs_(std::move(configs)),
      activations_(std::move(activations)),
      cells_(configs_.size() * activations_.size()) {}

std::optional<std::size_t> ResultTable::config_index(const std::string& name) const {
  const auto it = std::find(configs_.begin(), configs_.end(), name);
  if (it == configs_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - configs_.begin());
}

std::optional<std::size_t> ResultTable::activation_index_of(ActivationKind kind) const {
  const auto it = std::find(activations_.begin(), activations_.end(), kind);
  if (it == activations_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - activations_.begin());
}

void ResultTable::add(std::size_t config, std::size_t activation, RunRecord record) {
  if (config >= configs_.size() || activation >= activations_.size()) {
    throw ShapeError("ResultTable::add: cell out of range");
  }
  cells_[config * activations_.size() + activation].push_back(std::move(record));
}

const std::vector<RunRecord>& ResultTable::runs(std::size_t config, std::size_t activation) const {
  if (config >= configs_.size() || activation >= activations_.size()) {
    throw ShapeError("ResultTable::runs: cell out of range");
  }
  return cells_[config * activations_.size() + activation];
}

double ResultTable::mean(std::size_t config, std::size_t activation) const {
  const auto& cell = runs(config, activation);
  if (cell.empty()) {
    throw DomainError("ResultTable: empty cell " + configs_[config] + "/" +
                      std::string(activation_name(activations_[activation])));
  }
  double total = 0.0;
  for (const auto& r : cell) total += r.accuracy;
  return total / static_cast<double>(cell.size());
}

std::size_t ResultTable::run_count() const {
  if (empty()) throw DomainError("ResultTable: table is empty");
  const std::size_t n = cells_.front().size();
  for (const auto& cell : cells_) {
    if (cell.empty() || cell.size() != n) {
      throw DomainError("ResultTable: cells hold different run counts");
    }
  }
  return n;
}

ResultTable ResultTable::canonical() const {
  const auto& presets = preset_names();
  std::vector<std::size_t> config_order(configs_.size());
  std::iota(config_order.begin(), config_order.end(), 0);
  auto preset_pos = [&](std::size_t i) {
    const auto it = std::find(presets.begin(), presets.end(), configs_[i]);
    return static_cast<std::size_t>(it - presets.begin());
  };
  std::stable_sort(config_order.begin(), config_order.end(),
                   [&](std::size_t a, std::size_t b) { return preset_pos(a) < preset_pos(b); });

  std::vector<std::size_t> act_order(activations_.size());
  std::iota(act_order.begin(), act_order.end(), 0);
  std::stable_sort(act_order.begin(), act_order.end(), [&](std::size_t a, std::size_t b) {
    return activation_index(activations_[a]) < activation_index(activations_[b]);
  });

  std::vector<std::string> configs;
  for (std::size_t c : config_order) configs.push_back(configs_[c]);
  std::vector<ActivationKind> acts;
  for (std::size_t a : act_order) acts.push_back(activations_[a]);

  ResultTable out(configs, acts);
  for (std::size_t ci = 0; ci < config_order.size(); ++ci) {
    for (std::size_t ai = 0; ai < act_order.size(); ++ai) {
      auto cell = runs(config_order[ci], act_order[ai]);
      std::stable_sort(cell.begin(), cell.end(),
                       [](const RunRecord& x, const RunRecord& y) { return x.run < y.run; });
      for (auto& r : cell) out.add(ci, ai, std::move(r));
    }
  }
  return out;
}

RunRecord run_trial(const TrialSpec& spec, const Dataset& train_data, const Dataset* eval_data) {
  const Dataset& eval = eval_data != nullptr ? *eval_data : train_data;
  RandomStream root(spec.seed);
  RandomStream init_rng = root.child(0);
  RandomStream train_rng = root.child(1);
  Network net = init_network(spec.network, init_rng);

  RunRecord record;
  record.run = spec.run_index;
  record.seed = spec.seed;
  for (std::size_t epoch = 1; epoch <= spec.train.epochs; ++epoch) {
    const double loss = train_epoch(net, train_data, spec.train, train_rng);
    if (!std::isfinite(loss)) {
      throw DomainError("training diverged at epoch " + std::to_string(epoch));
    }
    record.curve.push_back({epoch, loss, 100.0 * evaluate(net, eval)});
  }
  record.accuracy = record.curve.empty() ? 100.0 * evaluate(net, eval) : record.curve.back().accuracy;
  return record;
}

ResultTable run_matrix(std::span<const TrialSpec> specs, const Dataset& train_data,
                       const Dataset* eval_data, std::size_t threads) {
  if (specs.empty()) throw DomainError("run_matrix: no trials");

  std::vector<std::string> configs;
  std::vector<ActivationKind> acts;
  for (const auto& s : specs) {
    if (std::find(configs.begin(), configs.end(), s.network.name) == configs.end()) {
      configs.push_back(s.network.name);
    }
    if (std::find(acts.begin(), acts.end(), s.network.activation.kind) == acts.end()) {
      acts.push_back(s.network.activation.kind);
    }
  }

  std::vector<RunRecord> results(specs.size());
  std::vector<std::exception_ptr> failures(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        results[i] = run_trial(specs[i], train_data, eval_data);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, specs.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const std::exception& e) {
      throw TrialError("trial " + specs[i].describe() + " failed: " + e.what());
    }
  }

  ResultTable table(configs, acts);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto c = *table.config_index(specs[i].network.name);
    const auto a = *table.activation_index_of(specs[i].network.activation.kind);
    table.add(c, a, std::move(results[i]));
  }
  static_cast<void>(table.run_count());  // throws unless every cell holds the same run count
  return table.canonical();
}

std::vector<double> fractional_rank(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share ranks i+1..j+1.
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> mean_rank(const std::vector<std::vector<double>>& ranks_per_config) {
  if (ranks_per_config.empty()) return {};
  const std::size_t n = ranks_per_config.front().size();
  std::vector<double> out(n, 0.0);
  for (const auto& ranks : ranks_per_config) {
    if (ranks.size() != n) throw ShapeError("mean_rank: configs rank different activation sets");
    for (std::size_t a = 0; a < n; ++a) out[a] += ranks[a];
  }
  for (double& v : out) v /= static_cast<double>(ranks_per_config.size());
  return out;
}

std::vector<std::optional<int>> baseline_score(const ResultTable& table, ActivationKind baseline) {
  const auto base = table.activation_index_of(baseline);
  if (!base) {
    throw DomainError("baseline_score: baseline '" + std::string(activation_name(baseline)) +
                      "' is not in the table");
  }
  std::vector<std::optional<int>> scores(table.activations().size());
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (a == *base) continue;
    int wins = 0;
    for (std::size_t c = 0; c < table.configs().size(); ++c) {
      if (table.mean(c, a) > table.mean(c, *base)) ++wins;
    }
    scores[a] = wins;
  }
  return scores;
}

double relative_improvement(double acc, double baseline_acc) {
  if (!(baseline_acc > 0.0)) {
    throw DomainError("relative_improvement: baseline accuracy must be positive, got " +
                      std::to_string(baseline_acc));
  }
  return (acc - baseline_acc) / baseline_acc * 100.0;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // The 1e-9 nudge absorbs binary representation error on exact halves such as 0.125.
  const double scaled = std::floor(std::abs(value) * scale + 0.5 + 1e-9);
  return std::copysign(scaled / scale, value);
}

RankReport rank_report(const ResultTable& table, ActivationKind baseline,
                       std::optional<ActivationKind> focus) {
  if (table.empty()) throw DomainError("rank_report: table is empty");
  RankReport report;
  report.baseline = baseline;
  report.scores = baseline_score(table, baseline);
  for (std::size_t c = 0; c < table.configs().size(); ++c) {
    std::vector<double> means;
    for (std::size_t a = 0; a < table.activations().size(); ++a) means.push_back(table.mean(c, a));
    report.ranks.push_back(fractional_rank(means));
  }
  report.mean_ranks = mean_rank(report.ranks);
  if (focus && *focus != baseline) {
    if (const auto f = table.activation_index_of(*focus)) {
      report.focus = focus;
      const auto b = *table.activation_index_of(baseline);
      for (std::size_t c = 0; c < table.configs().size(); ++c) {
        report.improvements.push_back(relative_improvement(table.mean(c, *f), table.mean(c, b)));
      }
    }
  }
  return report;
}

}  // namespace afbench
