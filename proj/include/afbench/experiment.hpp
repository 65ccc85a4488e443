#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afbench/activation.hpp"
#include "afbench/data.hpp"
#include "afbench/error.hpp"
#include "afbench/network.hpp"

namespace afbench {

/// A trial that failed inside run_matrix; the message names the trial.
class TrialError : public Error {
 public:
  using Error::Error;
};

struct TrialSpec {
  NetworkConfig network;  // carries the activation and dropout rate
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  TrainConfig train;

  [[nodiscard]] std::string describe() const;
};

/// Seed for one trial: derive_seed(base, fnv1a(config name), activation index, run).
/// Keyed on names rather than list positions so adding a config or an
/// activation leaves every other trial's seed unchanged.
std::uint64_t trial_seed(std::uint64_t base_seed, const std::string& config_name,
                         ActivationKind kind, std::size_t run_index);

/// Cross product configs x activations x runs. Each config's activation and
/// dropout fields are overwritten from the activation list and train config.
std::vector<TrialSpec> build_trials(std::span<const NetworkConfig> configs,
                                    std::span<const ActivationSpec> activations, std::size_t runs,
                                    const TrainConfig& train, std::uint64_t base_seed);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double mean_loss = 0.0;
  double accuracy = 0.0;  // percent, on the evaluation set

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct RunRecord {
  std::size_t run = 0;
  std::optional<std::uint64_t> seed;  // absent for tables read back from CSV
  double accuracy = 0.0;              // percent, final epoch
  std::vector<EpochRecord> curve;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Accuracy grid: cell(config, activation) holds every run.
class ResultTable {
 public:
  ResultTable() = default;
  ResultTable(std::vector<std::string> configs, std::vector<ActivationKind> activations);

  [[nodiscard]] const std::vector<std::string>& configs() const noexcept { return configs_; }
  [[nodiscard]] const std::vector<ActivationKind>& activations() const noexcept {
    return activations_;
  }
  [[nodiscard]] bool empty() const noexcept { return configs_.empty() || activations_.empty(); }

  [[nodiscard]] std::optional<std::size_t> config_index(const std::string& name) const;
  [[nodiscard]] std::optional<std::size_t> activation_index_of(ActivationKind kind) const;

  void add(std::size_t config, std::size_t activation, RunRecord record);
  [[nodiscard]] const std::vector<RunRecord>& runs(std::size_t config,
                                                   std::size_t activation) const;
  /// Arithmetic mean of the runs' accuracies. Throws DomainError on an empty cell.
  [[nodiscard]] double mean(std::size_t config, std::size_t activation) const;
  /// Common run count; throws DomainError if cells disagree or any is empty.
  [[nodiscard]] std::size_t run_count() const;

  /// Configs in standard-preset order then first appearance, activations in
  /// canonical order, runs by index.
  [[nodiscard]] ResultTable canonical() const;

  friend bool operator==(const ResultTable&, const ResultTable&) = default;

 private:
  std::vector<std::string> configs_;
  std::vector<ActivationKind> activations_;
  std::vector<std::vector<RunRecord>> cells_;  // configs x activations, row-major
};

/// Trains and evaluates one trial. eval_data defaults to the training data.
RunRecord run_trial(const TrialSpec& spec, const Dataset& train_data, const Dataset* eval_data);

/// Runs every trial on up to `threads` workers (0 = hardware concurrency).
/// The result does not depend on the thread count.
ResultTable run_matrix(std::span<const TrialSpec> specs, const Dataset& train_data,
                       const Dataset* eval_data = nullptr, std::size_t threads = 1);

/// Rank 1 = highest value; ties share the mean of the positions they span.
std::vector<double> fractional_rank(std::span<const double> values);

/// Per-activation mean across configs; ranks_per_config[c][a].
std::vector<double> mean_rank(const std::vector<std::vector<double>>& ranks_per_config);

/// Per activation, the number of configs whose mean beats the baseline mean
/// strictly. The baseline's own entry is nullopt.
std::vector<std::optional<int>> baseline_score(const ResultTable& table, ActivationKind baseline);

/// (acc - baseline) / baseline * 100. Throws DomainError if baseline <= 0.
double relative_improvement(double acc, double baseline_acc);

/// Half-up (away from zero) rounding for display.
double round_half_up(double value, int decimals = 2);

struct RankReport {
  ActivationKind baseline = ActivationKind::ReLU;
  std::optional<ActivationKind> focus;
  std::vector<std::vector<double>> ranks;      // [config][activation]
  std::vector<double> mean_ranks;              // [activation]
  std::vector<std::optional<int>> scores;      // [activation]
  std::vector<double> improvements;            // [config], focus vs baseline; empty without focus
};

RankReport rank_report(const ResultTable& table, ActivationKind baseline,
                       std::optional<ActivationKind> focus = ActivationKind::PFTS);

// Report rendering. All renderers are pure and byte-deterministic.
std::string render_raw_csv(const ResultTable& table);
std::string render_summary_csv(const ResultTable& table);
std::string render_curves_csv(const ResultTable& table);
std::string render_markdown(const ResultTable& table, const RankReport& report);

/// Writes raw.csv, summary.csv, report.md (and curves.csv when curves exist)
/// into out_dir. Returns the written paths. Throws DomainError on an empty
/// table and IoError on unwritable paths.
std::vector<std::filesystem::path> emit_report(const ResultTable& table, const RankReport& report,
                                               const std::filesystem::path& out_dir);

/// Parses `activation,<config1>,<config2>,...` rows of mean accuracies (percent)
/// into a one-run-per-cell table.
ResultTable read_accuracy_csv(std::istream& in);
ResultTable read_accuracy_csv(const std::filesystem::path& path);

}  // namespace afbench
