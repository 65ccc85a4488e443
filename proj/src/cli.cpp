#include "afbench/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "afbench/analysis.hpp"
#include "afbench/config.hpp"
#include "afbench/error.hpp"
#include "afbench/experiment.hpp"

namespace afbench {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

ActivationKind kind_or_usage(const std::string& name) {
  const auto kind = parse_activation(name);
  if (!kind) throw ConfigError("unknown activation '" + name + "'");
  return *kind;
}

std::size_t thread_budget(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("AFBENCH_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("AFBENCH_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

void resolve_relative(DatasetSpec& spec, const std::filesystem::path& config_path) {
  const auto base = config_path.parent_path();
  for (auto* p : {&spec.images, &spec.labels, &spec.test_images, &spec.test_labels}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_train(const std::string& config_path, std::ostream& out) {
  TrainRunConfig cfg = parse_train_config(read_text_file(config_path));
  resolve_relative(cfg.dataset, config_path);
  const LoadedData data = load_dataset(cfg.dataset);
  const NetworkConfig net_cfg = cfg.network.resolve(data.train.dim(), data.train.num_classes,
                                                    cfg.activation, cfg.train.dropout_rate);
  RandomStream root(cfg.train.seed);
  RandomStream init_rng = root.child(0);
  RandomStream train_rng = root.child(1);
  Network net = init_network(net_cfg, init_rng);

  out << "network " << net_cfg.name << " activation " << activation_name(cfg.activation.kind)
      << " samples " << data.train.size() << "\n";
  for (std::size_t epoch = 1; epoch <= cfg.train.epochs; ++epoch) {
    const double loss = train_epoch(net, data.train, cfg.train, train_rng);
    out << "epoch " << epoch << " loss " << fmt("%.6f", loss) << "\n";
  }
  const double acc = evaluate(net, data.eval());
  out << "final accuracy " << fmt("%.4f", 100.0 * acc) << "% on "
      << (data.test ? "test" : "train") << " split\n";
  if (net_cfg.activation.trainable()) {
    out << "activation parameters";
    for (const auto& s : net.activation_states()) out << ' ' << fmt("%.6f", s.value);
    out << "\n";
  }
  return kExitOk;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::size_t> threads, std::ostream& out) {
  ExperimentConfig cfg = parse_experiment_config(read_text_file(config_path));
  resolve_relative(cfg.dataset, config_path);
  const LoadedData data = load_dataset(cfg.dataset);

  std::vector<NetworkConfig> configs;
  for (const auto& t : cfg.configs) {
    configs.push_back(t.resolve(data.train.dim(), data.train.num_classes, cfg.activations.front(),
                                cfg.train.dropout_rate));
  }
  const auto specs = build_trials(configs, cfg.activations, cfg.runs, cfg.train, cfg.base_seed);
  out << "running " << specs.size() << " trials (" << configs.size() << " configs x "
      << cfg.activations.size() << " activations x " << cfg.runs << " runs)\n";

  const ResultTable table =
      run_matrix(specs, data.train, data.test ? &*data.test : nullptr, thread_budget(threads));
  const RankReport report = rank_report(table, cfg.baseline, cfg.focus);
  for (const auto& path : emit_report(table, report, out_dir)) out << "wrote " << path.string() << "\n";
  return kExitOk;
}

int cmd_rank(const std::string& input, const std::string& baseline, const std::string& focus,
             const std::string& out_dir, std::ostream& out) {
  const ActivationKind base = kind_or_usage(baseline);
  std::optional<ActivationKind> focus_kind;
  if (!focus.empty()) focus_kind = kind_or_usage(focus);
  const ResultTable table = read_accuracy_csv(std::filesystem::path(input));
  const RankReport report = rank_report(table, base, focus_kind);

  out << "activation,mean_rank,score\n";
  for (std::size_t a = 0; a < table.activations().size(); ++a) {
    out << activation_name(table.activations()[a]) << ","
        << fmt("%.2f", round_half_up(report.mean_ranks[a])) << ","
        << (report.scores[a] ? std::to_string(*report.scores[a]) : "-") << "\n";
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(report.mean_ranks.begin(), report.mean_ranks.end()) -
      report.mean_ranks.begin());
  out << "best mean rank: " << activation_name(table.activations()[best]) << " "
      << fmt("%.2f", round_half_up(report.mean_ranks[best])) << "\n";
  if (!out_dir.empty()) {
    for (const auto& path : emit_report(table, report, out_dir)) out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_mean_activation(const std::string& fn, std::optional<double> param, std::size_t samples,
                        std::uint64_t seed, const std::string& out_file, std::ostream& out) {
  std::vector<ActivationKind> kinds;
  if (fn.empty()) {
    kinds.assign(kAllActivations.begin(), kAllActivations.end());
  } else {
    kinds.push_back(kind_or_usage(fn));
  }
  std::string csv = "kind,param,n,seed,mean\n";
  for (ActivationKind k : kinds) {
    const double p = param.value_or(act_init_param(k));
    const double mean = mc_mean_activation(k, p, samples, seed);
    csv += std::string(activation_name(k)) + "," + fmt("%.6g", p) + "," + std::to_string(samples) +
           "," + std::to_string(seed) + "," + fmt("%.6f", mean) + "\n";
  }
  if (out_file.empty()) {
    out << csv;
  } else {
    write_text(out_file, csv);
    out << "wrote " << out_file << "\n";
  }
  if (std::find(kinds.begin(), kinds.end(), ActivationKind::ReLU) != kinds.end()) {
    out << "# note: relu analytic mean under N(0,1) is 1/sqrt(2*pi) = "
        << fmt("%.5f", 1.0 / std::sqrt(2.0 * std::numbers::pi))
        << "; the commonly quoted 0.357 does not match it\n";
  }
  return kExitOk;
}

int cmd_gradcheck(const std::string& fn, std::optional<double> param, double eps, double tol,
                  std::ostream& out) {
  std::vector<ActivationKind> kinds;
  if (fn.empty()) {
    kinds.assign(kAllActivations.begin(), kAllActivations.end());
  } else {
    kinds.push_back(kind_or_usage(fn));
  }
  bool all_passed = true;
  for (ActivationKind k : kinds) {
    const auto report = grad_check_activation(k, param.value_or(act_init_param(k)),
                                              standard_gradcheck_points(), eps, tol);
    out << report.to_text();
    all_passed = all_passed && report.passed;
  }
  out << (all_passed ? "gradcheck: all passed\n" : "gradcheck: FAILED\n");
  return all_passed ? kExitOk : kExitFailure;
}

int cmd_fit1d(const Fit1dConfig& cfg, const std::string& out_dir, std::ostream& out) {
  const Fit1dResult result = fit_1d_demo(cfg);
  out << "target " << cfg.target << " activation " << activation_name(cfg.activation)
      << " epochs " << cfg.epochs << " final_mse " << fmt("%.6e", result.final_mse) << "\n";
  if (!out_dir.empty()) {
    const auto path = std::filesystem::path(out_dir) /
                      ("fit1d_" + cfg.target + "_" + std::string(activation_name(cfg.activation)) +
                       ".csv");
    write_text(path, result.curve_csv());
    out << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"afbench: activation-function benchmark for dense networks", "afbench"};
  app.require_subcommand(1);

  std::string config_path, out_dir, input, baseline = "relu", focus = "pfts", fn, out_file;
  std::optional<std::size_t> threads;
  std::optional<double> param;
  std::size_t samples = 1000000;
  std::uint64_t seed = 1;
  double eps = 1e-5, tol = 1e-6;
  Fit1dConfig fit;
  std::string fit_fn = "relu";

  auto* train = app.add_subcommand("train", "Train one model from a JSON config");
  train->add_option("--config", config_path, "Train config JSON")->required();

  auto* bench = app.add_subcommand("benchmark", "Run the config x activation x run matrix");
  bench->add_option("--config", config_path, "Experiment config JSON")->required();
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--threads", threads, "Worker threads (default: AFBENCH_THREADS or all cores)");

  auto* rank = app.add_subcommand("rank", "Scores and ranks from an accuracy table");
  rank->add_option("--input", input, "CSV: activation,<config1>,<config2>,...")->required();
  rank->add_option("--baseline", baseline, "Baseline activation");
  rank->add_option("--focus", focus, "Activation for the relative-improvement table");
  rank->add_option("--out", out_dir, "Write report files here");

  auto* analyze = app.add_subcommand("analyze", "Analysis tools");
  analyze->require_subcommand(1);
  auto* mean_act = analyze->add_subcommand("mean-activation", "Monte-Carlo mean under N(0,1)");
  mean_act->add_option("--fn", fn, "Activation (default: all)");
  mean_act->add_option("--param", param, "Activation parameter (default: standard value)");
  mean_act->add_option("--samples", samples, "Number of draws")->check(CLI::PositiveNumber);
  mean_act->add_option("--seed", seed, "Seed");
  mean_act->add_option("--out", out_file, "Write the CSV table here");

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of activation derivatives");
  gradcheck->add_option("--fn", fn, "Activation (default: all)");
  gradcheck->add_option("--param", param, "Activation parameter (default: standard value)");
  gradcheck->add_option("--eps", eps, "Central-difference step")->check(CLI::PositiveNumber);
  gradcheck->add_option("--tol", tol, "Relative error tolerance")->check(CLI::PositiveNumber);

  auto* demo = app.add_subcommand("demo", "Demonstrations");
  demo->require_subcommand(1);
  auto* fit1d = demo->add_subcommand("fit1d", "Fit a 1-D target function with a small MLP");
  fit1d->add_option("--target", fit.target, "constant, cubic, quartic or sine");
  fit1d->add_option("--fn", fit_fn, "Activation");
  fit1d->add_option("--epochs", fit.epochs, "Training epochs");
  fit1d->add_option("--seed", fit.seed, "Seed");
  fit1d->add_option("--lr", fit.learning_rate, "Learning rate")->check(CLI::PositiveNumber);
  fit1d->add_option("--hidden", fit.hidden_widths, "Hidden widths")->delimiter(',');
  fit1d->add_option("--out", out_dir, "Write the curve CSV here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, out);
    if (bench->parsed()) return cmd_benchmark(config_path, out_dir, threads, out);
    if (rank->parsed()) return cmd_rank(input, baseline, focus, out_dir, out);
    if (mean_act->parsed()) return cmd_mean_activation(fn, param, samples, seed, out_file, out);
    if (gradcheck->parsed()) return cmd_gradcheck(fn, param, eps, tol, out);
    if (fit1d->parsed()) {
      fit.activation = kind_or_usage(fit_fn);
      return cmd_fit1d(fit, out_dir, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace afbench
