#include "afbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "afbench/error.hpp"
#include "afbench/network.hpp"
#include "afbench/random.hpp"

namespace afbench {

std::pair<ActivationSpec, ActivationState> configured_activation(ActivationKind kind,
                                                                 double param_value) {
  ActivationSpec spec = ActivationSpec::defaults(kind);
  switch (kind) {
    case ActivationKind::LReLU:
    case ActivationKind::ELU:
      spec.fixed_alpha = param_value;
      break;
    case ActivationKind::Swish:
      spec.fixed_beta = param_value;
      break;
    case ActivationKind::FTS:
      spec.fixed_t = param_value;
      break;
    case ActivationKind::PReLU:
    case ActivationKind::FReLU:
    case ActivationKind::PFTS:
      spec.trainable_init = param_value;
      break;
    default:
      break;
  }
  ActivationState state = initial_state(spec);
  return {spec, state};
}

const std::vector<double>& standard_gradcheck_points() {
  static const std::vector<double> points = {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0};
  return points;
}

std::string GradCheckReport::to_text() const {
  std::string out;
  char buf[256];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%-8s %-5s x=% .4f analytic=% .12e numeric=% .12e rel_err=%.3e\n",
                  std::string(activation_name(kind)).c_str(), e.wrt_param ? "param" : "input",
                  e.x, e.analytic, e.numeric, e.rel_error);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-8s max_rel_err=%.3e tol=%.1e %s\n",
                std::string(activation_name(kind)).c_str(), max_rel_error, tolerance,
                passed ? "PASS" : "FAIL");
  out += buf;
  return out;
}

GradCheckReport grad_check_activation(ActivationKind kind, double param_value,
                                      std::span<const double> points, double eps,
                                      double tolerance) {
  if (!(eps > 0.0)) throw DomainError("grad_check_activation: eps must be positive");
  const auto [spec, state] = configured_activation(kind, param_value);

  GradCheckReport report;
  report.kind = kind;
  report.param = param_value;
  report.eps = eps;
  report.tolerance = tolerance;

  auto record = [&](double x, bool wrt_param, double analytic, double numeric) {
    const double rel = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
    report.entries.push_back({x, wrt_param, analytic, numeric, rel});
    report.max_rel_error = std::max(report.max_rel_error, rel);
  };

  for (double x : points) {
    if (is_piecewise(kind) && std::abs(x) < 100.0 * eps) {
      throw DomainError("grad_check_activation: point " + std::to_string(x) +
                        " lies within 100*eps of the breakpoint");
    }
    const double fd_input = (act_forward(spec, state, x + eps) - act_forward(spec, state, x - eps)) /
                            (2.0 * eps);
    record(x, false, act_dinput(spec, state, x), fd_input);

    ActivationState up = state;
    ActivationState down = state;
    up.value += eps;
    down.value -= eps;
    const double fd_param = (act_forward(spec, up, x) - act_forward(spec, down, x)) / (2.0 * eps);
    record(x, true, act_dparam(spec, state, x), fd_param);
  }
  report.passed = report.max_rel_error < tolerance;
  return report;
}

double mc_mean_activation(ActivationKind kind, double param_value, std::size_t n_samples,
                          std::uint64_t seed) {
  if (n_samples == 0) throw DomainError("mc_mean_activation: need at least one sample");
  const auto [spec, state] = configured_activation(kind, param_value);
  RandomStream rng(seed);
  double total = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) total += act_forward(spec, state, rng.normal());
  return total / static_cast<double>(n_samples);
}

const std::vector<Fit1dTarget>& fit1d_targets() {
  static const std::vector<Fit1dTarget> targets = {
      {"constant", -1.0, 1.0},
      {"cubic", -2.0, 2.0},
      {"quartic", -2.0, 2.0},
      {"sine", -std::numbers::pi, std::numbers::pi},
  };
  return targets;
}

namespace {

double eval_target(const std::string& name, double x) {
  if (name == "constant") return 0.5;
  if (name == "cubic") return x * x * x - 3.0 * x;
  if (name == "quartic") return x * x * x * x - 2.0 * x * x + 0.5 * x;
  return std::sin(3.0 * x);
}

double grid_mse(const Network& net, const Matrix& inputs, const Matrix& targets) {
  const Matrix pred = predict(net, inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < pred.rows(); ++i) {
    const double d = pred(i, 0) - targets(i, 0);
    total += d * d;
  }
  return total / static_cast<double>(pred.rows());
}

}  // namespace

std::string Fit1dResult::curve_csv() const {
  std::string out = "x,target,prediction\n";
  char buf[128];
  for (const auto& p : curve) {
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%.9f\n", p.x, p.target, p.prediction);
    out += buf;
  }
  return out;
}

Fit1dResult fit_1d_demo(const Fit1dConfig& config) {
  const auto& targets = fit1d_targets();
  const auto it = std::find_if(targets.begin(), targets.end(),
                               [&](const Fit1dTarget& t) { return t.name == config.target; });
  if (it == targets.end()) throw DomainError("fit_1d_demo: unknown target '" + config.target + "'");
  if (config.grid_points < 2) throw DomainError("fit_1d_demo: need at least two grid points");
  if (config.batch_size == 0) throw DomainError("fit_1d_demo: batch size must be positive");

  const std::size_t n = config.grid_points;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = it->lo + (it->hi - it->lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    ys[i] = eval_target(it->name, xs[i]);
  }
  const auto [min_y, max_y] = std::minmax_element(ys.begin(), ys.end());
  const double y_lo = *min_y;
  const double y_hi = *max_y;
  Matrix inputs(n, 1), outputs(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    inputs(i, 0) = 2.0 * (xs[i] - it->lo) / (it->hi - it->lo) - 1.0;
    outputs(i, 0) = y_hi > y_lo ? 2.0 * (ys[i] - y_lo) / (y_hi - y_lo) - 1.0 : ys[i];
  }

  NetworkConfig net_config;
  net_config.name = "fit1d-" + it->name;
  net_config.input_dim = 1;
  net_config.layer_widths = config.hidden_widths;
  net_config.layer_widths.push_back(1);
  net_config.activation = ActivationSpec::defaults(config.activation);
  net_config.dropout_rate = 0.0;

  RandomStream root(config.seed);
  RandomStream init_rng = root.child(0);
  RandomStream train_rng = root.child(1);
  Network net = init_network(net_config, init_rng);

  Fit1dResult result;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& idx : batch_indices(n, config.batch_size, train_rng)) {
      Matrix bx(idx.size(), 1), by(idx.size(), 1);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        bx(i, 0) = inputs(idx[i], 0);
        by(i, 0) = outputs(idx[i], 0);
      }
      ForwardResult fwd = forward(net, bx, Mode::Train, train_rng);
      Matrix grad(idx.size(), 1);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        grad(i, 0) = (fwd.logits(i, 0) - by(i, 0)) / static_cast<double>(idx.size());
      }
      sgd_step(net, backward_from_output(net, *fwd.cache, grad), config.learning_rate);
    }
    result.epoch_mse.push_back(grid_mse(net, inputs, outputs));
  }

  const Matrix pred = predict(net, inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = pred(i, 0) - outputs(i, 0);
    total += d * d;
    result.curve.push_back({xs[i], outputs(i, 0), pred(i, 0)});
  }
  result.final_mse = total / static_cast<double>(n);
  return result;
}

}  // namespace afbench
