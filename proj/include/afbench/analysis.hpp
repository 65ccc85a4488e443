#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "afbench/activation.hpp"

namespace afbench {

/// Spec and state for `kind` with its parameter set to `param_value`: the
/// trainable value for PReLU/FReLU/PFTS, the fixed constant for LReLU/ELU
/// (alpha), Swish (beta) and FTS (t). ReLU, Tanh and Softplus ignore it.
std::pair<ActivationSpec, ActivationState> configured_activation(ActivationKind kind,
                                                                 double param_value);

struct GradCheckEntry {
  double x = 0.0;
  bool wrt_param = false;  // false: d/dx, true: d/dparam
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;  // |analytic - numeric| / max(1, |analytic|)
};

struct GradCheckReport {
  ActivationKind kind = ActivationKind::ReLU;
  double param = 0.0;
  double eps = 0.0;
  double tolerance = 0.0;
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool passed = false;

  /// One line per test point, then a summary line.
  [[nodiscard]] std::string to_text() const;
};

/// Default test points, clear of the breakpoint at 0.
const std::vector<double>& standard_gradcheck_points();

/// Checks act_dinput and act_dparam against central differences at each
/// point. Throws DomainError for eps <= 0 or, for piecewise kinds, a point
/// within 100 * eps of 0.
GradCheckReport grad_check_activation(ActivationKind kind, double param_value,
                                      std::span<const double> points, double eps = 1e-5,
                                      double tolerance = 1e-6);

/// Mean of the activation over n standard-normal draws from RandomStream(seed).
double mc_mean_activation(ActivationKind kind, double param_value, std::size_t n_samples,
                          std::uint64_t seed);

struct Fit1dTarget {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
};

/// Built-in targets: constant (0.5), cubic (x^3 - 3x on [-2, 2]),
/// quartic (x^4 - 2x^2 + x/2 on [-2, 2]), sine (sin 3x on [-pi, pi]).
const std::vector<Fit1dTarget>& fit1d_targets();

struct Fit1dConfig {
  std::string target = "cubic";
  ActivationKind activation = ActivationKind::ReLU;
  std::vector<std::size_t> hidden_widths = {32, 32};
  std::size_t epochs = 500;
  std::uint64_t seed = 1;
  double learning_rate = 0.05;
  std::size_t batch_size = 16;
  std::size_t grid_points = 201;
};

struct CurvePoint {
  double x = 0.0;
  double target = 0.0;
  double prediction = 0.0;
};

struct Fit1dResult {
  double final_mse = 0.0;
  std::vector<double> epoch_mse;  // full-grid MSE after each epoch
  std::vector<CurvePoint> curve;

  [[nodiscard]] std::string curve_csv() const;
};

/// Fits a scalar MLP to the target on an evenly spaced grid with minibatch
/// SGD on half the squared error. Non-constant targets are rescaled to [-1, 1];
/// inputs are fed to the network rescaled to [-1, 1]. Throws DomainError for
/// unknown targets.
Fit1dResult fit_1d_demo(const Fit1dConfig& config);

}  // namespace afbench
