#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace afbench {

/// The ten benchmarked activations, in canonical report order.
enum class ActivationKind { ReLU, Swish, Tanh, LReLU, PReLU, Softplus, ELU, FReLU, FTS, PFTS };

inline constexpr std::array<ActivationKind, 10> kAllActivations = {
    ActivationKind::ReLU,  ActivationKind::Swish,    ActivationKind::Tanh, ActivationKind::LReLU,
    ActivationKind::PReLU, ActivationKind::Softplus, ActivationKind::ELU,  ActivationKind::FReLU,
    ActivationKind::FTS,   ActivationKind::PFTS};

/// Lowercase CLI/config name ("relu", "pfts", ...).
std::string_view activation_name(ActivationKind kind);
/// Display name ("ReLU", "PFTS", ...).
std::string_view activation_label(ActivationKind kind);
std::optional<ActivationKind> parse_activation(std::string_view name);
/// Position in kAllActivations.
std::size_t activation_index(ActivationKind kind);

bool is_trainable(ActivationKind kind);
/// True for kinds defined piecewise around x = 0.
bool is_piecewise(ActivationKind kind);

/// Kind plus its hyperparameters. fixed_* apply to the non-trainable kinds,
/// trainable_init seeds the per-layer parameter of PReLU / FReLU / PFTS.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::ReLU;
  double fixed_alpha = 0.0;     // LReLU slope, ELU scale
  double fixed_beta = 0.0;      // Swish
  double fixed_t = 0.0;         // FTS
  double trainable_init = 0.0;  // PReLU alpha, FReLU beta, PFTS t

  /// Spec populated with the standard parameter values for kind.
  static ActivationSpec defaults(ActivationKind kind);

  [[nodiscard]] bool trainable() const { return is_trainable(kind); }

  friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;
};

/// Per-layer parameter of a trainable activation.
struct ActivationState {
  double value = 0.0;
  double grad = 0.0;

  friend bool operator==(const ActivationState&, const ActivationState&) = default;
};

/// Initial parameter value: the trainable init for trainable kinds, the
/// kind's fixed constant otherwise (0 for kinds without one).
double act_init_param(ActivationKind kind);
ActivationState initial_state(const ActivationSpec& spec);

/// Logistic sigmoid, evaluated without overflow for any finite x.
double sigmoid(double x);
/// ln(1 + e^x) as max(x, 0) + log1p(e^-|x|).
double softplus(double x);

// Piecewise kinds take the upper branch for x >= 0, derivatives included.

/// Throws DomainError on NaN input.
double act_forward(const ActivationSpec& spec, const ActivationState& state, double x);
double act_dinput(const ActivationSpec& spec, const ActivationState& state, double x);
/// Derivative with respect to the trainable parameter; 0 for fixed kinds.
double act_dparam(const ActivationSpec& spec, const ActivationState& state, double x);

/// The derivative exactly as printed for PFTS (x >= 0 branch):
/// s(1 - x s) + x s with s = sigmoid(x). Lower branch is 0.
double pfts_printed_derivative(double x);

}  // namespace afbench
