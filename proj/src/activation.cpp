#include "afbench/activation.hpp"

#include <cmath>
#include <stdexcept>

#include "afbench/error.hpp"

namespace afbench {

namespace {

struct KindInfo {
  std::string_view name;
  std::string_view label;
};

constexpr std::array<KindInfo, 10> kInfo = {{
    {"relu", "ReLU"},
    {"swish", "Swish"},
    {"tanh", "Tanh"},
    {"lrelu", "LReLU"},
    {"prelu", "PReLU"},
    {"softplus", "Softplus"},
    {"elu", "ELU"},
    {"frelu", "FReLU"},
    {"fts", "FTS"},
    {"pfts", "PFTS"},
}};

// x * sigmoid(x); shared by Swish (beta = 1), FTS and PFTS.
double x_sigmoid(double x) { return x * sigmoid(x); }

}  // namespace

std::string_view activation_name(ActivationKind kind) { return kInfo[activation_index(kind)].name; }

std::string_view activation_label(ActivationKind kind) {
  return kInfo[activation_index(kind)].label;
}

std::optional<ActivationKind> parse_activation(std::string_view name) {
  for (std::size_t i = 0; i < kInfo.size(); ++i) {
    if (kInfo[i].name == name) return kAllActivations[i];
  }
  return std::nullopt;
}

std::size_t activation_index(ActivationKind kind) { return static_cast<std::size_t>(kind); }

bool is_trainable(ActivationKind kind) {
  return kind == ActivationKind::PReLU || kind == ActivationKind::FReLU ||
         kind == ActivationKind::PFTS;
}

bool is_piecewise(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::Swish:
    case ActivationKind::Tanh:
    case ActivationKind::Softplus:
      return false;
    default:
      return true;
  }
}

ActivationSpec ActivationSpec::defaults(ActivationKind kind) {
  ActivationSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ActivationKind::LReLU:
      spec.fixed_alpha = 0.01;
      break;
    case ActivationKind::ELU:
      spec.fixed_alpha = 1.0;
      break;
    case ActivationKind::Swish:
      spec.fixed_beta = 1.0;
      break;
    case ActivationKind::FTS:
      spec.fixed_t = -0.20;
      break;
    case ActivationKind::PReLU:
      spec.trainable_init = 0.25;
      break;
    case ActivationKind::FReLU:
      spec.trainable_init = -0.398;
      break;
    case ActivationKind::PFTS:
      spec.trainable_init = -0.20;
      break;
    default:
      break;
  }
  return spec;
}

double act_init_param(ActivationKind kind) {
  const ActivationSpec spec = ActivationSpec::defaults(kind);
  switch (kind) {
    case ActivationKind::PReLU:
    case ActivationKind::FReLU:
    case ActivationKind::PFTS:
      return spec.trainable_init;
    case ActivationKind::LReLU:
    case ActivationKind::ELU:
      return spec.fixed_alpha;
    case ActivationKind::Swish:
      return spec.fixed_beta;
    case ActivationKind::FTS:
      return spec.fixed_t;
    default:
      return 0.0;
  }
}

ActivationState initial_state(const ActivationSpec& spec) {
  if (spec.trainable()) return {spec.trainable_init, 0.0};
  return {act_init_param(spec.kind), 0.0};
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double act_forward(const ActivationSpec& spec, const ActivationState& state, double x) {
  if (std::isnan(x)) throw DomainError("act_forward: NaN input");
  const double p = state.value;
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return x >= 0.0 ? x : 0.0;
    case ActivationKind::Swish:
      return x * sigmoid(spec.fixed_beta * x);
    case ActivationKind::Tanh:
      return std::tanh(x);
    case ActivationKind::LReLU:
      return x >= 0.0 ? x : spec.fixed_alpha * x;
    case ActivationKind::PReLU:
      return x >= 0.0 ? x : p * x;
    case ActivationKind::Softplus:
      return softplus(x);
    case ActivationKind::ELU:
      return x >= 0.0 ? x : spec.fixed_alpha * std::expm1(x);
    case ActivationKind::FReLU:
      return x >= 0.0 ? x + p : p;
    case ActivationKind::FTS:
      return x >= 0.0 ? x_sigmoid(x) + spec.fixed_t : spec.fixed_t;
    case ActivationKind::PFTS:
      return x >= 0.0 ? x_sigmoid(x) + p : p;
  }
  throw std::logic_error("act_forward: unhandled kind");
}

double act_dinput(const ActivationSpec& spec, const ActivationState& state, double x) {
  if (std::isnan(x)) throw DomainError("act_dinput: NaN input");
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::Swish: {
      const double b = spec.fixed_beta;
      const double s = sigmoid(b * x);
      return s + b * x * s * (1.0 - s);
    }
    case ActivationKind::Tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case ActivationKind::LReLU:
      return x >= 0.0 ? 1.0 : spec.fixed_alpha;
    case ActivationKind::PReLU:
      return x >= 0.0 ? 1.0 : state.value;
    case ActivationKind::Softplus:
      return sigmoid(x);
    case ActivationKind::ELU:
      return x >= 0.0 ? 1.0 : spec.fixed_alpha * std::exp(x);
    case ActivationKind::FReLU:
      return x >= 0.0 ? 1.0 : 0.0;
    case ActivationKind::FTS:
    case ActivationKind::PFTS: {
      if (x < 0.0) return 0.0;
      const double s = sigmoid(x);
      return s * (1.0 + x * (1.0 - s));
    }
  }
  throw std::logic_error("act_dinput: unhandled kind");
}

double act_dparam(const ActivationSpec& spec, const ActivationState& /*state*/, double x) {
  switch (spec.kind) {
    case ActivationKind::PReLU:
      return x >= 0.0 ? 0.0 : x;
    case ActivationKind::FReLU:
    case ActivationKind::PFTS:
      return 1.0;
    default:
      return 0.0;
  }
}

double pfts_printed_derivative(double x) {
  if (x < 0.0) return 0.0;
  const double s = 1.0 / (1.0 + std::exp(-x));
  return s * (1.0 - x * s) + x * s;
}

}  // namespace afbench
