#include <doctest.h>

#include <cmath>
#include <limits>

#include "afbench/activation.hpp"
#include "afbench/error.hpp"
#include "oracles/activation_oracle.hpp"

using namespace afbench;

namespace {

double f(ActivationKind k, double x) {
  const auto spec = ActivationSpec::defaults(k);
  return act_forward(spec, initial_state(spec), x);
}

double df(ActivationKind k, double x) {
  const auto spec = ActivationSpec::defaults(k);
  return act_dinput(spec, initial_state(spec), x);
}

double dp(ActivationKind k, double x) {
  const auto spec = ActivationSpec::defaults(k);
  return act_dparam(spec, initial_state(spec), x);
}

}  // namespace

TEST_CASE("forward examples") {
  using K = ActivationKind;
  CHECK(f(K::PFTS, 0.0) == doctest::Approx(-0.20).epsilon(1e-15));
  CHECK(f(K::PFTS, 1.0) == doctest::Approx(oracle::kPftsAt1).epsilon(1e-12));
  CHECK(std::abs(f(K::PFTS, 1.0) - 0.531059) < 5e-7);
  CHECK(std::abs(f(K::FTS, 2.0) - 1.561594) < 5e-7);
  CHECK(f(K::ReLU, -2.0) == 0.0);
  CHECK(f(K::LReLU, -2.0) == doctest::Approx(-0.02));
  CHECK(f(K::PReLU, -2.0) == doctest::Approx(-0.5));
  CHECK(f(K::FReLU, 1.0) == doctest::Approx(0.602));
  CHECK(f(K::ELU, -1.0) == doctest::Approx(oracle::kEluAtMinus1).epsilon(1e-12));
  CHECK(f(K::Softplus, 0.0) == doctest::Approx(oracle::kSoftplusAt0).epsilon(1e-12));
  CHECK(f(K::Tanh, 1.0) == doctest::Approx(oracle::kTanhAt1).epsilon(1e-12));
  CHECK(f(K::Swish, 0.0) == 0.0);
}

TEST_CASE("forward matches the high-precision oracle table") {
  for (const auto& row : oracle::kActivationTable) {
    const auto kind = parse_activation(row.name);
    REQUIRE(kind.has_value());
    for (std::size_t i = 0; i < oracle::kPoints.size(); ++i) {
      CAPTURE(row.name);
      CAPTURE(oracle::kPoints[i]);
      CHECK(std::abs(f(*kind, oracle::kPoints[i]) - row.values[i]) < 1e-9);
    }
  }
}

TEST_CASE("input derivative examples") {
  using K = ActivationKind;
  CHECK(df(K::PFTS, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(df(K::PFTS, 2.0) == doctest::Approx(oracle::kPftsDerivAt2).epsilon(1e-12));
  CHECK(std::abs(df(K::PFTS, 2.0) - 1.090784) < 5e-7);
  CHECK(df(K::PFTS, -3.0) == 0.0);
  CHECK(df(K::ReLU, 1.0) == 1.0);
  CHECK(df(K::ReLU, -1.0) == 0.0);
  CHECK(df(K::FReLU, -1.0) == 0.0);
  // upper branch at the kink
  CHECK(df(K::ReLU, 0.0) == 1.0);
  CHECK(df(K::FReLU, 0.0) == 1.0);
}

TEST_CASE("parameter derivative examples") {
  using K = ActivationKind;
  for (double x : {-5.0, 0.0, 7.0}) CHECK(dp(K::PFTS, x) == 1.0);
  CHECK(dp(K::PReLU, -2.0) == -2.0);
  CHECK(dp(K::PReLU, 3.0) == 0.0);
  CHECK(dp(K::FReLU, -4.0) == 1.0);
  for (ActivationKind k : kAllActivations) {
    if (is_trainable(k)) continue;
    for (double x : {-3.0, 0.0, 2.5}) CHECK(dp(k, x) == 0.0);
  }
}

TEST_CASE("initial parameters") {
  CHECK(act_init_param(ActivationKind::PFTS) == -0.20);
  CHECK(act_init_param(ActivationKind::FReLU) == -0.398);
  CHECK(act_init_param(ActivationKind::PReLU) == 0.25);
  CHECK(ActivationSpec::defaults(ActivationKind::LReLU).fixed_alpha == 0.01);
  CHECK(ActivationSpec::defaults(ActivationKind::ELU).fixed_alpha == 1.0);
  CHECK(ActivationSpec::defaults(ActivationKind::Swish).fixed_beta == 1.0);
  CHECK(ActivationSpec::defaults(ActivationKind::FTS).fixed_t == -0.20);
  int trainable = 0;
  for (ActivationKind k : kAllActivations) trainable += is_trainable(k) ? 1 : 0;
  CHECK(trainable == 3);
}

TEST_CASE("printed PFTS derivative equals the Swish-derivative form") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 0.01 * i;
    if (x < 0.0) {
      CHECK(pfts_printed_derivative(x) == 0.0);
      continue;
    }
    const double s = 1.0 / (1.0 + std::exp(-x));
    REQUIRE(std::abs(pfts_printed_derivative(x) - s * (1.0 + x * (1.0 - s))) < 1e-12);
    REQUIRE(std::abs(df(ActivationKind::PFTS, x) - pfts_printed_derivative(x)) < 1e-12);
  }
}

TEST_CASE("piecewise kinds are continuous at 0") {
  for (ActivationKind k : kAllActivations) {
    if (!is_piecewise(k)) continue;
    CAPTURE(activation_name(k));
    CHECK(std::abs(f(k, -1e-9) - f(k, 1e-9)) < 1e-8);
  }
}

TEST_CASE("PFTS is bounded below by its hinge") {
  const auto spec = ActivationSpec::defaults(ActivationKind::PFTS);
  for (double t : {-0.2, 0.0, 0.7}) {
    const ActivationState state{t, 0.0};
    for (int i = -1000; i <= 1000; ++i) {
      const double x = 0.02 * i;
      const double excess = act_forward(spec, state, x) - t;
      REQUIRE(excess >= 0.0);
      if (x <= 0.0) REQUIRE(excess == 0.0);
    }
  }
}

TEST_CASE("FTS and PFTS coincide at initialization") {
  for (int i = -2000; i <= 2000; ++i) {
    const double x = 0.005 * i;
    REQUIRE(f(ActivationKind::FTS, x) == f(ActivationKind::PFTS, x));
  }
}

TEST_CASE("derivatives match central differences") {
  const double eps = 1e-5;
  for (ActivationKind k : kAllActivations) {
    const auto spec = ActivationSpec::defaults(k);
    const auto state = initial_state(spec);
    for (double x : {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0}) {
      CAPTURE(activation_name(k));
      CAPTURE(x);
      const double a = act_dinput(spec, state, x);
      const double n = (act_forward(spec, state, x + eps) - act_forward(spec, state, x - eps)) / (2 * eps);
      CHECK(std::abs(a - n) / std::max(1.0, std::abs(a)) < 1e-6);

      ActivationState up = state, down = state;
      up.value += eps;
      down.value -= eps;
      const double ap = act_dparam(spec, state, x);
      const double np = (act_forward(spec, up, x) - act_forward(spec, down, x)) / (2 * eps);
      CHECK(std::abs(ap - np) / std::max(1.0, std::abs(ap)) < 1e-6);
    }
  }
}

TEST_CASE("monotone kinds are nondecreasing") {
  for (ActivationKind k : kAllActivations) {
    if (k == ActivationKind::Swish) continue;  // dips near x = -1.28
    double prev = f(k, -20.0);
    for (int i = 1; i <= 4000; ++i) {
      const double cur = f(k, -20.0 + 0.01 * i);
      CAPTURE(activation_name(k));
      REQUIRE(cur >= prev);
      prev = cur;
    }
  }
  CHECK(f(ActivationKind::Swish, -1.28) < f(ActivationKind::Swish, -3.0));
}

TEST_CASE("extreme inputs stay finite") {
  for (ActivationKind k : kAllActivations) {
    for (double x : {-750.0, -700.0, 700.0, 750.0}) {
      CAPTURE(activation_name(k));
      CHECK(std::isfinite(f(k, x)));
      CHECK(std::isfinite(df(k, x)));
    }
  }
  CHECK(f(ActivationKind::Softplus, 750.0) == doctest::Approx(750.0));
  CHECK(f(ActivationKind::Softplus, -750.0) >= 0.0);
}

TEST_CASE("NaN input is a domain error") {
  const auto spec = ActivationSpec::defaults(ActivationKind::PFTS);
  CHECK_THROWS_AS(act_forward(spec, initial_state(spec), std::numeric_limits<double>::quiet_NaN()),
                  DomainError);
}

TEST_CASE("names") {
  for (ActivationKind k : kAllActivations) CHECK(parse_activation(activation_name(k)) == k);
  CHECK(activation_name(ActivationKind::PFTS) == "pfts");
  CHECK(activation_label(ActivationKind::LReLU) == "LReLU");
  CHECK_FALSE(parse_activation("selu").has_value());
  CHECK_FALSE(parse_activation("ReLU").has_value());
}
