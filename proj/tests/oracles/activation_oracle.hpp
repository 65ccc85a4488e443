#pragma once

// Generated by activation_oracle.py (mpmath, 50 digits). Do not edit.

#include <array>
#include <string_view>

namespace afbench::oracle {

struct ActivationRow {
  std::string_view name;
  std::array<double, 5> values;
};

inline constexpr std::array<double, 5> kPoints = {-2.0, -1.0, 0.0, 1.0, 2.0};

inline constexpr std::array<ActivationRow, 10> kActivationTable = {{
    {"relu", {0.0, 0.0, 0.0, 1.0000000000000000000, 2.0000000000000000000}},
    {"swish", {-0.23840584404423511188, -0.26894142136999512075, 0.0, 0.73105857863000487925, 1.7615941559557648881}},
    {"tanh", {-0.96402758007581688395, -0.76159415595576488812, 0.0, 0.76159415595576488812, 0.96402758007581688395}},
    {"lrelu", {-0.020000000000000000000, -0.010000000000000000000, 0.0, 1.0000000000000000000, 2.0000000000000000000}},
    {"prelu", {-0.50000000000000000000, -0.25000000000000000000, 0.0, 1.0000000000000000000, 2.0000000000000000000}},
    {"softplus", {0.12692801104297249644, 0.31326168751822283405, 0.69314718055994530942, 1.3132616875182228340, 2.1269280110429724964}},
    {"elu", {-0.86466471676338730811, -0.63212055882855767840, 0.0, 1.0000000000000000000, 2.0000000000000000000}},
    {"frelu", {-0.39800000000000000000, -0.39800000000000000000, -0.39800000000000000000, 0.60200000000000000000, 1.6020000000000000000}},
    {"fts", {-0.20000000000000000000, -0.20000000000000000000, -0.20000000000000000000, 0.53105857863000487925, 1.5615941559557648881}},
    {"pfts", {-0.20000000000000000000, -0.20000000000000000000, -0.20000000000000000000, 0.53105857863000487925, 1.5615941559557648881}},
}};

inline constexpr double kPftsAt1 = 0.53105857863000487925;
inline constexpr double kFtsAt2 = 1.5615941559557648881;
inline constexpr double kPftsDerivAt2 = 1.0907842487848954788;
inline constexpr double kEluAtMinus1 = -0.63212055882855767840;
inline constexpr double kSoftplusAt0 = 0.69314718055994530942;
inline constexpr double kTanhAt1 = 0.76159415595576488812;
inline constexpr double kXavierLimit1024 = 0.054126587736527415423;
inline constexpr double kLossLogits210 = 0.40760596444438030448;
inline constexpr double kReluNormalMean = 0.39894228040143267794;
inline constexpr double kPftsNormalMean = 0.10278162227166985760;

}  // namespace afbench::oracle
