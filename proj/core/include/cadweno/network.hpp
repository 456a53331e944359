#pragma once

// Feedforward WENO weighting function:
//   stencil -> modified Delta layer (4) -> 16 GELU -> 16 GELU -> 2 softmax.

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "cadweno/weno_weights.hpp"

namespace cadweno {

inline constexpr int kInputFeatures = 4;
inline constexpr int kHiddenWidth = 16;
inline constexpr int kOutputWidth = 2;

// Parameters are stored in one flat vector: layer by layer, row-major weight
// matrix (out x in) followed by the bias.
inline constexpr int kW1Offset = 0;
inline constexpr int kB1Offset = kW1Offset + kHiddenWidth * kInputFeatures;
inline constexpr int kW2Offset = kB1Offset + kHiddenWidth;
inline constexpr int kB2Offset = kW2Offset + kHiddenWidth * kHiddenWidth;
inline constexpr int kW3Offset = kB2Offset + kHiddenWidth;
inline constexpr int kB3Offset = kW3Offset + kOutputWidth * kHiddenWidth;
inline constexpr int kParameterCount = kB3Offset + kOutputWidth;

inline constexpr int kWeightFormatVersion = 1;

using ParamVector = std::array<double, kParameterCount>;

struct NetworkMetadata {
  double hyper_c = 0.0;
  double hyper_d = 0.0;
  std::uint64_t rng_seed = 0;
  double training_loss = 0.0;
  int format_version = kWeightFormatVersion;
};

struct NetworkParams {
  ParamVector values{};
  NetworkMetadata metadata;

  double& w1(int out, int in) { return values[kW1Offset + out * kInputFeatures + in]; }
  double w1(int out, int in) const { return values[kW1Offset + out * kInputFeatures + in]; }
  double& b1(int out) { return values[kB1Offset + out]; }
  double b1(int out) const { return values[kB1Offset + out]; }
  double& w2(int out, int in) { return values[kW2Offset + out * kHiddenWidth + in]; }
  double w2(int out, int in) const { return values[kW2Offset + out * kHiddenWidth + in]; }
  double& b2(int out) { return values[kB2Offset + out]; }
  double b2(int out) const { return values[kB2Offset + out]; }
  double& w3(int out, int in) { return values[kW3Offset + out * kHiddenWidth + in]; }
  double w3(int out, int in) const { return values[kW3Offset + out * kHiddenWidth + in]; }
  double& b3(int out) { return values[kB3Offset + out]; }
  double b3(int out) const { return values[kB3Offset + out]; }

  [[nodiscard]] bool all_finite() const noexcept;
};

/// Activations of one forward pass, kept for backpropagation.
struct ForwardTrace {
  DeltaFeatures delta;
  std::array<double, kHiddenWidth> pre1{};
  std::array<double, kHiddenWidth> act1{};
  std::array<double, kHiddenWidth> pre2{};
  std::array<double, kHiddenWidth> act2{};
  std::array<double, kOutputWidth> logits{};
  std::array<double, kOutputWidth> log_weights{};
  WeightPair output;
};

class NetworkEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double gelu(double x) noexcept;
double gelu_derivative(double x) noexcept;

/// Throws NetworkEvaluationError naming the layer if an activation is not finite.
WeightPair forward(const NetworkParams& p, const Stencil3& s);
ForwardTrace forward_trace(const NetworkParams& p, const Stencil3& s);

// Weight file errors. Each failure mode has its own type.
class WeightFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MalformedWeightFileError : public WeightFileError {
 public:
  using WeightFileError::WeightFileError;
};
class WeightDimensionError : public WeightFileError {
 public:
  using WeightFileError::WeightFileError;
};
class WeightVersionError : public WeightFileError {
 public:
  using WeightFileError::WeightFileError;
};

std::string params_to_json(const NetworkParams& p);
NetworkParams params_from_json(const std::string& text);
void save_params(const NetworkParams& p, const std::filesystem::path& path);
NetworkParams load_params(const std::filesystem::path& path);

}  // namespace cadweno
