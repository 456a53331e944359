#pragma once

// Supervised training of the neural weighting function on the
// conservative-approximation-to-derivative dataset.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadweno/network.hpp"
#include "cadweno/reconstruction.hpp"

namespace cadweno {

inline constexpr double kTrainingSpacing = 0.01;

/// Four point values (v_{i-2}, v_{i-1}, v_i, v_{i+1}).
struct Stencil4 {
  std::array<double, 4> v{};

  [[nodiscard]] Stencil3 left() const noexcept { return {v[0], v[1], v[2]}; }
  [[nodiscard]] Stencil3 right() const noexcept { return {v[1], v[2], v[3]}; }
};

enum class SampleKind { kSmooth, kJump };

enum class FunctionFamily { kCubic, kTanhSin, kPiecewiseConstant, kLinearJump };

struct Sample {
  Stencil4 stencil;
  double label = 0.0;
  SampleKind kind = SampleKind::kSmooth;
  FunctionFamily family = FunctionFamily::kCubic;
};

struct Dataset {
  std::vector<Sample> samples;
  std::map<FunctionFamily, std::size_t> counts;
  std::uint64_t seed = 0;
};

/// Where the discontinuity of a jump stencil sits relative to the labelled point x_i.
/// kOneSided: between x_i and x_{i+1}; the label is the slope on the labelled side.
/// kAcross: between x_{i-1} and x_i; the label is the jump height over dx.
enum class JumpPlacement { kOneSided, kAcross };

/// Sample counts per family and stencils drawn from each smooth function.
struct DatasetLayout {
  std::size_t cubic = 3920;
  std::size_t tanh_sin = 7880;
  std::size_t piecewise_constant = 8000;
  std::size_t linear_jump = 4000;
  std::size_t stencils_per_smooth_function = 20;
  JumpPlacement jump_placement = JumpPlacement::kOneSided;
};

Dataset generate_dataset(std::uint64_t seed, const DatasetLayout& layout = {});

/// Exact derivative label at the labelled point of a smooth stencil.
double smooth_label(const std::function<double(double)>& derivative, double x);

/// (v_i - v_{i-1}) / dx, the rate of change between the two values next to x_i.
double jump_label(const Stencil4& s, double dx = kTrainingSpacing) noexcept;

double predict_derivative(const NetworkParams& p, const Stencil4& s, double dx = kTrainingSpacing);

struct Hyperparams {
  double c = 0.0;
  double d = 0.0;
  double lr = 1e-4;
  double weight_decay = 0.01;
  int batch_size = 200;
  int epochs = 500;
  std::uint64_t seed = 0;
};

struct LossBreakdown {
  double l_cad = 0.0;
  double l_sym = 0.0;
  double l_ln = 0.0;
  double total = 0.0;
};

double loss_cad(const NetworkParams& p, std::span<const Sample> batch);
double loss_sym(const NetworkParams& p, std::span<const Sample> batch);
double loss_ln(const NetworkParams& p, std::span<const Sample> batch);
LossBreakdown total_loss(const NetworkParams& p, std::span<const Sample> batch, const Hyperparams& h);

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LossAndGradient {
  LossBreakdown loss;
  ParamVector grad{};
};

/// Reverse-mode gradient of total_loss with respect to every network parameter.
/// Throws TrainingError naming the loss term when a non-finite value appears.
LossAndGradient gradient(const NetworkParams& p, std::span<const Sample> batch, const Hyperparams& h);

struct AdamState {
  ParamVector m{};
  ParamVector v{};
  std::int64_t step = 0;
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

/// One AdamW update with decoupled weight decay.
void adamw_step(ParamVector& params, const ParamVector& grad, AdamState& state, double lr,
                double weight_decay);

NetworkParams initialize_params(std::uint64_t seed);

struct EpochRecord {
  int epoch = 0;
  LossBreakdown mean;
};

struct TrainingResult {
  NetworkParams params;       // checkpoint with the lowest epoch-mean total loss
  NetworkParams final_params;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainingResult train(const Hyperparams& h, const Dataset& dataset, const EpochCallback& on_epoch = {});

/// Configuration for the `train` subcommand. key = value lines, '#' comments.
struct TrainingConfig {
  Hyperparams hyper;
  std::uint64_t dataset_seed = 0;
  DatasetLayout layout;
  std::filesystem::path output = "weights.json";
  std::filesystem::path loss_csv = "loss_history.csv";
};

TrainingConfig parse_training_config(const std::filesystem::path& path);
TrainingConfig parse_training_config_text(const std::string& text);

void write_loss_history(const std::vector<EpochRecord>& history, const std::filesystem::path& path);

}  // namespace cadweno
