#pragma once

// Classical WENO weighting functions and the Delta pre-processing layers
// shared by the reconstruction, the neural weighting function and the trainer.

#include <array>
#include <cmath>
#include <span>

namespace cadweno {

/// Three consecutive point values ordered upwind to downwind.
struct Stencil3 {
  double f0 = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;

  /// Throws std::invalid_argument if any value is NaN or infinite.
  static Stencil3 checked(double f0, double f1, double f2);

  [[nodiscard]] bool is_finite() const noexcept {
    return std::isfinite(f0) && std::isfinite(f1) && std::isfinite(f2);
  }
  [[nodiscard]] Stencil3 flipped() const noexcept { return {f2, f1, f0}; }
  [[nodiscard]] Stencil3 shifted(double c) const noexcept { return {f0 + c, f1 + c, f2 + c}; }
  [[nodiscard]] Stencil3 scaled(double k) const noexcept { return {k * f0, k * f1, k * f2}; }
};

/// Convex pair of substencil weights.
struct WeightPair {
  double w0 = 0.0;
  double w1 = 0.0;

  [[nodiscard]] bool is_valid(double tol = 1e-12) const noexcept {
    return w0 >= 0.0 && w1 >= 0.0 && std::abs(w0 + w1 - 1.0) <= tol;
  }
};

struct DeltaFeatures {
  std::array<double, 4> d{};

  double operator[](std::size_t j) const noexcept { return d[j]; }
};

struct SmoothnessPair {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double tau3 = 0.0;
};

/// Weights of the three candidate fluxes of the fifth-order scheme.
using Weights5 = std::array<double, 3>;

inline constexpr double kLinearWeight0 = 1.0 / 3.0;
inline constexpr double kLinearWeight1 = 2.0 / 3.0;
inline constexpr Weights5 kLinearWeights5 = {0.1, 0.6, 0.3};

inline constexpr double kEpsilonJs = 1e-6;
inline constexpr double kEpsilonZ = 1e-40;
inline constexpr double kEpsilonDelta = 1e-12;
inline constexpr double kEpsilonModifiedDelta = 1e-10;
// Henrick, Aslam & Powers (2005) run the mapped scheme with a much smaller
// epsilon than Jiang-Shu; the mapping restores the order lost at critical points.
inline constexpr double kEpsilonMapped = 1e-40;
inline constexpr double kSmoothnessGaugeRate = 6.0;

SmoothnessPair beta_indicators(const Stencil3& s) noexcept;

WeightPair weights_js(const Stencil3& s, double eps = kEpsilonJs) noexcept;
WeightPair weights_z(const Stencil3& s, double eps = kEpsilonZ) noexcept;

/// Original Delta layer: four absolute differences normalized by
/// max(|f0-f1|, |f1-f2|, 1e-12).
DeltaFeatures delta_layer(const Stencil3& s) noexcept;

/// Modified Delta layer: the two first differences are clamped from below by
/// 1e-10 before normalizing, so max(d1, d2) == 1 for every stencil.
DeltaFeatures modified_delta_layer(const Stencil3& s) noexcept;

/// Weights a symmetric weighting function must return for the reversed
/// stencil, given the weights of the original one.
WeightPair flip_weights(const WeightPair& w) noexcept;

/// exp(-6 r), r = max(d1/d2, d2/d1) of the modified Delta features.
double smoothness_gauge(const Stencil3& s) noexcept;

/// Jiang-Shu (1996) fifth-order weights on (f_{i-2}, ..., f_{i+2}).
Weights5 weights5_js(std::span<const double, 5> s, double eps = kEpsilonJs) noexcept;

/// Henrick et al. (2005) mapped weights: JS weights pushed through
/// g_k(w) = w (d_k + d_k^2 - 3 d_k w + w^2) / (d_k^2 + w (1 - 2 d_k)).
Weights5 weights5_m(std::span<const double, 5> s, double eps = kEpsilonMapped) noexcept;

}  // namespace cadweno
