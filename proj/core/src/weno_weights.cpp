#include "cadweno/weno_weights.hpp"

#include <algorithm>
#include <stdexcept>

namespace cadweno {

namespace {

double sqr(double x) noexcept { return x * x; }

WeightPair normalize(double a0, double a1) noexcept {
  const double inv = 1.0 / (a0 + a1);
  return {a0 * inv, a1 * inv};
}

Weights5 normalize(const std::array<double, 3>& a) noexcept {
  const double inv = 1.0 / (a[0] + a[1] + a[2]);
  return {a[0] * inv, a[1] * inv, a[2] * inv};
}

}  // namespace

Stencil3 Stencil3::checked(double f0, double f1, double f2) {
  Stencil3 s{f0, f1, f2};
  if (!s.is_finite()) {
    throw std::invalid_argument("Stencil3: non-finite point value");
  }
  return s;
}

SmoothnessPair beta_indicators(const Stencil3& s) noexcept {
  SmoothnessPair b;
  b.beta0 = sqr(s.f0 - s.f1);
  b.beta1 = sqr(s.f1 - s.f2);
  b.tau3 = std::abs(b.beta0 - b.beta1);
  return b;
}

WeightPair weights_js(const Stencil3& s, double eps) noexcept {
  const SmoothnessPair b = beta_indicators(s);
  // d_k / (beta_k + eps)^2 scaled by the product of both denominators
  const double a0 = kLinearWeight0 * sqr(b.beta1 + eps);
  const double a1 = kLinearWeight1 * sqr(b.beta0 + eps);
  return normalize(a0, a1);
}

WeightPair weights_z(const Stencil3& s, double eps) noexcept {
  const SmoothnessPair b = beta_indicators(s);
  const double a0 = kLinearWeight0 * (1.0 + sqr(b.tau3 / (b.beta0 + eps)));
  const double a1 = kLinearWeight1 * (1.0 + sqr(b.tau3 / (b.beta1 + eps)));
  return normalize(a0, a1);
}

DeltaFeatures delta_layer(const Stencil3& s) noexcept {
  const double d1 = std::abs(s.f0 - s.f1);
  const double d2 = std::abs(s.f1 - s.f2);
  const double d3 = std::abs(s.f0 - s.f2);
  const double d4 = std::abs(s.f0 - 2.0 * s.f1 + s.f2);
  const double scale = std::max({d1, d2, kEpsilonDelta});
  return {{d1 / scale, d2 / scale, d3 / scale, d4 / scale}};
}

DeltaFeatures modified_delta_layer(const Stencil3& s) noexcept {
  const double d1 = std::max(std::abs(s.f0 - s.f1), kEpsilonModifiedDelta);
  const double d2 = std::max(std::abs(s.f1 - s.f2), kEpsilonModifiedDelta);
  const double d3 = std::abs(s.f0 - s.f2);
  const double d4 = std::abs(s.f0 - 2.0 * s.f1 + s.f2);
  const double scale = std::max(d1, d2);
  return {{d1 / scale, d2 / scale, d3 / scale, d4 / scale}};
}

WeightPair flip_weights(const WeightPair& w) noexcept {
  const double denom = std::max(4.0 * w.w0 + w.w1, kEpsilonModifiedDelta);
  return {w.w1 / denom, 4.0 * w.w0 / denom};
}

double smoothness_gauge(const Stencil3& s) noexcept {
  const DeltaFeatures d = modified_delta_layer(s);
  const double r = std::max(d[0] / d[1], d[1] / d[0]);
  return std::exp(-kSmoothnessGaugeRate * r);
}

Weights5 weights5_js(std::span<const double, 5> s, double eps) noexcept {
  // Jiang & Shu, J. Comput. Phys. 126 (1996) 202-228.
  const double b0 = 13.0 / 12.0 * sqr(s[0] - 2.0 * s[1] + s[2]) +
                    0.25 * sqr(s[0] - 4.0 * s[1] + 3.0 * s[2]);
  const double b1 = 13.0 / 12.0 * sqr(s[1] - 2.0 * s[2] + s[3]) + 0.25 * sqr(s[1] - s[3]);
  const double b2 = 13.0 / 12.0 * sqr(s[2] - 2.0 * s[3] + s[4]) +
                    0.25 * sqr(3.0 * s[2] - 4.0 * s[3] + s[4]);
  return normalize({kLinearWeights5[0] / sqr(eps + b0), kLinearWeights5[1] / sqr(eps + b1),
                    kLinearWeights5[2] / sqr(eps + b2)});
}

Weights5 weights5_m(std::span<const double, 5> s, double eps) noexcept {
  // Henrick, Aslam & Powers, J. Comput. Phys. 207 (2005) 542-567.
  const Weights5 js = weights5_js(s, eps);
  std::array<double, 3> mapped{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double d = kLinearWeights5[k];
    const double w = js[k];
    mapped[k] = w * (d + d * d - 3.0 * d * w + w * w) / (d * d + w * (1.0 - 2.0 * d));
  }
  return normalize(mapped);
}

}  // namespace cadweno
