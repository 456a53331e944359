#pragma once

// Lax-Friedrichs flux splitting and conservative WENO interface fluxes.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadweno/network.hpp"
#include "cadweno/weno_weights.hpp"

namespace cadweno {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform "stencil -> weights" selector over the classical and learned schemes.
class WeightingStrategy {
 public:
  enum class Kind { kLinear3, kJs3, kZ3, kCadnn, kLinear5, kJs5, kM5 };

  static WeightingStrategy linear3() { return WeightingStrategy(Kind::kLinear3); }
  static WeightingStrategy js3() { return WeightingStrategy(Kind::kJs3); }
  static WeightingStrategy z3() { return WeightingStrategy(Kind::kZ3); }
  static WeightingStrategy cadnn(std::shared_ptr<const NetworkParams> params, std::string label = "weno3-cadnn");
  static WeightingStrategy linear5() { return WeightingStrategy(Kind::kLinear5); }
  static WeightingStrategy js5() { return WeightingStrategy(Kind::kJs5); }
  static WeightingStrategy m5() { return WeightingStrategy(Kind::kM5); }

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] int order() const noexcept;
  /// Ghost values needed on each side of a row.
  [[nodiscard]] int ghost_width() const noexcept { return order() == 3 ? 2 : 3; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const NetworkParams* params() const noexcept { return params_.get(); }

  /// Only valid for third-order strategies.
  [[nodiscard]] WeightPair weights3(const Stencil3& s) const;
  /// Only valid for fifth-order strategies.
  [[nodiscard]] Weights5 weights5(std::span<const double, 5> s) const;

  /// Interface value from an upwind-ordered window of order() point values.
  [[nodiscard]] double reconstruct(const double* window) const;

 private:
  explicit WeightingStrategy(Kind kind);

  Kind kind_;
  std::string name_;
  std::shared_ptr<const NetworkParams> params_;
};

struct SplitFluxes {
  std::vector<double> fplus;
  std::vector<double> fminus;
  double alpha = 0.0;
};

/// f^{+-} = (f(u) +- alpha u) / 2 pointwise.
SplitFluxes lax_friedrichs_split(std::span<const double> u, const std::function<double(double)>& flux,
                                 double alpha);

/// Candidate fluxes -f0/2 + 3 f1/2 and f1/2 + f2/2 at the interface right of f1.
std::array<double, 2> candidate_fluxes(const Stencil3& s) noexcept;

double interface_flux3(const Stencil3& s, const WeightingStrategy& w);

/// Numerical fluxes at the n+1 interfaces of a row with n interior points and
/// `ghosts` extra values on each side. out[k] is the flux at x_{k-1/2}.
void interface_fluxes(std::span<const double> fplus, std::span<const double> fminus, int ghosts,
                      const WeightingStrategy& w, std::span<double> out);
std::vector<double> interface_fluxes(std::span<const double> fplus, std::span<const double> fminus,
                                     int ghosts, const WeightingStrategy& w);

/// -(dh/dx) is the semi-discrete tendency; this returns (h_{i+1/2} - h_{i-1/2}) / dx
/// for every interior point of a row carrying `ghosts` ghost values per side.
std::vector<double> weno_derivative_row(std::span<const double> u_row,
                                        const std::function<double(double)>& flux, double alpha,
                                        const WeightingStrategy& w, double dx, int ghosts);

}  // namespace cadweno
