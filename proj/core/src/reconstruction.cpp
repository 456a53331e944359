#include "cadweno/reconstruction.hpp"

#include <utility>

namespace cadweno {

namespace {

const char* default_name(WeightingStrategy::Kind kind) {
  switch (kind) {
    case WeightingStrategy::Kind::kLinear3: return "weno3-linear";
    case WeightingStrategy::Kind::kJs3: return "weno3-js";
    case WeightingStrategy::Kind::kZ3: return "weno3-z";
    case WeightingStrategy::Kind::kCadnn: return "weno3-cadnn";
    case WeightingStrategy::Kind::kLinear5: return "weno5-linear";
    case WeightingStrategy::Kind::kJs5: return "weno5-js";
    case WeightingStrategy::Kind::kM5: return "weno5-m";
  }
  return "unknown";
}

double combine5(const double* f, const Weights5& w) noexcept {
  const double q0 = (2.0 * f[0] - 7.0 * f[1] + 11.0 * f[2]) / 6.0;
  const double q1 = (-f[1] + 5.0 * f[2] + 2.0 * f[3]) / 6.0;
  const double q2 = (2.0 * f[2] + 5.0 * f[3] - f[4]) / 6.0;
  return w[0] * q0 + w[1] * q1 + w[2] * q2;
}

// Interface k sits at x_{i+1/2} with i = k - 1; point i is stored at ghosts + i.
// The minus flux is reconstructed on the mirrored window.
template <class WeightFn>
void sweep3(std::span<const double> fp, std::span<const double> fm, int ghosts, std::span<double> out, WeightFn wf) {
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(ghosts) + k - 1;
    const Stencil3 plus{fp[i - 1], fp[i], fp[i + 1]};
    const Stencil3 minus{fm[i + 2], fm[i + 1], fm[i]};
    const WeightPair wp = wf(plus);
    const WeightPair wm = wf(minus);
    const auto cp = candidate_fluxes(plus);
    const auto cm = candidate_fluxes(minus);
    out[k] = wp.w0 * cp[0] + wp.w1 * cp[1] + wm.w0 * cm[0] + wm.w1 * cm[1];
  }
}

template <class WeightFn>
void sweep5(std::span<const double> fp, std::span<const double> fm, int ghosts, std::span<double> out, WeightFn wf) {
  double mirrored[5];
  for (std::size_t k = 0; k < out.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(ghosts) + k - 1;
    const double* plus = fp.data() + i - 2;
    for (std::size_t m = 0; m < 5; ++m) mirrored[m] = fm[i + 3 - m];
    out[k] = combine5(plus, wf(std::span<const double, 5>(plus, 5))) +
             combine5(mirrored, wf(std::span<const double, 5>(mirrored, 5)));
  }
}

}  // namespace

WeightingStrategy::WeightingStrategy(Kind kind) : kind_(kind), name_(default_name(kind)) {}

WeightingStrategy WeightingStrategy::cadnn(std::shared_ptr<const NetworkParams> params, std::string label) {
  if (!params) {
    throw std::invalid_argument("cadnn weighting requires network parameters");
  }
  WeightingStrategy w(Kind::kCadnn);
  w.params_ = std::move(params);
  w.name_ = std::move(label);
  return w;
}

int WeightingStrategy::order() const noexcept {
  switch (kind_) {
    case Kind::kLinear5:
    case Kind::kJs5:
    case Kind::kM5:
      return 5;
    default:
      return 3;
  }
}

WeightPair WeightingStrategy::weights3(const Stencil3& s) const {
  switch (kind_) {
    case Kind::kLinear3: return {kLinearWeight0, kLinearWeight1};
    case Kind::kJs3: return weights_js(s);
    case Kind::kZ3: return weights_z(s);
    case Kind::kCadnn: return forward(*params_, s);
    default: throw std::logic_error(name_ + " is not a three-point weighting");
  }
}

Weights5 WeightingStrategy::weights5(std::span<const double, 5> s) const {
  switch (kind_) {
    case Kind::kLinear5: return kLinearWeights5;
    case Kind::kJs5: return weights5_js(s);
    case Kind::kM5: return weights5_m(s);
    default: throw std::logic_error(name_ + " is not a five-point weighting");
  }
}

double WeightingStrategy::reconstruct(const double* window) const {
  if (order() == 3) {
    return interface_flux3({window[0], window[1], window[2]}, *this);
  }
  return combine5(window, weights5(std::span<const double, 5>(window, 5)));
}

SplitFluxes lax_friedrichs_split(std::span<const double> u, const std::function<double(double)>& flux,
                                 double alpha) {
  SplitFluxes out;
  out.alpha = alpha;
  out.fplus.resize(u.size());
  out.fminus.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double f = flux(u[i]);
    out.fplus[i] = 0.5 * (f + alpha * u[i]);
    out.fminus[i] = 0.5 * (f - alpha * u[i]);
  }
  return out;
}

std::array<double, 2> candidate_fluxes(const Stencil3& s) noexcept {
  return {-0.5 * s.f0 + 1.5 * s.f1, 0.5 * s.f1 + 0.5 * s.f2};
}

double interface_flux3(const Stencil3& s, const WeightingStrategy& w) {
  const WeightPair omega = w.weights3(s);
  const auto v = candidate_fluxes(s);
  return omega.w0 * v[0] + omega.w1 * v[1];
}

void interface_fluxes(std::span<const double> fplus, std::span<const double> fminus, int ghosts,
                      const WeightingStrategy& w, std::span<double> out) {
  const int need = w.ghost_width();
  const int total = static_cast<int>(fplus.size());
  const int n = total - 2 * ghosts;
  if (ghosts < need) {
    throw DimensionError(w.name() + " needs " + std::to_string(need) + " ghost values per side, got " +
                         std::to_string(ghosts));
  }
  if (n < 1 || fminus.size() != fplus.size()) {
    throw DimensionError("split flux rows have inconsistent or too small sizes");
  }
  if (out.size() != static_cast<std::size_t>(n + 1)) {
    throw DimensionError("interface flux output must have n+1 entries");
  }

  switch (w.kind()) {
    case WeightingStrategy::Kind::kLinear3:
      sweep3(fplus, fminus, ghosts, out, [](const Stencil3&) { return WeightPair{kLinearWeight0, kLinearWeight1}; });
      break;
    case WeightingStrategy::Kind::kJs3:
      sweep3(fplus, fminus, ghosts, out, [](const Stencil3& s) { return weights_js(s); });
      break;
    case WeightingStrategy::Kind::kZ3:
      sweep3(fplus, fminus, ghosts, out, [](const Stencil3& s) { return weights_z(s); });
      break;
    case WeightingStrategy::Kind::kCadnn:
      sweep3(fplus, fminus, ghosts, out, [p = w.params()](const Stencil3& s) { return forward(*p, s); });
      break;
    case WeightingStrategy::Kind::kLinear5:
      sweep5(fplus, fminus, ghosts, out, [](std::span<const double, 5>) { return kLinearWeights5; });
      break;
    case WeightingStrategy::Kind::kJs5:
      sweep5(fplus, fminus, ghosts, out, [](std::span<const double, 5> s) { return weights5_js(s); });
      break;
    case WeightingStrategy::Kind::kM5:
      sweep5(fplus, fminus, ghosts, out, [](std::span<const double, 5> s) { return weights5_m(s); });
      break;
  }
}

std::vector<double> interface_fluxes(std::span<const double> fplus, std::span<const double> fminus,
                                     int ghosts, const WeightingStrategy& w) {
  const int n = static_cast<int>(fplus.size()) - 2 * ghosts;
  std::vector<double> out(static_cast<std::size_t>(std::max(n + 1, 0)));
  interface_fluxes(fplus, fminus, ghosts, w, out);
  return out;
}

std::vector<double> weno_derivative_row(std::span<const double> u_row,
                                        const std::function<double(double)>& flux, double alpha,
                                        const WeightingStrategy& w, double dx, int ghosts) {
  const SplitFluxes split = lax_friedrichs_split(u_row, flux, alpha);
  const std::vector<double> h = interface_fluxes(split.fplus, split.fminus, ghosts, w);
  std::vector<double> out(h.size() - 1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (h[i + 1] - h[i]) / dx;
  return out;
}

}  // namespace cadweno
