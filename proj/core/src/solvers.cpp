#include "cadweno/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cadweno {

namespace {

std::string cell_name(int i, int j) {
  std::ostringstream out;
  out << "cell (" << i;
  if (j >= 0) out << ", " << j;
  out << ")";
  return out.str();
}

std::vector<double> primitive_to_state(const std::vector<double>& w, const EosParams& eos) {
  switch (w.size()) {
    case 1: return w;
    case 3: {
      const auto q = prim_to_cons(std::array<double, 3>{w[0], w[1], w[2]}, eos);
      return {q.begin(), q.end()};
    }
    case 4: {
      const auto q = prim_to_cons(std::array<double, 4>{w[0], w[1], w[2], w[3]}, eos);
      return {q.begin(), q.end()};
    }
    default: throw std::invalid_argument("Dirichlet state must have 1, 3 or 4 components");
  }
}

// Scratch buffers for one grid line (row or column) including ghosts.
struct LineBuffers {
  int len = 0;
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> f;
  std::vector<double> fplus;
  std::vector<double> fminus;
  std::vector<double> h;

  void resize(int ncomp, int n) {
    len = n;
    q.resize(ncomp);
    f.resize(ncomp);
    for (int c = 0; c < ncomp; ++c) {
      q[c].resize(n);
      f[c].resize(n);
    }
    fplus.resize(n);
    fminus.resize(n);
  }
};

// Physical flux along direction `normal` (1 = x, 2 = y momentum index) for every
// entry of the line. `pos` maps a line entry to a cell index for error messages.
template <class Pos>
void physical_flux(LineBuffers& b, const SolverSetup& setup, int normal, Pos pos) {
  const int len = b.len;
  if (setup.model == ModelKind::kAdvection) {
    for (int k = 0; k < len; ++k) b.f[0][k] = setup.advection_speed * b.q[0][k];
    return;
  }
  const double gm1 = setup.eos.gamma - 1.0;
  const int ncomp = static_cast<int>(b.q.size());
  for (int k = 0; k < len; ++k) {
    const double rho = b.q[0][k];
    const double energy = b.q[ncomp - 1][k];
    double kinetic = 0.0;
    for (int c = 1; c < ncomp - 1; ++c) kinetic += b.q[c][k] * b.q[c][k];
    kinetic *= 0.5 / rho;
    const double p = gm1 * (energy - kinetic);
    if (!(rho > 0.0) || !(p > 0.0)) {
      const auto [i, j] = pos(k);
      throw PositivityError("non-positive density or pressure (rho=" + std::to_string(rho) +
                                ", p=" + std::to_string(p) + ") at " + cell_name(i, j),
                            i, j);
    }
    const double un = b.q[normal][k] / rho;
    b.f[0][k] = b.q[normal][k];
    for (int c = 1; c < ncomp - 1; ++c) b.f[c][k] = b.q[c][k] * un;
    b.f[normal][k] += p;
    b.f[ncomp - 1][k] = un * (energy + p);
  }
}

// Subtracts the flux difference of every component from the tendency;
// target(c, k) addresses the k-th physical cell of the line.
template <class Target>
void component_divergence(LineBuffers& b, int ghosts, double alpha, double spacing, const WeightingStrategy& w,
                          Target target) {
  const int ncomp = static_cast<int>(b.q.size());
  const int len = b.len;
  const int n = len - 2 * ghosts;
  b.h.resize(static_cast<std::size_t>(n + 1));
  const std::span<const double> fplus(b.fplus.data(), static_cast<std::size_t>(len));
  const std::span<const double> fminus(b.fminus.data(), static_cast<std::size_t>(len));
  const double inv = 1.0 / spacing;
  for (int c = 0; c < ncomp; ++c) {
    const double* q = b.q[c].data();
    const double* f = b.f[c].data();
    for (int k = 0; k < len; ++k) {
      b.fplus[k] = 0.5 * (f[k] + alpha * q[k]);
      b.fminus[k] = 0.5 * (f[k] - alpha * q[k]);
    }
    interface_fluxes(fplus, fminus, ghosts, w, b.h);
    for (int k = 0; k < n; ++k) target(c, k) -= (b.h[k + 1] - b.h[k]) * inv;
  }
}

// Same as component_divergence with the split fluxes reconstructed in the
// characteristic fields of each interface.
template <class Target>
void characteristic_divergence(LineBuffers& b, int ghosts, double alpha, double spacing, const WeightingStrategy& w,
                               int normal, double gamma, Target target) {
  const int nc = static_cast<int>(b.q.size());
  const int n = b.len - 2 * ghosts;
  const int half = (w.order() - 1) / 2;
  const int width = 2 * half + 2;
  b.h.resize(static_cast<std::size_t>(nc) * (n + 1));
  std::array<double, 4> qa{};
  std::array<double, 4> qb{};
  std::array<double, 4 * 8> plus{};   // [field][window entry]
  std::array<double, 4 * 8> minus{};
  std::array<double, 8> window{};
  for (int m = 0; m <= n; ++m) {
    const int a = ghosts + m - 1;  // interface between line entries a and a + 1
    for (int c = 0; c < nc; ++c) {
      qa[c] = b.q[c][a];
      qb[c] = b.q[c][a + 1];
    }
    const EigenBasis e = roe_eigenbasis({qa.data(), static_cast<std::size_t>(nc)},
                                        {qb.data(), static_cast<std::size_t>(nc)}, normal, gamma);
    for (int k = 0; k < width; ++k) {
      const int j = a - half + k;
      for (int s = 0; s < nc; ++s) {
        double qs = 0.0;
        double fs = 0.0;
        for (int c = 0; c < nc; ++c) {
          qs += e.left[s * nc + c] * b.q[c][j];
          fs += e.left[s * nc + c] * b.f[c][j];
        }
        plus[s * 8 + k] = 0.5 * (fs + alpha * qs);
        minus[s * 8 + k] = 0.5 * (fs - alpha * qs);
      }
    }
    std::array<double, 4> hs{};
    for (int s = 0; s < nc; ++s) {
      const double up = w.reconstruct(&plus[s * 8]);
      for (int k = 0; k < width - 1; ++k) window[k] = minus[s * 8 + width - 1 - k];
      hs[s] = up + w.reconstruct(window.data());
    }
    for (int c = 0; c < nc; ++c) {
      double h = 0.0;
      for (int s = 0; s < nc; ++s) h += e.right[c * nc + s] * hs[s];
      b.h[static_cast<std::size_t>(c) * (n + 1) + m] = h;
    }
  }
  const double inv = 1.0 / spacing;
  for (int c = 0; c < nc; ++c) {
    const double* h = b.h.data() + static_cast<std::size_t>(c) * (n + 1);
    for (int k = 0; k < n; ++k) target(c, k) -= (h[k + 1] - h[k]) * inv;
  }
}

template <class Target>
void line_divergence(LineBuffers& b, int ghosts, double alpha, double spacing, const WeightingStrategy& w,
                     const SolverSetup& setup, int normal, Target target) {
  if (setup.model == ModelKind::kEuler && setup.variables == ReconstructionVariables::kCharacteristic) {
    characteristic_divergence(b, ghosts, alpha, spacing, w, normal, setup.eos.gamma, target);
  } else {
    component_divergence(b, ghosts, alpha, spacing, w, target);
  }
}

struct StepCells {
  int i_corner;  // first solid column
  int j_top;     // first fluid row above the step
};

StepCells step_cells(const ConservedGrid& g, const StepGeometry& s) {
  StepCells out{g.nx(), 0};
  for (int i = 0; i < g.nx(); ++i) {
    if (g.x(i) > s.x_corner) {
      out.i_corner = i;
      break;
    }
  }
  for (int j = 0; j < g.ny(); ++j) {
    if (g.y(j) > g.y_min() + s.height) {
      out.j_top = j;
      break;
    }
  }
  return out;
}

int normal_index_x(const ConservedGrid& g) { return g.ncomp() > 1 ? 1 : -1; }
int normal_index_y(const ConservedGrid& g) { return g.ncomp() > 1 ? 2 : -1; }

}  // namespace

std::array<double, 3> prim_to_cons(const std::array<double, 3>& w, const EosParams& eos) noexcept {
  const double rho = w[0];
  return {rho, rho * w[1], w[2] / (eos.gamma - 1.0) + 0.5 * rho * w[1] * w[1]};
}

std::array<double, 4> prim_to_cons(const std::array<double, 4>& w, const EosParams& eos) noexcept {
  const double rho = w[0];
  return {rho, rho * w[1], rho * w[2], w[3] / (eos.gamma - 1.0) + 0.5 * rho * (w[1] * w[1] + w[2] * w[2])};
}

std::array<double, 3> cons_to_prim(const std::array<double, 3>& q, const EosParams& eos, int i) {
  const double rho = q[0];
  if (!(rho > 0.0)) {
    throw PositivityError("non-positive density at " + cell_name(i, -1), i, -1);
  }
  const double u = q[1] / rho;
  const double p = (eos.gamma - 1.0) * (q[2] - 0.5 * rho * u * u);
  if (!(p > 0.0)) {
    throw PositivityError("non-positive pressure at " + cell_name(i, -1), i, -1);
  }
  return {rho, u, p};
}

std::array<double, 4> cons_to_prim(const std::array<double, 4>& q, const EosParams& eos, int i, int j) {
  const double rho = q[0];
  if (!(rho > 0.0)) {
    throw PositivityError("non-positive density at " + cell_name(i, j), i, j);
  }
  const double u = q[1] / rho;
  const double v = q[2] / rho;
  const double p = (eos.gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
  if (!(p > 0.0)) {
    throw PositivityError("non-positive pressure at " + cell_name(i, j), i, j);
  }
  return {rho, u, v, p};
}

ConservedGrid::ConservedGrid(int ncomp, int nx, int ny, int ghosts, double x_min, double x_max, double y_min,
                             double y_max)
    : ncomp_(ncomp),
      nx_(nx),
      ny_(ny),
      g_(ghosts),
      gy_(ny > 1 ? ghosts : 0),
      x_min_(x_min),
      x_max_(x_max),
      y_min_(y_min),
      y_max_(y_max) {
  if (ncomp < 1 || nx < 1 || ny < 1 || ghosts < 0 || !(x_max > x_min) || !(y_max > y_min)) {
    throw std::invalid_argument("ConservedGrid: invalid shape or bounds");
  }
  dx_ = (x_max - x_min) / nx;
  dy_ = ny > 1 ? (y_max - y_min) / ny : 1.0;
  stride_ = static_cast<std::size_t>(nx + 2 * g_);
  comp_size_ = stride_ * static_cast<std::size_t>(ny + 2 * gy_);
  data_.assign(comp_size_ * static_cast<std::size_t>(ncomp), 0.0);
}

void ConservedGrid::set_solid(int i, int j, bool solid) {
  if (solid_.empty()) solid_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
  solid_[static_cast<std::size_t>(j) * nx_ + i] = solid ? 1 : 0;
}

std::vector<double> ConservedGrid::interior(int c) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(nx_) * ny_);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (!is_solid(i, j)) out.push_back(at(c, i, j));
    }
  }
  return out;
}

std::array<double, 4> dmr_post_shock() noexcept {
  const double theta = std::numbers::pi / 6.0;
  return {8.0, 8.25 * std::cos(theta), -8.25 * std::sin(theta), 116.5};
}

std::array<double, 4> dmr_pre_shock() noexcept { return {1.4, 0.0, 0.0, 1.0}; }

double dmr_shock_foot(double y, double t) noexcept {
  return 1.0 / 6.0 + (y + 20.0 * t) / std::numbers::sqrt3;
}

void fill_ghosts(ConservedGrid& grid, const SolverSetup& setup, double t) {
  const int g = grid.ghosts();
  const int nx = grid.nx();
  const int ny = grid.ny();
  const int nc = grid.ncomp();

  auto copy_cell = [&](int di, int dj, int si, int sj, int flip) {
    for (int c = 0; c < nc; ++c) {
      const double v = grid.at(c, si, sj);
      grid.at(c, di, dj) = (c == flip) ? -v : v;
    }
  };
  auto set_state = [&](int di, int dj, const std::vector<double>& q) {
    for (int c = 0; c < nc; ++c) grid.at(c, di, dj) = q[c];
  };


  // x sides
  for (int side = 0; side < 2; ++side) {
    const SideCondition& cond = side == 0 ? setup.bc.left : setup.bc.right;
    std::vector<double> fixed;
    if (const auto* d = std::get_if<Dirichlet>(&cond)) fixed = primitive_to_state(d->primitive, setup.eos);
    for (int j = 0; j < ny; ++j) {
      for (int k = 1; k <= g; ++k) {
        const int ghost = side == 0 ? -k : nx - 1 + k;
        if (std::holds_alternative<Periodic>(cond)) {
          copy_cell(ghost, j, side == 0 ? nx - k : k - 1, j, -1);
        } else if (std::holds_alternative<Transmissive>(cond)) {
          copy_cell(ghost, j, side == 0 ? 0 : nx - 1, j, -1);
        } else if (std::holds_alternative<Reflective>(cond)) {
          copy_cell(ghost, j, side == 0 ? k - 1 : nx - k, j, normal_index_x(grid));
        } else if (!fixed.empty()) {
          set_state(ghost, j, fixed);
        } else {
          throw std::invalid_argument("boundary condition not valid on an x side");
        }
      }
    }
  }

  if (grid.dimension() == 1) return;

  std::vector<double> post;
  std::vector<double> pre;
  if (std::holds_alternative<DmrTop>(setup.bc.top) || std::holds_alternative<DmrBottom>(setup.bc.bottom)) {
    const auto post_w = dmr_post_shock();
    const auto pre_w = dmr_pre_shock();
    post = primitive_to_state({post_w.begin(), post_w.end()}, setup.eos);
    pre = primitive_to_state({pre_w.begin(), pre_w.end()}, setup.eos);
  }

  // y sides
  for (int side = 0; side < 2; ++side) {
    const SideCondition& cond = side == 0 ? setup.bc.bottom : setup.bc.top;
    std::vector<double> fixed;
    if (const auto* d = std::get_if<Dirichlet>(&cond)) fixed = primitive_to_state(d->primitive, setup.eos);
    for (int i = 0; i < nx; ++i) {
      for (int k = 1; k <= g; ++k) {
        const int ghost = side == 0 ? -k : ny - 1 + k;
        const int mirror = side == 0 ? k - 1 : ny - k;
        if (std::holds_alternative<Periodic>(cond)) {
          copy_cell(i, ghost, i, side == 0 ? ny - k : k - 1, -1);
        } else if (std::holds_alternative<Transmissive>(cond)) {
          copy_cell(i, ghost, i, side == 0 ? 0 : ny - 1, -1);
        } else if (std::holds_alternative<Reflective>(cond)) {
          copy_cell(i, ghost, i, mirror, normal_index_y(grid));
        } else if (!fixed.empty()) {
          set_state(i, ghost, fixed);
        } else if (std::holds_alternative<DmrTop>(cond)) {
          set_state(i, ghost, grid.x(i) < dmr_shock_foot(grid.y_max(), t) ? post : pre);
        } else if (std::holds_alternative<DmrBottom>(cond)) {
          if (grid.x(i) < 1.0 / 6.0) {
            set_state(i, ghost, post);
          } else {
            copy_cell(i, ghost, i, mirror, normal_index_y(grid));
          }
        } else {
          throw std::invalid_argument("boundary condition not valid on a y side");
        }
      }
    }
  }
}

WaveSpeeds max_wave_speed(const ConservedGrid& grid, const SolverSetup& setup) {
  if (setup.model == ModelKind::kAdvection) {
    return {std::abs(setup.advection_speed), 0.0};
  }
  WaveSpeeds s;
  const double gamma = setup.eos.gamma;
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      if (grid.is_solid(i, j)) continue;
      if (grid.dimension() == 1) {
        const auto w = cons_to_prim(std::array<double, 3>{grid.at(0, i), grid.at(1, i), grid.at(2, i)},
                                    setup.eos, i);
        const double c = std::sqrt(gamma * w[2] / w[0]);
        s.x = std::max(s.x, std::abs(w[1]) + c);
      } else {
        const auto w = cons_to_prim(
            std::array<double, 4>{grid.at(0, i, j), grid.at(1, i, j), grid.at(2, i, j), grid.at(3, i, j)},
            setup.eos, i, j);
        const double c = std::sqrt(gamma * w[3] / w[0]);
        s.x = std::max(s.x, std::abs(w[1]) + c);
        s.y = std::max(s.y, std::abs(w[2]) + c);
      }
    }
  }
  return s;
}

EigenBasis roe_eigenbasis(std::span<const double> qa, std::span<const double> qb, int normal, double gamma) {
  const int nc = static_cast<int>(qa.size());
  if (nc != 3 && nc != 4) throw DimensionError("eigenbasis needs 3 or 4 components");
  if (qb.size() != qa.size()) throw DimensionError("eigenbasis states differ in size");
  if (normal < 1 || normal > nc - 2) throw std::invalid_argument("bad normal direction");
  const double gm1 = gamma - 1.0;
  auto enthalpy = [&](std::span<const double> q) {
    double kinetic = 0.0;
    for (int c = 1; c < nc - 1; ++c) kinetic += q[c] * q[c];
    kinetic *= 0.5 / q[0];
    return (q[nc - 1] + gm1 * (q[nc - 1] - kinetic)) / q[0];
  };
  const double ra = std::sqrt(qa[0]);
  const double rb = std::sqrt(qb[0]);
  const double wa = ra / (ra + rb);
  const double wb = rb / (ra + rb);
  std::array<double, 2> vel{};
  for (int c = 1; c < nc - 1; ++c) vel[c - 1] = wa * qa[c] / qa[0] + wb * qb[c] / qb[0];
  const double hbar = wa * enthalpy(qa) + wb * enthalpy(qb);
  const double q2 = 0.5 * (vel[0] * vel[0] + vel[1] * vel[1]);
  const double c2 = gm1 * (hbar - q2);
  if (!(c2 > 0.0)) throw PositivityError("non-positive Roe-averaged sound speed", -1, -1);
  const double c = std::sqrt(c2);
  const double b1 = gm1 / c2;
  const double b2 = b1 * q2;

  EigenBasis e;
  e.ncomp = nc;
  auto L = [&](int r, int col) -> double& { return e.left[r * nc + col]; };
  auto R = [&](int r, int col) -> double& { return e.right[r * nc + col]; };
  const int dims = nc - 2;
  std::array<double, 2> nv{};
  nv[normal - 1] = 1.0;
  const double un = vel[normal - 1];
  const int last = nc - 1;

  // acoustic waves u -+ c: columns 0 and last; entropy: column 1
  for (int s : {0, last}) {
    const double sign = s == 0 ? -1.0 : 1.0;
    R(0, s) = 1.0;
    for (int d = 0; d < dims; ++d) R(1 + d, s) = vel[d] + sign * c * nv[d];
    R(last, s) = hbar + sign * un * c;
    L(s, 0) = 0.5 * (b2 - sign * un / c);
    for (int d = 0; d < dims; ++d) L(s, 1 + d) = 0.5 * (-b1 * vel[d] + sign * nv[d] / c);
    L(s, last) = 0.5 * b1;
  }
  R(0, 1) = 1.0;
  for (int d = 0; d < dims; ++d) R(1 + d, 1) = vel[d];
  R(last, 1) = q2;
  L(1, 0) = 1.0 - b2;
  for (int d = 0; d < dims; ++d) L(1, 1 + d) = b1 * vel[d];
  L(1, last) = -b1;
  if (dims == 2) {
    // shear wave along the tangent t = (-n_y, n_x)
    const std::array<double, 2> t{-nv[1], nv[0]};
    const double ut = t[0] * vel[0] + t[1] * vel[1];
    R(0, 2) = 0.0;
    R(1, 2) = t[0];
    R(2, 2) = t[1];
    R(3, 2) = ut;
    L(2, 0) = -ut;
    L(2, 1) = t[0];
    L(2, 2) = t[1];
    L(2, 3) = 0.0;
  }
  return e;
}

void rhs(ConservedGrid& grid, const SolverSetup& setup, const WeightingStrategy& weighting, double t,
         std::vector<double>& tendency) {
  const int g = grid.ghosts();
  if (g < weighting.ghost_width()) {
    throw DimensionError("grid has " + std::to_string(g) + " ghost cells, " + weighting.name() + " needs " +
                         std::to_string(weighting.ghost_width()));
  }
  fill_ghosts(grid, setup, t);
  tendency.assign(grid.data().size(), 0.0);

  const int nc = grid.ncomp();
  const int nx = grid.nx();
  const int ny = grid.ny();
  const WaveSpeeds alpha = max_wave_speed(grid, setup);
  const bool has_step = setup.bc.step.has_value();
  const StepCells step = has_step ? step_cells(grid, *setup.bc.step) : StepCells{nx, 0};

  LineBuffers buf;

  // x sweeps
  for (int j = 0; j < ny; ++j) {
    const int end = (has_step && j < step.j_top) ? step.i_corner : nx;
    const int len = end + 2 * g;
    buf.resize(nc, len);
    for (int c = 0; c < nc; ++c) {
      for (int k = 0; k < len; ++k) {
        const int i = k - g;
        if (i < end || end == nx) {
          buf.q[c][k] = grid.at(c, i, j);
        } else {
          // reflect across the vertical face of the step
          const double v = grid.at(c, 2 * end - 1 - i, j);
          buf.q[c][k] = (c == normal_index_x(grid)) ? -v : v;
        }
      }
    }
    physical_flux(buf, setup, nc > 1 ? 1 : 0, [&](int k) { return std::pair{k - g, grid.dimension() == 2 ? j : -1}; });
    line_divergence(buf, g, alpha.x, grid.dx(), weighting, setup, 1,
                    [&](int c, int k) -> double& { return tendency[grid.index(c, k, j)]; });
  }

  if (grid.dimension() == 2) {
    // y sweeps
    for (int i = 0; i < nx; ++i) {
      const int start = (has_step && i >= step.i_corner) ? step.j_top : 0;
      const int len = ny - start + 2 * g;
      buf.resize(nc, len);
      for (int c = 0; c < nc; ++c) {
        for (int k = 0; k < len; ++k) {
          const int j = start + k - g;
          if (j >= start || start == 0) {
            buf.q[c][k] = grid.at(c, i, j);
          } else {
            const double v = grid.at(c, i, 2 * start - 1 - j);
            buf.q[c][k] = (c == normal_index_y(grid)) ? -v : v;
          }
        }
      }
      physical_flux(buf, setup, 2, [&](int k) { return std::pair{i, start + k - g}; });
      line_divergence(buf, g, alpha.y, grid.dy(), weighting, setup, 2,
                      [&](int c, int k) -> double& { return tendency[grid.index(c, i, start + k)]; });
    }
  }

  if (setup.source == SourceKind::kRayleighTaylor) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        tendency[grid.index(2, i, j)] += grid.at(0, i, j);
        tendency[grid.index(3, i, j)] += grid.at(2, i, j);
      }
    }
  }
}

std::vector<double> rk3_step(const std::vector<double>& u, double t, double dt, const RhsFunction& op) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("rk3_step: dt must be positive");
  }
  const std::size_t n = u.size();
  std::vector<double> l(n);
  auto check = [](const std::vector<double>& v, int stage) {
    for (double x : v) {
      if (!std::isfinite(x)) throw SolverError("non-finite value after Runge-Kutta stage " + std::to_string(stage));
    }
  };

  op(u, t, l);
  std::vector<double> u1(n);
  for (std::size_t k = 0; k < n; ++k) u1[k] = u[k] + dt * l[k];
  check(u1, 1);

  op(u1, t + dt, l);
  std::vector<double> u2(n);
  for (std::size_t k = 0; k < n; ++k) u2[k] = 0.75 * u[k] + 0.25 * (u1[k] + dt * l[k]);
  check(u2, 2);

  op(u2, t + 0.5 * dt, l);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = u[k] / 3.0 + 2.0 / 3.0 * (u2[k] + dt * l[k]);
  check(out, 3);
  return out;
}

}  // namespace cadweno
