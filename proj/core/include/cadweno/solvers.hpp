#pragma once

// Semi-discretizations of scalar advection and the 1D/2D Euler equations on
// uniform grids with ghost cells, and the third-order TVD Runge-Kutta driver.

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cadweno/reconstruction.hpp"

namespace cadweno {

struct EosParams {
  double gamma = 1.4;
};

enum class ModelKind { kAdvection, kEuler };
enum class SourceKind { kNone, kRayleighTaylor };

class PositivityError : public std::runtime_error {
 public:
  PositivityError(const std::string& what, int i, int j) : std::runtime_error(what), i_(i), j_(j) {}
  [[nodiscard]] int i() const noexcept { return i_; }
  [[nodiscard]] int j() const noexcept { return j_; }

 private:
  int i_;
  int j_;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Primitive vectors are (rho, u, p) in 1D and (rho, u, v, p) in 2D.
std::array<double, 3> prim_to_cons(const std::array<double, 3>& w, const EosParams& eos) noexcept;
std::array<double, 4> prim_to_cons(const std::array<double, 4>& w, const EosParams& eos) noexcept;
/// Throws PositivityError (with the given cell index) when rho or p is not positive.
std::array<double, 3> cons_to_prim(const std::array<double, 3>& q, const EosParams& eos, int i = -1);
std::array<double, 4> cons_to_prim(const std::array<double, 4>& q, const EosParams& eos, int i = -1, int j = -1);

/// Uniform cell-centred grid of conserved vectors with a ghost frame.
/// 1D grids have ny == 1 and no ghost rows. Storage is component-major,
/// then row-major with ghosts: data[c][(j + gy) * stride + (i + g)].
class ConservedGrid {
 public:
  ConservedGrid() = default;
  ConservedGrid(int ncomp, int nx, int ny, int ghosts, double x_min, double x_max, double y_min = 0.0,
                double y_max = 1.0);

  [[nodiscard]] int dimension() const noexcept { return ny_ > 1 ? 2 : 1; }
  [[nodiscard]] int ncomp() const noexcept { return ncomp_; }
  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] int ghosts() const noexcept { return g_; }
  [[nodiscard]] int ghost_rows() const noexcept { return gy_; }
  [[nodiscard]] double dx() const noexcept { return dx_; }
  [[nodiscard]] double dy() const noexcept { return dy_; }
  [[nodiscard]] double x_min() const noexcept { return x_min_; }
  [[nodiscard]] double x_max() const noexcept { return x_max_; }
  [[nodiscard]] double y_min() const noexcept { return y_min_; }
  [[nodiscard]] double y_max() const noexcept { return y_max_; }
  [[nodiscard]] double x(int i) const noexcept { return x_min_ + (i + 0.5) * dx_; }
  [[nodiscard]] double y(int j) const noexcept { return y_min_ + (j + 0.5) * dy_; }

  [[nodiscard]] std::size_t index(int c, int i, int j = 0) const noexcept {
    return static_cast<std::size_t>(c) * comp_size_ + static_cast<std::size_t>(j + gy_) * stride_ +
           static_cast<std::size_t>(i + g_);
  }
  double& at(int c, int i, int j = 0) noexcept { return data_[index(c, i, j)]; }
  [[nodiscard]] double at(int c, int i, int j = 0) const noexcept { return data_[index(c, i, j)]; }

  [[nodiscard]] std::vector<double>& data() noexcept { return data_; }
  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

  /// Solid cells (embedded obstacles) carry no dynamics.
  [[nodiscard]] bool is_solid(int i, int j) const noexcept {
    return !solid_.empty() && solid_[static_cast<std::size_t>(j) * nx_ + i] != 0;
  }
  void set_solid(int i, int j, bool solid);

  /// Physical (non-ghost, non-solid) values of one component, row-major.
  [[nodiscard]] std::vector<double> interior(int c) const;

 private:
  int ncomp_ = 0;
  int nx_ = 0;
  int ny_ = 0;
  int g_ = 0;
  int gy_ = 0;
  double x_min_ = 0.0;
  double x_max_ = 1.0;
  double y_min_ = 0.0;
  double y_max_ = 1.0;
  double dx_ = 1.0;
  double dy_ = 1.0;
  std::size_t stride_ = 0;
  std::size_t comp_size_ = 0;
  std::vector<double> data_;
  std::vector<unsigned char> solid_;
};

// Boundary conditions per side.
struct Periodic {};
struct Transmissive {};
struct Reflective {};
struct Dirichlet {
  std::vector<double> primitive;  // scalar value, (rho,u,p) or (rho,u,v,p)
};
/// Top boundary of the double Mach reflection: post-shock state left of the
/// moving shock foot x_s(t) = 1/6 + (1 + 20 t) / sqrt(3), pre-shock state right of it.
struct DmrTop {};
/// Bottom boundary of the double Mach reflection: post-shock for x < 1/6, wall beyond.
struct DmrBottom {};

using SideCondition = std::variant<Periodic, Transmissive, Reflective, Dirichlet, DmrTop, DmrBottom>;

/// Forward-facing step: solid block [x_corner, x_max] x [y_min, y_min + height].
struct StepGeometry {
  double x_corner = 0.6;
  double height = 0.2;
};

struct BoundarySpec {
  SideCondition left = Transmissive{};
  SideCondition right = Transmissive{};
  SideCondition bottom = Transmissive{};
  SideCondition top = Transmissive{};
  std::optional<StepGeometry> step;
};

// Double Mach reflection states, theta = pi/6.
std::array<double, 4> dmr_post_shock() noexcept;
std::array<double, 4> dmr_pre_shock() noexcept;
double dmr_shock_foot(double y, double t) noexcept;

/// Variables the split fluxes are reconstructed in. kCharacteristic projects each
/// stencil onto the Roe-averaged eigenvectors of the interface (Euler only).
enum class ReconstructionVariables { kComponent, kCharacteristic };

/// Everything the right-hand side needs besides the state and the weighting.
struct SolverSetup {
  ModelKind model = ModelKind::kEuler;
  EosParams eos;
  BoundarySpec bc;
  SourceKind source = SourceKind::kNone;
  double advection_speed = 1.0;
  ReconstructionVariables variables = ReconstructionVariables::kCharacteristic;
};

/// Left (rows) and right (columns) eigenvectors of the Euler flux Jacobian along
/// `normal` (1 = x, 2 = y) at the Roe average of conserved states qa and qb.
/// ncomp is 3 (1D) or 4 (2D); matrices are row-major ncomp x ncomp.
struct EigenBasis {
  int ncomp = 0;
  std::array<double, 16> left{};
  std::array<double, 16> right{};
};
EigenBasis roe_eigenbasis(std::span<const double> qa, std::span<const double> qb, int normal, double gamma);

void fill_ghosts(ConservedGrid& grid, const SolverSetup& setup, double t);

struct WaveSpeeds {
  double x = 0.0;
  double y = 0.0;
};

/// max(|u| + c) per direction over physical fluid cells (|a| for advection).
WaveSpeeds max_wave_speed(const ConservedGrid& grid, const SolverSetup& setup);

/// Semi-discrete tendency -df/dx - dg/dy + s. Refills the ghosts of `grid` at time t.
/// `tendency` is resized to the grid's storage and is zero on ghost and solid cells.
void rhs(ConservedGrid& grid, const SolverSetup& setup, const WeightingStrategy& weighting, double t,
         std::vector<double>& tendency);

using RhsFunction = std::function<void(const std::vector<double>& state, double t, std::vector<double>& out)>;

/// Shu-Osher third-order TVD Runge-Kutta step. Throws SolverError if a stage goes non-finite.
std::vector<double> rk3_step(const std::vector<double>& u, double t, double dt, const RhsFunction& op);

}  // namespace cadweno
