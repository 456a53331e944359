#pragma once

// Benchmark problem registry, exact and reference solutions, the time loop,
// and error metrics.

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cadweno/reconstruction.hpp"
#include "cadweno/solvers.hpp"

namespace cadweno {

class UnknownProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Left/right primitive states (rho, u, p) of a 1D Riemann problem.
struct RiemannStates {
  std::array<double, 3> left{};
  std::array<double, 3> right{};
  double gamma = 1.4;
};

struct RiemannStar {
  double p = 0.0;
  double u = 0.0;
  bool vacuum = false;  // the two rarefactions do not meet
  int iterations = 0;
};

/// f_L(p) + f_R(p) + (u_R - u_L); its root is the star pressure.
double riemann_pressure_function(const RiemannStates& s, double p);

/// Star state by bracketed Newton iteration (tolerance 1e-12, at most 200 iterations).
/// Throws SolverError on non-convergence.
RiemannStar riemann_star(const RiemannStates& s);

/// Self-similar exact solution at xi = x / t, as (rho, u, p).
std::array<double, 3> exact_riemann(const RiemannStates& s, double xi);
std::array<double, 3> exact_riemann(const RiemannStates& s, const RiemannStar& star, double xi);

enum class ReferenceKind { kNone, kClosedForm, kExactRiemann, kWeno5mFine, kWeno5jsFine };

struct ReferenceRecipe {
  ReferenceKind kind = ReferenceKind::kNone;
  int n_ref = 0;  // fine resolution for the fine-grid kinds
};

/// Initial data as a primitive vector at a point: {u} for advection,
/// (rho, u, p) in 1D, (rho, u, v, p) in 2D.
using InitialCondition = std::function<std::vector<double>(double x, double y)>;

struct ProblemSpec {
  std::string name;
  std::string description;
  int dimension = 1;
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
  int nx = 100;
  int ny = 1;
  double t_final = 1.0;
  double cfl = 0.4;
  ModelKind model = ModelKind::kEuler;
  EosParams eos;
  SourceKind source = SourceKind::kNone;
  ReconstructionVariables variables = ReconstructionVariables::kCharacteristic;
  BoundarySpec bc;
  InitialCondition initial;
  ReferenceRecipe reference;
  std::optional<RiemannStates> riemann;  // shock tubes, discontinuity at x = 0

  [[nodiscard]] int ncomp() const noexcept {
    return model == ModelKind::kAdvection ? 1 : (dimension == 1 ? 3 : 4);
  }
};

/// The twelve benchmark problems at their published resolutions.
const std::vector<ProblemSpec>& registry();

/// Periodic advection of sin(pi x) on [-1, 1] to T = 2, used for order studies.
ProblemSpec smooth_advection_problem();

/// Looks up a registry entry or "smooth-advection". Throws UnknownProblemError.
ProblemSpec find_problem(const std::string& name);
std::vector<std::string> problem_names();

/// Copy with a new resolution (ny ignored in 1D) and optionally a new final time.
ProblemSpec with_resolution(const ProblemSpec& p, int nx, int ny = 0, std::optional<double> t_final = {});

SolverSetup make_setup(const ProblemSpec& p);
ConservedGrid initial_grid(const ProblemSpec& p, int ghosts);

struct RunOptions {
  long max_steps = 10'000'000;
  /// Replaces the CFL time step, e.g. dx^{5/3} scaling for fifth-order studies.
  std::function<double(const ConservedGrid&, const WaveSpeeds&)> dt_rule;
  std::function<void(long step, double t)> on_step;
};

struct Diagnostics {
  long steps = 0;
  double t = 0.0;
  double min_density = 0.0;
  double min_pressure = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  ConservedGrid grid;
  Diagnostics diagnostics;
};

/// Integrates to p.t_final with TVD RK3, clipping the last step onto T.
/// Throws PositivityError, SolverError (NaN or step cap) as they occur.
RunResult advance(const ProblemSpec& p, const WeightingStrategy& w, const RunOptions& options = {});

/// u0(wrap(x - a t)) on the periodic interval [x_min, x_max).
double exact_advection(const std::function<double(double)>& u0, double x, double t, double x_min = -1.0,
                       double x_max = 1.0, double speed = 1.0);

/// Restricts a fine cell-centred profile to a coarse grid on the same interval.
/// Odd integer ratios subsample, even ratios average the two straddling fine
/// cells, and other ratios use monotone cubic interpolation.
std::vector<double> restrict_to_grid(const std::vector<double>& fine, double x_min, double x_max, int n_coarse);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of (xs, ys) at x.
double monotone_cubic(const std::vector<double>& xs, const std::vector<double>& ys, double x);

/// Solution of a 1D problem with `w` at n_ref cells, density restricted to p.nx cells.
std::vector<double> reference_fine(const ProblemSpec& p, int n_ref, const WeightingStrategy& w);
inline std::vector<double> reference_weno5m(const ProblemSpec& p, int n_ref) {
  return reference_fine(p, n_ref, WeightingStrategy::m5());
}

/// Reference for the scalar (advection) or the density (Euler) at the cell centres of p.
/// Empty when the problem has no reference.
std::vector<double> reference_solution(const ProblemSpec& p);

struct ErrorReport {
  std::vector<double> pointwise;
  double l1 = 0.0;
  double linf = 0.0;
  std::size_t argmax = 0;
};

/// L1 = sum |diff| dx, Linf = max |diff|. Throws DimensionError on size mismatch.
ErrorReport error_report(const std::vector<double>& numerical, const std::vector<double>& reference, double dx);

struct ConvergenceRow {
  int n = 0;
  double l1 = 0.0;
  double linf = 0.0;
  double eoc = 0.0;  // log2 of the Linf ratio to the previous row, 0 for the first
};

/// Refinement study on a periodic advection problem against the exact solution.
/// Fifth-order strategies use dt proportional to dx^{5/3} so time error stays below space error.
std::vector<ConvergenceRow> convergence_study(const ProblemSpec& p, const WeightingStrategy& w,
                                              const std::vector<int>& resolutions);

}  // namespace cadweno
