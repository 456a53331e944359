#include "cadweno/problems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace cadweno {

namespace {

// Toro's pressure function for one side and its derivative.
struct SideFunction {
  double f;
  double df;
};

SideFunction side_function(double p, const std::array<double, 3>& w, double gamma) {
  const double rho = w[0];
  const double pk = w[2];
  const double a = std::sqrt(gamma * pk / rho);
  if (p > pk) {
    const double A = 2.0 / ((gamma + 1.0) * rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * pk;
    const double q = std::sqrt(A / (p + B));
    return {(p - pk) * q, q * (1.0 - 0.5 * (p - pk) / (p + B))};
  }
  const double ratio = p / pk;
  const double f = 2.0 * a / (gamma - 1.0) * (std::pow(ratio, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
  const double df = p > 0.0 ? std::pow(ratio, -(gamma + 1.0) / (2.0 * gamma)) / (rho * a)
                            : std::numeric_limits<double>::infinity();
  return {f, df};
}

double sound_speed(const std::array<double, 3>& w, double gamma) { return std::sqrt(gamma * w[2] / w[0]); }

void check_states(const RiemannStates& s) {
  if (!(s.gamma > 1.0) || !(s.left[0] > 0.0) || !(s.right[0] > 0.0) || !(s.left[2] > 0.0) ||
      !(s.right[2] > 0.0)) {
    throw std::invalid_argument("Riemann states need positive density and pressure and gamma > 1");
  }
}

// Jiang-Shu composite profile on [-1, 1].
double composite_profile(double x) {
  constexpr double delta = 0.005;
  const double beta = std::numbers::ln2 / (36.0 * delta * delta);
  constexpr double z = -0.7;
  constexpr double alpha = 10.0;
  constexpr double y = 0.5;
  auto G = [&](double c) { return std::exp(-beta * (x - c) * (x - c)); };
  auto F = [&](double c) { return std::sqrt(std::max(1.0 - alpha * alpha * (x - c) * (x - c), 0.0)); };
  if (x >= -0.8 && x <= -0.6) return (G(z - delta) + 4.0 * G(z) + G(z + delta)) / 6.0;
  if (x >= -0.4 && x <= -0.2) return 1.0;
  if (x >= 0.0 && x <= 0.2) return 1.0 - std::abs(10.0 * (x - 0.1));
  if (x >= 0.4 && x <= 0.6) return (F(y - delta) + 4.0 * F(y) + F(y + delta)) / 6.0;
  return 0.0;
}

ProblemSpec shock_tube(std::string name, std::string description, RiemannStates states, double x_min,
                       double x_max, double t_final) {
  ProblemSpec p;
  p.name = std::move(name);
  p.description = std::move(description);
  p.x_min = x_min;
  p.x_max = x_max;
  p.nx = 200;
  p.t_final = t_final;
  p.riemann = states;
  p.initial = [states](double x, double) {
    const auto& w = x <= 0.0 ? states.left : states.right;
    return std::vector<double>{w[0], w[1], w[2]};
  };
  p.reference = {ReferenceKind::kExactRiemann, 0};
  return p;
}

ProblemSpec shock_entropy(int k, int n) {
  ProblemSpec p;
  p.name = "shock-entropy-k" + std::to_string(k);
  p.description = "Mach 3 shock hitting an entropy wave of wave number " + std::to_string(k);
  p.x_min = -5.0;
  p.x_max = 5.0;
  p.nx = n;
  p.t_final = 2.0;
  p.initial = [k](double x, double) {
    if (x < -4.0) return std::vector<double>{3.857143, 2.629369, 10.333333};
    return std::vector<double>{1.0 + 0.2 * std::sin(k * x), 0.0, 1.0};
  };
  p.reference = {ReferenceKind::kWeno5mFine, 2000};
  return p;
}

std::vector<ProblemSpec> build_registry() {
  std::vector<ProblemSpec> out;

  {
    ProblemSpec p;
    p.name = "advection";
    p.description = "linear advection of a composite profile, four periods";
    p.model = ModelKind::kAdvection;
    p.x_min = -1.0;
    p.x_max = 1.0;
    p.nx = 200;
    p.t_final = 8.0;
    p.bc.left = Periodic{};
    p.bc.right = Periodic{};
    p.initial = [](double x, double) { return std::vector<double>{composite_profile(x)}; };
    p.reference = {ReferenceKind::kClosedForm, 0};
    out.push_back(std::move(p));
  }

  out.push_back(shock_tube("sod", "Sod shock tube", {{1.0, 0.0, 1.0}, {0.125, 0.0, 0.1}, 1.4}, -5.0, 5.0, 2.0));
  out.push_back(
      shock_tube("lax", "Lax shock tube", {{0.445, 0.698, 3.528}, {0.5, 0.0, 0.571}, 1.4}, -5.0, 5.0, 1.3));
  out.push_back(shock_tube("123", "two symmetric rarefactions", {{1.0, -2.0, 0.4}, {1.0, 2.0, 0.4}, 1.4}, -5.0,
                           5.0, 1.0));
  out.push_back(shock_tube("double-rarefaction", "two rarefactions forming a vacuum",
                           {{7.0, -1.0, 0.2}, {7.0, 1.0, 0.2}, 1.4}, -1.0, 1.0, 0.6));

  out.push_back(shock_entropy(5, 200));
  out.push_back(shock_entropy(10, 400));

  {
    ProblemSpec p;
    p.name = "blast";
    p.description = "interacting blast waves between reflective walls";
    p.x_min = 0.0;
    p.x_max = 1.0;
    p.nx = 400;
    p.t_final = 0.038;
    p.bc.left = Reflective{};
    p.bc.right = Reflective{};
    p.initial = [](double x, double) {
      const double pressure = x < 0.1 ? 1000.0 : (x < 0.9 ? 0.01 : 100.0);
      return std::vector<double>{1.0, 0.0, pressure};
    };
    // WENO5-M loses positivity where the two blast waves collide
    p.reference = {ReferenceKind::kWeno5jsFine, 4000};
    out.push_back(std::move(p));
  }

  {
    ProblemSpec p;
    p.name = "riemann-2d";
    p.description = "four-quadrant two-dimensional Riemann problem";
    p.dimension = 2;
    p.nx = 400;
    p.ny = 400;
    p.t_final = 0.8;
    p.initial = [](double x, double y) {
      if (x > 0.8 && y > 0.8) return std::vector<double>{1.5, 0.0, 0.0, 1.5};
      if (x <= 0.8 && y > 0.8) return std::vector<double>{0.5323, 1.206, 0.0, 0.3};
      if (x <= 0.8) return std::vector<double>{0.138, 1.206, 1.206, 0.029};
      return std::vector<double>{0.5323, 0.0, 1.206, 0.3};
    };
    out.push_back(std::move(p));
  }

  {
    ProblemSpec p;
    p.name = "double-mach";
    p.description = "double Mach reflection of a Mach 10 shock";
    p.dimension = 2;
    p.x_max = 4.0;
    p.nx = 800;
    p.ny = 200;
    p.t_final = 0.2;
    const auto post = dmr_post_shock();
    p.bc.left = Dirichlet{{post.begin(), post.end()}};
    p.bc.right = Transmissive{};
    p.bc.bottom = DmrBottom{};
    p.bc.top = DmrTop{};
    p.initial = [](double x, double y) {
      const auto w = x < dmr_shock_foot(y, 0.0) ? dmr_post_shock() : dmr_pre_shock();
      return std::vector<double>{w.begin(), w.end()};
    };
    out.push_back(std::move(p));
  }

  {
    ProblemSpec p;
    p.name = "forward-step";
    p.description = "Mach 3 flow over a forward-facing step";
    p.dimension = 2;
    p.x_max = 3.0;
    p.nx = 480;
    p.ny = 160;
    p.t_final = 4.0;
    p.bc.left = Dirichlet{{1.4, 3.0, 0.0, 1.0}};
    p.bc.right = Transmissive{};
    p.bc.bottom = Reflective{};
    p.bc.top = Reflective{};
    p.bc.step = StepGeometry{};
    p.initial = [](double, double) { return std::vector<double>{1.4, 3.0, 0.0, 1.0}; };
    out.push_back(std::move(p));
  }

  {
    ProblemSpec p;
    p.name = "rayleigh-taylor";
    p.description = "Rayleigh-Taylor instability under an upward body force";
    p.dimension = 2;
    p.x_max = 0.25;
    p.nx = 200;
    p.ny = 800;
    p.t_final = 2.95;
    p.eos.gamma = 5.0 / 3.0;
    p.source = SourceKind::kRayleighTaylor;
    p.bc.left = Reflective{};
    p.bc.right = Reflective{};
    p.bc.bottom = Dirichlet{{2.0, 0.0, 0.0, 1.0}};
    p.bc.top = Dirichlet{{1.0, 0.0, 0.0, 2.5}};
    const double gamma = p.eos.gamma;
    p.initial = [gamma](double x, double y) {
      const double rho = y < 0.5 ? 2.0 : 1.0;
      const double pressure = y < 0.5 ? 2.0 * y + 1.0 : y + 1.5;
      const double c = std::sqrt(gamma * pressure / rho);
      return std::vector<double>{rho, 0.0, -0.025 * c * std::cos(8.0 * std::numbers::pi * x), pressure};
    };
    out.push_back(std::move(p));
  }

  return out;
}

double time_step(const ProblemSpec& p, const ConservedGrid& g, const WaveSpeeds& a) {
  if (p.dimension == 1) {
    if (!(a.x > 0.0)) throw SolverError("zero wave speed, time step undefined");
    return p.cfl * g.dx() / a.x;
  }
  const double rate = a.x / g.dx() + a.y / g.dy();
  if (!(rate > 0.0)) throw SolverError("zero wave speed, time step undefined");
  return p.cfl / rate;
}

}  // namespace

double riemann_pressure_function(const RiemannStates& s, double p) {
  return side_function(p, s.left, s.gamma).f + side_function(p, s.right, s.gamma).f + (s.right[1] - s.left[1]);
}

RiemannStar riemann_star(const RiemannStates& s) {
  check_states(s);
  const double g = s.gamma;
  const double aL = sound_speed(s.left, g);
  const double aR = sound_speed(s.right, g);
  const double du = s.right[1] - s.left[1];

  RiemannStar star;
  const double gap = 2.0 * (aL + aR) / (g - 1.0) - du;
  if (gap <= 1e-12 * (aL + aR)) {
    star.vacuum = true;
    star.p = 0.0;
    star.u = 0.5 * (s.left[1] + 2.0 * aL / (g - 1.0) + s.right[1] - 2.0 * aR / (g - 1.0));
    return star;
  }

  double lo = 0.0;
  double hi = std::max(s.left[2], s.right[2]);
  while (riemann_pressure_function(s, hi) < 0.0) hi *= 2.0;

  // primitive-variable guess
  const double rho_bar = 0.5 * (s.left[0] + s.right[0]);
  const double a_bar = 0.5 * (aL + aR);
  double p = std::clamp(0.5 * (s.left[2] + s.right[2]) - 0.5 * du * rho_bar * a_bar, 1e-8 * hi, hi);

  constexpr int kMaxIterations = 200;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const SideFunction fl = side_function(p, s.left, g);
    const SideFunction fr = side_function(p, s.right, g);
    const double f = fl.f + fr.f + du;
    double next = p;
    if (f != 0.0) {
      (f > 0.0 ? hi : lo) = p;
      next = p - f / (fl.df + fr.df);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    }
    const double change = std::abs(next - p) / (0.5 * (next + p));
    p = next;
    if (change < 1e-12) {
      star.p = p;
      star.iterations = it;
      const double fL = side_function(p, s.left, g).f;
      const double fR = side_function(p, s.right, g).f;
      star.u = 0.5 * (s.left[1] + s.right[1]) + 0.5 * (fR - fL);
      return star;
    }
  }
  throw SolverError("exact Riemann solver did not converge in 200 iterations");
}

std::array<double, 3> exact_riemann(const RiemannStates& s, double xi) {
  return exact_riemann(s, riemann_star(s), xi);
}

std::array<double, 3> exact_riemann(const RiemannStates& s, const RiemannStar& star, double xi) {
  const double g = s.gamma;
  const auto& L = s.left;
  const auto& R = s.right;
  const double aL = sound_speed(L, g);
  const double aR = sound_speed(R, g);
  const double g1 = (g - 1.0) / (2.0 * g);
  const double g3 = 2.0 * g / (g - 1.0);
  const double g4 = 2.0 / (g - 1.0);
  const double g5 = 2.0 / (g + 1.0);
  const double g6 = (g - 1.0) / (g + 1.0);
  const double g7 = (g - 1.0) / 2.0;

  auto left_fan = [&](double x) -> std::array<double, 3> {
    const double c = g5 * (aL + g7 * (L[1] - x));
    return {L[0] * std::pow(c / aL, g4), g5 * (aL + g7 * L[1] + x), L[2] * std::pow(c / aL, g3)};
  };
  auto right_fan = [&](double x) -> std::array<double, 3> {
    const double c = g5 * (aR - g7 * (R[1] - x));
    return {R[0] * std::pow(c / aR, g4), g5 * (-aR + g7 * R[1] + x), R[2] * std::pow(c / aR, g3)};
  };

  if (star.vacuum) {
    const double head_l = L[1] - aL;
    const double tail_l = L[1] + 2.0 * aL / (g - 1.0);
    const double head_r = R[1] + aR;
    const double tail_r = R[1] - 2.0 * aR / (g - 1.0);
    if (xi <= head_l) return L;
    if (xi < tail_l) return left_fan(xi);
    if (xi <= tail_r) return {0.0, xi, 0.0};
    if (xi < head_r) return right_fan(xi);
    return R;
  }

  const double ps = star.p;
  const double us = star.u;
  if (xi <= us) {
    if (ps > L[2]) {
      const double ratio = ps / L[2];
      const double speed = L[1] - aL * std::sqrt((g + 1.0) / (2.0 * g) * ratio + g1);
      if (xi <= speed) return L;
      return {L[0] * (ratio + g6) / (g6 * ratio + 1.0), us, ps};
    }
    if (xi <= L[1] - aL) return L;
    const double tail = us - aL * std::pow(ps / L[2], g1);
    if (xi > tail) return {L[0] * std::pow(ps / L[2], 1.0 / g), us, ps};
    return left_fan(xi);
  }
  if (ps > R[2]) {
    const double ratio = ps / R[2];
    const double speed = R[1] + aR * std::sqrt((g + 1.0) / (2.0 * g) * ratio + g1);
    if (xi >= speed) return R;
    return {R[0] * (ratio + g6) / (g6 * ratio + 1.0), us, ps};
  }
  if (xi >= R[1] + aR) return R;
  const double tail = us + aR * std::pow(ps / R[2], g1);
  if (xi <= tail) return {R[0] * std::pow(ps / R[2], 1.0 / g), us, ps};
  return right_fan(xi);
}

const std::vector<ProblemSpec>& registry() {
  static const std::vector<ProblemSpec> problems = build_registry();
  return problems;
}

ProblemSpec smooth_advection_problem() {
  ProblemSpec p;
  p.name = "smooth-advection";
  p.description = "periodic advection of sin(pi x), one period";
  p.model = ModelKind::kAdvection;
  p.x_min = -1.0;
  p.x_max = 1.0;
  p.nx = 200;
  p.t_final = 2.0;
  p.bc.left = Periodic{};
  p.bc.right = Periodic{};
  p.initial = [](double x, double) { return std::vector<double>{std::sin(std::numbers::pi * x)}; };
  p.reference = {ReferenceKind::kClosedForm, 0};
  return p;
}

ProblemSpec find_problem(const std::string& name) {
  if (name == "smooth-advection") return smooth_advection_problem();
  for (const auto& p : registry()) {
    if (p.name == name) return p;
  }
  throw UnknownProblemError("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() {
  std::vector<std::string> out;
  for (const auto& p : registry()) out.push_back(p.name);
  out.emplace_back("smooth-advection");
  return out;
}

ProblemSpec with_resolution(const ProblemSpec& p, int nx, int ny, std::optional<double> t_final) {
  ProblemSpec out = p;
  if (nx > 0) out.nx = nx;
  if (ny > 0 && p.dimension == 2) out.ny = ny;
  if (t_final) {
    if (!(*t_final > 0.0)) throw std::invalid_argument("final time must be positive");
    out.t_final = *t_final;
  }
  return out;
}

SolverSetup make_setup(const ProblemSpec& p) {
  SolverSetup s;
  s.model = p.model;
  s.eos = p.eos;
  s.bc = p.bc;
  s.source = p.source;
  s.variables = p.variables;
  return s;
}

ConservedGrid initial_grid(const ProblemSpec& p, int ghosts) {
  const int min_cells = 2 * ghosts;
  if (p.nx < min_cells || (p.dimension == 2 && p.ny < min_cells)) {
    throw std::invalid_argument("resolution of " + p.name + " is below the stencil minimum");
  }
  if (!(p.t_final > 0.0)) throw std::invalid_argument("final time must be positive");
  ConservedGrid g(p.ncomp(), p.nx, p.dimension == 2 ? p.ny : 1, ghosts, p.x_min, p.x_max, p.y_min, p.y_max);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const double y = p.dimension == 2 ? g.y(j) : 0.0;
      const std::vector<double> w = p.initial(g.x(i), y);
      if (p.model == ModelKind::kAdvection) {
        g.at(0, i, j) = w[0];
      } else if (p.dimension == 1) {
        const auto q = prim_to_cons(std::array<double, 3>{w[0], w[1], w[2]}, p.eos);
        for (int c = 0; c < 3; ++c) g.at(c, i, j) = q[c];
      } else {
        const auto q = prim_to_cons(std::array<double, 4>{w[0], w[1], w[2], w[3]}, p.eos);
        for (int c = 0; c < 4; ++c) g.at(c, i, j) = q[c];
      }
    }
  }
  if (p.bc.step) {
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        if (g.x(i) > p.bc.step->x_corner && g.y(j) < p.y_min + p.bc.step->height) g.set_solid(i, j, true);
      }
    }
  }
  return g;
}

RunResult advance(const ProblemSpec& p, const WeightingStrategy& w, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SolverSetup setup = make_setup(p);
  RunResult result{initial_grid(p, w.ghost_width()), {}};
  ConservedGrid& grid = result.grid;
  ConservedGrid work = grid;

  const RhsFunction op = [&](const std::vector<double>& state, double t, std::vector<double>& out) {
    work.data() = state;
    rhs(work, setup, w, t, out);
  };

  Diagnostics& d = result.diagnostics;
  d.min_density = std::numeric_limits<double>::infinity();
  d.min_pressure = std::numeric_limits<double>::infinity();
  auto record_minima = [&] {
    if (p.model != ModelKind::kEuler) return;
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        if (grid.is_solid(i, j)) continue;
        double rho;
        double pressure;
        if (p.dimension == 1) {
          const auto v = cons_to_prim(std::array<double, 3>{grid.at(0, i), grid.at(1, i), grid.at(2, i)}, p.eos, i);
          rho = v[0];
          pressure = v[2];
        } else {
          const auto v = cons_to_prim(
              std::array<double, 4>{grid.at(0, i, j), grid.at(1, i, j), grid.at(2, i, j), grid.at(3, i, j)}, p.eos,
              i, j);
          rho = v[0];
          pressure = v[3];
        }
        d.min_density = std::min(d.min_density, rho);
        d.min_pressure = std::min(d.min_pressure, pressure);
      }
    }
  };
  record_minima();

  double t = 0.0;
  while (t < p.t_final) {
    if (d.steps >= options.max_steps) {
      throw SolverError("step cap of " + std::to_string(options.max_steps) + " reached at t = " + std::to_string(t));
    }
    fill_ghosts(grid, setup, t);
    const WaveSpeeds a = max_wave_speed(grid, setup);
    double dt = options.dt_rule ? options.dt_rule(grid, a) : time_step(p, grid, a);
    bool last = false;
    if (t + dt >= p.t_final) {
      dt = p.t_final - t;
      last = true;
    }
    grid.data() = rk3_step(grid.data(), t, dt, op);
    t = last ? p.t_final : t + dt;
    ++d.steps;
    record_minima();
    if (options.on_step) options.on_step(d.steps, t);
  }
  d.t = t;
  d.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (p.model != ModelKind::kEuler) {
    d.min_density = 0.0;
    d.min_pressure = 0.0;
  }
  return result;
}

double exact_advection(const std::function<double(double)>& u0, double x, double t, double x_min, double x_max,
                       double speed) {
  const double length = x_max - x_min;
  double shifted = std::fmod(x - speed * t - x_min, length);
  if (shifted < 0.0) shifted += length;
  return u0(x_min + shifted);
}

double monotone_cubic(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw DimensionError("monotone_cubic needs matching samples, at least two");
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;

  auto secant = [&](std::size_t i) { return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]); };
  auto slope = [&](std::size_t i) {
    if (i == 0) return secant(0);
    if (i == n - 1) return secant(n - 2);
    const double s0 = secant(i - 1);
    const double s1 = secant(i);
    if (s0 * s1 <= 0.0) return 0.0;
    const double h0 = xs[i] - xs[i - 1];
    const double h1 = xs[i + 1] - xs[i];
    const double w0 = 2.0 * h1 + h0;
    const double w1 = h1 + 2.0 * h0;
    return (w0 + w1) / (w0 / s0 + w1 / s1);
  };

  const double h = xs[k + 1] - xs[k];
  const double s = (x - xs[k]) / h;
  const double m0 = slope(k) * h;
  const double m1 = slope(k + 1) * h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * ys[k] + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * ys[k + 1] + (s3 - s2) * m1;
}

std::vector<double> restrict_to_grid(const std::vector<double>& fine, double x_min, double x_max, int n_coarse) {
  const int n_fine = static_cast<int>(fine.size());
  if (n_coarse < 1 || n_fine < n_coarse) throw DimensionError("restriction needs a finer source grid");
  std::vector<double> out(static_cast<std::size_t>(n_coarse));
  if (n_fine % n_coarse == 0) {
    const int r = n_fine / n_coarse;
    for (int i = 0; i < n_coarse; ++i) {
      const int mid = i * r + r / 2;
      out[i] = r % 2 == 1 ? fine[mid] : 0.5 * (fine[mid - 1] + fine[mid]);
    }
    return out;
  }
  const double hf = (x_max - x_min) / n_fine;
  const double hc = (x_max - x_min) / n_coarse;
  std::vector<double> xs(fine.size());
  for (int k = 0; k < n_fine; ++k) xs[k] = x_min + (k + 0.5) * hf;
  for (int i = 0; i < n_coarse; ++i) out[i] = monotone_cubic(xs, fine, x_min + (i + 0.5) * hc);
  return out;
}

std::vector<double> reference_fine(const ProblemSpec& p, int n_ref, const WeightingStrategy& w) {
  if (p.dimension != 1) throw std::invalid_argument("fine-grid references are one-dimensional only");
  const ProblemSpec fine = with_resolution(p, n_ref);
  const RunResult r = advance(fine, w);
  return restrict_to_grid(r.grid.interior(0), p.x_min, p.x_max, p.nx);
}

std::vector<double> reference_solution(const ProblemSpec& p) {
  if (p.dimension != 1) return {};
  const double dx = (p.x_max - p.x_min) / p.nx;
  std::vector<double> out(static_cast<std::size_t>(p.nx));
  switch (p.reference.kind) {
    case ReferenceKind::kNone: return {};
    case ReferenceKind::kClosedForm: {
      const auto u0 = [&](double x) { return p.initial(x, 0.0)[0]; };
      for (int i = 0; i < p.nx; ++i) out[i] = exact_advection(u0, p.x_min + (i + 0.5) * dx, p.t_final, p.x_min, p.x_max);
      return out;
    }
    case ReferenceKind::kExactRiemann: {
      const RiemannStar star = riemann_star(*p.riemann);
      for (int i = 0; i < p.nx; ++i) {
        out[i] = exact_riemann(*p.riemann, star, (p.x_min + (i + 0.5) * dx) / p.t_final)[0];
      }
      return out;
    }
    case ReferenceKind::kWeno5mFine: return reference_weno5m(p, p.reference.n_ref);
    case ReferenceKind::kWeno5jsFine: return reference_fine(p, p.reference.n_ref, WeightingStrategy::js5());
  }
  return {};
}

ErrorReport error_report(const std::vector<double>& numerical, const std::vector<double>& reference, double dx) {
  if (numerical.size() != reference.size()) {
    throw DimensionError("error_report: " + std::to_string(numerical.size()) + " values against " +
                         std::to_string(reference.size()) + " reference values");
  }
  ErrorReport r;
  r.pointwise.resize(numerical.size());
  for (std::size_t i = 0; i < numerical.size(); ++i) {
    const double e = std::abs(numerical[i] - reference[i]);
    r.pointwise[i] = e;
    r.l1 += e * dx;
    if (e > r.linf) {
      r.linf = e;
      r.argmax = i;
    }
  }
  return r;
}

std::vector<ConvergenceRow> convergence_study(const ProblemSpec& p, const WeightingStrategy& w,
                                              const std::vector<int>& resolutions) {
  if (p.model != ModelKind::kAdvection || p.reference.kind != ReferenceKind::kClosedForm) {
    throw std::invalid_argument("convergence studies need an advection problem with a closed-form solution");
  }
  RunOptions options;
  if (w.order() == 5) {
    options.dt_rule = [cfl = p.cfl](const ConservedGrid& g, const WaveSpeeds& a) {
      return cfl * std::pow(g.dx(), 5.0 / 3.0) / a.x;
    };
  }
  std::vector<ConvergenceRow> rows;
  for (int n : resolutions) {
    const ProblemSpec q = with_resolution(p, n);
    const RunResult r = advance(q, w, options);
    const ErrorReport e = error_report(r.grid.interior(0), reference_solution(q), r.grid.dx());
    ConvergenceRow row{n, e.l1, e.linf, 0.0};
    if (!rows.empty()) row.eoc = std::log2(rows.back().linf / e.linf);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cadweno
