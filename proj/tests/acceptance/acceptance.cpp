// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cadweno/network.hpp"
#include "cadweno/problems.hpp"
#include "cadweno/training.hpp"
#include "cadweno/weno_weights.hpp"

using namespace cadweno;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  fs::path weights_dir;
  fs::path config_dir;
  bool verbose = false;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::shared_ptr<const NetworkParams> load_shared(const fs::path& path) {
  return std::make_shared<const NetworkParams>(load_params(path));
}

// 1. Delta layers on the two printed stencils.
Outcome delta_fidelity(const Context&) {
  using A = std::array<double, 4>;
  const bool ok = modified_delta_layer({1, 1, 1}).d == A{1, 1, 0, 0} &&
                  modified_delta_layer({1, 2, 3}).d == A{1, 1, 2, 0} && delta_layer({1, 1, 1}).d == A{0, 0, 0, 0};
  return {ok, ok ? "exact match on (1,1,1) and (1,2,3)" : "mismatch"};
}

// 2. Normalization, flip identity and the zero-curvature Z weights.
Outcome classical_weights(const Context&) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> log_beta(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::bernoulli_distribution sign(0.5);
  double sum_err = 0.0;
  double flip_err = 0.0;
  double lin_err = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double b0 = std::pow(10.0, log_beta(rng));
    const double b1 = std::pow(10.0, log_beta(rng));
    const double f1 = 5.0 * unit(rng);
    const Stencil3 s{f1 + (sign(rng) ? 1 : -1) * std::sqrt(b0), f1, f1 + (sign(rng) ? 1 : -1) * std::sqrt(b1)};
    for (const WeightPair& w : {weights_js(s), weights_z(s)}) sum_err = std::max(sum_err, std::abs(w.w0 + w.w1 - 1.0));
    const WeightPair fj = flip_weights(weights_js(s));
    const WeightPair fz = flip_weights(weights_z(s));
    const WeightPair js = weights_js(s.flipped());
    const WeightPair z = weights_z(s.flipped());
    flip_err = std::max({flip_err, std::abs(fj.w0 - js.w0), std::abs(fj.w1 - js.w1), std::abs(fz.w0 - z.w0),
                         std::abs(fz.w1 - z.w1)});
    const double a = 10.0 * unit(rng);
    const double d = 10.0 * unit(rng);
    const WeightPair zl = weights_z({a, a + d, a + 2.0 * d});
    lin_err = std::max({lin_err, std::abs(zl.w0 - 1.0 / 3.0), std::abs(zl.w1 - 2.0 / 3.0)});
  }
  const bool ok = sum_err <= 1e-12 && flip_err <= 1e-10 && lin_err <= 1e-12;
  return {ok, "sum " + fmt(sum_err, 2) + " <= 1e-12, flip " + fmt(flip_err, 2) + " <= 1e-10, Z linear " +
                  fmt(lin_err, 2) + " <= 1e-12"};
}

// 3. Grid refinement on sin(pi x).
Outcome spatial_order(const Context&) {
  const std::vector<int> n{40, 80, 160, 320};
  const auto lin = convergence_study(smooth_advection_problem(), WeightingStrategy::linear3(), n);
  const auto js5 = convergence_study(smooth_advection_problem(), WeightingStrategy::js5(), n);
  const double e3 = lin.back().eoc;
  const double e5 = js5.back().eoc;
  return {e3 >= 2.8 && e5 >= 4.5, "3-point linear EOC " + fmt(e3, 3) + " >= 2.8, WENO5-JS EOC " + fmt(e5, 3) + " >= 4.5"};
}

// 4. RK3 on u' = -u.
Outcome temporal_order(const Context&) {
  const RhsFunction decay = [](const std::vector<double>& u, double, std::vector<double>& out) {
    out.assign(1, -u[0]);
  };
  double prev = 0.0;
  double eoc = 0.0;
  for (int steps : {10, 20, 40, 80, 160}) {
    std::vector<double> u{1.0};
    const double dt = 1.0 / steps;
    for (int k = 0; k < steps; ++k) u = rk3_step(u, k * dt, dt, decay);
    const double err = std::abs(u[0] - std::exp(-1.0));
    if (prev > 0.0) eoc = std::log2(prev / err);
    prev = err;
  }
  return {eoc >= 2.9, "EOC " + fmt(eoc, 3) + " >= 2.9"};
}

bool kink_free(const Stencil3& s) {
  const double d1 = std::abs(s.f0 - s.f1);
  const double d2 = std::abs(s.f1 - s.f2);
  return d1 > 1e-4 && d2 > 1e-4 && std::abs(d1 - d2) > 1e-2 * std::max(d1, d2) &&
         std::abs(s.f0 - 2 * s.f1 + s.f2) > 1e-6;
}

// 5. Analytic gradient against central differences.
Outcome gradient_check(const Context&) {
  const Dataset ds = generate_dataset(11);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, ds.samples.size() - 1);
  std::vector<Sample> batch;
  while (batch.size() < 32) {
    const Sample& s = ds.samples[pick(rng)];
    if (kink_free(s.stencil.left()) && kink_free(s.stencil.right())) batch.push_back(s);
  }
  NetworkParams p = initialize_params(3);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  for (int k = kB1Offset; k < kB1Offset + kHiddenWidth; ++k) p.values[k] = jitter(rng);
  const Hyperparams h{.c = 7000, .d = 800};
  const LossAndGradient lg = gradient(p, batch, h);
  std::uniform_int_distribution<int> coord(0, kParameterCount - 1);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int j = coord(rng);
    NetworkParams plus = p;
    NetworkParams minus = p;
    plus.values[j] += 1e-6;
    minus.values[j] -= 1e-6;
    const double fd = (total_loss(plus, batch, h).total - total_loss(minus, batch, h).total) / 2e-6;
    worst = std::max(worst, std::abs(lg.grad[j] - fd) / (std::abs(lg.grad[j]) + 1e-8));
  }
  return {worst < 1e-4, "max relative error " + fmt(worst, 3) + " < 1e-4 over 20 coordinates"};
}

// Smooth stencils: zero curvature and points of random cubics at dx = 0.01.
std::vector<Stencil3> smooth_stencils(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pos(-99, 99);
  std::vector<Stencil3> out;
  for (int k = 0; k < count; ++k) {
    if (k % 2 == 0) {
      const double a = 10.0 * u(rng);
      const double d = u(rng);
      out.push_back({a, a + d, a + 2.0 * d});
    } else {
      const std::array<double, 4> c{u(rng), u(rng), u(rng), u(rng)};
      auto f = [&](double x) { return c[0] + x * (c[1] + x * (c[2] + x * c[3])); };
      const double x = pos(rng) * kTrainingSpacing;
      out.push_back({f(x - kTrainingSpacing), f(x), f(x + kTrainingSpacing)});
    }
  }
  return out;
}

// One-sided jumps; `bad` is the index of the substencil that crosses the jump.
struct JumpStencil {
  Stencil3 s;
  int bad;
};

std::vector<JumpStencil> jump_stencils(std::mt19937_64& rng, int count) {
  std::uniform_real_distribution<double> c(-10.0, 10.0);
  std::uniform_real_distribution<double> jump(0.5, 2.5);
  std::bernoulli_distribution coin(0.5);
  std::vector<JumpStencil> out;
  for (int k = 0; k < count; ++k) {
    Stencil3 s;
    if (k % 2 == 0) {
      const double a = c(rng);
      double b = c(rng);
      while (std::abs(b - a) < 1e-3) b = c(rng);
      s = {a, a, b};
    } else {
      const double slope = (coin(rng) ? 1.0 : -1.0) * kTrainingSpacing;
      s = {0.0, slope, 2.0 * slope + (coin(rng) ? 1.0 : -1.0) * jump(rng)};
    }
    // jump between f1 and f2 poisons substencil 1; the mirror poisons substencil 0
    if (coin(rng)) {
      out.push_back({s.flipped(), 0});
    } else {
      out.push_back({s, 1});
    }
  }
  return out;
}

// 6. Train (5750, 0) for the default epoch budget and check loss decrease and
// the two weight properties. Seeds and data come from the shipped config.
Outcome training_sanity(const Context& ctx) {
  const TrainingConfig cfg = parse_training_config(ctx.config_dir / "cadnn1.cfg");
  Hyperparams h = cfg.hyper;
  h.c = 5750;
  h.d = 0;
  h.epochs = Hyperparams{}.epochs;
  const Dataset ds = generate_dataset(cfg.dataset_seed, cfg.layout);
  const TrainingResult r = train(h, ds, [&](const EpochRecord& e) {
    if (ctx.verbose && e.epoch % 50 == 0) std::cerr << "  epoch " << e.epoch << " l_cad " << e.mean.l_cad << '\n';
  });
  const double first = r.history.front().mean.l_cad;
  const double last = r.history.back().mean.l_cad;
  const double drop = 1.0 - last / first;

  std::mt19937_64 rng(77);
  int near_linear = 0;
  for (const Stencil3& s : smooth_stencils(rng, 1000)) {
    const WeightPair w = forward(r.params, s);
    if (std::abs(w.w0 - 1.0 / 3.0) < 0.05 && std::abs(w.w1 - 2.0 / 3.0) < 0.05) ++near_linear;
  }
  int eno = 0;
  for (const JumpStencil& j : jump_stencils(rng, 1000)) {
    const WeightPair w = forward(r.params, j.s);
    if ((j.bad == 0 ? w.w0 : w.w1) < 0.05) ++eno;
  }
  const bool ok = drop >= 0.9 && near_linear >= 950 && eno >= 950;
  return {ok, std::to_string(h.epochs) + " epochs: l_cad drop " + fmt(100 * drop, 5) + "% >= 90%, smooth near linear " +
                  std::to_string(near_linear) + "/1000 >= 950, jump weight < 0.05 " + std::to_string(eno) +
                  "/1000 >= 950"};
}

double density_l1(const std::string& problem, const WeightingStrategy& w) {
  const ProblemSpec p = find_problem(problem);
  const RunResult r = advance(p, w);
  return error_report(r.grid.interior(0), reference_solution(p), r.grid.dx()).l1;
}

// 7. Shock-tube error ordering.
Outcome shock_tube_ordering(const Context& ctx) {
  std::ostringstream detail;
  bool js5_ok = true;
  std::vector<double> z3;
  for (const char* name : {"sod", "lax"}) {
    const double ez = density_l1(name, WeightingStrategy::z3());
    const double e5 = density_l1(name, WeightingStrategy::js5());
    z3.push_back(ez);
    js5_ok = js5_ok && e5 <= ez;
    detail << name << " Z3 " << fmt(ez) << " JS5 " << fmt(e5) << "; ";
  }

  auto cadnn_ok = [&](const std::shared_ptr<const NetworkParams>& net, const std::string& label) {
    bool ok = true;
    int k = 0;
    for (const char* name : {"sod", "lax"}) {
      const double e = density_l1(name, WeightingStrategy::cadnn(net));
      ok = ok && e <= 1.05 * z3[k];
      detail << label << ' ' << name << ' ' << fmt(e) << " (" << fmt(e / z3[k], 3) << "x) ";
      ++k;
    }
    return ok;
  };

  bool ok = cadnn_ok(load_shared(ctx.weights_dir / "cadnn2.json"), "CADNN2 seed 1");
  if (!ok) {
    const TrainingConfig cfg = parse_training_config(ctx.config_dir / "cadnn2.cfg");
    const Dataset ds = generate_dataset(cfg.dataset_seed, cfg.layout);
    for (std::uint64_t seed = cfg.hyper.seed + 1; seed <= cfg.hyper.seed + 2 && !ok; ++seed) {
      Hyperparams h = cfg.hyper;
      h.seed = seed;
      auto net = std::make_shared<const NetworkParams>(train(h, ds).params);
      ok = cadnn_ok(net, "CADNN2 seed " + std::to_string(seed));
    }
  }
  detail << "| bounds: CADNN2 <= 1.05 Z3, JS5 <= Z3";
  return {ok && js5_ok, detail.str()};
}

// 8. Positivity and finiteness on the hard problems.
Outcome robustness(const Context& ctx) {
  const std::vector<std::pair<std::string, WeightingStrategy>> schemes{
      {"Z3", WeightingStrategy::z3()},
      {"CADNN1", WeightingStrategy::cadnn(load_shared(ctx.weights_dir / "cadnn1.json"))},
      {"CADNN2", WeightingStrategy::cadnn(load_shared(ctx.weights_dir / "cadnn2.json"))},
      {"JS5", WeightingStrategy::js5()}};
  std::ostringstream detail;
  bool ok = true;
  auto attempt = [&](const ProblemSpec& p, const std::string& label, const WeightingStrategy& w) {
    try {
      const RunResult r = advance(p, w);
      const bool good = r.diagnostics.min_density > 0.0 && r.diagnostics.min_pressure > 0.0;
      ok = ok && good;
      detail << p.name << '/' << label << (good ? " ok" : " non-positive") << " (min rho " << fmt(r.diagnostics.min_density, 3)
             << ", " << fmt(r.diagnostics.wall_seconds, 3) << " s); ";
    } catch (const std::exception& e) {
      ok = false;
      detail << p.name << '/' << label << " FAILED: " << e.what() << "; ";
    }
  };
  for (const char* name : {"123", "double-rarefaction"}) {
    for (const auto& [label, w] : schemes) attempt(find_problem(name), label, w);
  }
  attempt(with_resolution(find_problem("double-mach"), 400, 100), "Z3", WeightingStrategy::z3());
  attempt(with_resolution(find_problem("riemann-2d"), 200, 200), "Z3", WeightingStrategy::z3());
  return {ok, detail.str()};
}

// 9. Discrete conservation on a periodic Euler run.
Outcome conservation(const Context& ctx) {
  ProblemSpec p = find_problem("sod");
  p.name = "periodic-euler";
  p.x_min = 0.0;
  p.x_max = 1.0;
  p.nx = 128;
  p.riemann.reset();
  p.reference = {};
  p.bc.left = Periodic{};
  p.bc.right = Periodic{};
  p.initial = [](double x, double) {
    return std::vector<double>{1.0 + 0.5 * std::sin(2 * std::numbers::pi * x), 1.0, 1.0 + (x > 0.5 ? 0.5 : 0.0)};
  };
  const SolverSetup setup = make_setup(p);
  double worst = 0.0;
  for (const WeightingStrategy& w : {WeightingStrategy::z3(), WeightingStrategy::js5(),
                                     WeightingStrategy::cadnn(load_shared(ctx.weights_dir / "cadnn2.json"))}) {
    ConservedGrid grid = initial_grid(p, w.ghost_width());
    ConservedGrid work = grid;
    const RhsFunction op = [&](const std::vector<double>& state, double t, std::vector<double>& out) {
      work.data() = state;
      rhs(work, setup, w, t, out);
    };
    std::array<double, 3> before{};
    for (int c = 0; c < 3; ++c) {
      for (double v : grid.interior(c)) before[c] += v;
    }
    double t = 0.0;
    for (int step = 0; step < 100; ++step) {
      fill_ghosts(grid, setup, t);
      const double dt = p.cfl * grid.dx() / max_wave_speed(grid, setup).x;
      grid.data() = rk3_step(grid.data(), t, dt, op);
      t += dt;
    }
    for (int c = 0; c < 3; ++c) {
      double after = 0.0;
      for (double v : grid.interior(c)) after += v;
      worst = std::max(worst, std::abs(after - before[c]) / std::abs(before[c]));
    }
  }
  return {worst <= 1e-10, "max relative drift " + fmt(worst, 3) + " <= 1e-10 after 100 steps (Z3, JS5, CADNN2)"};
}

// 10. Exact Riemann solver residuals.
Outcome riemann_solver(const Context&) {
  double worst = 0.0;
  for (const char* name : {"sod", "lax", "123", "double-rarefaction"}) {
    const RiemannStates s = *find_problem(name).riemann;
    worst = std::max(worst, std::abs(riemann_pressure_function(s, riemann_star(s).p)));
  }
  const double u123 = std::abs(riemann_star(*find_problem("123").riemann).u);
  return {worst < 1e-10 && u123 <= 1e-12,
          "max residual " + fmt(worst, 3) + " < 1e-10, 123 star velocity " + fmt(u123, 3) + " <= 1e-12"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(const Context&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cadweno acceptance suite"};
  Context ctx;
  std::string weights_dir = CADWENO_ACCEPTANCE_WEIGHTS_DIR;
  std::string config_dir = CADWENO_ACCEPTANCE_CONFIG_DIR;
  std::vector<int> only;
  app.add_option("--weights-dir", weights_dir, "Directory with cadnn1.json and cadnn2.json")->capture_default_str();
  app.add_option("--config-dir", config_dir, "Directory with the training configs")->capture_default_str();
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_flag("--verbose", ctx.verbose, "Progress on stderr");
  CLI11_PARSE(app, argc, argv);
  ctx.weights_dir = weights_dir;
  ctx.config_dir = config_dir;

  const std::vector<Criterion> criteria{
      {1, "delta-layer fidelity", delta_fidelity},
      {2, "classical weight properties", classical_weights},
      {3, "spatial order", spatial_order},
      {4, "temporal order", temporal_order},
      {5, "gradient correctness", gradient_check},
      {6, "training sanity", training_sanity},
      {7, "shock-tube ordering", shock_tube_ordering},
      {8, "robustness", robustness},
      {9, "conservation", conservation},
      {10, "exact Riemann solver", riemann_solver},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed;
}
