#include <cmath>
#include <numeric>

#include "cadweno/problems.hpp"
#include "cadweno/solvers.hpp"
#include "doctest.h"

using namespace cadweno;

namespace {

ConservedGrid euler1d(int n, int g) {
  ConservedGrid grid(3, n, 1, g, 0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const auto q = prim_to_cons(std::array<double, 3>{1.0 + 0.2 * std::sin(2 * M_PI * x), 0.5 + 0.1 * x, 1.0 + x},
                                EosParams{});
    for (int c = 0; c < 3; ++c) grid.at(c, i) = q[c];
  }
  return grid;
}

}  // namespace

TEST_CASE("primitive and conserved variables") {
  const EosParams eos;
  const auto q = prim_to_cons(std::array<double, 3>{1.0, 0.0, 1.0}, eos);
  CHECK(q[2] == doctest::Approx(2.5));
  const auto q2 = prim_to_cons(std::array<double, 4>{2.0, 1.0, -3.0, 0.4}, eos);
  CHECK(q2[1] == 2.0);
  CHECK(q2[2] == -6.0);
  CHECK(q2[3] == doctest::Approx(0.4 / 0.4 + 0.5 * 2.0 * 10.0));
  const auto w = cons_to_prim(q2, eos);
  CHECK(w[0] == 2.0);
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(w[2] == doctest::Approx(-3.0));
  CHECK(w[3] == doctest::Approx(0.4));

  try {
    cons_to_prim(std::array<double, 3>{1.0, 2.0, 1.0}, eos, 17);
    FAIL("expected a positivity error");
  } catch (const PositivityError& e) {
    CHECK(e.i() == 17);
  }
  CHECK_THROWS_AS(cons_to_prim(std::array<double, 4>{-1.0, 0, 0, 1}, eos, 1, 2), PositivityError);
}

TEST_CASE("grid layout") {
  ConservedGrid g(4, 5, 3, 2, 0.0, 1.0, -1.0, 2.0);
  CHECK(g.dimension() == 2);
  CHECK(g.dx() == doctest::Approx(0.2));
  CHECK(g.dy() == doctest::Approx(1.0));
  CHECK(g.x(0) == doctest::Approx(0.1));
  CHECK(g.y(2) == doctest::Approx(1.5));
  CHECK(g.index(0, -2, -2) == 0);
  CHECK(g.index(1, 0, 0) - g.index(0, 0, 0) == 9 * 7);
  g.at(3, 4, 2) = 7.0;
  g.set_solid(1, 1, true);
  CHECK(g.is_solid(1, 1));
  CHECK(g.interior(3).size() == 14);
  CHECK(g.interior(3).back() == 7.0);

  ConservedGrid line(3, 10, 1, 3, 0.0, 1.0);
  CHECK(line.dimension() == 1);
  CHECK(line.ghost_rows() == 0);
}

TEST_CASE("ghost fill") {
  SolverSetup s;
  SUBCASE("periodic") {
    ConservedGrid g(1, 6, 1, 2, 0.0, 1.0);
    for (int i = 0; i < 6; ++i) g.at(0, i) = i;
    s.model = ModelKind::kAdvection;
    s.bc.left = Periodic{};
    s.bc.right = Periodic{};
    fill_ghosts(g, s, 0.0);
    CHECK(g.at(0, -1) == 5);
    CHECK(g.at(0, -2) == 4);
    CHECK(g.at(0, 6) == 0);
    CHECK(g.at(0, 7) == 1);
  }
  SUBCASE("transmissive and reflective") {
    ConservedGrid g = euler1d(8, 3);
    s.bc.left = Transmissive{};
    s.bc.right = Reflective{};
    fill_ghosts(g, s, 0.0);
    for (int k = 1; k <= 3; ++k) {
      for (int c = 0; c < 3; ++c) CHECK(g.at(c, -k) == g.at(c, 0));
      CHECK(g.at(0, 7 + k) == g.at(0, 8 - k));
      CHECK(g.at(1, 7 + k) == -g.at(1, 8 - k));
      CHECK(g.at(2, 7 + k) == g.at(2, 8 - k));
    }
  }
  SUBCASE("dirichlet") {
    ConservedGrid g = euler1d(8, 2);
    s.bc.left = Dirichlet{{1.4, 3.0, 1.0}};
    fill_ghosts(g, s, 0.0);
    const auto q = prim_to_cons(std::array<double, 3>{1.4, 3.0, 1.0}, s.eos);
    CHECK(g.at(0, -1) == q[0]);
    CHECK(g.at(1, -2) == q[1]);
    CHECK(g.at(2, -2) == q[2]);
  }
  SUBCASE("reflective y flips the vertical momentum") {
    ConservedGrid g(4, 4, 4, 2, 0, 1, 0, 1);
    for (int j = 0; j < 4; ++j)
      for (int i = 0; i < 4; ++i) {
        const auto q = prim_to_cons(std::array<double, 4>{1.0 + i, 0.3, 0.2 + j, 1.0}, s.eos);
        for (int c = 0; c < 4; ++c) g.at(c, i, j) = q[c];
      }
    s.bc = BoundarySpec{Reflective{}, Reflective{}, Reflective{}, Reflective{}, {}};
    fill_ghosts(g, s, 0.0);
    CHECK(g.at(2, 1, -1) == -g.at(2, 1, 0));
    CHECK(g.at(1, 1, -1) == g.at(1, 1, 0));
    CHECK(g.at(1, -2, 2) == -g.at(1, 1, 2));
    CHECK(g.at(2, 4, 3) == g.at(2, 3, 3));
  }
}

TEST_CASE("double Mach reflection states satisfy the Mach 10 jump conditions") {
  const double gamma = 1.4;
  const double m = 10.0;
  const auto pre = dmr_pre_shock();
  const double c1 = std::sqrt(gamma * pre[3] / pre[0]);
  const double rho2 = pre[0] * (gamma + 1) * m * m / ((gamma - 1) * m * m + 2);
  const double p2 = pre[3] * (2 * gamma * m * m - (gamma - 1)) / (gamma + 1);
  const double speed = m * c1 * (1 - pre[0] / rho2);
  const auto post = dmr_post_shock();
  CHECK(post[0] == doctest::Approx(rho2).epsilon(1e-12));
  CHECK(post[3] == doctest::Approx(p2).epsilon(1e-12));
  CHECK(std::hypot(post[1], post[2]) == doctest::Approx(speed).epsilon(1e-12));
  // flow normal to a shock inclined 60 degrees to the x axis
  CHECK(std::atan2(-post[2], post[1]) == doctest::Approx(M_PI / 6));
  CHECK(dmr_shock_foot(0.0, 0.0) == doctest::Approx(1.0 / 6.0));
  // the foot moves along x at the shock speed over sin(60 deg)
  CHECK(dmr_shock_foot(0.0, 0.1) - dmr_shock_foot(0.0, 0.0) == doctest::Approx(0.1 * m / std::sin(M_PI / 3)));
  CHECK(dmr_shock_foot(1.0, 0.0) == doctest::Approx(1.0 / 6.0 + 1.0 / std::sqrt(3.0)));
}

TEST_CASE("wave speeds") {
  ConservedGrid g(3, 2, 1, 2, 0.0, 1.0);
  const auto a = prim_to_cons(std::array<double, 3>{1.0, -2.0, 1.0}, EosParams{});
  const auto b = prim_to_cons(std::array<double, 3>{0.5, 0.5, 2.0}, EosParams{});
  for (int c = 0; c < 3; ++c) {
    g.at(c, 0) = a[c];
    g.at(c, 1) = b[c];
  }
  const auto s = max_wave_speed(g, SolverSetup{});
  CHECK(s.x == doctest::Approx(std::max(2.0 + std::sqrt(1.4), 0.5 + std::sqrt(1.4 * 4.0))));

  ConservedGrid u(1, 3, 1, 2, 0.0, 1.0);
  SolverSetup adv;
  adv.model = ModelKind::kAdvection;
  adv.advection_speed = -0.7;
  CHECK(max_wave_speed(u, adv).x == doctest::Approx(0.7));
}

TEST_CASE("rhs vanishes on uniform flow") {
  ConservedGrid g(4, 12, 10, 3, 0, 1, 0, 1);
  const auto q = prim_to_cons(std::array<double, 4>{1.3, 0.4, -0.2, 2.0}, EosParams{});
  for (int j = 0; j < 10; ++j)
    for (int i = 0; i < 12; ++i)
      for (int c = 0; c < 4; ++c) g.at(c, i, j) = q[c];
  SolverSetup s;
  s.bc = BoundarySpec{Periodic{}, Periodic{}, Periodic{}, Periodic{}, {}};
  std::vector<double> tend;
  rhs(g, s, WeightingStrategy::m5(), 0.0, tend);
  for (double v : tend) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("periodic rhs conserves every component") {
  ConservedGrid g = euler1d(64, 3);
  SolverSetup s;
  s.bc.left = Periodic{};
  s.bc.right = Periodic{};
  std::vector<double> tend;
  for (const auto vars : {ReconstructionVariables::kComponent, ReconstructionVariables::kCharacteristic}) {
    s.variables = vars;
    for (const auto& w : {WeightingStrategy::z3(), WeightingStrategy::js5()}) {
      rhs(g, s, w, 0.0, tend);
      for (int c = 0; c < 3; ++c) {
        double sum = 0.0;
        for (int i = 0; i < 64; ++i) sum += tend[g.index(c, i)];
        CHECK(std::abs(sum) < 1e-11);
      }
    }
  }
}

namespace {

// Euler flux along `normal` for a conserved state of 3 or 4 components.
std::vector<double> euler_flux(const std::vector<double>& q, int normal, double gamma) {
  const int nc = static_cast<int>(q.size());
  double kinetic = 0.0;
  for (int c = 1; c < nc - 1; ++c) kinetic += q[c] * q[c];
  const double p = (gamma - 1.0) * (q[nc - 1] - 0.5 * kinetic / q[0]);
  const double un = q[normal] / q[0];
  std::vector<double> f(nc);
  f[0] = q[normal];
  for (int c = 1; c < nc - 1; ++c) f[c] = q[c] * un;
  f[normal] += p;
  f[nc - 1] = un * (q[nc - 1] + p);
  return f;
}

}  // namespace

TEST_CASE("Roe eigenbasis is biorthogonal and diagonalizes the flux Jacobian") {
  const double gamma = 1.4;
  const std::vector<std::vector<double>> prims{{1.0, 0.3, 2.0}, {0.2, -1.5, 0.05}, {1.3, 0.4, -0.7, 2.0},
                                                {5.0, -2.0, 1.0, 30.0}};
  for (const auto& w : prims) {
    const int nc = static_cast<int>(w.size());
    std::vector<double> q;
    if (nc == 3) {
      const auto a = prim_to_cons(std::array<double, 3>{w[0], w[1], w[2]}, EosParams{gamma});
      q.assign(a.begin(), a.end());
    } else {
      const auto a = prim_to_cons(std::array<double, 4>{w[0], w[1], w[2], w[3]}, EosParams{gamma});
      q.assign(a.begin(), a.end());
    }
    for (int normal = 1; normal <= nc - 2; ++normal) {
      const EigenBasis e = roe_eigenbasis(q, q, normal, gamma);
      for (int r = 0; r < nc; ++r) {
        for (int c = 0; c < nc; ++c) {
          double lr = 0.0;
          for (int k = 0; k < nc; ++k) lr += e.left[r * nc + k] * e.right[k * nc + c];
          CHECK(lr == doctest::Approx(r == c ? 1.0 : 0.0).scale(1.0).epsilon(1e-12));
        }
      }
      // central-difference Jacobian applied to each right eigenvector
      const double un = w[normal];
      const double c = std::sqrt(gamma * w[nc - 1] / w[0]);
      for (int s = 0; s < nc; ++s) {
        const double lambda = s == 0 ? un - c : (s == nc - 1 ? un + c : un);
        std::vector<double> col(nc);
        double norm = 0.0;
        for (int k = 0; k < nc; ++k) {
          col[k] = e.right[k * nc + s];
          norm += col[k] * col[k];
        }
        const double h = 1e-6 * std::sqrt(q[0] * q[0] + q[nc - 1] * q[nc - 1]) / std::sqrt(norm);
        std::vector<double> qp = q;
        std::vector<double> qm = q;
        for (int k = 0; k < nc; ++k) {
          qp[k] += h * col[k];
          qm[k] -= h * col[k];
        }
        const auto fp = euler_flux(qp, normal, gamma);
        const auto fm = euler_flux(qm, normal, gamma);
        for (int k = 0; k < nc; ++k) {
          const double ar = (fp[k] - fm[k]) / (2 * h);
          CHECK(ar == doctest::Approx(lambda * col[k]).scale(1.0 + std::abs(lambda) * std::sqrt(norm)).epsilon(1e-6));
        }
      }
    }
  }
  const std::vector<double> q3{1.0, 0.0, 2.5};
  CHECK_THROWS_AS((void)roe_eigenbasis(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 0.0}, 1, 1.4),
                  DimensionError);
  CHECK_THROWS_AS((void)roe_eigenbasis(q3, q3, 2, 1.4), std::invalid_argument);
  const std::vector<double> bad{1.0, 0.0, -1.0};
  CHECK_THROWS_AS((void)roe_eigenbasis(bad, bad, 1, 1.4), PositivityError);
}

TEST_CASE("characteristic and component reconstruction agree for linear weights") {
  ConservedGrid g = euler1d(48, 3);
  SolverSetup s;
  s.bc.left = Periodic{};
  s.bc.right = Periodic{};
  for (const auto& w : {WeightingStrategy::linear3(), WeightingStrategy::linear5()}) {
    std::vector<double> comp;
    std::vector<double> chars;
    s.variables = ReconstructionVariables::kComponent;
    rhs(g, s, w, 0.0, comp);
    s.variables = ReconstructionVariables::kCharacteristic;
    rhs(g, s, w, 0.0, chars);
    for (std::size_t k = 0; k < comp.size(); ++k) CHECK(chars[k] == doctest::Approx(comp[k]).scale(1.0).epsilon(1e-11));
  }
}

TEST_CASE("Rayleigh-Taylor source adds gravity terms") {
  ConservedGrid g(4, 8, 8, 2, 0, 1, 0, 1);
  const auto q = prim_to_cons(std::array<double, 4>{2.0, 0.0, 0.5, 1.0}, EosParams{});
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i)
      for (int c = 0; c < 4; ++c) g.at(c, i, j) = q[c];
  SolverSetup s;
  s.bc = BoundarySpec{Periodic{}, Periodic{}, Periodic{}, Periodic{}, {}};
  s.source = SourceKind::kRayleighTaylor;
  std::vector<double> tend;
  rhs(g, s, WeightingStrategy::z3(), 0.0, tend);
  CHECK(tend[g.index(2, 3, 3)] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(tend[g.index(3, 3, 3)] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(tend[g.index(0, 3, 3)]) < 1e-13);
}

TEST_CASE("rk3 on a linear ODE") {
  const RhsFunction decay = [](const std::vector<double>& u, double, std::vector<double>& out) {
    out.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) out[k] = -u[k];
  };
  // SSP RK3 reproduces the cubic Taylor polynomial of exp(-dt) on linear problems
  const double dt = 0.1;
  const auto one = rk3_step({1.0}, 0.0, dt, decay);
  CHECK(one[0] == doctest::Approx(1 - dt + dt * dt / 2 - dt * dt * dt / 6).epsilon(1e-15));

  double prev = 0.0;
  double order = 0.0;
  for (int steps : {10, 20, 40, 80}) {
    std::vector<double> u{1.0};
    for (int k = 0; k < steps; ++k) u = rk3_step(u, k * 1.0 / steps, 1.0 / steps, decay);
    const double err = std::abs(u[0] - std::exp(-1.0));
    if (prev > 0.0) order = std::log2(prev / err);
    prev = err;
  }
  CHECK(order >= 2.9);

  const RhsFunction bad = [](const std::vector<double>& u, double, std::vector<double>& out) {
    out.assign(u.size(), NAN);
  };
  CHECK_THROWS_AS(rk3_step({1.0}, 0.0, 0.1, bad), SolverError);
  CHECK_THROWS(rk3_step({1.0}, 0.0, 0.0, decay));
}

TEST_CASE("forward step cells are solid and stay frozen") {
  ProblemSpec p = with_resolution(find_problem("forward-step"), 30, 10, 0.01);
  const ConservedGrid g0 = initial_grid(p, 2);
  int solid = 0;
  for (int j = 0; j < g0.ny(); ++j)
    for (int i = 0; i < g0.nx(); ++i)
      if (g0.is_solid(i, j)) {
        ++solid;
        CHECK(g0.x(i) > 0.6);
        CHECK(g0.y(j) < 0.2);
      }
  CHECK(solid == 24 * 2);
  const RunResult r = advance(p, WeightingStrategy::z3());
  CHECK(r.diagnostics.min_density > 0.0);
  CHECK(r.grid.at(0, 29, 0) == g0.at(0, 29, 0));
}
