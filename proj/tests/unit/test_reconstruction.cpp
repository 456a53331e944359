#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "cadweno/reconstruction.hpp"
#include "doctest.h"

using namespace cadweno;

namespace {

std::shared_ptr<const NetworkParams> net(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  auto p = std::make_shared<NetworkParams>();
  for (double& v : p->values) v = u(rng);
  return p;
}

std::vector<WeightingStrategy> all_strategies() {
  return {WeightingStrategy::linear3(), WeightingStrategy::js3(),     WeightingStrategy::z3(),
          WeightingStrategy::cadnn(net(5)), WeightingStrategy::linear5(), WeightingStrategy::js5(),
          WeightingStrategy::m5()};
}

// Fifth-order candidate polynomials (Jiang-Shu) at the right interface of v[2].
double recon5(const std::array<double, 5>& v, const Weights5& w) {
  const double q0 = (2 * v[0] - 7 * v[1] + 11 * v[2]) / 6.0;
  const double q1 = (-v[1] + 5 * v[2] + 2 * v[3]) / 6.0;
  const double q2 = (2 * v[2] + 5 * v[3] - v[4]) / 6.0;
  return w[0] * q0 + w[1] * q1 + w[2] * q2;
}

// One interface at a time, straight from the upwind / mirrored stencil definitions.
std::vector<double> naive_fluxes(const std::vector<double>& fp, const std::vector<double>& fm, int g,
                                 const WeightingStrategy& w) {
  const int n = static_cast<int>(fp.size()) - 2 * g;
  std::vector<double> h;
  for (int k = 0; k <= n; ++k) {
    const int i = g + k - 1;  // interface i + 1/2
    if (w.order() == 3) {
      const Stencil3 plus{fp[i - 1], fp[i], fp[i + 1]};
      const Stencil3 minus{fm[i + 2], fm[i + 1], fm[i]};
      h.push_back(interface_flux3(plus, w) + interface_flux3(minus, w));
    } else {
      const std::array<double, 5> plus{fp[i - 2], fp[i - 1], fp[i], fp[i + 1], fp[i + 2]};
      const std::array<double, 5> minus{fm[i + 3], fm[i + 2], fm[i + 1], fm[i], fm[i - 1]};
      h.push_back(recon5(plus, w.weights5(plus)) + recon5(minus, w.weights5(minus)));
    }
  }
  return h;
}

// Periodic row of sin(x) on [0, 2 pi) with g ghosts per side.
std::vector<double> periodic_row(int n, int g, double (*f)(double)) {
  const double dx = 2 * std::numbers::pi / n;
  std::vector<double> u(n + 2 * g);
  for (int k = 0; k < n + 2 * g; ++k) u[k] = f((k - g + 0.5) * dx);
  return u;
}

double sin_fn(double x) { return std::sin(x); }

}  // namespace

TEST_CASE("lax friedrichs split") {
  const std::vector<double> u{-1.0, 0.0, 1.0};
  auto s = lax_friedrichs_split(u, [](double v) { return v; }, 1.0);
  CHECK(s.fplus == u);
  CHECK(s.fminus == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(s.alpha == 1.0);

  s = lax_friedrichs_split(u, [](double v) { return 0.5 * v * v; }, 1.0);
  CHECK(s.fplus == std::vector<double>{-0.25, 0.0, 0.75});
  CHECK(s.fminus == std::vector<double>{0.75, 0.0, -0.25});

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-3, 3);
  std::vector<double> r(100);
  for (double& v : r) v = d(rng);
  auto cube = [](double v) { return v * v * v; };
  s = lax_friedrichs_split(r, cube, 27.0);
  for (std::size_t k = 0; k < r.size(); ++k) CHECK(std::abs(s.fplus[k] + s.fminus[k] - cube(r[k])) < 1e-15 * 27);
}

TEST_CASE("candidate fluxes") {
  CHECK(candidate_fluxes({1, 1, 1}) == std::array<double, 2>{1, 1});
  CHECK(candidate_fluxes({0, 1, 2}) == std::array<double, 2>{1.5, 1.5});
  CHECK(candidate_fluxes({0, 0, 1}) == std::array<double, 2>{0, 0.5});
}

TEST_CASE("interface flux of three points") {
  for (const auto& w : all_strategies()) {
    if (w.order() != 3) continue;
    CAPTURE(w.name());
    CHECK(interface_flux3({0, 1, 2}, w) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(interface_flux3({-3, -1, 1}, w) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
  CHECK(std::abs(interface_flux3({0, 0, 1}, WeightingStrategy::js3())) < 1e-10);
}

TEST_CASE("strategy metadata") {
  CHECK(WeightingStrategy::z3().order() == 3);
  CHECK(WeightingStrategy::z3().ghost_width() == 2);
  CHECK(WeightingStrategy::m5().order() == 5);
  CHECK(WeightingStrategy::m5().ghost_width() == 3);
  CHECK_THROWS((void)WeightingStrategy::js5().weights3({0, 1, 2}));
  const std::array<double, 5> v{0, 1, 2, 3, 4};
  CHECK_THROWS((void)WeightingStrategy::js3().weights5(v));
}

TEST_CASE("row sweep matches the interface-by-interface oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  for (const auto& w : all_strategies()) {
    CAPTURE(w.name());
    const int g = 3;
    std::vector<double> fp(40 + 2 * g);
    std::vector<double> fm(fp.size());
    for (std::size_t k = 0; k < fp.size(); ++k) {
      fp[k] = d(rng);
      fm[k] = d(rng);
    }
    const auto fast = interface_fluxes(fp, fm, g, w);
    const auto slow = naive_fluxes(fp, fm, g, w);
    REQUIRE(fast.size() == 41);
    for (std::size_t k = 0; k < fast.size(); ++k) CHECK(std::abs(fast[k] - slow[k]) < 1e-14);
  }
}

TEST_CASE("too few ghosts is a dimension error") {
  const std::vector<double> row(20, 1.0);
  const auto id = [](double v) { return v; };
  CHECK_THROWS_AS(weno_derivative_row(row, id, 1.0, WeightingStrategy::js5(), 0.1, 2), DimensionError);
  CHECK_THROWS_AS(weno_derivative_row(row, id, 1.0, WeightingStrategy::z3(), 0.1, 1), DimensionError);
  std::vector<double> out(3);
  CHECK_THROWS_AS(interface_fluxes(row, row, 2, WeightingStrategy::z3(), out), DimensionError);
}

TEST_CASE("constant rows have zero derivative") {
  const std::vector<double> row(30, 2.5);
  for (const auto& w : all_strategies()) {
    const auto d = weno_derivative_row(row, [](double v) { return v; }, 1.0, w, 0.1, 3);
    for (double v : d) CHECK(v == 0.0);
  }
}

TEST_CASE("linear-weight derivative converges at the design order") {
  for (const auto& [w, bound] : {std::pair{WeightingStrategy::linear3(), 2.8}, std::pair{WeightingStrategy::linear5(), 4.8}}) {
    double prev = 0.0;
    double order = 0.0;
    for (int n : {20, 40, 80, 160}) {
      const int g = w.ghost_width();
      const auto u = periodic_row(n, g, sin_fn);
      const double dx = 2 * std::numbers::pi / n;
      const auto d = weno_derivative_row(u, [](double v) { return v; }, 1.0, w, dx, g);
      double err = 0.0;
      for (int i = 0; i < n; ++i) err = std::max(err, std::abs(d[i] - std::cos((i + 0.5) * dx)));
      if (prev > 0.0) order = std::log2(prev / err);
      prev = err;
    }
    CAPTURE(w.name());
    CHECK(order >= bound);
  }
}

TEST_CASE("flux differences telescope") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.5, 2.0);
  std::vector<double> u(60);
  for (double& v : u) v = d(rng);
  auto burgers = [](double v) { return 0.5 * v * v; };
  for (const auto& w : all_strategies()) {
    const int g = 3;
    const double dx = 0.05;
    const auto split = lax_friedrichs_split(u, burgers, 2.0);
    const auto h = interface_fluxes(split.fplus, split.fminus, g, w);
    const auto der = weno_derivative_row(u, burgers, 2.0, w, dx, g);
    double sum = 0.0;
    for (double v : der) sum += v * dx;
    CHECK(std::abs(sum - (h.back() - h.front())) < 1e-12);
  }
}

TEST_CASE("mirror consistency for classical weights") {
  // u odd about the row centre, f(u) = u^2/2: the split swaps f+ and f- under
  // reflection, so the derivative of the even flux must come out odd.
  const int n = 40;
  const int g = 3;
  std::vector<double> u(n + 2 * g);
  for (int k = 0; k < n + 2 * g; ++k) {
    const double x = (k - g + 0.5 - n / 2.0) / n;
    u[k] = std::tanh(8 * x) + 0.3 * x * x * x;
  }
  auto burgers = [](double v) { return 0.5 * v * v; };
  for (const auto& w : {WeightingStrategy::js3(), WeightingStrategy::z3()}) {
    const auto d = weno_derivative_row(u, burgers, 1.5, w, 1.0 / n, g);
    for (int i = 0; i < n; ++i) CHECK(std::abs(d[i] + d[n - 1 - i]) < 1e-12);
  }
}
