#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "specshare/closed_form.hpp"
#include "specshare/models.hpp"
#include "specshare/solver.hpp"
#include "test_util.hpp"

using namespace specshare;

namespace {

// Latency curves matching a MarketConfig's linear model, for checking the
// general-model paths against the specialized ones.
LatencyModel linear_latency_for(const MarketConfig& c) {
  std::vector<Curve> pre, avail;
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    pre.push_back(Curve::linear(1.0 / c.proprietary(i)));
    avail.push_back(Curve::linear(1.0 / c.licensed_capacity(i)));
  }
  const double w0 = c.effective_open_bw();
  return LatencyModel(std::move(pre), std::move(avail),
                      Curve::linear(w0 > 0.0 ? 1.0 / w0 : 1.0),
                      c.market_capacity());
}

}  // namespace

TEST_CASE("potential frozen values", "[solver]") {
  SECTION("zero allocation") {
    testutil::Rng rng(61);
    for (int k = 0; k < 20; ++k) {
      const MarketConfig c = testutil::random_config(rng);
      CHECK(potential_value(c, Allocation::zeros(c.n_sps)) == 0.0);
    }
  }
  SECTION("single SP licensed") {
    MarketConfig c = MarketConfig::licensed({1.0});
    CHECK(potential_value(c, {{0.25}, {0.0}}) ==
          Catch::Approx(0.125).margin(1e-15));
  }
}

TEST_CASE("potential deviation identity", "[solver]") {
  testutil::Rng rng(67);
  for (int k = 0; k < 2000; ++k) {
    const MarketConfig c = testutil::random_config(rng);
    Allocation a = testutil::random_allocation(rng, c);
    Allocation b = a;
    const std::size_t i =
        static_cast<std::size_t>(rng.integer(0, static_cast<long>(c.n_sps) - 1));
    b.licensed[i] = rng.uniform(0.0, 0.2);
    if (c.open_access_bw > 0.0) b.open[i] = rng.uniform(0.0, 0.2);
    const double dphi = potential_value(c, b) - potential_value(c, a);
    const double du = revenues(c, b)[i] - revenues(c, a)[i];
    REQUIRE(dphi == Catch::Approx(du).margin(1e-12));
  }
}

TEST_CASE("potential with general proprietary latency", "[solver]") {
  MarketConfig c = MarketConfig::licensed({1.0, 2.0});
  c.open_access_bw = 1.0;
  c.availability = 0.6;
  const DemandModel demand = DemandModel::linear();
  // quadratic (convex increasing) licensed latencies, linear open band
  auto quad = [](double a1, double a2) {
    return Curve{[=](double t) { return a1 * t + a2 * t * t; },
                 [=](double t) { return a1 + 2.0 * a2 * t; },
                 [=](double) { return 2.0 * a2; }};
  };
  const LatencyModel lat({quad(1.0, 0.5), quad(0.5, 0.2)},
                         {quad(0.8, 0.4), quad(0.4, 0.1)},
                         Curve::linear(1.0 / c.effective_open_bw()), 1.0);

  SECTION("deviation identity still holds") {
    testutil::Rng rng(71);
    auto utility = [&](const Allocation& a, std::size_t i) {
      const double y = a.licensed[i] + a.open[i];
      const double total = a.total_served();
      const double x = a.licensed[i], w = a.open[i];
      return y * demand.value(total) -
             (1.0 - c.availability) * lat.when_preempted[i].value(y) * y -
             c.availability * lat.when_available[i].value(x) * x -
             c.availability * w * lat.open_band.value(a.total_open());
    };
    for (int k = 0; k < 500; ++k) {
      Allocation a = testutil::random_allocation(rng, c);
      Allocation b = a;
      const std::size_t i = static_cast<std::size_t>(rng.integer(0, 1));
      b.licensed[i] = rng.uniform(0.0, 0.2);
      b.open[i] = rng.uniform(0.0, 0.2);
      const double dphi =
          potential_value(c, b, demand, lat) - potential_value(c, a, demand, lat);
      const double du = utility(b, i) - utility(a, i);
      REQUIRE(dphi == Catch::Approx(du).margin(1e-12));
    }
  }
  SECTION("nonlinear demand is rejected") {
    const DemandModel curved(
        Curve{[](double y) { return 1.0 - y * y; },
              [](double y) { return -2.0 * y; }, [](double) { return -2.0; }},
        0.9);
    CHECK_THROWS_AS(
        potential_value(c, Allocation::zeros(2), curved, lat),
        UnsupportedModelError);
  }
  SECTION("nonlinear open-band latency is rejected") {
    const LatencyModel bad({quad(1.0, 0.5), quad(0.5, 0.2)},
                           {quad(0.8, 0.4), quad(0.4, 0.1)}, quad(1.0, 1.0),
                           1.0);
    CHECK_THROWS_AS(potential_value(c, Allocation::zeros(2), demand, bad),
                    UnsupportedModelError);
  }
}

TEST_CASE("best response", "[solver]") {
  SECTION("no residual demand") {
    MarketConfig c = MarketConfig::licensed({1.0, 1.0});
    Allocation others{{0.0, 1.0}, {0.0, 0.0}};
    CHECK(best_response(c, 0, others) == std::pair{0.0, 0.0});
  }
  SECTION("licensed duopoly reaction") {
    MarketConfig c = MarketConfig::licensed({1.0, 1.0});
    Allocation others{{0.0, 0.2}, {0.0, 0.0}};
    const auto [x, w] = best_response(c, 0, others);
    CHECK(x == Catch::Approx(0.2).margin(1e-15));
    CHECK(w == 0.0);
  }
  SECTION("equilibrium is a fixed point") {
    MarketConfig c = MarketConfig::licensed({1.0, 1.0});
    c.open_access_bw = 1.0;
    c.availability = 0.9;
    const double xs = 15.0 / 107.0, ws = 10.0 / 107.0;
    Allocation eq{{xs, xs}, {ws, ws}};
    for (std::size_t i = 0; i < 2; ++i) {
      const auto [x, w] = best_response(c, i, eq);
      REQUIRE(x == Catch::Approx(xs).margin(1e-12));
      REQUIRE(w == Catch::Approx(ws).margin(1e-12));
    }
  }
}

TEST_CASE("solve licensed duopoly", "[solver]") {
  MarketConfig c = MarketConfig::licensed({1.0, 1.0});
  const auto eq = solve_equilibrium(c);
  CHECK(eq.allocation.licensed[0] == Catch::Approx(0.2).margin(1e-9));
  CHECK(eq.allocation.licensed[1] == Catch::Approx(0.2).margin(1e-9));
  CHECK(eq.kkt.pass());
}

TEST_CASE("solve open-access duopoly", "[solver]") {
  MarketConfig c = MarketConfig::licensed({1.0, 1.0});
  c.open_access_bw = 1.0;
  c.availability = 0.9;
  const auto eq = solve_equilibrium(c);
  CHECK(eq.allocation.licensed[0] ==
        Catch::Approx(15.0 / 107.0).margin(1e-9));
  CHECK(eq.allocation.open[0] == Catch::Approx(10.0 / 107.0).margin(1e-9));
  CHECK(eq.kkt.pass());
  CHECK(eq.max_restart_distance <= 1e-7);
}

TEST_CASE("solve with a dominant SP: vacate pattern", "[solver]") {
  MarketConfig c = MarketConfig::licensed({30.0, 30.0, 1.0});
  c.open_access_bw = 10.0;
  c.availability = 0.9;
  const auto eq = solve_equilibrium(c);
  CHECK(eq.allocation.open[0] == 0.0);
  CHECK(eq.allocation.open[1] == 0.0);
  CHECK(eq.allocation.open[2] > 0.0);
  CHECK(eq.vacating_sps() == std::vector<std::size_t>{0, 1});
  CHECK(eq.kkt.pass());
  // The vacated SPs' open quantities are pinned with slack, complementarity
  // exactly zero.
  CHECK(eq.kkt.open_pinned[0]);
  CHECK(eq.kkt.open_pinned[1]);
}

TEST_CASE("kkt detects perturbed equilibria", "[solver]") {
  MarketConfig c = MarketConfig::licensed({1.0, 1.0});
  Allocation a{{0.2, 0.2}, {0.0, 0.0}};
  CHECK(kkt_verify(c, a, 1e-9).pass());
  a.licensed[0] += 1e-3;
  const auto rep = kkt_verify(c, a, 1e-9);
  CHECK_FALSE(rep.pass());
  // own-gradient drop is (2 + 2/T) * 1e-3 = 4e-3; complementarity |x g|.
  CHECK(rep.max_complementarity_violation ==
        Catch::Approx(0.201 * 4e-3).epsilon(0.05));
}

TEST_CASE("solver properties on random configs", "[solver]") {
  testutil::Rng rng(73);
  for (int k = 0; k < 25; ++k) {
    const MarketConfig c = testutil::random_config(rng, 5);
    SolverOptions opt;
    opt.restarts = 4;
    opt.seed = static_cast<std::uint64_t>(k);
    const auto eq = solve_equilibrium(c, opt);
    REQUIRE(eq.kkt.pass());
    REQUIRE(eq.max_restart_distance <= 1e-7);
    REQUIRE(eq.kkt.max_congestion_order_violation <= 1e-9);
    // fixed point of the best response
    for (std::size_t i = 0; i < c.n_sps; ++i) {
      const auto [x, w] = best_response(c.pooled(), i, eq.allocation);
      REQUIRE(std::abs(x - eq.allocation.licensed[i]) <= 1e-8);
      REQUIRE(std::abs(w - eq.allocation.open[i]) <= 1e-8);
    }
    // equilibrium prices are nonnegative
    for (std::size_t i = 0; i < c.n_sps; ++i) {
      REQUIRE(eq.prices.licensed_prices[i] >= -1e-9);
      REQUIRE(eq.prices.open_prices[i] >= -1e-9);
    }
    eq.allocation.validate(c);
  }
}

TEST_CASE("degenerate endowments solve cleanly", "[solver]") {
  SECTION("an SP with no proprietary band needs full availability") {
    MarketConfig c;
    c.n_sps = 2;
    c.endowments = {{0.0, {1.0}}, {1.0, {}}};
    c.availability = 1.0;
    const auto eq = solve_equilibrium(c);
    CHECK(eq.kkt.pass());
    CHECK(eq.allocation.licensed[0] > 0.0);
  }
  SECTION("an SP with no licensed spectrum at all lives on the open band") {
    MarketConfig c;
    c.n_sps = 2;
    c.endowments = {{0.0, {}}, {1.0, {}}};
    c.availability = 1.0;
    c.open_access_bw = 1.0;
    const auto eq = solve_equilibrium(c);
    CHECK(eq.kkt.pass());
    CHECK(eq.allocation.licensed[0] == 0.0);
    CHECK(eq.allocation.open[0] > 0.0);
  }
  SECTION("single SP with an open band matches the N = 1 closed form") {
    MarketConfig c = MarketConfig::licensed({1.0});
    c.open_access_bw = 1.0;
    c.availability = 0.5;
    const auto eq = solve_equilibrium(c);
    const auto closed = n_symmetric_equilibrium(1, 1.0, 1.0, 1.0, 0.5);
    CHECK(eq.allocation.licensed[0] ==
          Catch::Approx(closed.licensed_per_sp).margin(1e-9));
    CHECK(eq.allocation.open[0] ==
          Catch::Approx(closed.open_per_sp).margin(1e-9));
  }
}

TEST_CASE("symmetric configs give symmetric equilibria", "[solver]") {
  testutil::Rng rng(79);
  for (int k = 0; k < 15; ++k) {
    const long n = rng.integer(2, 8);
    const MarketConfig c = MarketConfig::symmetric(
        static_cast<std::size_t>(n), rng.log_uniform(0.5, 5.0),
        rng.log_uniform(0.2, 5.0), rng.uniform(0.0, 1.0),
        rng.uniform(0.05, 1.0), rng.uniform(0.5, 1.0));
    const auto eq = solve_equilibrium(c);
    for (std::size_t i = 1; i < c.n_sps; ++i) {
      REQUIRE(std::abs(eq.allocation.licensed[i] - eq.allocation.licensed[0]) <=
              1e-9);
      REQUIRE(std::abs(eq.allocation.open[i] - eq.allocation.open[0]) <= 1e-9);
    }
  }
}

TEST_CASE("potential rises along best-response sweeps", "[solver]") {
  testutil::Rng rng(83);
  const MarketConfig c = testutil::random_config(rng, 4);
  Allocation a = testutil::random_allocation(rng, c);
  double phi = potential_value(c.pooled(), a);
  for (int sweep = 0; sweep < 30; ++sweep) {
    for (std::size_t i = 0; i < c.n_sps; ++i) {
      const auto [x, w] = best_response(c.pooled(), i, a);
      a.licensed[i] = x;
      a.open[i] = w;
    }
    const double next = potential_value(c.pooled(), a);
    REQUIRE(next >= phi - 1e-12);
    phi = next;
  }
}

TEST_CASE("projected gradient fallback climbs the potential", "[solver]") {
  testutil::Rng rng(191);
  for (int k = 0; k < 10; ++k) {
    const MarketConfig c = testutil::random_config(rng, 4).pooled();
    Allocation a = testutil::random_allocation(rng, c);
    const double before = potential_value(c, a);
    detail::projected_gradient_steps(c, a, 200);
    const double after = potential_value(c, a);
    REQUIRE(after >= before - 1e-12);
    // it should get close to the equilibrium's potential value
    const auto eq = solve_equilibrium(c, SolverOptions{});
    const double best = potential_value(c, eq.allocation);
    REQUIRE(best - after <= 1e-6 * std::max(1.0, std::abs(best)));
    for (double v : a.licensed) REQUIRE(v >= 0.0);
    for (double v : a.open) REQUIRE(v >= 0.0);
  }
}

TEST_CASE("solver error paths", "[solver]") {
  MarketConfig c = MarketConfig::licensed({1.0, 1.0, 1.0});
  c.open_access_bw = 2.0;
  c.availability = 0.8;
  SolverOptions opt;
  opt.max_iterations = 1;
  CHECK_THROWS_AS(solve_equilibrium(c, opt), ConvergenceError);
}

TEST_CASE("model hypotheses are checked at construction", "[solver]") {
  SECTION("increasing demand is rejected") {
    CHECK_THROWS_AS(DemandModel(Curve::affine(1.0, 0.5), 1.0),
                    UnsupportedModelError);
  }
  SECTION("convex demand is rejected") {
    CHECK_THROWS_AS(
        DemandModel(Curve{[](double y) { return 1.0 - y + y * y; },
                          [](double y) { return -1.0 + 2.0 * y; },
                          [](double) { return 2.0; }},
                    1.0),
        UnsupportedModelError);
  }
  SECTION("decreasing latency is rejected") {
    CHECK_THROWS_AS(LatencyModel({Curve::affine(1.0, -0.5)},
                                 {Curve::linear(1.0)}, Curve::linear(1.0), 1.0),
                    UnsupportedModelError);
  }
  SECTION("concave latency is rejected") {
    const Curve concave{[](double t) { return t - 0.6 * t * t; },
                        [](double t) { return 1.0 - 1.2 * t; },
                        [](double) { return -1.2; }};
    CHECK_THROWS_AS(
        LatencyModel({Curve::linear(1.0)}, {Curve::linear(1.0)}, concave, 1.0),
        UnsupportedModelError);
  }
}

TEST_CASE("general best response matches the linear one", "[solver]") {
  testutil::Rng rng(89);
  const DemandModel demand = DemandModel::linear();
  for (int k = 0; k < 40; ++k) {
    MarketConfig c = testutil::random_config(rng, 4);
    c = c.pooled();
    const LatencyModel lat = linear_latency_for(c);
    const Allocation others = testutil::random_allocation(rng, c);
    const std::size_t i =
        static_cast<std::size_t>(rng.integer(0, static_cast<long>(c.n_sps) - 1));
    const auto fast = best_response(c, i, others);
    const auto gen = general_best_response(c, demand, lat, i, others);
    REQUIRE(gen.first == Catch::Approx(fast.first).margin(1e-8));
    REQUIRE(gen.second == Catch::Approx(fast.second).margin(1e-8));
  }
}

TEST_CASE("general best response beyond the linear model", "[solver]") {
  SECTION("monopoly with linear latency") {
    MarketConfig c = MarketConfig::licensed({2.0});
    const DemandModel demand = DemandModel::linear();
    const LatencyModel lat({Curve::linear(0.5)}, {Curve::linear(0.5)},
                           Curve::linear(1.0), 1.0);
    const auto [x, w] =
        general_best_response(c, demand, lat, 0, Allocation::zeros(1));
    CHECK(x == Catch::Approx(2.0 / 6.0).margin(1e-9));  // B/(2B+2)
    CHECK(w == 0.0);
  }
  SECTION("curved demand and quadratic latency stay symmetric") {
    MarketConfig c = MarketConfig::licensed({1.0, 1.0});
    c.open_access_bw = 1.0;
    c.availability = 0.8;
    const DemandModel demand(
        Curve{[](double y) { return 1.0 - y * y; },
              [](double y) { return -2.0 * y; }, [](double) { return -2.0; }},
        0.95);
    auto quad = [](double a1, double a2) {
      return Curve{[=](double t) { return a1 * t + a2 * t * t; },
                   [=](double t) { return a1 + 2.0 * a2 * t; },
                   [=](double) { return 2.0 * a2; }};
    };
    const LatencyModel lat({quad(1.0, 0.3), quad(1.0, 0.3)},
                           {quad(1.0, 0.3), quad(1.0, 0.3)}, quad(1.0, 0.2),
                           1.0);
    // iterate best responses to a symmetric fixed point
    Allocation a = Allocation::zeros(2);
    for (int it = 0; it < 200; ++it)
      for (std::size_t i = 0; i < 2; ++i) {
        const auto r = general_best_response(c, demand, lat, i, a);
        a.licensed[i] = r.first;
        a.open[i] = r.second;
      }
    CHECK(std::abs(a.licensed[0] - a.licensed[1]) <= 1e-8);
    CHECK(std::abs(a.open[0] - a.open[1]) <= 1e-8);
    CHECK(a.licensed[0] > 0.0);
  }
}
