#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include "specshare/experiments.hpp"
#include "test_util.hpp"

using namespace specshare;

TEST_CASE("equalizing split of the shared band", "[experiments]") {
  SECTION("equal SPs split evenly") {
    const auto [w1, w2] = scheme_split_equalize(1.0, 1.0, 2.0, 0.7);
    CHECK(w1 == Catch::Approx(1.0).margin(1e-12));
    CHECK(w2 == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("always available reduces to linear equalization") {
    testutil::Rng rng(131);
    for (int k = 0; k < 100; ++k) {
      const double b2 = rng.log_uniform(0.2, 5.0);
      const double b1 = b2 + rng.uniform(0.0, 5.0);
      const double w = rng.uniform(0.0, 5.0);
      const auto [w1, w2] = scheme_split_equalize(b1, b2, w, 1.0);
      const double expect = std::max(0.0, (w + b2 - b1) / 2.0);
      REQUIRE(w1 == Catch::Approx(expect).margin(1e-9));
      REQUIRE(w1 + w2 == Catch::Approx(w).margin(1e-12));
    }
  }
  SECTION("huge gap sends everything to the smaller SP") {
    const auto [w1, w2] = scheme_split_equalize(50.0, 1.0, 2.0, 0.8);
    CHECK(w1 == 0.0);
    CHECK(w2 == 2.0);
  }
  SECTION("feasible splits equalize the equivalent bandwidths") {
    testutil::Rng rng(137);
    for (int k = 0; k < 100; ++k) {
      const double b2 = rng.log_uniform(0.2, 3.0);
      const double b1 = b2 * rng.uniform(1.0, 1.5);
      const double w = rng.uniform(1.0, 6.0);
      const double alpha = rng.uniform(0.1, 1.0);
      const auto [w1, w2] = scheme_split_equalize(b1, b2, w, alpha);
      if (w1 > 0.0) {
        REQUIRE(equivalent_bandwidth(b1, w1, alpha) ==
                Catch::Approx(equivalent_bandwidth(b2, w2, alpha))
                    .margin(1e-8));
      }
    }
  }
}

TEST_CASE("auction comparison", "[experiments]") {
  const auto sc = auction_compare(1.0, 1.0, 1.0, {0.1, 0.5, 0.9});
  REQUIRE(sc.rows.size() == 3);
  for (const auto& row : sc.rows) {
    CHECK(row.revenue_pre == Catch::Approx(0.08).margin(1e-14));
    CHECK(row.revenue_large > row.revenue_shared);
    CHECK(row.revenue_shared > row.revenue_small);
    CHECK(row.prefers_open_access);
    CHECK(row.winner_profit == row.revenue_small);  // stop-price identity
    CHECK(row.stop_price ==
          Catch::Approx(row.revenue_large - row.revenue_small).margin(1e-15));
  }
  // larger availability makes the licensed win worth more
  CHECK(sc.rows[2].revenue_large > sc.rows[1].revenue_large);
  CHECK(sc.rows[1].revenue_large > sc.rows[0].revenue_large);
}

TEST_CASE("auction with unequal SPs routes through the solver", "[experiments]") {
  const auto sc = auction_compare(2.0, 1.0, 1.0, {0.9});
  const auto& row = sc.rows[0];
  // winner's licensed outcome: equivalent bandwidth 20/7 vs 1
  CHECK(row.revenue_large == Catch::Approx(1215.0 / 9604.0).margin(1e-12));
  CHECK(row.revenue_pre ==
        Catch::Approx(duopoly_licensed_equilibrium(2.0, 1.0).revenue[0])
            .margin(1e-15));
  CHECK(row.revenue_shared > 0.0);
  CHECK(row.stop_price ==
        Catch::Approx(row.revenue_large - row.revenue_small).margin(1e-15));
}

TEST_CASE("sweeps are deterministic across thread counts", "[experiments]") {
  SweepSpec spec;
  spec.base = MarketConfig::licensed({1.0, 1.0});
  spec.base.open_access_bw = 1.0;
  spec.base.availability = 0.9;
  spec.axis = "B1";
  spec.grid = detail::linspace(1.0, 5.0, 17);
  spec.outputs = {"x_i", "w_i", "cs", "sw", "vacate_flags"};
  spec.seed = 7;
  spec.solver.restarts = 2;

  ::setenv("SPECSHARE_THREADS", "1", 1);
  const std::string serial = run_sweep(spec).to_csv();
  ::setenv("SPECSHARE_THREADS", "4", 1);
  const std::string parallel = run_sweep(spec).to_csv();
  ::unsetenv("SPECSHARE_THREADS");
  const std::string again = run_sweep(spec).to_csv();
  CHECK(serial == parallel);
  CHECK(serial == again);
}

TEST_CASE("sweep records bad points without aborting", "[experiments]") {
  SweepSpec spec;
  spec.base = MarketConfig::licensed({1.0, 1.0});
  spec.axis = "alpha";
  spec.grid = {0.5, 0.9, 1.3};  // last one is out of range
  spec.outputs = {"cs"};
  const NamedTable t = run_sweep(spec);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.status[0] == "ok");
  CHECK(t.status[1] == "ok");
  CHECK(t.status[2] != "ok");
  CHECK(std::isnan(t.rows[2][1]));
}

TEST_CASE("sweep grid and observables are validated", "[experiments]") {
  SweepSpec spec;
  spec.base = MarketConfig::licensed({1.0, 1.0});
  spec.axis = "alpha";
  spec.outputs = {"cs"};
  spec.grid = {0.5, 0.5};
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
  spec.grid = {0.5, 0.6};
  spec.outputs = {"nonsense"};
  CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("sweep closed-form routing matches the solver", "[experiments]") {
  SweepSpec spec;
  spec.base = MarketConfig::symmetric(3, 1.5, 2.0, 0.5, 0.8, 0.9);
  spec.axis = "alpha";
  spec.grid = detail::linspace(0.3, 0.95, 9);
  spec.outputs = {"x_i", "w_i"};
  const NamedTable closed = run_sweep(spec);
  for (std::size_t r = 0; r < closed.rows.size(); ++r) {
    MarketConfig c = spec.base;
    detail::apply_param(c, "alpha", closed.rows[r][0]);
    const auto eq = solve_equilibrium(c);
    for (int i = 0; i < 3; ++i) {
      REQUIRE(closed.rows[r][1 + i] ==
              Catch::Approx(eq.allocation.licensed[i]).margin(1e-8));
      REQUIRE(closed.rows[r][4 + i] ==
              Catch::Approx(eq.allocation.open[i]).margin(1e-8));
    }
  }
}

TEST_CASE("figure job registry", "[experiments]") {
  for (const char* name :
       {"fig_T", "fig_prices_quantities", "fig_SW_B", "fig_SW_W", "fig_SW_N",
        "price_latency", "sw_W", "asym_W1", "auction"}) {
    CHECK_NOTHROW(find_job(name));
  }
  CHECK_THROWS_AS(find_job("fig_unknown"), ConfigError);
  try {
    find_job("fig_unknown");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("fig_SW_N") != std::string::npos);
  }
}

TEST_CASE("equivalent-bandwidth figure shows the reliability tradeoff",
          "[experiments]") {
  const auto tables = job_fig_t(0, 60);
  REQUIRE(tables.size() == 2);
  for (const auto& t : tables) {
    double prev = -1.0;
    for (const auto& row : t.rows) {
      REQUIRE(row[2] > prev);  // T strictly increasing in alpha
      prev = row[2];
    }
  }
}

TEST_CASE("scheme welfare comparison figure", "[experiments]") {
  const auto tables = job_fig_sw(13, true, 40);
  const NamedTable& t = tables[0];
  bool saw_vacate = false, saw_feasible_split = false;
  for (const auto& row : t.rows) {
    const double b1 = row[0], sw_sp1 = row[1], sw_sp2 = row[2],
                 sw_split = row[3], sw_open = row[4], vacate = row[5];
    // split dominance wherever T-equalization is feasible
    const auto [w1, w2] = scheme_split_equalize(b1, 1.0, 1.0, 0.9);
    if (w1 > 1e-9) {
      saw_feasible_split = true;
      REQUIRE(sw_split >= std::max(sw_sp1, sw_sp2) - 1e-9);
    }
    if (vacate == 1.0) {
      saw_vacate = true;
      // with SP 1 out of the open band, open access and the SP-2 scheme
      // coincide
      REQUIRE(sw_open == Catch::Approx(sw_sp2).margin(1e-6));
    }
  }
  CHECK(saw_feasible_split);
  CHECK(saw_vacate);
}

TEST_CASE("welfare-vs-N figure crosses at small N", "[experiments]") {
  const auto tables = job_fig_sw_n(0, 8);
  const NamedTable& t = tables[0];
  // columns: N, then (beta0, beta1) per W; W = 1 is the first pair
  const auto& n2 = t.rows[1];
  CHECK(n2[2] > n2[1]);  // open access wins at N = 2
  for (std::size_t r = 2; r < t.rows.size(); ++r)
    CHECK(t.rows[r][1] > t.rows[r][2]);  // licensed wins from N = 3 on here
}

TEST_CASE("price-latency parametric curves start at the latency minimum",
          "[experiments]") {
  const auto tables = job_price_latency(0, 50);
  for (const auto& t : tables) {
    const double first = t.rows.front()[1];
    for (const auto& row : t.rows) REQUIRE(row[1] >= first - 1e-12);
  }
}

TEST_CASE("asymmetric split figure shifts with availability", "[experiments]") {
  const NamedTable t = asym_w1_table(2, 17, 21);
  // argmax of CS over W1/W, for alpha = 0.3 (col 1) and alpha = 0.9 (col 4)
  std::size_t best_low = 0, best_high = 0;
  for (std::size_t r = 1; r < t.rows.size(); ++r) {
    if (t.rows[r][1] > t.rows[best_low][1]) best_low = r;
    if (t.rows[r][4] > t.rows[best_high][4]) best_high = r;
  }
  CHECK(t.rows[best_high][0] < t.rows[best_low][0]);
}
