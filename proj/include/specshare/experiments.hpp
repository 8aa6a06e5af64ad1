#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "specshare/closed_form.hpp"
#include "specshare/errors.hpp"
#include "specshare/io.hpp"
#include "specshare/market.hpp"
#include "specshare/rng.hpp"
#include "specshare/solver.hpp"
#include "specshare/welfare.hpp"

namespace specshare {

// ---------------------------------------------------------------------------
// Allocation schemes and the appendix auction example
// ---------------------------------------------------------------------------

/// Splits the shared band so both SPs end up with equal equivalent bandwidth,
/// when a split achieving that exists; otherwise everything goes to the
/// smaller SP. Requires B1 >= B2.
inline std::pair<double, double> scheme_split_equalize(double b1, double b2,
                                                       double shared_bw,
                                                       double alpha) {
  if (!(b2 > 0.0) || b1 < b2)
    throw DomainError("scheme_split_equalize: need B1 >= B2 > 0");
  if (shared_bw < 0.0)
    throw DomainError("scheme_split_equalize: W must be nonnegative");
  if (shared_bw == 0.0) return {0.0, 0.0};
  auto gap = [&](double w1) {
    return equivalent_bandwidth(b1, w1, alpha) -
           equivalent_bandwidth(b2, shared_bw - w1, alpha);
  };
  if (gap(0.0) >= 0.0) return {0.0, shared_bw};  // equalization infeasible
  double lo = 0.0, hi = shared_bw;               // gap is increasing in W1
  for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, shared_bw);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  const double w1 = 0.5 * (lo + hi);
  return {w1, shared_bw - w1};
}

struct AuctionRow {
  double alpha = 0.0;
  double revenue_pre = 0.0;     // per-SP revenue before any allocation
  double revenue_large = 0.0;   // winner's revenue with the whole band licensed
  double revenue_small = 0.0;   // loser's revenue in that outcome
  double revenue_shared = 0.0;  // per-SP revenue with the band open access
  double stop_price = 0.0;      // ascending-auction exit price
  double winner_profit = 0.0;   // revenue_large - stop_price = revenue_small
  bool prefers_open_access = false;
};

struct AuctionScenario {
  double b1 = 0.0, b2 = 0.0, shared_bw = 0.0;
  std::vector<AuctionRow> rows;
};

/// Ascending-auction comparison of licensing the whole shared band to one SP
/// versus opening it to both. SP 1 is the designated winner (for B1 = B2 the
/// labels are symmetric, which is the example's assumption).
inline AuctionScenario auction_compare(double b1, double b2, double shared_bw,
                                       const std::vector<double>& alphas) {
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw DomainError("auction_compare: bandwidths must be positive");
  AuctionScenario sc;
  sc.b1 = b1;
  sc.b2 = b2;
  sc.shared_bw = shared_bw;
  const bool symmetric = b1 == b2;
  for (double alpha : alphas) {
    AuctionRow row;
    row.alpha = alpha;
    row.revenue_pre = duopoly_licensed_equilibrium(b1, b2).revenue[0];
    const auto licensed = duopoly_licensed_equilibrium(
        equivalent_bandwidth(b1, shared_bw, alpha), b2);
    row.revenue_large = licensed.revenue[0];
    row.revenue_small = licensed.revenue[1];
    if (symmetric) {
      const SymmetricEq open =
          symmetric_duopoly_open(b1 + b2, shared_bw, alpha, 1.0);
      row.revenue_shared = open.price_licensed * open.licensed_per_sp +
                           open.price_open * open.open_per_sp;
    } else {
      MarketConfig c = MarketConfig::licensed({b1, b2});
      c.open_access_bw = shared_bw;
      c.availability = alpha;
      const auto eq = solve_equilibrium(c);
      row.revenue_shared = eq.revenues[0];
    }
    row.stop_price = row.revenue_large - row.revenue_small;
    row.winner_profit = row.revenue_small;
    row.prefers_open_access = row.revenue_shared > row.winner_profit;
    sc.rows.push_back(row);
  }
  return sc;
}

inline NamedTable auction_table(const AuctionScenario& sc) {
  NamedTable t;
  t.name = "auction";
  t.columns = {"alpha",        "pre_allocation", "large",
               "small",        "open_access",    "stop_price",
               "winner_profit", "prefers_open_access"};
  for (const auto& r : sc.rows)
    t.rows.push_back({r.alpha, r.revenue_pre, r.revenue_large, r.revenue_small,
                      r.revenue_shared, r.stop_price, r.winner_profit,
                      r.prefers_open_access ? 1.0 : 0.0});
  return t;
}

// ---------------------------------------------------------------------------
// Generic parameter sweeps
// ---------------------------------------------------------------------------

/// A coupled parameter driven off the axis value (e.g. W = c / alpha).
struct DerivedAxis {
  std::string param;
  std::function<double(double)> map;
};

struct SweepSpec {
  MarketConfig base;
  std::string axis;
  std::vector<double> grid;
  std::vector<DerivedAxis> derived;
  std::vector<std::string> outputs;  // names from the observables registry
  std::uint64_t seed = 0;
  SolverOptions solver;
};

namespace detail {

inline void apply_param(MarketConfig& c, const std::string& name, double v) {
  if (name == "alpha") {
    c.availability = v;
  } else if (name == "d") {
    c.degradation = v;
  } else if (name == "W0" || name == "open_bw") {
    c.open_access_bw = v;
  } else if (name == "intercept") {
    c.demand_intercept = v;
  } else if (name == "slope") {
    c.demand_slope = v;
  } else if (name.size() > 1 && name[0] == 'B') {
    const std::size_t i = std::stoul(name.substr(1));
    if (i == 0 || i > c.n_sps) throw ConfigError("unknown parameter " + name);
    c.endowments[i - 1].proprietary_bw = v;
  } else if (name.size() > 4 && name.rfind("Wlic", 0) == 0) {
    const std::size_t i = std::stoul(name.substr(4));
    if (i == 0 || i > c.n_sps) throw ConfigError("unknown parameter " + name);
    c.endowments[i - 1].licensed_shared_bws = {v};
  } else {
    throw ConfigError("unknown parameter " + name);
  }
  c.declared_shared_bw.reset();
}

inline bool config_is_symmetric(const MarketConfig& c) {
  for (std::size_t i = 1; i < c.n_sps; ++i) {
    if (c.proprietary(i) != c.proprietary(0)) return false;
    if (c.pooled_shared(i) != c.pooled_shared(0)) return false;
  }
  return true;
}

// Closed form when one matches the instance, numerical solve otherwise.
inline Allocation solve_point(const MarketConfig& c, const SolverOptions& opt) {
  if (c.demand_intercept == 1.0 && c.demand_slope == 1.0) {
    if (config_is_symmetric(c) && c.n_sps >= 1) {
      const double b_total = c.proprietary(0) * static_cast<double>(c.n_sps);
      if (b_total > 0.0) {
        const double lic_total =
            c.pooled_shared(0) * static_cast<double>(c.n_sps);
        const double shared = lic_total + c.open_access_bw;
        const double beta = shared > 0.0 ? c.open_access_bw / shared : 0.0;
        const auto eq = n_symmetric_equilibrium(
            static_cast<long>(c.n_sps), b_total, shared, beta, c.availability,
            c.degradation);
        Allocation a = Allocation::zeros(c.n_sps);
        for (std::size_t i = 0; i < c.n_sps; ++i) {
          a.licensed[i] = eq.licensed_per_sp;
          a.open[i] = eq.open_per_sp;
        }
        return a;
      }
    }
    if (c.n_sps == 2 && c.open_access_bw == 0.0) {
      const auto duo = duopoly_licensed_equilibrium(
          equivalent_bandwidth(c.proprietary(0), c.pooled_shared(0),
                               c.availability),
          equivalent_bandwidth(c.proprietary(1), c.pooled_shared(1),
                               c.availability));
      Allocation a = Allocation::zeros(2);
      a.licensed = {duo.quantity[0], duo.quantity[1]};
      return a;
    }
  }
  return solve_equilibrium(c, opt).allocation;
}

inline std::vector<std::string> expand_columns(
    const std::vector<std::string>& outputs, std::size_t n) {
  std::vector<std::string> cols;
  for (const auto& o : outputs) {
    if (o == "x_i" || o == "w_i" || o == "p_i" || o == "p_w_i" ||
        o == "vacate_flags") {
      const std::string stem = o == "x_i"          ? "x_"
                               : o == "w_i"        ? "w_"
                               : o == "p_i"        ? "p_"
                               : o == "p_w_i"      ? "p_w_"
                                                   : "vacate_";
      for (std::size_t i = 1; i <= n; ++i) cols.push_back(stem + std::to_string(i));
    } else if (o == "cs" || o == "sw" || o == "revenue_total" ||
               o == "avg_price" || o == "avg_latency") {
      cols.push_back(o);
    } else {
      throw ConfigError("unknown observable " + o);
    }
  }
  return cols;
}

inline void eval_observables(const MarketConfig& c, const Allocation& a,
                             const std::vector<std::string>& outputs,
                             std::vector<double>& row) {
  const PriceSchedule ps = band_prices(c, a);
  const WelfareReport wf = welfare_report(c, a);
  double rev_total = 0.0;
  for (double r : wf.revenues) rev_total += r;
  for (const auto& o : outputs) {
    if (o == "x_i")
      row.insert(row.end(), a.licensed.begin(), a.licensed.end());
    else if (o == "w_i")
      row.insert(row.end(), a.open.begin(), a.open.end());
    else if (o == "p_i")
      row.insert(row.end(), ps.licensed_prices.begin(),
                 ps.licensed_prices.end());
    else if (o == "p_w_i")
      row.insert(row.end(), ps.open_prices.begin(), ps.open_prices.end());
    else if (o == "vacate_flags")
      for (double w : a.open) row.push_back(w == 0.0 ? 1.0 : 0.0);
    else if (o == "cs")
      row.push_back(wf.consumer_surplus);
    else if (o == "sw")
      row.push_back(wf.social_welfare);
    else if (o == "revenue_total")
      row.push_back(rev_total);
    else if (o == "avg_price")
      row.push_back(wf.avg_price);
    else if (o == "avg_latency")
      row.push_back(wf.avg_latency);
  }
}

inline unsigned sweep_thread_cap() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPECSHARE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) cap = static_cast<unsigned>(v);
  }
  return cap;
}

// Runs fn(i) for i in [0, n) across up to sweep_thread_cap() threads; results
// must be written into per-index slots so ordering never depends on timing.
template <typename Fn>
void parallel_index(std::size_t n, Fn&& fn) {
  const unsigned threads = std::min<std::size_t>(sweep_thread_cap(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Evaluates the spec over its grid, one row per point. Per-point failures are
/// recorded in the row's status and never abort the sweep; output ordering and
/// values are independent of thread count.
inline NamedTable run_sweep(const SweepSpec& spec) {
  if (spec.grid.empty()) throw ConfigError("sweep grid is empty");
  if (spec.grid.size() >= 2) {
    const bool increasing = spec.grid[1] > spec.grid[0];
    for (std::size_t i = 1; i < spec.grid.size(); ++i) {
      const bool ok = increasing ? spec.grid[i] > spec.grid[i - 1]
                                 : spec.grid[i] < spec.grid[i - 1];
      if (!ok) throw ConfigError("sweep grid must be strictly monotone");
    }
  }

  NamedTable t;
  t.name = "sweep";
  t.columns.push_back(spec.axis);
  const auto obs_cols = detail::expand_columns(spec.outputs, spec.base.n_sps);
  t.columns.insert(t.columns.end(), obs_cols.begin(), obs_cols.end());
  t.rows.resize(spec.grid.size());
  t.status.resize(spec.grid.size());

  detail::parallel_index(spec.grid.size(), [&](std::size_t idx) {
    const double v = spec.grid[idx];
    std::vector<double> row{v};
    std::string status = "ok";
    try {
      MarketConfig c = spec.base;
      detail::apply_param(c, spec.axis, v);
      for (const auto& d : spec.derived)
        detail::apply_param(c, d.param, d.map(v));
      c.validate();
      SolverOptions opt = spec.solver;
      opt.seed = derive_seed(spec.seed, idx);
      const Allocation a = detail::solve_point(c, opt);
      detail::eval_observables(c, a, spec.outputs, row);
    } catch (const std::exception& e) {
      row.resize(1 + obs_cols.size(),
                 std::numeric_limits<double>::quiet_NaN());
      status = e.what();
    }
    t.rows[idx] = std::move(row);
    t.status[idx] = std::move(status);
  });
  return t;
}

// ---------------------------------------------------------------------------
// Figure jobs
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(n - 1);
  return g;
}

// Social welfare of a licensed-only duopoly on equivalent bandwidths.
inline double duopoly_social_welfare(double t1, double t2) {
  const auto eq = duopoly_licensed_equilibrium(t1, t2);
  const double z = eq.quantity[0] + eq.quantity[1];
  return consumer_surplus(z) + eq.revenue[0] + eq.revenue[1];
}

struct OpenDuopolyPoint {
  double social_welfare;
  bool sp1_vacates;
};

inline OpenDuopolyPoint open_duopoly_welfare(double b1, double b2, double w,
                                             double alpha,
                                             std::uint64_t seed) {
  MarketConfig c = MarketConfig::licensed({b1, b2});
  c.open_access_bw = w;
  c.availability = alpha;
  SolverOptions opt;
  opt.restarts = 2;
  opt.seed = seed;
  const auto eq = solve_equilibrium(c, opt);
  const auto wf = welfare_report(c, eq.allocation);
  return {wf.social_welfare, eq.allocation.open[0] == 0.0};
}

}  // namespace detail

/// Equivalent-bandwidth panels: T versus alpha with the average shared
/// bandwidth alpha*W held fixed.
inline std::vector<NamedTable> job_fig_t(std::uint64_t, std::size_t points = 200) {
  std::vector<NamedTable> out;
  const struct {
    const char* name;
    double proprietary, avg_shared;
  } panels[] = {{"fig_T_low_proprietary", 0.1, 1.0},
                {"fig_T_high_proprietary", 1.0, 0.1}};
  for (const auto& p : panels) {
    NamedTable t;
    t.name = p.name;
    t.columns = {"alpha", "W", "T"};
    for (double a : detail::linspace(0.05, 1.0, points)) {
      const double w = p.avg_shared / a;
      t.rows.push_back({a, w, equivalent_bandwidth(p.proprietary, w, a)});
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Equilibrium quantities and prices against B1 with the shared band fully
/// open; includes the analytic threshold where SP 1 leaves the open band.
inline std::vector<NamedTable> job_fig_prices_quantities(
    std::uint64_t seed, std::size_t points = 200) {
  const double b2 = 1.0, w = 10.0, alpha = 0.9;
  SweepSpec spec;
  spec.base = MarketConfig::licensed({1.0, b2});
  spec.base.open_access_bw = w;
  spec.base.availability = alpha;
  spec.axis = "B1";
  spec.grid = detail::linspace(1.0, 40.0, points);
  spec.outputs = {"x_i", "w_i", "p_i", "p_w_i", "vacate_flags"};
  spec.seed = seed;
  spec.solver.restarts = 2;
  NamedTable t = run_sweep(spec);
  t.name = "fig_prices_quantities";

  NamedTable marker;
  marker.name = "fig_prices_quantities_threshold";
  marker.columns = {"B1_star"};
  marker.rows = {{2.0 * w + 4.0 * (1.0 - alpha) * w / b2 + 2.0 * b2 + 2.0}};
  return {std::move(t), std::move(marker)};
}

/// Social welfare of the four allocation schemes against B1 (shared band W
/// fixed) and against W (B1 fixed).
inline std::vector<NamedTable> job_fig_sw(std::uint64_t seed, bool sweep_b1,
                                          std::size_t points = 200) {
  const double b2 = 1.0, alpha = 0.9;
  NamedTable t;
  t.name = sweep_b1 ? "fig_SW_B" : "fig_SW_W";
  t.columns = {sweep_b1 ? "B1" : "W", "sw_sp1",  "sw_sp2",
               "sw_split",            "sw_open", "vacate_open"};
  const auto grid = sweep_b1 ? detail::linspace(1.0, 10.0, points)
                             : detail::linspace(0.0, 10.0, points);
  t.rows.resize(grid.size());
  detail::parallel_index(grid.size(), [&](std::size_t idx) {
    const double b1 = sweep_b1 ? grid[idx] : 7.0;
    const double w = sweep_b1 ? 1.0 : grid[idx];
    const double sw_sp1 = detail::duopoly_social_welfare(
        equivalent_bandwidth(b1, w, alpha), b2);
    const double sw_sp2 = detail::duopoly_social_welfare(
        b1, equivalent_bandwidth(b2, w, alpha));
    const auto split = scheme_split_equalize(b1, b2, w, alpha);
    const double sw_split = detail::duopoly_social_welfare(
        equivalent_bandwidth(b1, split.first, alpha),
        equivalent_bandwidth(b2, split.second, alpha));
    double sw_open, vacates;
    if (w > 0.0) {
      const auto open = detail::open_duopoly_welfare(b1, b2, w, alpha,
                                                     derive_seed(seed, idx));
      sw_open = open.social_welfare;
      vacates = open.sp1_vacates ? 1.0 : 0.0;
    } else {
      sw_open = detail::duopoly_social_welfare(b1, b2);
      vacates = 1.0;
    }
    t.rows[idx] = {grid[idx], sw_sp1, sw_sp2, sw_split, sw_open, vacates};
  });
  return {std::move(t)};
}

/// Social welfare versus the number of symmetric SPs for licensed (beta = 0)
/// and open (beta = 1) sharing, for several shared bandwidths.
inline std::vector<NamedTable> job_fig_sw_n(std::uint64_t, long n_max = 32) {
  const double b = 1.0, alpha = 0.9;
  const std::vector<double> ws = {1.0, 2.0, 5.0};
  NamedTable t;
  t.name = "fig_SW_N";
  t.columns = {"N"};
  for (double w : ws) {
    t.columns.push_back("sw_beta0_W" + format_sig(w, 6));
    t.columns.push_back("sw_beta1_W" + format_sig(w, 6));
  }
  for (long n = 1; n <= n_max; ++n) {
    std::vector<double> row{static_cast<double>(n)};
    for (double w : ws) {
      for (double beta : {0.0, 1.0}) {
        const auto eq = n_symmetric_equilibrium(n, b, w, beta, alpha);
        const MarketConfig c =
            MarketConfig::symmetric(static_cast<std::size_t>(n), b, w, beta,
                                    alpha);
        Allocation a = Allocation::zeros(c.n_sps);
        for (std::size_t i = 0; i < c.n_sps; ++i) {
          a.licensed[i] = eq.licensed_per_sp;
          a.open[i] = eq.open_per_sp;
        }
        row.push_back(welfare_report(c, a).social_welfare);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return {std::move(t)};
}

/// Parametric average price / consumer surplus / welfare versus average
/// latency as beta runs from 0 to 1, for few and many SPs.
inline std::vector<NamedTable> job_price_latency(std::uint64_t,
                                                 std::size_t points = 200) {
  const double b = 1.0, w = 1.0, alpha = 1.0;
  std::vector<NamedTable> out;
  for (long n : {2L, 200L}) {
    NamedTable t;
    t.name = "price_latency_N" + std::to_string(n);
    t.columns = {"beta", "avg_latency", "avg_price", "cs", "sw"};
    for (double beta : detail::linspace(0.0, 1.0, points)) {
      const auto eq = n_symmetric_equilibrium(n, b, w, beta, alpha);
      const MarketConfig c = MarketConfig::symmetric(
          static_cast<std::size_t>(n), b, w, beta, alpha);
      Allocation a = Allocation::zeros(c.n_sps);
      for (std::size_t i = 0; i < c.n_sps; ++i) {
        a.licensed[i] = eq.licensed_per_sp;
        a.open[i] = eq.open_per_sp;
      }
      const auto wf = welfare_report(c, a);
      t.rows.push_back({beta, wf.avg_latency, wf.avg_price,
                        wf.consumer_surplus, wf.social_welfare});
    }
    out.push_back(std::move(t));
  }
  return out;
}

/// Welfare / revenue / CS against the shared bandwidth W for a large market,
/// with the limiting formulas overlaid for validation. Also reports the
/// second difference of SW in beta as a convexity diagnostic (never asserted).
inline std::vector<NamedTable> job_sw_w(std::uint64_t,
                                        std::size_t points = 200) {
  const double b = 1.0, alpha = 0.9;
  const long n = 100000;
  NamedTable t;
  t.name = "sw_W";
  t.columns = {"W",          "sw_beta0",       "sw_beta1", "revenue_beta1",
               "cs_beta1",   "sw_beta0_limit", "sw_beta1_limit",
               "sw_beta_second_difference"};
  for (double w : detail::linspace(0.0, 30.0, points)) {
    auto sw_at = [&](double beta) {
      const auto eq = n_symmetric_equilibrium(n, b, w, beta, alpha);
      const double served = eq.total_served();
      const double rev = eq.price_licensed * eq.licensed_total +
                         eq.price_open * eq.open_total;
      return std::pair<double, double>(consumer_surplus(served) + rev, rev);
    };
    const auto [sw0, rev0] = sw_at(0.0);
    const auto [sw1, rev1] = sw_at(1.0);
    const auto [swh, revh] = sw_at(0.5);
    const auto eq1 = n_symmetric_equilibrium(n, b, w, 1.0, alpha);
    t.rows.push_back({w, sw0, sw1, rev1,
                      consumer_surplus(eq1.total_served()),
                      w > 0.0 ? limit_social_welfare(b, w, alpha, 0.0) : sw0,
                      w > 0.0 ? limit_social_welfare(b, w, alpha, 1.0) : sw1,
                      sw0 + sw1 - 2.0 * swh});
  }
  return {std::move(t)};
}

/// Consumer surplus against the licensed split W1/W for two asymmetric groups
/// of SPs (all licensed, beta = 0), across availabilities.
inline NamedTable asym_w1_table(long group_size, std::uint64_t seed,
                                std::size_t points = 201) {
  const double b1 = 0.9, b2 = 0.1, w = 2.0;
  const std::vector<double> alphas = {0.3, 0.5, 0.7, 0.9};
  NamedTable t;
  t.name = "asym_W1_N" + std::to_string(group_size);
  t.columns = {"w1_frac"};
  for (double a : alphas) t.columns.push_back("cs_alpha" + format_sig(a, 6));
  const auto grid = detail::linspace(0.0, 1.0, points);
  t.rows.resize(grid.size());
  detail::parallel_index(grid.size(), [&](std::size_t idx) {
    const double frac = grid[idx];
    std::vector<double> row{frac};
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      const double alpha = alphas[ai];
      const double w1 = frac * w, w2 = w - w1;
      const double n = static_cast<double>(group_size);
      MarketConfig c;
      c.n_sps = static_cast<std::size_t>(2 * group_size);
      for (long j = 0; j < group_size; ++j)
        c.endowments.push_back({b1 / n, {w1 / n}});
      for (long j = 0; j < group_size; ++j)
        c.endowments.push_back({b2 / n, {w2 / n}});
      c.availability = alpha;
      SolverOptions opt;
      opt.restarts = 2;
      opt.seed = derive_seed(seed, idx * alphas.size() + ai);
      const auto eq = solve_equilibrium(c, opt);
      row.push_back(consumer_surplus(eq.allocation.total_served()));
    }
    t.rows[idx] = std::move(row);
  });
  return t;
}

inline std::vector<NamedTable> job_asym_w1(std::uint64_t seed) {
  return {asym_w1_table(2, seed), asym_w1_table(60, seed)};
}

/// The appendix auction example at its stated parameters.
inline std::vector<NamedTable> job_auction(std::uint64_t) {
  return {auction_table(auction_compare(1.0, 1.0, 1.0, {0.1, 0.5, 0.9}))};
}

struct FigureJob {
  std::string name;
  std::string description;
  std::function<std::vector<NamedTable>(std::uint64_t seed)> run;
};

/// Registry of every reproducible figure job.
inline const std::vector<FigureJob>& figure_jobs() {
  static const std::vector<FigureJob> jobs = {
      {"fig_T", "equivalent bandwidth vs alpha at fixed average shared bandwidth",
       [](std::uint64_t s) { return job_fig_t(s); }},
      {"fig_prices_quantities",
       "duopoly quantities and prices vs B1 with an open shared band",
       [](std::uint64_t s) { return job_fig_prices_quantities(s); }},
      {"fig_SW_B", "social welfare of allocation schemes vs B1",
       [](std::uint64_t s) { return job_fig_sw(s, true); }},
      {"fig_SW_W", "social welfare of allocation schemes vs W",
       [](std::uint64_t s) { return job_fig_sw(s, false); }},
      {"fig_SW_N", "social welfare vs number of SPs for open/licensed sharing",
       [](std::uint64_t s) { return job_fig_sw_n(s); }},
      {"price_latency", "average price and welfare vs latency, parametric in beta",
       [](std::uint64_t s) { return job_price_latency(s); }},
      {"sw_W", "welfare, revenue, consumer surplus vs shared bandwidth, large N",
       [](std::uint64_t s) { return job_sw_w(s); }},
      {"asym_W1", "consumer surplus vs licensed split between asymmetric groups",
       [](std::uint64_t s) { return job_asym_w1(s); }},
      {"auction", "ascending-auction revenue comparison for the shared band",
       [](std::uint64_t s) { return job_auction(s); }},
  };
  return jobs;
}

inline const FigureJob& find_job(const std::string& name) {
  for (const auto& j : figure_jobs())
    if (j.name == name) return j;
  std::string known;
  for (const auto& j : figure_jobs()) {
    if (!known.empty()) known += ", ";
    known += j.name;
  }
  throw ConfigError("unknown job '" + name + "' (known jobs: " + known + ")");
}

}  // namespace specshare
