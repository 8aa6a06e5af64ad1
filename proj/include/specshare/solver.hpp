#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "specshare/errors.hpp"
#include "specshare/market.hpp"
#include "specshare/models.hpp"
#include "specshare/rng.hpp"

namespace specshare {

struct SolverOptions {
  double tolerance = 1e-10;       // max componentwise change per sweep
  double kkt_tolerance = 1e-9;
  long max_iterations = 100000;   // sweeps per restart
  int restarts = 8;
  std::uint64_t seed = 0;
};

struct KktReport {
  double max_stationarity_violation = 0.0;
  double max_complementarity_violation = 0.0;
  double max_congestion_order_violation = 0.0;  // diagnostic, not part of pass
  std::vector<bool> licensed_pinned;
  std::vector<bool> open_pinned;
  bool prices_nonnegative = true;
  double tolerance = 0.0;

  bool pass() const {
    return max_stationarity_violation <= tolerance &&
           max_complementarity_violation <= tolerance && prices_nonnegative;
  }
};

struct EquilibriumResult {
  Allocation allocation;
  PriceSchedule prices;
  std::vector<double> revenues;
  KktReport kkt;
  long iterations = 0;            // sweeps used by the selected restart
  double residual = 0.0;          // final max componentwise change
  double max_restart_distance = 0.0;
  int restarts = 0;

  std::vector<std::size_t> vacating_sps() const {
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < allocation.open.size(); ++i)
      if (allocation.open[i] == 0.0) v.push_back(i);
    return v;
  }
};

namespace detail {

// Quadratic coefficients of SP i's revenue in the pooled linear model.
struct OwnQuadratic {
  double a11, a12, a22;  // Hessian magnitudes (positive; R_i is -1/2 q'Aq + b'q)
  double open_bw;        // effective open bandwidth, 0 if no open band
};

inline OwnQuadratic own_quadratic(const MarketConfig& c, std::size_t i) {
  const double alpha = c.availability;
  const double gamma = c.demand_slope;
  const double bi = c.proprietary(i);
  const double spill = (alpha < 1.0) ? 2.0 * (1.0 - alpha) / bi : 0.0;
  const double cap = c.licensed_capacity(i);
  OwnQuadratic q;
  q.a12 = 2.0 * gamma + spill;
  q.a11 = q.a12 + (cap > 0.0 ? 2.0 * alpha / cap : 0.0);
  q.open_bw = c.effective_open_bw();
  q.a22 = q.a12 + (q.open_bw > 0.0 ? 2.0 * alpha / q.open_bw : 0.0);
  return q;
}

inline double revenue_quadratic(const MarketConfig& c, std::size_t i, double x,
                                double w, double others_total,
                                double others_open) {
  const double alpha = c.availability;
  const double y = x + w;
  const double pd_part =
      (c.demand_intercept - c.demand_slope * (y + others_total)) * y;
  const double bi = c.proprietary(i);
  const double spill = alpha < 1.0 ? (1.0 - alpha) * y * y / bi : 0.0;
  const double cap = c.licensed_capacity(i);
  const double up = cap > 0.0 ? alpha * x * x / cap : 0.0;
  const double w0 = c.effective_open_bw();
  const double open = w0 > 0.0 ? alpha * w * (w + others_open) / w0 : 0.0;
  return pd_part - spill - up - open;
}

}  // namespace detail

/// Revenue-maximizing (x_i, w_i) >= 0 against fixed opponents in the linear
/// model. Solves the interior stationarity system, then falls back to the
/// boundary candidates when a sign constraint binds.
inline std::pair<double, double> best_response(const MarketConfig& c,
                                               std::size_t i,
                                               const Allocation& others) {
  if (i >= c.n_sps) throw DomainError("best_response: SP index out of range");
  if (others.licensed.size() != c.n_sps || others.open.size() != c.n_sps)
    throw DomainError("best_response: allocation dimensions do not match config");

  double total = 0.0, open_total = 0.0;
  for (std::size_t j = 0; j < c.n_sps; ++j) {
    if (j == i) continue;
    total += others.licensed[j] + others.open[j];
    open_total += others.open[j];
  }

  const auto q = detail::own_quadratic(c, i);
  const double alpha = c.availability;
  const double b1 = c.demand_intercept - c.demand_slope * total;
  const bool no_open = q.open_bw <= 0.0 || alpha == 0.0;
  const bool no_licensed = c.licensed_capacity(i) == 0.0;
  if (no_open) {
    // alpha = 0 leaves the open quantity payoff-irrelevant; pin it to zero.
    if (no_licensed) return {0.0, 0.0};
    return {std::max(0.0, b1 / q.a11), 0.0};
  }
  const double b2 = b1 - alpha * open_total / q.open_bw;
  if (no_licensed) return {0.0, std::max(0.0, b2 / q.a22)};

  const double det = q.a11 * q.a22 - q.a12 * q.a12;
  const double xi = (b1 * q.a22 - b2 * q.a12) / det;
  const double wi = (q.a11 * b2 - q.a12 * b1) / det;
  if (xi >= 0.0 && wi >= 0.0) return {xi, wi};

  const double x_only = std::max(0.0, b1 / q.a11);
  const double w_only = std::max(0.0, b2 / q.a22);
  const double rx = detail::revenue_quadratic(c, i, x_only, 0.0, total, open_total);
  const double rw = detail::revenue_quadratic(c, i, 0.0, w_only, total, open_total);
  if (rx >= rw) return {x_only, 0.0};
  return {0.0, w_only};
}

/// Concave potential of the linear game. Unilateral deviations in (x_i, w_i)
/// change it by exactly the deviating SP's revenue change.
inline double potential_value(const MarketConfig& c, const Allocation& a) {
  detail::check_alloc(c, a);
  const double alpha = c.availability;
  const double gamma = c.demand_slope;
  double phi = 0.0, y_sum = 0.0, y_sq = 0.0, w_sum = 0.0, w_sq = 0.0;
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const double x = a.licensed[i], w = a.open[i];
    const double y = x + w;
    phi += c.demand_intercept * y - gamma * y * y;
    if (alpha < 1.0) phi -= (1.0 - alpha) * y * y / c.proprietary(i);
    const double cap = c.licensed_capacity(i);
    if (cap > 0.0) phi -= alpha * x * x / cap;
    y_sum += y;
    y_sq += y * y;
    w_sum += w;
    w_sq += w * w;
  }
  phi -= gamma * 0.5 * (y_sum * y_sum - y_sq);
  const double w0 = c.effective_open_bw();
  if (w0 > 0.0)
    phi -= (alpha / w0) * (w_sq + 0.5 * (w_sum * w_sum - w_sq));
  return phi;
}

/// Potential for linear demand and open-band latency but general convex
/// proprietary/licensed latency curves.
inline double potential_value(const MarketConfig& c, const Allocation& a,
                              const DemandModel& demand,
                              const LatencyModel& latency) {
  detail::check_alloc(c, a);
  if (latency.n_sps() != c.n_sps)
    throw DomainError("potential_value: latency model size mismatch");
  if (!demand.is_affine())
    throw UnsupportedModelError(
        "potential exists only for linear inverse demand");
  if (!latency.open_band_is_linear())
    throw UnsupportedModelError(
        "potential exists only for linear open-band latency");
  const double intercept = demand.value(0.0);
  const double gamma = -demand.d1(0.0);
  const double open_slope = latency.open_band.deriv(0.0);
  const double alpha = c.availability;

  double phi = 0.0, y_sum = 0.0, y_sq = 0.0, w_sum = 0.0, w_sq = 0.0;
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const double x = a.licensed[i], w = a.open[i];
    const double y = x + w;
    phi += intercept * y - gamma * y * y;
    phi -= (1.0 - alpha) * latency.when_preempted[i].value(y) * y;
    phi -= alpha * latency.when_available[i].value(x) * x;
    y_sum += y;
    y_sq += y * y;
    w_sum += w;
    w_sq += w * w;
  }
  phi -= gamma * 0.5 * (y_sum * y_sum - y_sq);
  phi -= alpha * open_slope * (w_sq + 0.5 * (w_sum * w_sum - w_sq));
  return phi;
}

/// First-order/complementarity check at an allocation, against the potential's
/// gradient, plus the congestion-ordering diagnostic and price signs.
inline KktReport kkt_verify(const MarketConfig& c, const Allocation& a,
                            double tol = 1e-9) {
  detail::check_alloc(c, a);
  const double alpha = c.availability;
  const double gamma = c.demand_slope;
  const double w0 = c.effective_open_bw();
  const double total = a.total_served();
  const double open_total = a.total_open();

  KktReport rep;
  rep.tolerance = tol;
  rep.licensed_pinned.resize(c.n_sps);
  rep.open_pinned.resize(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const double x = a.licensed[i], w = a.open[i];
    const double y = x + w;
    const double common =
        c.demand_intercept - gamma * (total - y) - 2.0 * gamma * y -
        (alpha < 1.0 ? 2.0 * (1.0 - alpha) * y / c.proprietary(i) : 0.0);
    const double cap = c.licensed_capacity(i);
    // Variables without a band behind them do not exist in the game; their
    // gradients are excluded rather than reported as violations.
    if (cap > 0.0) {
      const double gx = common - 2.0 * alpha * x / cap;
      rep.max_stationarity_violation =
          std::max(rep.max_stationarity_violation, gx);
      rep.max_complementarity_violation =
          std::max(rep.max_complementarity_violation, std::abs(gx * x));
    }
    if (w0 > 0.0 && alpha > 0.0) {
      const double gw = common - alpha * (w + open_total) / w0;
      rep.max_stationarity_violation =
          std::max(rep.max_stationarity_violation, gw);
      rep.max_complementarity_violation =
          std::max(rep.max_complementarity_violation, std::abs(gw * w));
    }
    rep.licensed_pinned[i] = x <= tol;
    rep.open_pinned[i] = w <= tol;

    if (w0 > 0.0 && alpha > 0.0 && cap > 0.0) {
      const double own_load = x / cap;
      const double mid = (w + 0.5 * (open_total - w)) / w0;
      const double full = open_total / w0;
      rep.max_congestion_order_violation =
          std::max({rep.max_congestion_order_violation, own_load - mid,
                    mid - full});
    }
  }
  const PriceSchedule ps = band_prices(c, a);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    if (ps.licensed_prices[i] < -tol || ps.open_prices[i] < -tol)
      rep.prices_nonnegative = false;
  }
  return rep;
}

namespace detail {

// Projected gradient ascent on the potential with backtracking; fallback for
// the rare case cyclic best response stalls.
inline void projected_gradient_steps(const MarketConfig& c, Allocation& a,
                                     int steps) {
  const double alpha = c.availability;
  const double gamma = c.demand_slope;
  const double w0 = c.effective_open_bw();
  const std::size_t n = c.n_sps;
  double step = 0.1;
  for (int it = 0; it < steps; ++it) {
    const double total = a.total_served();
    const double open_total = a.total_open();
    std::vector<double> gx(n), gw(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = a.licensed[i], w = a.open[i];
      const double y = x + w;
      const double common =
          c.demand_intercept - gamma * (total - y) - 2.0 * gamma * y -
          (alpha < 1.0 ? 2.0 * (1.0 - alpha) * y / c.proprietary(i) : 0.0);
      const double cap = c.licensed_capacity(i);
      gx[i] = common - (cap > 0.0 ? 2.0 * alpha * x / cap : 0.0);
      gw[i] = (w0 > 0.0 && alpha > 0.0)
                  ? common - alpha * (w + open_total) / w0
                  : 0.0;
    }
    const double phi0 = potential_value(c, a);
    while (step > 1e-16) {
      Allocation trial = a;
      for (std::size_t i = 0; i < n; ++i) {
        trial.licensed[i] = std::max(0.0, a.licensed[i] + step * gx[i]);
        trial.open[i] = w0 > 0.0 && alpha > 0.0
                            ? std::max(0.0, a.open[i] + step * gw[i])
                            : 0.0;
      }
      if (potential_value(c, trial) >= phi0) {
        a = std::move(trial);
        step *= 1.5;
        break;
      }
      step *= 0.5;
    }
  }
}

struct RestartOutcome {
  Allocation alloc;
  double residual;
  long sweeps;
};

inline RestartOutcome run_restart(const MarketConfig& c,
                                  const SolverOptions& opt, int restart) {
  const std::size_t n = c.n_sps;
  double b_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) b_sum += c.proprietary(i);
  if (b_sum <= 0.0) b_sum = 1.0;
  const double w0 = c.effective_open_bw();

  // Proportional heuristic start, jittered on restarts past the first.
  Allocation a = Allocation::zeros(n);
  std::uint64_t rng = derive_seed(opt.seed, static_cast<std::uint64_t>(restart));
  for (std::size_t i = 0; i < n; ++i) {
    double jit_x = 1.0, jit_w = 1.0;
    if (restart > 0) {
      jit_x = 0.25 + 1.5 * uniform01(rng);
      jit_w = 0.25 + 1.5 * uniform01(rng);
    }
    a.licensed[i] =
        c.licensed_capacity(i) > 0.0
            ? jit_x * c.proprietary(i) / (2.0 * b_sum)
            : 0.0;
    a.open[i] = (w0 > 0.0 && c.availability > 0.0)
                    ? jit_w * c.open_access_bw /
                          (2.0 * static_cast<double>(n) *
                           std::max(c.open_access_bw, 1.0))
                    : 0.0;
  }

  double residual = std::numeric_limits<double>::infinity();
  double best_residual = residual;
  long plateau = 0;
  long sweep = 0;
  for (; sweep < opt.max_iterations; ++sweep) {
    // Fresh aggregates each sweep so incremental updates cannot drift.
    double total = a.total_served();
    double open_total = a.total_open();
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x_old = a.licensed[i], w_old = a.open[i];
      total -= x_old + w_old;
      open_total -= w_old;
      // inline best response against the cached aggregates
      const auto q = own_quadratic(c, i);
      const double b1 = c.demand_intercept - c.demand_slope * total;
      double x_new, w_new;
      if (c.licensed_capacity(i) == 0.0) {
        x_new = 0.0;
        w_new = (q.open_bw > 0.0 && c.availability > 0.0)
                    ? std::max(0.0, (b1 - c.availability * open_total /
                                              q.open_bw) /
                                        q.a22)
                    : 0.0;
      } else if (q.open_bw <= 0.0 || c.availability == 0.0) {
        x_new = std::max(0.0, b1 / q.a11);
        w_new = 0.0;
      } else {
        const double b2 = b1 - c.availability * open_total / q.open_bw;
        const double det = q.a11 * q.a22 - q.a12 * q.a12;
        x_new = (b1 * q.a22 - b2 * q.a12) / det;
        w_new = (q.a11 * b2 - q.a12 * b1) / det;
        if (x_new < 0.0 || w_new < 0.0) {
          const double x_only = std::max(0.0, b1 / q.a11);
          const double w_only = std::max(0.0, b2 / q.a22);
          const double rx =
              revenue_quadratic(c, i, x_only, 0.0, total, open_total);
          const double rw =
              revenue_quadratic(c, i, 0.0, w_only, total, open_total);
          if (rx >= rw) {
            x_new = x_only;
            w_new = 0.0;
          } else {
            x_new = 0.0;
            w_new = w_only;
          }
        }
      }
      a.licensed[i] = x_new;
      a.open[i] = w_new;
      total += x_new + w_new;
      open_total += w_new;
      residual = std::max({residual, std::abs(x_new - x_old),
                           std::abs(w_new - w_old)});
    }
    if (residual <= opt.tolerance) {
      ++sweep;
      break;
    }
    if (residual < 0.5 * best_residual) {
      best_residual = residual;
      plateau = 0;
    } else if (++plateau >= 100) {
      projected_gradient_steps(c, a, 50);
      plateau = 0;
    }
  }
  if (residual > opt.tolerance)
    throw ConvergenceError("solve_equilibrium: best response did not converge",
                           residual);
  return {std::move(a), residual, sweep};
}

}  // namespace detail

/// Computes the Nash equilibrium by cyclic best response with restarts; all
/// restarts must land on the same point (uniqueness check) and the result
/// carries a KKT report.
inline EquilibriumResult solve_equilibrium(const MarketConfig& config,
                                           const SolverOptions& opt = {}) {
  config.validate();
  const MarketConfig c = config.pooled();
  const int restarts = std::max(1, opt.restarts);

  std::vector<detail::RestartOutcome> outcomes;
  outcomes.reserve(restarts);
  for (int r = 0; r < restarts; ++r)
    outcomes.push_back(detail::run_restart(c, opt, r));

  double max_dist = 0.0;
  for (int r = 1; r < restarts; ++r) {
    for (std::size_t i = 0; i < c.n_sps; ++i) {
      max_dist = std::max(max_dist,
                          std::abs(outcomes[r].alloc.licensed[i] -
                                   outcomes[0].alloc.licensed[i]));
      max_dist = std::max(
          max_dist, std::abs(outcomes[r].alloc.open[i] - outcomes[0].alloc.open[i]));
    }
  }
  if (max_dist > 1e-6)
    throw UniquenessError(
        "solve_equilibrium: restarts found different equilibria", max_dist);

  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[r].residual < outcomes[best].residual) best = r;

  EquilibriumResult res;
  res.allocation = std::move(outcomes[best].alloc);
  res.iterations = outcomes[best].sweeps;
  res.residual = outcomes[best].residual;
  res.max_restart_distance = max_dist;
  res.restarts = restarts;
  res.prices = band_prices(c, res.allocation);
  res.revenues = revenues(c, res.allocation);
  res.kkt = kkt_verify(c, res.allocation, opt.kkt_tolerance);
  return res;
}

/// Best response under general concave demand and convex latencies, by
/// coordinate ascent with bisection on each partial derivative.
inline std::pair<double, double> general_best_response(
    const MarketConfig& c, const DemandModel& demand,
    const LatencyModel& latency, std::size_t i, const Allocation& others,
    double tol = 1e-12, int max_rounds = 400) {
  if (i >= c.n_sps) throw DomainError("general_best_response: index out of range");
  if (latency.n_sps() != c.n_sps)
    throw DomainError("general_best_response: latency model size mismatch");
  double total = 0.0, open_total = 0.0;
  for (std::size_t j = 0; j < c.n_sps; ++j) {
    if (j == i) continue;
    total += others.licensed[j] + others.open[j];
    open_total += others.open[j];
  }
  const double alpha = c.availability;
  const bool use_open = c.open_access_bw > 0.0 && alpha > 0.0;

  // Quantity cap: past the zero of P there is nothing to gain.
  double cap = 1.0;
  while (demand.value(cap) > 0.0 && cap < 1e12) cap *= 2.0;

  const auto& pre = latency.when_preempted[i];
  const auto& avail = latency.when_available[i];
  const auto& open = latency.open_band;

  auto grad_x = [&](double x, double w) {
    const double y = x + w;
    const double yy = y + total;
    return demand.value(yy) + y * demand.d1(yy) -
           (1.0 - alpha) * (pre.value(y) + y * pre.deriv(y)) -
           alpha * (avail.value(x) + x * avail.deriv(x));
  };
  auto grad_w = [&](double x, double w) {
    const double y = x + w;
    const double yy = y + total;
    const double wv = w + open_total;
    return demand.value(yy) + y * demand.d1(yy) -
           (1.0 - alpha) * (pre.value(y) + y * pre.deriv(y)) -
           alpha * (open.value(wv) + w * open.deriv(wv));
  };
  auto argmax_1d = [&](auto&& g) {
    double lo = 0.0, hi = cap;
    if (g(lo) <= 0.0) return 0.0;
    if (g(hi) >= 0.0) return hi;
    for (int it = 0; it < 200 && hi - lo > tol * 0.5; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  double x = 0.0, w = 0.0;
  for (int round = 0; round < max_rounds; ++round) {
    const double x_new = argmax_1d([&](double t) { return grad_x(t, w); });
    const double w_new =
        use_open ? argmax_1d([&](double t) { return grad_w(x_new, t); }) : 0.0;
    const double change =
        std::max(std::abs(x_new - x), std::abs(w_new - w));
    x = x_new;
    w = w_new;
    if (change <= tol) return {x, w};
  }
  throw ConvergenceError("general_best_response: coordinate ascent stalled",
                         0.0);
}

}  // namespace specshare
