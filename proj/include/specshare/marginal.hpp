#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "specshare/errors.hpp"
#include "specshare/market.hpp"
#include "specshare/models.hpp"

namespace specshare {

/// Equilibrium response of a two-SP licensed-only market to a marginal
/// bandwidth grant. All deltas are for the stated delta_B.
struct MarginalShift {
  double dx_own = 0.0;
  double dx_rival = 0.0;
  double d_consumer_surplus = 0.0;
  double d_revenue_own = 0.0;
  double d_revenue_rival = 0.0;
  double cascade_ratio = 0.0;  // product of the two reaction slopes, in (0,1)
};

namespace detail {

// Best-response quantity for one SP in the licensed-only duopoly with latency
// f(load), load = x / bandwidth: unique zero of a decreasing gradient.
inline double licensed_best_response(const DemandModel& demand, const Curve& f,
                                     double bandwidth, double rival_qty,
                                     double cap) {
  auto grad = [&](double x) {
    const double z = x + rival_qty;
    const double load = x / bandwidth;
    return demand.value(z) + x * demand.d1(z) - f.value(load) -
           x * f.deriv(load) / bandwidth;
  };
  double lo = 0.0, hi = cap;
  if (grad(lo) <= 0.0) return 0.0;
  if (grad(hi) >= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (grad(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Two-SP licensed-only equilibrium under general demand and per-SP load
/// latencies f_k (latency = f_k(x_k / B_k)). Alternating best responses; the
/// reaction map is a contraction here.
inline std::array<double, 2> duopoly_general_equilibrium(
    const DemandModel& demand, const std::array<Curve, 2>& load_latency,
    const std::array<double, 2>& bandwidth, double tol = 1e-13) {
  for (double b : bandwidth)
    if (!(b > 0.0))
      throw DomainError("duopoly_general_equilibrium: bandwidth must be positive");
  double cap = 1.0;
  while (demand.value(cap) > 0.0 && cap < 1e12) cap *= 2.0;
  std::array<double, 2> x{0.0, 0.0};
  for (int round = 0; round < 500; ++round) {
    double change = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double nx = detail::licensed_best_response(
          demand, load_latency[k], bandwidth[k], x[1 - k], cap);
      change = std::max(change, std::abs(nx - x[k]));
      x[k] = nx;
    }
    if (change <= tol) return x;
  }
  throw ConvergenceError("duopoly_general_equilibrium: no fixed point", 0.0);
}

/// Implicit-function comparative statics of granting delta_B to SP k in a
/// two-SP licensed-only market: first response, cascaded equilibrium shift,
/// and the welfare/revenue deltas.
inline MarginalShift marginal_bandwidth_shift(
    const MarketConfig& config, const DemandModel& demand,
    const std::array<Curve, 2>& load_latency, std::size_t k, double delta_b) {
  if (config.n_sps != 2)
    throw DomainError("marginal_bandwidth_shift: exactly two SPs required");
  if (config.total_shared() != 0.0)
    throw DomainError("marginal_bandwidth_shift: licensed-only market required");
  if (k >= 2) throw DomainError("marginal_bandwidth_shift: SP index out of range");
  if (!(delta_b > 0.0))
    throw DomainError("marginal_bandwidth_shift: delta_B must be positive");

  const std::array<double, 2> bw{config.proprietary(0), config.proprietary(1)};
  const auto x = duopoly_general_equilibrium(demand, load_latency, bw);
  const std::size_t r = 1 - k;
  const double z = x[0] + x[1];
  const double dp = demand.d1(z), d2p = demand.d2(z);

  auto own_curvature = [&](std::size_t j) {
    const double load = x[j] / bw[j];
    return 2.0 * dp + x[j] * d2p -
           2.0 * load_latency[j].deriv(load) / bw[j] -
           x[j] * load_latency[j].second(load) / (bw[j] * bw[j]);
  };
  const double g_own = own_curvature(k);
  const double g_rival = own_curvature(r);

  // dx_k / dB_k at fixed rival, from the best-response identity.
  const double loadk = x[k] / bw[k];
  const double dxk_db =
      -(2.0 * x[k] / (bw[k] * bw[k]) * load_latency[k].deriv(loadk) +
        x[k] * x[k] / (bw[k] * bw[k] * bw[k]) * load_latency[k].second(loadk)) /
      g_own;
  // Reaction slopes dx_j / dx_{-j}.
  const double slope_rival = -(dp + x[r] * d2p) / g_rival;
  const double slope_own = -(dp + x[k] * d2p) / g_own;
  const double rho = slope_own * slope_rival;

  MarginalShift s;
  s.cascade_ratio = rho;
  const double first = dxk_db * delta_b;
  s.dx_own = first / (1.0 - rho);
  s.dx_rival = slope_rival * s.dx_own;
  const double dz = s.dx_own + s.dx_rival;
  s.d_consumer_surplus = -z * dp * dz;
  s.d_revenue_rival = x[r] * dp * s.dx_own;
  // Envelope: direct latency relief on the grown band plus the rival shift.
  s.d_revenue_own =
      x[k] * (x[k] / (bw[k] * bw[k])) * load_latency[k].deriv(loadk) * delta_b +
      x[k] * dp * s.dx_rival;
  return s;
}

/// Which SP a marginal unit of bandwidth should go to, for linear latencies
/// c_k * load and linear demand 1 - a*y, to maximize consumer surplus.
struct MarginalChoice {
  std::size_t sp = 0;   // 0-based index of the chosen SP
  bool tie = false;
  double margin = 0.0;  // signed slack of the decision inequality (for SP 0)
};

inline MarginalChoice marginal_allocation_rule(double b1, double b2, double c1,
                                               double c2, double demand_slope,
                                               double tie_eps = 1e-9) {
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw DomainError("marginal_allocation_rule: bandwidths must be positive");
  if (!(c1 > 0.0) || !(c2 > 0.0))
    throw DomainError("marginal_allocation_rule: latency slopes must be positive");
  if (!(demand_slope > 0.0))
    throw DomainError("marginal_allocation_rule: demand slope must be positive");
  // Give to SP 1 iff B2 > sqrt(c2/c1) B1 + (2/a)(sqrt(c1 c2) - c2); the
  // symmetric test for SP 2 is exactly the negation up to a positive factor.
  const double s1 = b2 - std::sqrt(c2 / c1) * b1 -
                    (2.0 / demand_slope) * (std::sqrt(c1 * c2) - c2);
  MarginalChoice choice;
  choice.margin = s1;
  if (std::abs(s1) <= tie_eps) {
    choice.tie = true;
    return choice;
  }
  choice.sp = s1 > 0.0 ? 0 : 1;
  return choice;
}

}  // namespace specshare
