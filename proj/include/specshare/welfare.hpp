#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "specshare/closed_form.hpp"
#include "specshare/errors.hpp"
#include "specshare/market.hpp"

namespace specshare {

/// Consumer surplus of serving total mass z under linear inverse demand.
inline double consumer_surplus(double total_served, double demand_slope = 1.0) {
  if (total_served < 0.0)
    throw DomainError("consumer_surplus: total served must be nonnegative");
  if (!(demand_slope > 0.0))
    throw DomainError("consumer_surplus: slope must be positive");
  return demand_slope * total_served * total_served / 2.0;
}

struct WelfareReport {
  double consumer_surplus = 0.0;
  std::vector<double> revenues;
  double social_welfare = 0.0;
  double total_served = 0.0;
  double avg_price = 0.0;
  double avg_latency = 0.0;
  double avg_licensed_latency = 0.0;
  double avg_open_latency = 0.0;
};

/// Aggregates surplus, revenue, and the quantity-weighted price and latency
/// decompositions at an allocation (typically an equilibrium).
inline WelfareReport welfare_report(const MarketConfig& c,
                                    const Allocation& a) {
  detail::check_alloc(c, a);
  WelfareReport rep;
  rep.total_served = a.total_served();
  rep.consumer_surplus = consumer_surplus(rep.total_served, c.demand_slope);
  rep.revenues = revenues(c, a);
  double total_rev = 0.0;
  for (double r : rep.revenues) total_rev += r;
  rep.social_welfare = rep.consumer_surplus + total_rev;

  const auto lat = expected_latencies(c, a);
  double lic_qty = 0.0, open_qty = 0.0, lic_lat = 0.0, open_lat = 0.0;
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    lic_qty += a.licensed[i];
    open_qty += a.open[i];
    lic_lat += a.licensed[i] * lat[i].first;
    open_lat += a.open[i] * lat[i].second;
  }
  rep.avg_price = rep.total_served > 0.0 ? total_rev / rep.total_served : 0.0;
  rep.avg_licensed_latency = lic_qty > 0.0 ? lic_lat / lic_qty : 0.0;
  rep.avg_open_latency = open_qty > 0.0 ? open_lat / open_qty : 0.0;
  rep.avg_latency = rep.total_served > 0.0
                        ? (lic_lat + open_lat) / rep.total_served
                        : 0.0;
  return rep;
}

/// Social welfare of the large-N symmetric market as a function of the open
/// fraction beta (limit regime; unit demand).
inline double sw_beta(double total_proprietary, double shared_bw, double alpha,
                      double beta) {
  if (!(total_proprietary > 0.0)) throw DomainError("sw_beta: B must be positive");
  if (shared_bw < 0.0 || !(beta >= 0.0 && beta <= 1.0))
    throw DomainError("sw_beta: parameter out of range");
  const double b = total_proprietary, w = shared_bw;
  const double reach = b + w * (1.0 + beta);
  const double num = reach * reach * (b * b / 2.0 + b * (1.0 - alpha)) +
                     b * b * alpha * (b + w * (1.0 - beta));
  const double den = reach * (b + 2.0 * (1.0 - alpha)) + 2.0 * b * alpha;
  return num / (den * den);
}

/// CS + total revenue of a large-N limiting equilibrium (cross-checkable
/// against sw_beta at the endpoints).
inline double limit_social_welfare(double total_proprietary, double shared_bw,
                                   double alpha, double beta) {
  const SymmetricEq eq =
      n_symmetric_limit(total_proprietary, shared_bw, beta, alpha);
  const double served = eq.total_served();
  const double revenue = eq.price_licensed * eq.licensed_total +
                         eq.price_open * eq.open_total;
  return consumer_surplus(served) + revenue;
}

/// Large shared bandwidth (W -> infinity) summary for N SPs or the N -> inf
/// limit: mass served, welfare, the served-mass asymptote, the aggregate
/// profit limit, and the availability that maximizes aggregate profit.
struct LargeWLimits {
  double served = 0.0;                  // rho(N), or the asymptote if N absent
  double social_welfare = 0.0;          // SW(N) in the large-W regime
  double served_limit = 0.0;            // rho-bar
  double aggregate_profit_limit = 0.0;  // N -> inf aggregate profit
  double profit_maximizing_alpha = 0.0;
};

inline LargeWLimits large_w_limits(std::optional<long> n,
                                   double total_proprietary, double alpha) {
  if (!(total_proprietary > 0.0))
    throw DomainError("large_w_limits: B must be positive");
  if (n && *n < 1) throw DomainError("large_w_limits: N must be >= 1");
  const double b = total_proprietary;
  const double idle = 2.0 * (1.0 - alpha);
  LargeWLimits out;
  out.served_limit = b / (b + idle);
  out.served =
      n ? b / (b + b / static_cast<double>(*n) + idle) : out.served_limit;
  out.social_welfare =
      out.served - out.served * out.served / 2.0 * (1.0 + idle / b);
  out.aggregate_profit_limit = b * (1.0 - alpha) / ((b + idle) * (b + idle));
  out.profit_maximizing_alpha = std::max(0.0, 1.0 - b / 2.0);
  return out;
}

}  // namespace specshare
